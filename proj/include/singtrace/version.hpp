#pragma once

namespace singtrace {
inline constexpr const char* kToolVersion = "singtrace 0.1.0";
}
