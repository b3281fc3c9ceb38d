#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace singtrace {

struct PropertyResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifySummary {
    std::vector<PropertyResult> results;
    int failures = 0;
};

/// Runs the whole property corpus (structural maps, norm inequalities,
/// convergence chain, growth containments, trace equivalences, cross-checks,
/// determinism). Deterministic for a given seed regardless of thread count.
/// quick=true trims corpus sizes for smoke tests.
VerifySummary run_verify(std::uint64_t seed, bool quick = false);

}  // namespace singtrace
