#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Acceptance suite: every criterion with its tolerance pinned in code.
// Shared by `oscidos verify` (JSON report) and the acceptance test binary.

namespace oscidos::verify {

struct CriterionResult {
    int id;
    std::string name;
    double measured;  // worst measured quantity (criterion-specific meaning)
    double bound;     // the pinned acceptance bound on `measured`
    bool pass;
    std::string detail;
    double seconds;
};

struct Options {
    std::uint64_t seed{20260811};
    bool strict{false};          // tolerance profile: higher internal effort
    std::vector<int> only;       // run a subset when nonempty
};

std::vector<CriterionResult> run_acceptance(const Options& opt = {});

bool all_pass(const std::vector<CriterionResult>& results);

}  // namespace oscidos::verify
