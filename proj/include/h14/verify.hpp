#pragma once

#include <string>
#include <vector>

namespace h14 {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;  // worst residual or the failure message
    double seconds = 0.0;
};

// Invariant suite: structural identities of the maps, SIMD equivalence,
// orbit closure, curve relations and witnesses, normal-form identities,
// flow-model symmetries and the portrait reversor symmetry.
std::vector<CheckResult> run_invariant_suite(int jobs = 1);

}  // namespace h14
