#pragma once

#include <string>
#include <vector>

namespace levylap {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;  // worst-case numbers against their bounds
    double seconds = 0.0;
};

/// Runs the full acceptance suite on the built-in fixtures. Deterministic;
/// one result per criterion, in order.
std::vector<CriterionResult> run_acceptance();

}  // namespace levylap
