#pragma once

#include <functional>
#include <string>
#include <vector>

namespace irvi {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    // Empty runs every criterion.
    std::vector<int> only;
    // Called as each criterion finishes.
    std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

std::string format_result_line(const CriterionResult& r);

} // namespace irvi
