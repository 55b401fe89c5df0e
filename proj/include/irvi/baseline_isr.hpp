#pragma once

#include "irvi/problems.hpp"
#include "irvi/trace.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace irvi {

struct IsrCvxConfig {
    double eta0 = 0.01;
    double b_tilde = 0.5;
    double alpha_tilde = 0.1;
    // Defaults to alpha_tilde / (L_F + eta0 L + alpha_tilde)^2.
    std::optional<double> inner_step;
    long outer_iters = 1;
    // Stop once this many projections are spent, cutting the last inner loop short.
    std::optional<std::int64_t> projection_budget;
    // Store ||x_{t+1} - x_t|| for every inner step.
    bool record_inner_residuals = false;
    std::optional<Point> x0;
};

void validate(const BilevelVIProblem& problem, const IsrCvxConfig& config);

double isr_cvx_inner_step(const BilevelVIProblem& problem, const IsrCvxConfig& config);

struct IsrCvxResult {
    IterateTrace trace;
    std::vector<std::vector<double>> inner_residuals;
};

// Outer step k runs T_k = k + 1 projected steps on
// F_k = F + eta_k grad f + alpha_tilde (. - x_k), eta_k = eta0 / (k+1)^b_tilde.
IsrCvxResult run_isr_cvx(const BilevelVIProblem& problem, const IsrCvxConfig& config,
                         const RunOptions& opts = {});

} // namespace irvi
