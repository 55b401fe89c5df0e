#pragma once

#include "irvi/problems.hpp"
#include "irvi/trace.hpp"

#include <optional>

namespace irvi {

struct IregMmConfig {
    double gamma = 0.0;
    double eta0 = 0.0;
    double b = 0.5;
    long max_iters = 1;
    // Constant regularization; overrides the eta0 / (k+1)^b schedule.
    std::optional<double> constant_eta;
    // Skip the gamma^2 (L_F^2 + eta0^2 L_H^2) <= 0.5 check.
    bool allow_stepsize_violation = false;
    // Defaults to the set's reference point.
    std::optional<Point> x0;
};

struct IregMmState {
    long k = 0;
    Point x;
    Point y;
    Point ybar;
};

void validate(const BilevelVIProblem& problem, const IregMmConfig& config);

double ireg_mm_eta(const IregMmConfig& config, long k);

IregMmState ireg_mm_initial_state(const BilevelVIProblem& problem, const IregMmConfig& config);

// Throws DivergenceError if the mapping returns a non-finite value.
IregMmState ireg_mm_step(const BilevelVIProblem& problem, const IregMmConfig& config,
                         const IregMmState& state);

IterateTrace run_ireg_mm(const BilevelVIProblem& problem, const IregMmConfig& config,
                         const RunOptions& opts = {});

} // namespace irvi
