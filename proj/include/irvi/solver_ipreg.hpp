#pragma once

#include "irvi/problems.hpp"
#include "irvi/solver_iregsm.hpp"
#include "irvi/trace.hpp"

#include <optional>
#include <variant>

namespace irvi {

struct Adaptive {
    double M = 1.0;
};

struct KnownThreshold {
    double eta = 0.0;
    // Defaults to ceil(-2 / ln(1 - 0.5 eta gamma)).
    std::optional<double> tau;
};

using IprEgMode = std::variant<Adaptive, KnownThreshold>;

struct IprEgConfig {
    long outer_iters = 2;
    // Defaults to 1 / sqrt(outer_iters).
    std::optional<double> gamma_hat;
    double gamma_inner = 0.0;
    IprEgMode mode = Adaptive{};
    bool allow_stepsize_violation = false;
    // Keep per-outer-step inner traces (memory grows with sum T_k).
    bool keep_inner_traces = false;
    std::optional<Point> x0;
};

struct StationarityDiagnostics {
    double residual_sq = 0.0;
    double infeasibility = 0.0;
    double delta_norm = 0.0;
    double e_norm = 0.0;
    // False when the inner solver's output stands in for the projection onto SOL(X, F).
    bool exact = false;
};

void validate(const BilevelVIProblem& problem, const IprEgConfig& config);

double ipr_eg_gamma_hat(const IprEgConfig& config);
long ipr_eg_inner_iters(const IprEgConfig& config, long k);
double ipr_eg_eta(const IprEgConfig& config, long k);
// The tau actually used in the known-threshold mode.
double ipr_eg_tau(const IprEgConfig& config);

struct OuterStepResult {
    Point x_next;
    long inner_iters = 0;
    double eta = 0.0;
    Point z;
    IterateTrace inner_trace;
};

// warm is x_{k,0} = ybar_{k,0}, the previous outer output (or x0 when k = 0).
OuterStepResult ipr_eg_outer_step(const BilevelVIProblem& problem, const IprEgConfig& config,
                                  const Point& x_hat, long k, const Point& warm);

// G(x) = (x - P[x - gamma_hat grad f(x)]) / gamma_hat where P projects onto SOL(X, F).
// x_next and z are used for delta = x_next - P[z]; without a known solution set the
// next outer iterate stands in for P[x - gamma_hat grad f(x)].
StationarityDiagnostics stationarity(const BilevelVIProblem& problem, double gamma_hat,
                                     const Point& x_hat, const Point& x_next, const Point& z);

struct IprEgResult {
    IterateTrace trace;
    Point best_iterate;
    long best_k = 0;
    std::vector<IterateTrace> inner_traces;
};

// Record k holds x_hat_k for k = 0..K with metrics residual_sq, infeasibility,
// delta_norm, e_norm (k < K), inner_iters and diag_exact. The best iterate
// minimizes residual_sq over k in [floor(K/2), K-1].
IprEgResult run_ipr_eg(const BilevelVIProblem& problem, const IprEgConfig& config,
                       const RunOptions& opts = {});

} // namespace irvi
