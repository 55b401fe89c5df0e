#include "irvi/solver_iregmm.hpp"

#include "irvi/errors.hpp"

#include <cmath>
#include <string>

namespace irvi {

void validate(const BilevelVIProblem& problem, const IregMmConfig& config) {
    if (!(config.gamma > 0.0)) throw ContractViolation("ireg_mm: gamma must be positive");
    if (!(config.eta0 > 0.0)) throw ContractViolation("ireg_mm: eta0 must be positive");
    if (!(config.b >= 0.0 && config.b < 1.0)) throw ContractViolation("ireg_mm: need 0 <= b < 1");
    if (config.max_iters < 1) throw ContractViolation("ireg_mm: max_iters must be >= 1");
    if (config.constant_eta && !(*config.constant_eta > 0.0))
        throw ContractViolation("ireg_mm: constant eta must be positive");
    if (config.x0 && !contains(problem.inner_set, *config.x0))
        throw ContractViolation("ireg_mm: x0 is not in X");
    if (config.allow_stepsize_violation) return;

    const auto LF = problem.inner_map.lipschitz_L;
    const auto LH = problem.outer_map().lipschitz_L;
    if (!LF || !LH)
        throw ContractViolation("ireg_mm: Lipschitz metadata missing for the stepsize check");
    const double eta = config.constant_eta.value_or(config.eta0);
    const double lhs = config.gamma * config.gamma * (*LF * *LF + eta * eta * *LH * *LH);
    if (lhs > 0.5)
        throw ContractViolation("ireg_mm: gamma^2 (L_F^2 + eta^2 L_H^2) = " +
                                std::to_string(lhs) + " exceeds 0.5");
}

double ireg_mm_eta(const IregMmConfig& config, long k) {
    if (config.constant_eta) return *config.constant_eta;
    return config.eta0 / std::pow(static_cast<double>(k + 1), config.b);
}

IregMmState ireg_mm_initial_state(const BilevelVIProblem& problem, const IregMmConfig& config) {
    IregMmState s;
    s.x = config.x0 ? *config.x0 : problem.inner_set.reference_point();
    s.y = s.x;
    s.ybar = s.x;
    return s;
}

IregMmState ireg_mm_step(const BilevelVIProblem& problem, const IregMmConfig& config,
                         const IregMmState& state) {
    const double eta = ireg_mm_eta(config, state.k);
    const double g = config.gamma;
    const auto& X = problem.inner_set;

    IregMmState next;
    next.k = state.k + 1;
    const Point ay = state.x - g * regularized_map(problem, eta, state.x);
    next.y = project(X, ay);
    const Point ax = state.x - g * regularized_map(problem, eta, next.y);
    next.x = project(X, ax);
    const double kk = static_cast<double>(state.k);
    next.ybar = (kk * state.ybar + next.y) / (kk + 1.0);
    if (!all_finite(ay) || !all_finite(ax) || !all_finite(next.x) || !all_finite(next.y))
        throw DivergenceError("ireg_mm: non-finite iterate at k = " + std::to_string(next.k));
    return next;
}

IterateTrace run_ireg_mm(const BilevelVIProblem& problem, const IregMmConfig& config,
                         const RunOptions& opts) {
    validate(problem, config);
    WallClock clock(opts.wall_clock);
    IterateTrace trace;
    trace.records.reserve(static_cast<std::size_t>(config.max_iters));
    IregMmState s = ireg_mm_initial_state(problem, config);
    trace.solution = s.ybar;
    for (long k = 0; k < config.max_iters; ++k) {
        try {
            s = ireg_mm_step(problem, config, s);
        } catch (const DivergenceError& e) {
            trace.diverged = true;
            trace.message = e.what();
            break;
        }
        IterateRecord rec;
        rec.k = s.k;
        rec.x = s.x;
        rec.y = s.y;
        rec.ybar = s.ybar;
        rec.eta = ireg_mm_eta(config, k);
        rec.projections = 2 * s.k;
        rec.wall_nanos = clock.nanos();
        commit_record(trace, std::move(rec), opts);
        trace.solution = s.ybar;
    }
    return trace;
}

} // namespace irvi
