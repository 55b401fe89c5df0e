#include "irvi/baseline_isr.hpp"

#include "irvi/errors.hpp"

#include <climits>
#include <cmath>
#include <string>

namespace irvi {

void validate(const BilevelVIProblem& problem, const IsrCvxConfig& config) {
    if (!problem.outer_is_objective())
        throw ContractViolation("isr_cvx: the outer level must be an objective");
    if (!(config.eta0 >= 0.0)) throw ContractViolation("isr_cvx: eta0 must be >= 0");
    if (!(config.b_tilde > 0.0 && config.b_tilde <= 1.0))
        throw ContractViolation("isr_cvx: need 0 < b_tilde <= 1");
    if (!(config.alpha_tilde >= 0.0)) throw ContractViolation("isr_cvx: alpha_tilde must be >= 0");
    if (config.outer_iters < 1 && !config.projection_budget)
        throw ContractViolation("isr_cvx: need outer_iters >= 1 or a projection budget");
    if (config.projection_budget && *config.projection_budget < 1)
        throw ContractViolation("isr_cvx: projection budget must be >= 1");
    if (config.x0 && !contains(problem.inner_set, *config.x0))
        throw ContractViolation("isr_cvx: x0 is not in X");
    if (!(isr_cvx_inner_step(problem, config) > 0.0))
        throw ContractViolation("isr_cvx: inner step must be positive");
}

double isr_cvx_inner_step(const BilevelVIProblem& problem, const IsrCvxConfig& config) {
    if (config.inner_step) return *config.inner_step;
    if (!problem.inner_map.lipschitz_L) throw ContractViolation("isr_cvx: L_F metadata missing");
    const double L = *problem.inner_map.lipschitz_L + config.eta0 * problem.objective().smoothness_L +
                     config.alpha_tilde;
    // mu / L^2 with mu = alpha_tilde contracts for any monotone F, skew parts included.
    return config.alpha_tilde / (L * L);
}

IsrCvxResult run_isr_cvx(const BilevelVIProblem& problem, const IsrCvxConfig& config,
                         const RunOptions& opts) {
    validate(problem, config);
    WallClock clock(opts.wall_clock);
    const double step = isr_cvx_inner_step(problem, config);
    const auto& X = problem.inner_set;
    const auto& f = problem.objective();

    IsrCvxResult res;
    Point x = config.x0 ? *config.x0 : X.reference_point();
    res.trace.solution = x;
    std::int64_t used = 0;
    const std::int64_t budget = config.projection_budget.value_or(INT64_MAX);
    const long outer = config.projection_budget ? LONG_MAX : config.outer_iters;

    for (long k = 0; k < outer && used < budget; ++k) {
        const double eta = config.eta0 / std::pow(static_cast<double>(k + 1), config.b_tilde);
        const Point center = x;
        Point z = x;
        std::vector<double> residuals;
        const long T = k + 1;
        for (long t = 0; t < T && used < budget; ++t) {
            const Point arg = z - step * (problem.inner_map(z) + eta * f.grad(z) +
                                          config.alpha_tilde * (z - center));
            Point next = project(X, arg);
            ++used;
            // Check before projection too: clamping would hide an infinite step.
            if (!all_finite(arg) || !all_finite(next)) {
                res.trace.diverged = true;
                res.trace.message = "isr_cvx: non-finite iterate at k = " + std::to_string(k);
                break;
            }
            if (config.record_inner_residuals) residuals.push_back((next - z).norm());
            z = std::move(next);
        }
        if (res.trace.diverged) break;
        x = z;
        if (config.record_inner_residuals) res.inner_residuals.push_back(std::move(residuals));

        IterateRecord rec;
        rec.k = k + 1;
        rec.x = x;
        rec.y = x;
        rec.ybar = x;
        rec.eta = eta;
        rec.projections = used;
        rec.wall_nanos = clock.nanos();
        commit_record(res.trace, std::move(rec), opts);
        res.trace.solution = x;
    }
    return res;
}

} // namespace irvi
