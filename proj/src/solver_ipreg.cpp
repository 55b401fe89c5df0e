#include "irvi/solver_ipreg.hpp"

#include "irvi/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace irvi {

namespace {

// ceil that ignores rounding noise on integral values (100^1.5 must give 1000).
long ceil_tolerant(double v) {
    const double r = std::round(v);
    if (std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v))) return static_cast<long>(r);
    return static_cast<long>(std::ceil(v));
}

} // namespace

double ipr_eg_gamma_hat(const IprEgConfig& config) {
    return config.gamma_hat.value_or(1.0 / std::sqrt(static_cast<double>(config.outer_iters)));
}

double ipr_eg_tau(const IprEgConfig& config) {
    const auto* kt = std::get_if<KnownThreshold>(&config.mode);
    if (!kt) throw ContractViolation("ipr_eg: tau only exists in the known-threshold mode");
    if (kt->tau) return *kt->tau;
    return std::ceil(-2.0 / std::log(1.0 - 0.5 * kt->eta * config.gamma_inner));
}

long ipr_eg_inner_iters(const IprEgConfig& config, long k) {
    if (const auto* a = std::get_if<Adaptive>(&config.mode))
        return std::max(ceil_tolerant(std::pow(static_cast<double>(k), 1.5 * a->M)), 151L);
    return ceil_tolerant(ipr_eg_tau(config) * std::log(static_cast<double>(k + 1)));
}

double ipr_eg_eta(const IprEgConfig& config, long k) {
    if (const auto* kt = std::get_if<KnownThreshold>(&config.mode)) return kt->eta;
    const double T = static_cast<double>(ipr_eg_inner_iters(config, k));
    return 6.0 * std::log(T) / (config.gamma_inner * T);
}

void validate(const BilevelVIProblem& problem, const IprEgConfig& config) {
    if (config.outer_iters < 2) throw ContractViolation("ipr_eg: outer_iters must be >= 2");
    if (!(config.gamma_inner > 0.0)) throw ContractViolation("ipr_eg: gamma_inner must be > 0");
    const auto& f = problem.objective();
    if (config.x0 && !contains(problem.inner_set, *config.x0))
        throw ContractViolation("ipr_eg: x0 is not in X");
    const double gh = ipr_eg_gamma_hat(config);
    if (!(gh > 0.0)) throw ContractViolation("ipr_eg: gamma_hat must be positive");
    if (const auto* a = std::get_if<Adaptive>(&config.mode)) {
        if (!(a->M >= 1.0)) throw ContractViolation("ipr_eg: M must be >= 1");
    }
    if (config.allow_stepsize_violation) return;

    const double L = f.smoothness_L;
    if (gh * 2.0 * L > 1.0) throw ContractViolation("ipr_eg: gamma_hat exceeds 1 / (2L)");
    if (!problem.inner_map.lipschitz_L) throw ContractViolation("ipr_eg: L_F metadata missing");
    if (config.gamma_inner * 2.0 * *problem.inner_map.lipschitz_L > 1.0)
        throw ContractViolation("ipr_eg: gamma_inner exceeds 1 / (2 L_F)");

    if (const auto* kt = std::get_if<KnownThreshold>(&config.mode)) {
        const double g = config.gamma_inner;
        const double eta = kt->eta;
        if (!(eta > 0.0)) throw ContractViolation("ipr_eg: eta must be positive");
        if (!problem.sharpness || problem.sharpness->order_M != 1.0)
            throw ContractViolation("ipr_eg: known-threshold mode needs sharpness with M = 1");
        if (!problem.bounds.C_f) throw ContractViolation("ipr_eg: C_f bound missing");
        const double cap = problem.sharpness->alpha * L /
                           (2.0 * std::sqrt(2.0) * std::sqrt(problem.bounds.D_X_sq) * L +
                            *problem.bounds.C_f);
        if (eta > cap)
            throw ContractViolation("ipr_eg: eta exceeds alpha L / (2 sqrt2 D_X L + C_f) = " +
                                    std::to_string(cap));
        if (0.5 * g * eta + g * g * eta * eta > 0.25)
            throw ContractViolation("ipr_eg: 0.5 gamma eta + gamma^2 eta^2 exceeds 0.25");
        if (ipr_eg_tau(config) < -2.0 / std::log(1.0 - 0.5 * eta * g))
            throw ContractViolation("ipr_eg: tau below -2 / ln(1 - 0.5 eta gamma)");
    }
}

OuterStepResult ipr_eg_outer_step(const BilevelVIProblem& problem, const IprEgConfig& config,
                                  const Point& x_hat, long k, const Point& warm) {
    const double gh = ipr_eg_gamma_hat(config);
    const double g = config.gamma_inner;
    OuterStepResult out;
    out.z = x_hat - gh * problem.objective().grad(x_hat);
    out.inner_iters = ipr_eg_inner_iters(config, k);
    out.eta = ipr_eg_eta(config, k);
    if (!all_finite(out.z)) throw DivergenceError("ipr_eg: non-finite gradient step");

    // Inner problem: H(x) = x - z_k, the gradient of 0.5 ||x - z_k||^2 (mu_H = 0.5 after
    // the function-value substitution), constant eta and weights theta.
    const Point& z = out.z;
    const auto H = [&z](const Point& x) -> Point { return x - z; };
    const double decay = 1.0 - 0.5 * g * out.eta;
    IregSmState s;
    s.x = warm;
    s.y = warm;
    s.avg = WeightedAverage(warm, 1.0 / decay);
    for (long t = 0; t < out.inner_iters; ++t) {
        weighted_eg_step(problem.inner_set, problem.inner_map, H, g, out.eta, 1.0, decay, s);
        if (config.keep_inner_traces) {
            IterateRecord rec;
            rec.k = s.k;
            rec.x = s.x;
            rec.y = s.y;
            rec.ybar = s.avg.ybar();
            rec.eta = out.eta;
            rec.projections = 2 * s.k;
            out.inner_trace.records.push_back(std::move(rec));
        }
    }
    out.x_next = s.avg.ybar();
    out.inner_trace.solution = out.x_next;
    return out;
}

StationarityDiagnostics stationarity(const BilevelVIProblem& problem, double gamma_hat,
                                     const Point& x_hat, const Point& x_next, const Point& z) {
    StationarityDiagnostics d;
    const Point step = x_hat - gamma_hat * problem.objective().grad(x_hat);
    if (problem.known_inner_solution_set) {
        const auto& S = *problem.known_inner_solution_set;
        d.exact = true;
        d.residual_sq = ((x_hat - project(S, step)) / gamma_hat).squaredNorm();
        d.e_norm = distance_to(S, x_hat);
        d.infeasibility = d.e_norm;
        d.delta_norm = (x_next - project(S, z)).norm();
    } else {
        d.exact = false;
        d.residual_sq = ((x_hat - x_next) / gamma_hat).squaredNorm();
        d.e_norm = std::numeric_limits<double>::quiet_NaN();
        d.infeasibility = std::numeric_limits<double>::quiet_NaN();
        d.delta_norm = std::numeric_limits<double>::quiet_NaN();
    }
    return d;
}

IprEgResult run_ipr_eg(const BilevelVIProblem& problem, const IprEgConfig& config,
                       const RunOptions& opts) {
    validate(problem, config);
    WallClock clock(opts.wall_clock);
    const double gh = ipr_eg_gamma_hat(config);
    const long K = config.outer_iters;

    IprEgResult res;
    Point x_hat = config.x0 ? *config.x0 : problem.inner_set.reference_point();
    std::int64_t projections = 0;
    IterateRecord pending;
    pending.k = 0;
    pending.x = x_hat;
    pending.y = x_hat;
    pending.ybar = x_hat;

    double best = std::numeric_limits<double>::infinity();
    res.best_iterate = x_hat;
    for (long k = 0; k < K; ++k) {
        OuterStepResult step;
        try {
            step = ipr_eg_outer_step(problem, config, x_hat, k, x_hat);
        } catch (const DivergenceError& e) {
            res.trace.diverged = true;
            res.trace.message = e.what();
            break;
        }
        const auto diag = stationarity(problem, gh, x_hat, step.x_next, step.z);
        pending.eta = step.eta;
        pending.projections = projections;
        pending.metrics["residual_sq"] = diag.residual_sq;
        pending.metrics["infeasibility"] = diag.infeasibility;
        pending.metrics["delta_norm"] = diag.delta_norm;
        pending.metrics["e_norm"] = diag.e_norm;
        pending.metrics["diag_exact"] = diag.exact ? 1.0 : 0.0;
        pending.metrics["inner_iters"] = static_cast<double>(step.inner_iters);
        pending.metrics["step_sq"] = (step.x_next - x_hat).squaredNorm();
        pending.wall_nanos = clock.nanos();
        commit_record(res.trace, std::move(pending), opts);

        if (k >= K / 2 && diag.residual_sq < best) {
            best = diag.residual_sq;
            res.best_iterate = x_hat;
            res.best_k = k;
        }
        if (config.keep_inner_traces) res.inner_traces.push_back(std::move(step.inner_trace));

        projections += 2 * step.inner_iters;
        x_hat = step.x_next;
        pending = IterateRecord{};
        pending.k = k + 1;
        pending.x = x_hat;
        pending.y = x_hat;
        pending.ybar = x_hat;
    }
    if (!res.trace.diverged) {
        // Terminal iterate: no outgoing step, so only the point-wise diagnostics.
        pending.projections = projections;
        pending.eta = ipr_eg_eta(config, K);
        const auto diag = stationarity(problem, gh, x_hat, x_hat, x_hat);
        pending.metrics["residual_sq"] =
            diag.exact ? diag.residual_sq : std::numeric_limits<double>::quiet_NaN();
        pending.metrics["infeasibility"] = diag.infeasibility;
        pending.metrics["e_norm"] = diag.e_norm;
        pending.metrics["diag_exact"] = diag.exact ? 1.0 : 0.0;
        pending.wall_nanos = clock.nanos();
        commit_record(res.trace, std::move(pending), opts);
    }
    res.trace.solution = x_hat;
    return res;
}

} // namespace irvi
