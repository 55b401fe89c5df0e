#include "irvi/solver_iregsm.hpp"

#include "irvi/errors.hpp"

#include <cmath>
#include <string>

namespace irvi {

IregSmConstants resolve_constants(const BilevelVIProblem& problem, const IregSmConfig& config) {
    IregSmConstants c;
    c.objective_mode = config.objective_mode.value_or(problem.outer_is_objective());
    if (!problem.inner_map.lipschitz_L) throw ContractViolation("ireg_sm: L_F metadata missing");
    c.L_F = *problem.inner_map.lipschitz_L;
    if (c.objective_mode) {
        const auto& f = problem.objective();
        c.mu_H = 0.5 * f.strong_convexity_mu;
        c.L_H = f.smoothness_L;
    } else {
        const auto H = problem.outer_map();
        if (!H.lipschitz_L || !H.strong_monotone_mu)
            throw ContractViolation("ireg_sm: outer map needs L_H and mu_H metadata");
        c.mu_H = *H.strong_monotone_mu;
        c.L_H = *H.lipschitz_L;
    }
    return c;
}

double ireg_sm_eta(const IregSmConfig& config, const IregSmConstants& c, long k) {
    const double g = config.gamma;
    return std::visit(
        [&](const auto& r) -> double {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, Diminishing>) {
                const double eta_u = 1.0 / (g * c.mu_H);
                const double eta_l = r.eta_0_l.value_or(5.0 * c.L_H / c.mu_H);
                return eta_u / (static_cast<double>(k) + eta_l);
            } else if constexpr (std::is_same_v<R, LogConstant>) {
                const double K = static_cast<double>(r.K);
                return (r.p + 1.0) * std::log(K) / (g * c.mu_H * K);
            } else {
                return r.eta;
            }
        },
        config.regime);
}

void validate(const BilevelVIProblem& problem, const IregSmConfig& config) {
    if (!(config.gamma > 0.0)) throw ContractViolation("ireg_sm: gamma must be positive");
    if (config.max_iters < 1) throw ContractViolation("ireg_sm: max_iters must be >= 1");
    if (config.x0 && !contains(problem.inner_set, *config.x0))
        throw ContractViolation("ireg_sm: x0 is not in X");
    const auto c = resolve_constants(problem, config);
    if (!(c.mu_H > 0.0)) throw ContractViolation("ireg_sm: needs mu_H > 0");
    const double g = config.gamma;

    if (const auto* d = std::get_if<Diminishing>(&config.regime)) {
        if (d->eta_0_l && *d->eta_0_l < 5.0 * c.L_H / c.mu_H)
            throw ContractViolation("ireg_sm: eta_0_l below 5 L_H / mu_H");
    }
    if (const auto* lc = std::get_if<LogConstant>(&config.regime)) {
        if (!(lc->p >= 1.0)) throw ContractViolation("ireg_sm: need p >= 1");
        if (lc->K < 2) throw ContractViolation("ireg_sm: LogConstant needs K >= 2");
        const double K = static_cast<double>(lc->K);
        if (!config.allow_stepsize_violation &&
            K / std::log(K) < 5.0 * (lc->p + 1.0) * c.L_H / c.mu_H)
            throw ContractViolation("ireg_sm: K / ln K below 5 (p+1) L_H / mu_H");
    }
    if (const auto* t = std::get_if<ThresholdConstant>(&config.regime)) {
        if (!(t->eta > 0.0)) throw ContractViolation("ireg_sm: eta must be positive");
        if (!problem.sharpness || !problem.sharpness->known_threshold)
            throw ContractViolation("ireg_sm: threshold regime needs a known sharpness threshold");
        if (!config.allow_stepsize_violation && t->eta > *problem.sharpness->known_threshold)
            throw ContractViolation("ireg_sm: eta exceeds the sharpness threshold");
        const double lhs =
            g * g * c.L_F * c.L_F + g * t->eta * c.mu_H + g * g * t->eta * t->eta * c.L_H * c.L_H;
        if (!config.allow_stepsize_violation && lhs > 0.5)
            throw ContractViolation("ireg_sm: stepsize condition " + std::to_string(lhs) +
                                    " exceeds 0.5");
    } else if (!config.allow_stepsize_violation && g * c.L_F > 0.5) {
        throw ContractViolation("ireg_sm: gamma exceeds 1 / (2 L_F)");
    }
}

WeightedAverage::WeightedAverage(Point ybar0, double theta0)
    : ybar_(std::move(ybar0)), Gamma_(0.0), theta_(theta0), log_scale_(0.0) {
    if (!(theta0 > 0.0) || !std::isfinite(theta0))
        throw ContractViolation("weighted average: theta0 must be positive and finite");
    renormalize();
}

void WeightedAverage::add(const Point& y, double w) {
    const double inc = w * theta_;
    const double next = Gamma_ + inc;
    ybar_ = (Gamma_ * ybar_ + inc * y) / next;
    Gamma_ = next;
}

void WeightedAverage::advance(double decay) {
    if (!(decay > 0.0)) throw ContractViolation("weighted average: 1 - gamma eta mu_H must be > 0");
    theta_ /= decay;
    renormalize();
}

void WeightedAverage::renormalize() {
    if (theta_ <= kThetaRescaleAbove) return;
    const double s = theta_;
    theta_ = 1.0;
    Gamma_ /= s;
    log_scale_ += std::log(s);
}

double WeightedAverage::log_theta() const { return std::log(theta_) + log_scale_; }
double WeightedAverage::log_Gamma() const { return std::log(Gamma_) + log_scale_; }

void weighted_eg_step(const ProjectableSet& X, const VectorMapping& F,
                      const std::function<Point(const Point&)>& H, double gamma, double eta,
                      double w_scale, double next_decay, IregSmState& s) {
    const Point ay = s.x - gamma * (F(s.x) + eta * H(s.x));
    Point y = project(X, ay);
    const Point ax = s.x - gamma * (F(y) + eta * H(y));
    Point x = project(X, ax);
    if (!all_finite(ay) || !all_finite(ax) || !all_finite(x) || !all_finite(y))
        throw DivergenceError("non-finite iterate at k = " + std::to_string(s.k + 1));
    s.avg.add(y, w_scale);
    s.avg.advance(next_decay);
    s.x = std::move(x);
    s.y = std::move(y);
    ++s.k;
}

IregSmState ireg_sm_initial_state(const BilevelVIProblem& problem, const IregSmConfig& config,
                                  const IregSmConstants& c) {
    IregSmState s;
    s.x = config.x0 ? *config.x0 : problem.inner_set.reference_point();
    s.y = s.x;
    const double eta0 = ireg_sm_eta(config, c, 0);
    s.avg = WeightedAverage(s.x, 1.0 / (1.0 - config.gamma * eta0 * c.mu_H));
    return s;
}

IregSmState ireg_sm_step(const BilevelVIProblem& problem, const IregSmConfig& config,
                         const IregSmConstants& c, IregSmState state) {
    const double eta = ireg_sm_eta(config, c, state.k);
    const double eta_next = ireg_sm_eta(config, c, state.k + 1);
    const auto H = [&problem](const Point& x) { return problem.outer_eval(x); };
    weighted_eg_step(problem.inner_set, problem.inner_map, H, config.gamma, eta, eta,
                     1.0 - config.gamma * eta_next * c.mu_H, state);
    return state;
}

IterateTrace run_ireg_sm(const BilevelVIProblem& problem, const IregSmConfig& config,
                         const RunOptions& opts) {
    validate(problem, config);
    const auto c = resolve_constants(problem, config);
    WallClock clock(opts.wall_clock);
    IterateTrace trace;
    trace.records.reserve(static_cast<std::size_t>(config.max_iters));
    IregSmState s = ireg_sm_initial_state(problem, config, c);
    trace.solution = s.avg.ybar();
    const bool threshold = std::holds_alternative<ThresholdConstant>(config.regime);
    const double g = config.gamma;

    for (long k = 0; k < config.max_iters; ++k) {
        const double eta = ireg_sm_eta(config, c, k);
        try {
            s = ireg_sm_step(problem, config, c, std::move(s));
        } catch (const DivergenceError& e) {
            trace.diverged = true;
            trace.message = std::string("ireg_sm: ") + e.what();
            break;
        }
        IterateRecord rec;
        rec.k = s.k;
        rec.x = s.x;
        rec.y = s.y;
        rec.ybar = s.avg.ybar();
        rec.eta = eta;
        rec.projections = 2 * s.k;
        rec.metrics["step_condition"] =
            g * g * c.L_F * c.L_F + g * eta * c.mu_H + g * g * eta * eta * c.L_H * c.L_H;
        rec.metrics["log_theta"] = s.avg.log_theta();
        if (threshold)
            rec.metrics["envelope"] =
                std::pow(1.0 - g * eta * c.mu_H, static_cast<double>(s.k));
        rec.wall_nanos = clock.nanos();
        commit_record(trace, std::move(rec), opts);
        trace.solution = s.avg.ybar();
    }
    return trace;
}

} // namespace irvi
