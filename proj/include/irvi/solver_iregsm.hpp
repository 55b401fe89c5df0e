#pragma once

#include "irvi/problems.hpp"
#include "irvi/trace.hpp"

#include <functional>
#include <optional>
#include <variant>

namespace irvi {

struct Diminishing {
    // Defaults to 5 L_H / mu_H; larger values are allowed.
    std::optional<double> eta_0_l;
};

struct LogConstant {
    double p = 1.0;
    long K = 0;
};

struct ThresholdConstant {
    double eta = 0.0;
};

using IregSmRegime = std::variant<Diminishing, LogConstant, ThresholdConstant>;

struct IregSmConfig {
    double gamma = 0.0;
    IregSmRegime regime = Diminishing{};
    long max_iters = 1;
    // Function-value mode (mu_H := 0.5 mu, L_H := L). Defaults to whether the
    // outer level is an objective.
    std::optional<bool> objective_mode;
    bool allow_stepsize_violation = false;
    std::optional<Point> x0;
};

// mu_H and L_H after the objective-mode substitution.
struct IregSmConstants {
    double mu_H = 0.0;
    double L_H = 0.0;
    double L_F = 0.0;
    bool objective_mode = false;
};

IregSmConstants resolve_constants(const BilevelVIProblem& problem, const IregSmConfig& config);

void validate(const BilevelVIProblem& problem, const IregSmConfig& config);

double ireg_sm_eta(const IregSmConfig& config, const IregSmConstants& c, long k);

// Weighted running average with geometrically growing weights theta. Weights are
// kept relative to exp(log_scale) so theta never overflows.
class WeightedAverage {
public:
    WeightedAverage() = default;
    WeightedAverage(Point ybar0, double theta0);

    // ybar <- (Gamma ybar + w theta y) / (Gamma + w theta), Gamma <- Gamma + w theta.
    void add(const Point& y, double w);
    // theta <- theta / decay.
    void advance(double decay);

    const Point& ybar() const { return ybar_; }
    double log_theta() const;
    double log_Gamma() const;

private:
    void renormalize();

    Point ybar_;
    double Gamma_ = 0.0;
    double theta_ = 1.0;
    double log_scale_ = 0.0;
};

inline constexpr double kThetaRescaleAbove = 1e300;

struct IregSmState {
    long k = 0;
    Point x;
    Point y;
    WeightedAverage avg;
};

// One extragradient step on F + eta H over X, followed by the weighted-average
// update with weight w_scale * theta_k and theta_{k+1} = theta_k / next_decay.
void weighted_eg_step(const ProjectableSet& X, const VectorMapping& F,
                      const std::function<Point(const Point&)>& H, double gamma, double eta,
                      double w_scale, double next_decay, IregSmState& state);

IregSmState ireg_sm_initial_state(const BilevelVIProblem& problem, const IregSmConfig& config,
                                  const IregSmConstants& c);

IregSmState ireg_sm_step(const BilevelVIProblem& problem, const IregSmConfig& config,
                         const IregSmConstants& c, IregSmState state);

// Records carry metric "step_condition" = gamma^2 L_F^2 + gamma eta mu_H + gamma^2 eta^2 L_H^2
// and, for the threshold regime, "envelope" = (1 - gamma eta mu_H)^k.
IterateTrace run_ireg_sm(const BilevelVIProblem& problem, const IregSmConfig& config,
                         const RunOptions& opts = {});

} // namespace irvi
