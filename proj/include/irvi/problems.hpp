#pragma once

#include "irvi/linops.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace irvi {

struct VectorMapping {
    Eigen::Index dim = 0;
    std::function<Point(const Point&)> eval;
    std::optional<double> lipschitz_L;
    // 0 declares the map merely monotone.
    std::optional<double> strong_monotone_mu;
    // Optional; used by property tests only.
    std::function<Matrix(const Point&)> jacobian;
    // Enables the closed-form segment gap.
    bool affine = false;

    Point operator()(const Point& x) const;
};

struct SmoothObjective {
    Eigen::Index dim = 0;
    std::function<double(const Point&)> value;
    std::function<Point(const Point&)> gradient;
    // Zero is allowed for affine objectives.
    double smoothness_L = 0.0;
    double strong_convexity_mu = 0.0;
    bool gradient_affine = false;

    double operator()(const Point& x) const;
    Point grad(const Point& x) const;
};

struct WeakSharpness {
    double alpha = 0.0;
    double order_M = 1.0;
    // alpha / (2 ||H(x*)||) when known.
    std::optional<double> known_threshold;

    void validate() const;
};

struct ProblemBounds {
    double D_X_sq = 0.0;
    std::optional<double> B_F, B_H, B_f;
    std::optional<double> C_F, C_H, C_f;
    std::optional<double> B_star_F, B_star_H, B_star_f;
};

using OuterProblem = std::variant<VectorMapping, SmoothObjective>;

struct BilevelVIProblem {
    ProjectableSet inner_set;
    VectorMapping inner_map;
    OuterProblem outer;
    std::optional<WeakSharpness> sharpness;
    ProblemBounds bounds;
    std::optional<ProjectableSet> known_inner_solution_set;
    std::optional<Point> known_outer_solution;

    Eigen::Index dim() const { return inner_set.dim(); }
    bool outer_is_objective() const { return std::holds_alternative<SmoothObjective>(outer); }
    const SmoothObjective& objective() const;
    // H itself, or the gradient of f wrapped as a mapping with (L, mu) metadata.
    VectorMapping outer_map() const;
    Point outer_eval(const Point& x) const;

    // Throws ContractViolation when dimensions disagree.
    void validate() const;
};

Point regularized_map(const BilevelVIProblem& problem, double eta, const Point& x);

double gap_lower_estimate(const VectorMapping& map, const std::vector<Point>& set_samples,
                          const Point& x);

// Precomputes F(y_s) and F(y_s)^T y_s so each estimate is one matrix-vector product.
class SampledGapEstimator {
public:
    SampledGapEstimator(const VectorMapping& map, const std::vector<Point>& set_samples);
    // max over samples of F(y)^T (x - y).
    double operator()(const Point& x) const;
    std::size_t size() const { return static_cast<std::size_t>(offsets_.size()); }

private:
    Matrix values_;  // one F(y_s) per row
    Point offsets_;  // F(y_s)^T y_s
};

// Exact sup over the segment of H(y)^T (x - y). H must be affine.
double outer_gap_exact_segment(const VectorMapping& H, const ProjectableSet& segment,
                               const Point& x);

struct PhiTerms {
    double primal = 0.0;    // ||min(0, x)||^2
    double dual = 0.0;      // ||min(0, F(x))||^2
    double complement = 0.0; // |x^T F(x)|
    double total() const { return primal + dual + complement; }
};

PhiTerms infeasibility_terms(const VectorMapping& map, const Point& x);
double infeasibility_phi(const VectorMapping& map, const Point& x);

// min over sampled pairs of (F(x) - F(y))^T (x - y).
double monotonicity_witness(const VectorMapping& map, const ProjectableSet& set, int pairs,
                            std::uint64_t seed);

inline constexpr double kFiniteDifferenceStep = 1e-5;

// min over sampled points x and unit directions v of the central second difference
// v^T (grad f(x + h v) - grad f(x - h v)) / (2h).
double curvature_witness(const SmoothObjective& f, const ProjectableSet& set, int samples,
                         std::uint64_t seed, double h = kFiniteDifferenceStep);

// min over sampled pairs of f(y) - f(x) - grad f(x)^T (y - x) - mu/2 ||y - x||^2.
double strong_convexity_slack(const SmoothObjective& f, const ProjectableSet& set, int pairs,
                              std::uint64_t seed);

} // namespace irvi
