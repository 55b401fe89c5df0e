#include "irvi/problems.hpp"

#include "irvi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace irvi {

Point VectorMapping::operator()(const Point& x) const {
    if (x.size() != dim)
        throw ContractViolation("mapping: expected dimension " + std::to_string(dim) +
                                ", got " + std::to_string(x.size()));
    Point y = eval(x);
    if (y.size() != dim) throw ContractViolation("mapping: eval changed dimension");
    return y;
}

double SmoothObjective::operator()(const Point& x) const {
    if (x.size() != dim) throw ContractViolation("objective: dimension mismatch");
    return value(x);
}

Point SmoothObjective::grad(const Point& x) const {
    if (x.size() != dim) throw ContractViolation("objective: dimension mismatch");
    Point g = gradient(x);
    if (g.size() != dim) throw ContractViolation("objective: gradient changed dimension");
    return g;
}

void WeakSharpness::validate() const {
    if (!(alpha > 0.0)) throw ContractViolation("weak sharpness: alpha must be positive");
    if (!(order_M >= 1.0)) throw ContractViolation("weak sharpness: order must be >= 1");
}

const SmoothObjective& BilevelVIProblem::objective() const {
    if (const auto* f = std::get_if<SmoothObjective>(&outer)) return *f;
    throw UnsupportedOperation("problem outer level is a mapping, not an objective");
}

VectorMapping BilevelVIProblem::outer_map() const {
    if (const auto* H = std::get_if<VectorMapping>(&outer)) return *H;
    const auto& f = std::get<SmoothObjective>(outer);
    VectorMapping H;
    H.dim = f.dim;
    H.eval = f.gradient;
    H.lipschitz_L = f.smoothness_L;
    H.strong_monotone_mu = f.strong_convexity_mu;
    H.affine = f.gradient_affine;
    return H;
}

Point BilevelVIProblem::outer_eval(const Point& x) const {
    if (const auto* H = std::get_if<VectorMapping>(&outer)) return (*H)(x);
    return std::get<SmoothObjective>(outer).grad(x);
}

void BilevelVIProblem::validate() const {
    const auto n = inner_set.dim();
    if (inner_map.dim != n) throw ContractViolation("problem: inner map dimension mismatch");
    const auto m = std::visit([](const auto& o) { return o.dim; }, outer);
    if (m != n) throw ContractViolation("problem: outer dimension mismatch");
    if (known_inner_solution_set && known_inner_solution_set->dim() != n)
        throw ContractViolation("problem: solution set dimension mismatch");
    if (known_outer_solution && known_outer_solution->size() != n)
        throw ContractViolation("problem: known solution dimension mismatch");
    if (sharpness) sharpness->validate();
    if (bounds.D_X_sq < 0.0) throw ContractViolation("problem: D_X^2 must be >= 0");
}

Point regularized_map(const BilevelVIProblem& problem, double eta, const Point& x) {
    if (x.size() != problem.dim()) throw ContractViolation("regularized_map: dimension mismatch");
    if (eta == 0.0) return problem.inner_map(x);
    return problem.inner_map(x) + eta * problem.outer_eval(x);
}

double gap_lower_estimate(const VectorMapping& map, const std::vector<Point>& set_samples,
                          const Point& x) {
    if (set_samples.empty()) throw ContractViolation("gap_lower_estimate: no samples");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& y : set_samples) best = std::max(best, map(y).dot(x - y));
    return best;
}

SampledGapEstimator::SampledGapEstimator(const VectorMapping& map,
                                         const std::vector<Point>& set_samples) {
    if (set_samples.empty()) throw ContractViolation("SampledGapEstimator: no samples");
    values_.resize(static_cast<Eigen::Index>(set_samples.size()), map.dim);
    offsets_.resize(static_cast<Eigen::Index>(set_samples.size()));
    for (std::size_t s = 0; s < set_samples.size(); ++s) {
        const auto i = static_cast<Eigen::Index>(s);
        const Point Fy = map(set_samples[s]);
        values_.row(i) = Fy.transpose();
        offsets_[i] = Fy.dot(set_samples[s]);
    }
}

double SampledGapEstimator::operator()(const Point& x) const {
    if (x.size() != values_.cols()) throw ContractViolation("SampledGapEstimator: dimension");
    return (values_ * x - offsets_).maxCoeff();
}

double outer_gap_exact_segment(const VectorMapping& H, const ProjectableSet& segment,
                               const Point& x) {
    const auto* seg = std::get_if<Segment>(&segment.variant());
    if (!seg) throw UnsupportedOperation("outer_gap_exact_segment: set is not a segment");
    if (!H.affine)
        throw UnsupportedOperation("outer_gap_exact_segment: mapping is not declared affine");
    if (x.size() != segment.dim()) throw ContractViolation("outer_gap_exact_segment: dim");

    // y(s) = a + s e_i on s in [0, len]; H(y(s)) = h0 + s h1 for affine H, so
    // g(s) = h0.d + s (h1.d - h0_i) - s^2 h1_i with d = x - a.
    const auto i = seg->free_index;
    const double len = seg->hi - seg->lo;
    const Point& a = seg->anchor;
    Point a1 = a;
    a1[i] += 1.0;
    const Point h0 = H(a);
    const Point h1 = H(a1) - h0;
    const Point d = x - a;
    const double c0 = h0.dot(d);
    const double c1 = h1.dot(d) - h0[i];
    const double c2 = -h1[i];
    auto g = [&](double s) { return c0 + s * (c1 + s * c2); };

    double best = std::max(g(0.0), g(len));
    if (c2 < 0.0) {
        const double s = -c1 / (2.0 * c2);
        if (s > 0.0 && s < len) best = std::max(best, g(s));
    }
    return best;
}

PhiTerms infeasibility_terms(const VectorMapping& map, const Point& x) {
    const Point Fx = map(x);
    PhiTerms t;
    t.primal = x.cwiseMin(0.0).squaredNorm();
    t.dual = Fx.cwiseMin(0.0).squaredNorm();
    t.complement = std::abs(x.dot(Fx));
    return t;
}

double infeasibility_phi(const VectorMapping& map, const Point& x) {
    return infeasibility_terms(map, x).total();
}

double monotonicity_witness(const VectorMapping& map, const ProjectableSet& set, int pairs,
                            std::uint64_t seed) {
    if (pairs < 1) throw ContractViolation("monotonicity_witness: pairs must be >= 1");
    const auto xs = sample_uniform(set, pairs, seed);
    const auto ys = sample_uniform(set, pairs, seed ^ 0x9e3779b97f4a7c15ULL);
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < pairs; ++k) {
        const auto& x = xs[static_cast<std::size_t>(k)];
        const auto& y = ys[static_cast<std::size_t>(k)];
        worst = std::min(worst, (map(x) - map(y)).dot(x - y));
    }
    return worst;
}

double curvature_witness(const SmoothObjective& f, const ProjectableSet& set, int samples,
                         std::uint64_t seed, double h) {
    if (samples < 1) throw ContractViolation("curvature_witness: samples must be >= 1");
    const auto xs = sample_uniform(set, samples, seed);
    std::mt19937_64 rng(seed + 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& x : xs) {
        Point v(x.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = gauss(rng);
        v.normalize();
        const double q = v.dot(f.grad(x + h * v) - f.grad(x - h * v)) / (2.0 * h);
        worst = std::min(worst, q);
    }
    return worst;
}

double strong_convexity_slack(const SmoothObjective& f, const ProjectableSet& set, int pairs,
                              std::uint64_t seed) {
    if (pairs < 1) throw ContractViolation("strong_convexity_slack: pairs must be >= 1");
    const auto xs = sample_uniform(set, pairs, seed);
    const auto ys = sample_uniform(set, pairs, seed + 7);
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < pairs; ++k) {
        const auto& x = xs[static_cast<std::size_t>(k)];
        const auto& y = ys[static_cast<std::size_t>(k)];
        const Point d = y - x;
        const double slack =
            f(y) - f(x) - f.grad(x).dot(d) - 0.5 * f.strong_convexity_mu * d.squaredNorm();
        worst = std::min(worst, slack);
    }
    return worst;
}

} // namespace irvi
