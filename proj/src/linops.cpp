#include "irvi/linops.hpp"

#include "irvi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace irvi {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_dim(const ProjectableSet& set, const Point& u, const char* op) {
    if (u.size() != set.dim())
        throw ContractViolation(std::string(op) + ": point has dimension " +
                                std::to_string(u.size()) + ", set has " +
                                std::to_string(set.dim()));
}

Eigen::Index compute_dim(const ProjectableSet::Variant& v) {
    return std::visit(overloaded{
                          [](const Box& b) { return b.lower.size(); },
                          [](const NonnegOrthant& o) { return o.dim; },
                          [](const Product& p) {
                              Eigen::Index n = 0;
                              for (const auto& f : p.factors) n += f.dim();
                              return n;
                          },
                          [](const Segment& s) { return s.anchor.size(); },
                      },
                      v);
}

void project_into(const ProjectableSet& set, const Eigen::Ref<const Point>& u,
                  Eigen::Ref<Point> out) {
    std::visit(overloaded{
                   [&](const Box& b) { out = u.cwiseMax(b.lower).cwiseMin(b.upper); },
                   [&](const NonnegOrthant&) { out = u.cwiseMax(0.0); },
                   [&](const Product& p) {
                       Eigen::Index off = 0;
                       for (const auto& f : p.factors) {
                           project_into(f, u.segment(off, f.dim()), out.segment(off, f.dim()));
                           off += f.dim();
                       }
                   },
                   [&](const Segment& s) {
                       out = s.anchor;
                       out[s.free_index] = std::clamp(u[s.free_index], s.lo, s.hi);
                   },
               },
               set.variant());
}

void sample_into(const ProjectableSet& set, std::mt19937_64& rng, Eigen::Ref<Point> out) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::visit(overloaded{
                   [&](const Box& b) {
                       for (Eigen::Index i = 0; i < out.size(); ++i)
                           out[i] = b.lower[i] + unit(rng) * (b.upper[i] - b.lower[i]);
                   },
                   [&](const NonnegOrthant&) {
                       throw UnsupportedOperation("sample_uniform: orthant is unbounded");
                   },
                   [&](const Product& p) {
                       Eigen::Index off = 0;
                       for (const auto& f : p.factors) {
                           sample_into(f, rng, out.segment(off, f.dim()));
                           off += f.dim();
                       }
                   },
                   [&](const Segment& s) {
                       out = s.anchor;
                       out[s.free_index] = s.lo + unit(rng) * (s.hi - s.lo);
                   },
               },
               set.variant());
}

// Per-coordinate extent: sum of squared side lengths and sum of squared max |coord|.
void extents(const ProjectableSet& set, double& side_sq, double& reach_sq) {
    std::visit(overloaded{
                   [&](const Box& b) {
                       side_sq += (b.upper - b.lower).squaredNorm();
                       reach_sq += b.lower.cwiseAbs2().cwiseMax(b.upper.cwiseAbs2()).sum();
                   },
                   [&](const NonnegOrthant&) {
                       throw UnsupportedOperation("orthant is unbounded");
                   },
                   [&](const Product& p) {
                       for (const auto& f : p.factors) extents(f, side_sq, reach_sq);
                   },
                   [&](const Segment& s) {
                       side_sq += (s.hi - s.lo) * (s.hi - s.lo);
                       double fixed = s.anchor.squaredNorm() -
                                      s.anchor[s.free_index] * s.anchor[s.free_index];
                       reach_sq += fixed + std::max(s.lo * s.lo, s.hi * s.hi);
                   },
               },
               set.variant());
}

} // namespace

ProjectableSet::ProjectableSet(Variant v)
    : v_(std::make_shared<const Variant>(std::move(v))), dim_(compute_dim(*v_)) {}

ProjectableSet ProjectableSet::box(Point lower, Point upper) {
    if (lower.size() != upper.size())
        throw ContractViolation("box: lower and upper differ in dimension");
    if (!all_finite(lower) || !all_finite(upper))
        throw ContractViolation("box: bounds must be finite");
    if ((lower.array() > upper.array()).any())
        throw ContractViolation("box: lower must not exceed upper");
    return ProjectableSet(Box{std::move(lower), std::move(upper)});
}

ProjectableSet ProjectableSet::orthant(Eigen::Index dim) {
    if (dim < 1) throw ContractViolation("orthant: dimension must be positive");
    return ProjectableSet(NonnegOrthant{dim});
}

ProjectableSet ProjectableSet::product(std::vector<ProjectableSet> factors) {
    if (factors.empty()) throw ContractViolation("product: needs at least one factor");
    return ProjectableSet(Product{std::move(factors)});
}

ProjectableSet ProjectableSet::segment(Point anchor, Eigen::Index free_index, double lo,
                                       double hi) {
    if (free_index < 0 || free_index >= anchor.size())
        throw ContractViolation("segment: free coordinate out of range");
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw ContractViolation("segment: need finite lo <= hi");
    anchor[free_index] = lo;
    return ProjectableSet(Segment{std::move(anchor), free_index, lo, hi});
}

bool ProjectableSet::bounded() const {
    return std::visit(overloaded{
                          [](const NonnegOrthant&) { return false; },
                          [](const Product& p) {
                              return std::all_of(p.factors.begin(), p.factors.end(),
                                                 [](const auto& f) { return f.bounded(); });
                          },
                          [](const auto&) { return true; },
                      },
                      *v_);
}

Point ProjectableSet::reference_point() const {
    return std::visit(overloaded{
                          [](const Box& b) -> Point { return 0.5 * (b.lower + b.upper); },
                          [](const NonnegOrthant& o) -> Point { return Point::Zero(o.dim); },
                          [](const Product& p) -> Point {
                              Eigen::Index n = 0;
                              for (const auto& f : p.factors) n += f.dim();
                              Point out(n);
                              Eigen::Index off = 0;
                              for (const auto& f : p.factors) {
                                  out.segment(off, f.dim()) = f.reference_point();
                                  off += f.dim();
                              }
                              return out;
                          },
                          [](const Segment& s) -> Point {
                              Point out = s.anchor;
                              out[s.free_index] = 0.5 * (s.lo + s.hi);
                              return out;
                          },
                      },
                      *v_);
}

Point project(const ProjectableSet& set, const Point& u) {
    require_dim(set, u, "project");
    Point out(u.size());
    project_into(set, u, out);
    return out;
}

double distance_to(const ProjectableSet& set, const Point& u) {
    require_dim(set, u, "distance_to");
    return (u - project(set, u)).norm();
}

bool contains(const ProjectableSet& set, const Point& u, double tol) {
    return distance_to(set, u) <= tol;
}

std::vector<Point> sample_uniform(const ProjectableSet& set, int count, std::uint64_t seed) {
    if (count < 1) throw ContractViolation("sample_uniform: count must be >= 1");
    if (!set.bounded()) throw UnsupportedOperation("sample_uniform: set is unbounded");
    std::mt19937_64 rng(seed);
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        Point p(set.dim());
        sample_into(set, rng, p);
        out.push_back(std::move(p));
    }
    return out;
}

double half_diameter_sq(const ProjectableSet& set) {
    double side = 0.0, reach = 0.0;
    extents(set, side, reach);
    return 0.5 * side;
}

double max_norm(const ProjectableSet& set) {
    double side = 0.0, reach = 0.0;
    extents(set, side, reach);
    return std::sqrt(reach);
}

bool all_finite(const Point& x) { return x.allFinite(); }

} // namespace irvi
