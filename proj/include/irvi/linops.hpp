#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

namespace irvi {

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kMembershipTol = 1e-10;

class ProjectableSet;

struct Box {
    Point lower;
    Point upper;
};

struct NonnegOrthant {
    Eigen::Index dim = 0;
};

struct Product {
    std::vector<ProjectableSet> factors;
};

// Axis-aligned segment: every coordinate equals the anchor except `free_index`,
// which ranges over [lo, hi].
struct Segment {
    Point anchor;
    Eigen::Index free_index = 0;
    double lo = 0.0;
    double hi = 0.0;
};

class ProjectableSet {
public:
    using Variant = std::variant<Box, NonnegOrthant, Product, Segment>;

    static ProjectableSet box(Point lower, Point upper);
    static ProjectableSet orthant(Eigen::Index dim);
    static ProjectableSet product(std::vector<ProjectableSet> factors);
    static ProjectableSet segment(Point anchor, Eigen::Index free_index, double lo, double hi);

    Eigen::Index dim() const { return dim_; }
    bool bounded() const;
    const Variant& variant() const { return *v_; }

    bool is_segment() const { return std::holds_alternative<Segment>(*v_); }
    bool is_box() const { return std::holds_alternative<Box>(*v_); }

    // Box center, segment midpoint, or the projection of the origin for unbounded sets.
    Point reference_point() const;

private:
    explicit ProjectableSet(Variant v);
    std::shared_ptr<const Variant> v_;
    Eigen::Index dim_ = 0;
};

Point project(const ProjectableSet& set, const Point& u);
double distance_to(const ProjectableSet& set, const Point& u);
bool contains(const ProjectableSet& set, const Point& u, double tol = kMembershipTol);

// Deterministic for a fixed seed. Throws UnsupportedOperation on unbounded sets.
std::vector<Point> sample_uniform(const ProjectableSet& set, int count, std::uint64_t seed);

// sup over pairs of 0.5*||x - y||^2, exact for boxes, segments and their products.
double half_diameter_sq(const ProjectableSet& set);
// sup over the set of ||x||, exact for boxes, segments and their products.
double max_norm(const ProjectableSet& set);

bool all_finite(const Point& x);

} // namespace irvi
