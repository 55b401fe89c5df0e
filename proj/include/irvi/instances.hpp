#pragma once

#include "irvi/problems.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace irvi {

// ---- Two-player zero-sum game on a box ----

struct ZeroSumGameInstance {
    Matrix A;
    Point b;
    ProjectableSet box;
    ProjectableSet solution_segment;
    Point best_ne;
    Point worst_ne;
};

ZeroSumGameInstance zero_sum_instance();

// Outer objective 0.5*||x||^2 when best, its negative otherwise. The sharpness
// threshold is filled in from the known outer solution.
BilevelVIProblem build_zero_sum(bool best);

// alpha = 1.1, M = 1; checked on 1e4 sampled pairs before returning.
WeakSharpness weak_sharpness_of_zero_sum();

// ---- Optimal solution selection over a convex program ----

struct SelectionInstance {
    SmoothObjective g;
    std::vector<SmoothObjective> h_constraints;
    ProjectableSet Y;
    SmoothObjective secondary;
};

// Lifts to x = [y; lambda] over Y x R^q_+ with F = [grad g + sum lambda_j grad h_j; -h].
BilevelVIProblem build_selection(const SelectionInstance& inst);

// g = 0.5 y^T Q y + c^T y with Q positive definite, h_j(y) = a_j^T y - beta_j,
// Y = [-1, 1]^p, secondary = 0.5 ||y||^2.
SelectionInstance random_qp_selection(int p, int q, std::uint64_t seed);

// ---- Nguyen-Dupuis traffic equilibrium ----

inline constexpr int kTrafficArcs = 19;
inline constexpr int kTrafficPaths = 25;
inline constexpr int kTrafficOdPairs = 4;
inline constexpr int kTrafficDim = kTrafficPaths + kTrafficOdPairs;

extern const char* const kNguyenDupuisDelta;
extern const char* const kNguyenDupuisOmega;

struct TrafficInstance {
    Point t0;
    Point cap;
    Point n_a;
    Point d;
    Matrix Delta;  // arcs x paths
    Matrix Omega;  // od pairs x paths
    Point arc_weight;  // Delta * 1, paths using each arc

    Point arc_flows(const Point& x) const;
    Point arc_costs(const Point& flows) const;
    Point arc_cost_slopes(const Point& flows) const;
    Point F(const Point& x) const;
    Matrix jacobian(const Point& x) const;
    double aggregate_cost(const Point& x) const;
    Point aggregate_cost_gradient(const Point& x) const;
};

struct TrafficOptions {
    std::optional<std::string> delta_path;
    std::optional<std::string> omega_path;
    // Minimize the negative aggregate cost (worst equilibrium).
    bool worst = false;
};

// "rows cols" header then whitespace separated 0/1 entries.
Matrix parse_incidence(std::string_view text, int rows, int cols);
Matrix load_incidence_file(const std::string& path, int rows, int cols);

// Every Delta column must be a connected directed origin-destination path on the
// 13-node network, and every Omega column must select exactly one OD pair.
void validate_traffic_topology(const Matrix& Delta, const Matrix& Omega);

std::pair<BilevelVIProblem, TrafficInstance> build_traffic(double n_a_value,
                                                           const TrafficOptions& opts = {});

} // namespace irvi
