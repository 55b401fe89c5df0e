#include "irvi/instances.hpp"

#include "irvi/errors.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace irvi {

// ---- zero-sum game ----

ZeroSumGameInstance zero_sum_instance() {
    ZeroSumGameInstance z{
        Matrix(2, 2),
        Point(2),
        ProjectableSet::box(Point{{11.0, 10.0}}, Point{{60.0, 50.0}}),
        ProjectableSet::segment(Point{{11.0, 10.0}}, 0, 11.0, 60.0),
        Point{{11.0, 10.0}},
        Point{{60.0, 10.0}},
    };
    z.A << 0.0, -0.1, 0.1, 0.0;
    z.b << 1.0, 0.0;
    return z;
}

WeakSharpness weak_sharpness_of_zero_sum() {
    const auto z = zero_sum_instance();
    WeakSharpness ws{1.1, 1.0, std::nullopt};
    const auto xs = sample_uniform(z.box, 10000, 101);
    const auto stars = sample_uniform(z.solution_segment, 10000, 202);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const Point Fs = z.A * stars[i] + z.b;
        const double lhs = Fs.dot(xs[i] - stars[i]);
        const double rhs = ws.alpha * std::pow(distance_to(z.solution_segment, xs[i]), ws.order_M);
        if (lhs < rhs - 1e-9 * (1.0 + std::abs(lhs)))
            throw ConstructionError("zero-sum weak sharpness check failed");
    }
    return ws;
}

BilevelVIProblem build_zero_sum(bool best) {
    const auto z = zero_sum_instance();
    const double sign = best ? 1.0 : -1.0;

    VectorMapping F;
    F.dim = 2;
    F.eval = [A = z.A, b = z.b](const Point& x) -> Point { return A * x + b; };
    F.lipschitz_L = 0.1;
    F.strong_monotone_mu = 0.0;
    F.jacobian = [A = z.A](const Point&) -> Matrix { return A; };
    F.affine = true;

    SmoothObjective f;
    f.dim = 2;
    f.value = [sign](const Point& x) { return sign * 0.5 * x.squaredNorm(); };
    f.gradient = [sign](const Point& x) -> Point { return sign * x; };
    f.smoothness_L = 1.0;
    f.strong_convexity_mu = best ? 1.0 : 0.0;
    f.gradient_affine = true;

    const Point x_star = best ? z.best_ne : z.worst_ne;
    WeakSharpness ws = weak_sharpness_of_zero_sum();
    ws.known_threshold = ws.alpha / (2.0 * x_star.norm());

    ProblemBounds bounds;
    bounds.D_X_sq = half_diameter_sq(z.box);
    const auto& box = std::get<Box>(z.box.variant());
    double cf = 0.0;
    for (double x1 : {box.lower[0], box.upper[0]})
        for (double x2 : {box.lower[1], box.upper[1]})
            cf = std::max(cf, (z.A * Point{{x1, x2}} + z.b).norm());
    bounds.C_F = cf;
    bounds.C_H = max_norm(z.box);
    bounds.C_f = max_norm(z.box);
    bounds.B_F = (z.A * z.worst_ne + z.b).norm();
    bounds.B_H = max_norm(z.solution_segment);
    bounds.B_f = max_norm(z.solution_segment);

    BilevelVIProblem p{z.box, F, f, ws, bounds, z.solution_segment, x_star};
    p.validate();
    return p;
}

// ---- selection ----

BilevelVIProblem build_selection(const SelectionInstance& inst) {
    const Eigen::Index p = inst.Y.dim();
    const Eigen::Index q = static_cast<Eigen::Index>(inst.h_constraints.size());
    if (inst.g.dim != p || inst.secondary.dim != p)
        throw ContractViolation("build_selection: g or secondary objective dimension mismatch");
    for (const auto& h : inst.h_constraints)
        if (h.dim != p) throw ContractViolation("build_selection: constraint dimension mismatch");

    const Eigen::Index n = p + q;
    VectorMapping F;
    F.dim = n;
    F.eval = [inst, p, q](const Point& x) -> Point {
        const Point y = x.head(p);
        const Point lam = x.tail(q);
        Point out(p + q);
        Point top = inst.g.grad(y);
        for (Eigen::Index j = 0; j < q; ++j) {
            const auto& h = inst.h_constraints[static_cast<std::size_t>(j)];
            top += lam[j] * h.grad(y);
            out[p + j] = -h(y);
        }
        out.head(p) = top;
        return out;
    };
    F.strong_monotone_mu = 0.0;

    SmoothObjective f;
    f.dim = n;
    f.value = [phi = inst.secondary, p](const Point& x) { return phi(Point(x.head(p))); };
    f.gradient = [phi = inst.secondary, p, n](const Point& x) -> Point {
        Point g = Point::Zero(n);
        g.head(p) = phi.grad(Point(x.head(p)));
        return g;
    };
    f.smoothness_L = inst.secondary.smoothness_L;
    f.strong_convexity_mu = 0.0;
    f.gradient_affine = inst.secondary.gradient_affine;

    std::vector<ProjectableSet> factors{inst.Y};
    if (q > 0) factors.push_back(ProjectableSet::orthant(q));
    auto X = factors.size() == 1 ? inst.Y : ProjectableSet::product(std::move(factors));

    ProblemBounds bounds;
    bounds.D_X_sq = X.bounded() ? half_diameter_sq(X) : std::numeric_limits<double>::infinity();
    BilevelVIProblem prob{X, F, f, std::nullopt, bounds, std::nullopt, std::nullopt};
    prob.validate();
    return prob;
}

SelectionInstance random_qp_selection(int p, int q, std::uint64_t seed) {
    if (p < 1 || q < 0) throw ContractViolation("random_qp_selection: bad sizes");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix B(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) B(i, j) = gauss(rng);
    const Matrix Q = B.transpose() * B + 0.1 * Matrix::Identity(p, p);
    Point c(p);
    for (int i = 0; i < p; ++i) c[i] = gauss(rng);

    SelectionInstance inst{
        {}, {}, ProjectableSet::box(Point::Constant(p, -1.0), Point::Constant(p, 1.0)), {}};
    inst.g.dim = p;
    inst.g.value = [Q, c](const Point& y) { return 0.5 * y.dot(Q * y) + c.dot(y); };
    inst.g.gradient = [Q, c](const Point& y) -> Point { return Q * y + c; };
    Eigen::SelfAdjointEigenSolver<Matrix> es(Q);
    inst.g.smoothness_L = es.eigenvalues().maxCoeff();
    inst.g.strong_convexity_mu = es.eigenvalues().minCoeff();
    inst.g.gradient_affine = true;

    for (int j = 0; j < q; ++j) {
        Point a(p);
        for (int i = 0; i < p; ++i) a[i] = gauss(rng);
        const double beta = gauss(rng);
        SmoothObjective h;
        h.dim = p;
        h.value = [a, beta](const Point& y) { return a.dot(y) - beta; };
        h.gradient = [a](const Point&) -> Point { return a; };
        h.gradient_affine = true;
        inst.h_constraints.push_back(std::move(h));
    }

    inst.secondary.dim = p;
    inst.secondary.value = [](const Point& y) { return 0.5 * y.squaredNorm(); };
    inst.secondary.gradient = [](const Point& y) -> Point { return y; };
    inst.secondary.smoothness_L = 1.0;
    inst.secondary.strong_convexity_mu = 1.0;
    inst.secondary.gradient_affine = true;
    return inst;
}

// ---- traffic ----

namespace {

struct Arc {
    int tail;
    int head;
};

constexpr Arc kArcs[kTrafficArcs] = {{1, 5},  {1, 12}, {4, 5},   {4, 9},  {5, 6},
                                     {5, 9},  {6, 7},  {6, 10},  {7, 8},  {7, 11},
                                     {8, 2},  {9, 10}, {9, 13},  {10, 11}, {11, 2},
                                     {11, 3}, {12, 6}, {12, 8},  {13, 3}};
constexpr Arc kOdPairs[kTrafficOdPairs] = {{1, 2}, {1, 3}, {4, 2}, {4, 3}};

constexpr double kT0[kTrafficArcs] = {7, 9, 9, 12, 3, 9, 5, 13, 5, 9, 9, 10, 9, 5, 9, 8, 7, 14, 11};
constexpr double kCap[kTrafficArcs] = {7.5, 3.5, 1.5, 7.5, 3, 3.5, 7.5, 2, 2, 2.5,
                                       5,   5,   5.5, 6.5, 4.5, 2.5, 1.5, 3.5, 5.5};
constexpr double kDemand[kTrafficOdPairs] = {400, 800, 600, 450};

bool is_binary(double v) { return v == 0.0 || v == 1.0; }

} // namespace

Matrix parse_incidence(std::string_view text, int rows, int cols) {
    std::istringstream in{std::string(text)};
    int r = 0, c = 0;
    if (!(in >> r >> c)) throw ConstructionError("incidence: missing 'rows cols' header");
    if (r != rows || c != cols)
        throw ConstructionError("incidence: expected " + std::to_string(rows) + "x" +
                                std::to_string(cols) + ", header says " + std::to_string(r) +
                                "x" + std::to_string(c));
    Matrix M(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            double v = 0.0;
            if (!(in >> v)) throw ConstructionError("incidence: too few entries");
            if (!is_binary(v)) throw ConstructionError("incidence: entries must be 0 or 1");
            M(i, j) = v;
        }
    std::string extra;
    if (in >> extra) throw ConstructionError("incidence: trailing data");
    return M;
}

Matrix load_incidence_file(const std::string& path, int rows, int cols) {
    std::ifstream f(path);
    if (!f) throw ConstructionError("incidence: cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_incidence(ss.str(), rows, cols);
}

void validate_traffic_topology(const Matrix& Delta, const Matrix& Omega) {
    if (Delta.rows() != kTrafficArcs || Delta.cols() != kTrafficPaths ||
        Omega.rows() != kTrafficOdPairs || Omega.cols() != kTrafficPaths)
        throw ConstructionError("traffic: incidence matrices have the wrong shape");
    std::set<std::vector<int>> seen;
    for (int p = 0; p < kTrafficPaths; ++p) {
        int od = -1;
        for (int j = 0; j < kTrafficOdPairs; ++j) {
            if (!is_binary(Omega(j, p))) throw ConstructionError("traffic: Omega not binary");
            if (Omega(j, p) == 1.0) {
                if (od >= 0) throw ConstructionError("traffic: path serves two OD pairs");
                od = j;
            }
        }
        if (od < 0) throw ConstructionError("traffic: path serves no OD pair");

        std::vector<int> arcs;
        for (int a = 0; a < kTrafficArcs; ++a) {
            if (!is_binary(Delta(a, p))) throw ConstructionError("traffic: Delta not binary");
            if (Delta(a, p) == 1.0) arcs.push_back(a);
        }
        if (!seen.insert(arcs).second)
            throw ConstructionError("traffic: duplicate path column " + std::to_string(p));

        int node = kOdPairs[od].tail;
        std::set<int> visited{node};
        std::vector<bool> used(arcs.size(), false);
        for (std::size_t step = 0; step < arcs.size(); ++step) {
            int next = -1;
            for (std::size_t i = 0; i < arcs.size(); ++i) {
                if (used[i] || kArcs[arcs[i]].tail != node) continue;
                if (next >= 0) throw ConstructionError("traffic: path branches");
                next = static_cast<int>(i);
            }
            if (next < 0)
                throw ConstructionError("traffic: path column " + std::to_string(p) +
                                        " is not connected");
            used[static_cast<std::size_t>(next)] = true;
            node = kArcs[arcs[static_cast<std::size_t>(next)]].head;
            if (!visited.insert(node).second) throw ConstructionError("traffic: path has a cycle");
        }
        if (node != kOdPairs[od].head)
            throw ConstructionError("traffic: path column " + std::to_string(p) +
                                    " does not end at its destination");
    }
}

Point TrafficInstance::arc_flows(const Point& x) const { return Delta * x.head(kTrafficPaths); }

Point TrafficInstance::arc_costs(const Point& flows) const {
    Point c(kTrafficArcs);
    for (int a = 0; a < kTrafficArcs; ++a)
        c[a] = t0[a] * (1.0 + 0.15 * std::pow(std::max(flows[a], 0.0) / cap[a], n_a[a]));
    return c;
}

Point TrafficInstance::arc_cost_slopes(const Point& flows) const {
    Point s(kTrafficArcs);
    for (int a = 0; a < kTrafficArcs; ++a) {
        const double z = std::max(flows[a], 0.0);
        s[a] = 0.15 * t0[a] * n_a[a] * std::pow(z, n_a[a] - 1.0) / std::pow(cap[a], n_a[a]);
    }
    return s;
}

Point TrafficInstance::F(const Point& x) const {
    Point out(kTrafficDim);
    const Point h = x.head(kTrafficPaths);
    const Point u = x.tail(kTrafficOdPairs);
    out.head(kTrafficPaths) = Delta.transpose() * arc_costs(Delta * h) - Omega.transpose() * u;
    out.tail(kTrafficOdPairs) = Omega * h - d;
    return out;
}

Matrix TrafficInstance::jacobian(const Point& x) const {
    Matrix J = Matrix::Zero(kTrafficDim, kTrafficDim);
    const Point s = arc_cost_slopes(arc_flows(x));
    J.topLeftCorner(kTrafficPaths, kTrafficPaths) = Delta.transpose() * s.asDiagonal() * Delta;
    J.topRightCorner(kTrafficPaths, kTrafficOdPairs) = -Omega.transpose();
    J.bottomLeftCorner(kTrafficOdPairs, kTrafficPaths) = Omega;
    return J;
}

// 1^T C(h) = sum_p sum_a Delta_ap c_a(F_a) = sum_a w_a c_a(F_a).
double TrafficInstance::aggregate_cost(const Point& x) const {
    return arc_weight.dot(arc_costs(arc_flows(x)));
}

Point TrafficInstance::aggregate_cost_gradient(const Point& x) const {
    Point g = Point::Zero(kTrafficDim);
    g.head(kTrafficPaths) =
        Delta.transpose() * arc_weight.cwiseProduct(arc_cost_slopes(arc_flows(x)));
    return g;
}

std::pair<BilevelVIProblem, TrafficInstance> build_traffic(double n_a_value,
                                                           const TrafficOptions& opts) {
    if (!(n_a_value > 0.0)) throw ContractViolation("build_traffic: n_a must be positive");
    TrafficInstance inst;
    inst.t0 = Eigen::Map<const Point>(kT0, kTrafficArcs);
    inst.cap = 100.0 * Eigen::Map<const Point>(kCap, kTrafficArcs);
    inst.n_a = Point::Constant(kTrafficArcs, n_a_value);
    inst.d = Eigen::Map<const Point>(kDemand, kTrafficOdPairs);
    inst.Delta = opts.delta_path
                     ? load_incidence_file(*opts.delta_path, kTrafficArcs, kTrafficPaths)
                     : parse_incidence(kNguyenDupuisDelta, kTrafficArcs, kTrafficPaths);
    inst.Omega = opts.omega_path
                     ? load_incidence_file(*opts.omega_path, kTrafficOdPairs, kTrafficPaths)
                     : parse_incidence(kNguyenDupuisOmega, kTrafficOdPairs, kTrafficPaths);
    validate_traffic_topology(inst.Delta, inst.Omega);
    inst.arc_weight = inst.Delta * Point::Ones(kTrafficPaths);

    // Reference point for the Lipschitz estimate: every path carries its full OD demand.
    Point x_ref = Point::Zero(kTrafficDim);
    for (int p = 0; p < kTrafficPaths; ++p) x_ref[p] = inst.Omega.col(p).dot(inst.d);

    VectorMapping F;
    F.dim = kTrafficDim;
    F.eval = [inst](const Point& x) { return inst.F(x); };
    F.jacobian = [inst](const Point& x) { return inst.jacobian(x); };
    F.lipschitz_L = Eigen::JacobiSVD<Matrix>(inst.jacobian(x_ref)).singularValues()[0];
    F.strong_monotone_mu = 0.0;
    F.affine = n_a_value == 1.0;

    const double sign = opts.worst ? -1.0 : 1.0;
    SmoothObjective f;
    f.dim = kTrafficDim;
    f.value = [inst, sign](const Point& x) { return sign * inst.aggregate_cost(x); };
    f.gradient = [inst, sign](const Point& x) -> Point {
        return sign * inst.aggregate_cost_gradient(x);
    };
    if (n_a_value == 1.0) {
        f.smoothness_L = 0.0;
        f.gradient_affine = true;
    } else {
        // Curvature of z^n blows up at zero flow for n < 2; estimate at unit arc flow.
        Point curv(kTrafficArcs);
        for (int a = 0; a < kTrafficArcs; ++a)
            curv[a] = inst.arc_weight[a] * 0.15 * inst.t0[a] * n_a_value *
                      std::abs(n_a_value - 1.0) / std::pow(inst.cap[a], n_a_value);
        const Matrix Hs = inst.Delta.transpose() * curv.asDiagonal() * inst.Delta;
        f.smoothness_L = Eigen::SelfAdjointEigenSolver<Matrix>(Hs).eigenvalues().maxCoeff();
    }
    f.strong_convexity_mu = 0.0;

    ProblemBounds bounds;
    bounds.D_X_sq = std::numeric_limits<double>::infinity();
    BilevelVIProblem prob{ProjectableSet::orthant(kTrafficDim), F, f, std::nullopt, bounds,
                          std::nullopt, std::nullopt};
    prob.validate();
    return {std::move(prob), std::move(inst)};
}

} // namespace irvi
