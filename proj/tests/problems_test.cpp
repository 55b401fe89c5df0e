#include "irvi/errors.hpp"
#include "irvi/instances.hpp"
#include "irvi/problems.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace irvi;

namespace {

Point p2(double a, double b) { return Point{{a, b}}; }

VectorMapping linear_map(const Matrix& M) {
    VectorMapping m;
    m.dim = M.rows();
    m.eval = [M](const Point& x) -> Point { return M * x; };
    m.affine = true;
    return m;
}

const auto kSegment = ProjectableSet::segment(p2(11, 10), 0, 11, 60);

} // namespace

TEST(RegularizedMap, HandValues) {
    const auto prob = build_zero_sum(true);
    EXPECT_TRUE(regularized_map(prob, 0.0, p2(11, 10)).isApprox(p2(0, 1.1)));
    EXPECT_TRUE(regularized_map(prob, 1.0, p2(11, 10)).isApprox(p2(11, 11.1)));
}

TEST(RegularizedMap, ZeroEtaIsInnerMap) {
    const auto prob = build_zero_sum(false);
    const auto pts = sample_uniform(prob.inner_set, 20, 5);
    for (const auto& x : pts) EXPECT_EQ(regularized_map(prob, 0.0, x), prob.inner_map(x));
}

TEST(GapLowerEstimate, ZeroAtSolutionWithItselfSampled) {
    const auto prob = build_zero_sum(true);
    auto samples = sample_uniform(prob.inner_set, 100, 9);
    samples.push_back(p2(11, 10));
    EXPECT_NEAR(gap_lower_estimate(prob.inner_map, samples, p2(11, 10)), 0.0, 1e-12);
}

TEST(GapLowerEstimate, SingletonSampleAtX) {
    const auto prob = build_zero_sum(true);
    EXPECT_EQ(gap_lower_estimate(prob.inner_map, {p2(20, 30)}, p2(20, 30)), 0.0);
}

TEST(GapLowerEstimate, HandArithmetic) {
    const auto prob = build_zero_sum(true);
    EXPECT_NEAR(gap_lower_estimate(prob.inner_map, {p2(11, 10)}, p2(20, 20)), 11.0, 1e-12);
}

TEST(GapLowerEstimate, MonotoneInSampleSet) {
    const auto prob = build_zero_sum(true);
    const auto pool = sample_uniform(prob.inner_set, 200, 10);
    const Point x = p2(40, 40);
    double prev = -INFINITY;
    std::vector<Point> grown;
    for (const auto& p : pool) {
        grown.push_back(p);
        const double g = gap_lower_estimate(prob.inner_map, grown, x);
        EXPECT_GE(g, prev);
        prev = g;
    }
}

TEST(SampledGapEstimator, AgreesWithDirectEstimate) {
    const auto prob = build_zero_sum(true);
    const auto samples = sample_uniform(prob.inner_set, 300, 12);
    const SampledGapEstimator est(prob.inner_map, samples);
    EXPECT_EQ(est.size(), samples.size());
    for (const auto& x : sample_uniform(prob.inner_set, 30, 13))
        EXPECT_NEAR(est(x), gap_lower_estimate(prob.inner_map, samples, x), 1e-9);
}

TEST(OuterGapExactSegment, HandValues) {
    const auto H = linear_map(Matrix::Identity(2, 2));
    EXPECT_NEAR(outer_gap_exact_segment(H, kSegment, p2(11, 10)), 0.0, 1e-12);
    EXPECT_NEAR(outer_gap_exact_segment(H, kSegment, p2(12, 10)), 11.0, 1e-12);
    EXPECT_EQ(outer_gap_exact_segment(linear_map(Matrix::Zero(2, 2)), kSegment, p2(30, 10)), 0.0);
}

TEST(OuterGapExactSegment, DominatesSampledEstimate) {
    const auto H = linear_map(Matrix::Identity(2, 2));
    const auto seg_samples = sample_uniform(kSegment, 400, 14);
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> U(0, 70);
    for (int i = 0; i < 200; ++i) {
        const Point x = p2(U(rng), U(rng));
        EXPECT_GE(outer_gap_exact_segment(H, kSegment, x) + 1e-10,
                  gap_lower_estimate(H, seg_samples, x));
    }
}

TEST(OuterGapExactSegment, MatchesDenseSweepForQuadraticCase) {
    // Non-symmetric affine H makes the objective genuinely quadratic in t.
    Matrix M(2, 2);
    M << 0.5, -1.0, 2.0, 0.3;
    VectorMapping H = linear_map(M);
    H.eval = [M](const Point& x) -> Point { return M * x + p2(-3, 1); };
    const Point x = p2(25, 30);
    double best = -INFINITY;
    for (int i = 0; i <= 490000; ++i) {
        const Point y = p2(11 + i * 1e-4, 10);
        best = std::max(best, H(y).dot(x - y));
    }
    EXPECT_NEAR(outer_gap_exact_segment(H, kSegment, x), best, 1e-6 * std::abs(best) + 1e-6);
}

TEST(OuterGapExactSegment, RequiresSegmentAndAffineMap) {
    auto H = linear_map(Matrix::Identity(2, 2));
    EXPECT_ANY_THROW(outer_gap_exact_segment(H, ProjectableSet::box(p2(0, 0), p2(1, 1)), p2(0, 0)));
    H.affine = false;
    EXPECT_ANY_THROW(outer_gap_exact_segment(H, kSegment, p2(20, 10)));
}

TEST(InfeasibilityPhi, TrafficAtOriginIsDemandNorm) {
    const auto [prob, inst] = build_traffic(1.0);
    const double expected = 400.0 * 400 + 800.0 * 800 + 600.0 * 600 + 450.0 * 450;
    EXPECT_DOUBLE_EQ(expected, 1362500.0);
    EXPECT_NEAR(infeasibility_phi(prob.inner_map, Point::Zero(kTrafficDim)), expected, 1e-9);
}

TEST(InfeasibilityPhi, OnlyComplementarityWhenBothNonnegative) {
    VectorMapping m = linear_map(Matrix::Identity(3, 3));
    const Point x = Point::Ones(3);
    const auto t = infeasibility_terms(m, x);
    EXPECT_EQ(t.primal, 0.0);
    EXPECT_EQ(t.dual, 0.0);
    EXPECT_DOUBLE_EQ(t.complement, 3.0);
    EXPECT_DOUBLE_EQ(t.total(), infeasibility_phi(m, x));
}

TEST(InfeasibilityPhi, ZeroAtNcpSolution) {
    // F(x) = x - 1 has NCP solution x = 1.
    VectorMapping m;
    m.dim = 2;
    m.eval = [](const Point& x) -> Point { return x - Point::Ones(2); };
    EXPECT_EQ(infeasibility_phi(m, Point::Ones(2)), 0.0);
}

TEST(InfeasibilityPhi, TermsAreNonnegative) {
    const auto [prob, inst] = build_traffic(1.2);
    std::mt19937_64 rng(16);
    std::normal_distribution<double> N(0, 50);
    for (int i = 0; i < 200; ++i) {
        Point x(kTrafficDim);
        for (int j = 0; j < kTrafficDim; ++j) x[j] = N(rng);
        const auto t = infeasibility_terms(prob.inner_map, x);
        EXPECT_GE(t.primal, 0.0);
        EXPECT_GE(t.dual, 0.0);
        EXPECT_GE(t.complement, 0.0);
    }
}

TEST(MonotonicityWitness, SkewMapIsZero) {
    const auto prob = build_zero_sum(true);
    EXPECT_NEAR(monotonicity_witness(prob.inner_map, prob.inner_set, 10000, 17), 0.0, 1e-12);
}

TEST(MonotonicityWitness, StronglyMonotoneIsPositive) {
    const auto box = ProjectableSet::box(Point::Zero(3), Point::Ones(3));
    EXPECT_GT(monotonicity_witness(linear_map(0.7 * Matrix::Identity(3, 3)), box, 100, 18), 0.0);
}

TEST(MonotonicityWitness, DetectsAntiMonotoneMap) {
    const auto box = ProjectableSet::box(Point::Zero(3), Point::Ones(3));
    EXPECT_LT(monotonicity_witness(linear_map(-Matrix::Identity(3, 3)), box, 2, 19), 0.0);
}

TEST(CurvatureWitness, ConvexAndConcaveQuadratics) {
    const auto box = ProjectableSet::box(Point::Constant(2, -1), Point::Ones(2));
    SmoothObjective f;
    f.dim = 2;
    f.value = [](const Point& x) { return 0.5 * x.squaredNorm(); };
    f.gradient = [](const Point& x) -> Point { return x; };
    EXPECT_NEAR(curvature_witness(f, box, 100, 20), 1.0, 1e-6);
    f.gradient = [](const Point& x) -> Point { return -x; };
    EXPECT_NEAR(curvature_witness(f, box, 100, 20), -1.0, 1e-6);
}

TEST(StrongConvexitySlack, NonnegativeForDeclaredModulus) {
    const auto prob = build_zero_sum(true);
    EXPECT_GE(strong_convexity_slack(prob.objective(), prob.inner_set, 500, 21), -1e-9);
}

TEST(BilevelProblem, OuterMapCarriesObjectiveMetadata) {
    const auto prob = build_zero_sum(true);
    ASSERT_TRUE(prob.outer_is_objective());
    const auto H = prob.outer_map();
    EXPECT_EQ(*H.lipschitz_L, 1.0);
    EXPECT_EQ(H(p2(3, 4)), p2(3, 4));
    EXPECT_EQ(prob.outer_eval(p2(3, 4)), p2(3, 4));
    EXPECT_NO_THROW(prob.validate());
}

TEST(BilevelProblem, MappingDimensionIsChecked) {
    auto m = linear_map(Matrix::Identity(2, 2));
    EXPECT_THROW(m(Point::Zero(3)), ContractViolation);
}

TEST(WeakSharpness, RejectsNonpositiveAlpha) {
    WeakSharpness w;
    w.alpha = 0.0;
    EXPECT_THROW(w.validate(), ContractViolation);
    w.alpha = 1.0;
    w.order_M = 0.5;
    EXPECT_ANY_THROW(w.validate());
}
