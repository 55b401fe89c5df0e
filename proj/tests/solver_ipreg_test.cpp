#include "irvi/errors.hpp"
#include "irvi/instances.hpp"
#include "irvi/solver_ipreg.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace irvi;

namespace {

Point p2(double a, double b) { return Point{{a, b}}; }

const double kGamma = 1.0 / (2.0 * std::sqrt(0.02));

double dist_to_segment(const Point& x) {
    const double t = std::clamp(x[0], 11.0, 60.0);
    return std::hypot(x[0] - t, x[1] - 10.0);
}

IprEgConfig adaptive(long K) {
    IprEgConfig c;
    c.outer_iters = K;
    c.gamma_inner = kGamma;
    c.mode = Adaptive{1.0};
    c.x0 = p2(35.5, 30);
    return c;
}

} // namespace

TEST(IprEg, GradientStepHandValue) {
    const auto prob = build_zero_sum(false);
    auto c = adaptive(100);
    c.gamma_hat = 0.1;
    const auto step = ipr_eg_outer_step(prob, c, p2(60, 10), 0, p2(60, 10));
    EXPECT_TRUE(step.z.isApprox(p2(66, 11)));
}

TEST(IprEg, AdaptiveInnerSchedule) {
    const auto c = adaptive(10);
    EXPECT_EQ(ipr_eg_inner_iters(c, 0), 151);
    EXPECT_EQ(ipr_eg_inner_iters(c, 5), 151);
    EXPECT_EQ(ipr_eg_inner_iters(c, 100), 1000);
    EXPECT_EQ(ipr_eg_inner_iters(c, 30), static_cast<long>(std::ceil(std::pow(30.0, 1.5))));
    EXPECT_DOUBLE_EQ(ipr_eg_eta(c, 100), 6.0 * std::log(1000.0) / (kGamma * 1000.0));
    EXPECT_DOUBLE_EQ(ipr_eg_gamma_hat(c), 1.0 / std::sqrt(10.0));
}

TEST(IprEg, ResidualVanishesAtWorstEquilibrium) {
    const auto prob = build_zero_sum(false);
    const Point xs = p2(60, 10);
    const auto d = stationarity(prob, 0.1, xs, xs, p2(66, 11));
    EXPECT_TRUE(d.exact);
    EXPECT_EQ(d.residual_sq, 0.0);
    EXPECT_EQ(d.e_norm, 0.0);
    EXPECT_EQ(d.delta_norm, 0.0);
}

TEST(IprEg, SurrogateDiagnosticsWithoutKnownSolutionSet) {
    auto prob = build_zero_sum(false);
    prob.known_inner_solution_set.reset();
    const auto d = stationarity(prob, 0.5, p2(20, 20), p2(21, 20), p2(30, 30));
    EXPECT_FALSE(d.exact);
    EXPECT_DOUBLE_EQ(d.residual_sq, 4.0);
    EXPECT_TRUE(std::isnan(d.delta_norm));
}

TEST(IprEg, ProjectionAccounting) {
    const long K = 40;
    const auto res = run_ipr_eg(build_zero_sum(false), adaptive(K));
    ASSERT_EQ(res.trace.records.size(), static_cast<std::size_t>(K + 1));
    std::int64_t expected = 0;
    for (long k = 0; k < K; ++k) expected += 2 * std::max<std::int64_t>(
                                                 static_cast<std::int64_t>(std::ceil(std::pow(k, 1.5) - 1e-9)), 151);
    EXPECT_EQ(res.trace.back().projections, expected);
}

TEST(IprEg, ConvergesToWorstEquilibrium) {
    const auto res = run_ipr_eg(build_zero_sum(false), adaptive(100));
    EXPECT_FALSE(res.trace.diverged);
    EXPECT_LE((res.best_iterate - p2(60, 10)).norm(), 0.5);
    EXPECT_LE((res.trace.solution - p2(60, 10)).norm(), 0.5);
    EXPECT_GE(res.best_k, 50);
    EXPECT_LT(res.best_k, 100);
}

TEST(IprEg, InfeasibilityEnvelope) {
    const auto prob = build_zero_sum(false);
    const auto c = adaptive(60);
    const double gh = ipr_eg_gamma_hat(c);
    const double D2 = prob.bounds.D_X_sq;
    const double A = (25 * D2 + 17 * *prob.bounds.C_f * std::sqrt(D2) * gh) / (1.1 * kGamma);
    const auto res = run_ipr_eg(prob, c);
    for (const auto& r : res.trace.records) {
        if (r.k < 1) continue;
        const double k15 = std::pow(static_cast<double>(r.k), 1.5);
        EXPECT_LE(dist_to_segment(r.x), A * std::log(std::max(k15, 151.0)) / k15);
    }
}

TEST(IprEg, ResidualInequalityAtEveryStep) {
    const auto res = run_ipr_eg(build_zero_sum(false), adaptive(60));
    const double gh = 1.0 / std::sqrt(60.0);
    const auto& recs = res.trace.records;
    for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
        const double lhs = 0.5 * gh * gh * recs[i].metrics.at("residual_sq");
        const double rhs = (recs[i + 1].x - recs[i].x).squaredNorm() +
                           std::pow(recs[i].metrics.at("delta_norm"), 2);
        EXPECT_LE(lhs, rhs * (1 + 1e-10));
    }
}

TEST(IprEg, BestResidualWindowNeverWorsensForLongerPrefixes) {
    // Runs with the same gamma_hat share a prefix, so the window minimum is computable offline.
    const auto prob = build_zero_sum(false);
    auto c = adaptive(60);
    c.gamma_hat = 1.0 / std::sqrt(60.0);
    const auto res = run_ipr_eg(prob, c);
    const auto& recs = res.trace.records;
    double prev = INFINITY;
    for (long K = 2; K <= 60; ++K) {
        double best = INFINITY;
        for (long k = K / 2; k < K; ++k) best = std::min(best, recs[k].metrics.at("residual_sq"));
        if (K % 2 == 1) {  // windows [floor(K/2), K-1] only grow when floor(K/2) stays put
            EXPECT_LE(best, prev);
        }
        prev = best;
    }
}

TEST(IprEg, InnerMapConstants) {
    // H(x) = x - z is an isometry shift: ||H(x) - H(y)|| = ||x - y||.
    const Point z = p2(66, 11);
    const auto H = [&z](const Point& x) -> Point { return x - z; };
    const auto pts = sample_uniform(ProjectableSet::box(p2(11, 10), p2(60, 50)), 100, 60);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        EXPECT_NEAR((H(pts[i]) - H(pts[i + 1])).norm(), (pts[i] - pts[i + 1]).norm(), 1e-12);
}

TEST(IprEg, KnownThresholdQuadraticDecay) {
    const auto prob = build_zero_sum(false);
    const double D = std::sqrt(prob.bounds.D_X_sq);
    const double cap = 1.1 / (2 * std::sqrt(2.0) * D + *prob.bounds.C_f);
    IprEgConfig c;
    c.outer_iters = 40;
    c.gamma_inner = kGamma;
    c.mode = KnownThreshold{cap};
    c.x0 = p2(35.5, 30);
    EXPECT_EQ(ipr_eg_tau(c), std::ceil(-2.0 / std::log(1.0 - 0.5 * cap * kGamma)));
    EXPECT_EQ(ipr_eg_inner_iters(c, 0), 0);
    const auto res = run_ipr_eg(prob, c);
    for (const auto& r : res.trace.records) {
        if (r.k < 1) continue;
        const double bound = (2 * prob.bounds.D_X_sq / (kGamma * 1.1)) / (r.k * r.k);
        EXPECT_LE(dist_to_segment(r.x), bound) << "k=" << r.k;
    }
}

TEST(IprEg, KnownThresholdRejectsLargeEta) {
    IprEgConfig c;
    c.outer_iters = 10;
    c.gamma_inner = kGamma;
    c.mode = KnownThreshold{0.01};
    EXPECT_THROW(validate(build_zero_sum(false), c), ContractViolation);
}

TEST(IprEg, ParameterValidation) {
    const auto prob = build_zero_sum(false);
    auto c = adaptive(1);
    EXPECT_THROW(validate(prob, c), ContractViolation);
    c = adaptive(10);
    c.mode = Adaptive{0.5};
    EXPECT_THROW(validate(prob, c), ContractViolation);
    c = adaptive(10);
    c.gamma_hat = 1.0;
    EXPECT_THROW(validate(prob, c), ContractViolation);
}

TEST(IprEg, InnerTracesKeptOnRequest) {
    auto c = adaptive(4);
    c.keep_inner_traces = true;
    const auto res = run_ipr_eg(build_zero_sum(false), c);
    ASSERT_EQ(res.inner_traces.size(), 4u);
    EXPECT_EQ(res.inner_traces[0].records.size(), 151u);
    EXPECT_EQ(res.inner_traces[1].solution, res.trace.records[2].x);
}
