#include "irvi/errors.hpp"
#include "irvi/instances.hpp"
#include "irvi/solver_iregmm.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace irvi;

namespace {

Point p2(double a, double b) { return Point{{a, b}}; }

const double kGamma = 1.0 / (2.0 * std::sqrt(0.02));

IregMmConfig zs_config(long K) {
    IregMmConfig c;
    c.gamma = kGamma;
    c.eta0 = 0.01;
    c.b = 0.5;
    c.max_iters = K;
    c.x0 = p2(35.5, 30);
    return c;
}

double dist_to_segment(const Point& x) {
    const double t = std::clamp(x[0], 11.0, 60.0);
    return std::hypot(x[0] - t, x[1] - 10.0);
}

BilevelVIProblem zero_problem() {
    auto prob = build_zero_sum(true);
    prob.inner_map.eval = [](const Point& x) -> Point { return Point::Zero(x.size()); };
    SmoothObjective f = prob.objective();
    f.value = [](const Point&) { return 0.0; };
    f.gradient = [](const Point& x) -> Point { return Point::Zero(x.size()); };
    prob.outer = f;
    return prob;
}

} // namespace

TEST(IregMm, ZeroMapsLeaveIterateFixed) {
    const auto prob = zero_problem();
    auto c = zs_config(1);
    c.x0 = p2(20, 40);
    const auto s = ireg_mm_step(prob, c, ireg_mm_initial_state(prob, c));
    EXPECT_EQ(s.x, p2(20, 40));
    EXPECT_EQ(s.y, p2(20, 40));
}

TEST(IregMm, FirstAverageIgnoresInitialAverage) {
    const auto prob = build_zero_sum(true);
    const auto c = zs_config(1);
    auto s0 = ireg_mm_initial_state(prob, c);
    s0.ybar = p2(1e6, -1e6);
    const auto s1 = ireg_mm_step(prob, c, s0);
    EXPECT_EQ(s1.ybar, s1.y);
}

TEST(IregMm, StepsizeCheckOnZeroSum) {
    const auto prob = build_zero_sum(true);
    const double lhs = kGamma * kGamma * (0.01 + 0.0001);
    EXPECT_NEAR(lhs, 0.12625, 1e-12);
    EXPECT_NO_THROW(validate(prob, zs_config(10)));
    auto bad = zs_config(10);
    bad.gamma = 10.0;
    EXPECT_THROW(validate(prob, bad), ContractViolation);
    bad.allow_stepsize_violation = true;
    EXPECT_NO_THROW(validate(prob, bad));
}

TEST(IregMm, RejectsBadParameters) {
    const auto prob = build_zero_sum(true);
    auto c = zs_config(10);
    c.b = 1.0;
    EXPECT_THROW(validate(prob, c), ContractViolation);
    c = zs_config(0);
    EXPECT_THROW(validate(prob, c), ContractViolation);
    c = zs_config(10);
    c.x0 = p2(0, 0);
    EXPECT_THROW(validate(prob, c), ContractViolation);
}

TEST(IregMm, SingleIterationBookkeeping) {
    const auto trace = run_ireg_mm(build_zero_sum(true), zs_config(1));
    ASSERT_EQ(trace.records.size(), 1u);
    EXPECT_EQ(trace.back().projections, 2);
    EXPECT_EQ(trace.back().k, 1);
}

TEST(IregMm, EtaSchedule) {
    const auto c = zs_config(10);
    for (long k = 0; k < 50; ++k)
        EXPECT_DOUBLE_EQ(ireg_mm_eta(c, k), 0.01 / std::pow(k + 1.0, 0.5));
    auto cc = c;
    cc.constant_eta = 0.02;
    EXPECT_EQ(ireg_mm_eta(cc, 7), 0.02);
}

TEST(IregMm, FeasibilityAndAveragingIdentity) {
    const auto prob = build_zero_sum(true);
    const auto trace = run_ireg_mm(prob, zs_config(1000));
    Point sum = Point::Zero(2);
    for (const auto& r : trace.records) {
        EXPECT_TRUE(contains(prob.inner_set, r.x));
        EXPECT_TRUE(contains(prob.inner_set, r.y));
        EXPECT_TRUE(contains(prob.inner_set, r.ybar));
        sum += r.y;
        const Point mean = sum / static_cast<double>(r.k);
        EXPECT_LE((r.ybar - mean).norm(), 1e-12 * mean.norm());
    }
}

TEST(IregMm, RateBoundsAlongLongRun) {
    const auto prob = build_zero_sum(true);
    const auto c = zs_config(100000);
    const auto H = prob.outer_map();
    const auto& seg = *prob.known_inner_solution_set;
    const double D2 = prob.bounds.D_X_sq;
    long violations = 0;
    RunOptions opts;
    opts.keep_points = false;
    opts.on_iteration = [&](IterateRecord& r) {
        if (r.k < 4) return;
        const double K = static_cast<double>(r.k);
        if (outer_gap_exact_segment(H, seg, r.ybar) > (D2 / (c.gamma * c.eta0)) / std::sqrt(K))
            ++violations;
    };
    const auto trace = run_ireg_mm(prob, c, opts);
    EXPECT_EQ(violations, 0);
    EXPECT_LE(dist_to_segment(trace.solution), 1e-2);
}

TEST(IregMm, ConstantEtaBelowThreshold) {
    const auto prob = build_zero_sum(true);
    auto c = zs_config(10000);
    c.constant_eta = 0.03;
    const double alpha = 1.1;
    const double x0_dist_sq = (*c.x0 - p2(11, 10)).squaredNorm();
    const double BH = std::hypot(60.0, 10.0);
    long dist_violations = 0;
    RunOptions opts;
    opts.keep_points = false;
    opts.on_iteration = [&](IterateRecord& r) {
        if (dist_to_segment(r.ybar) > (x0_dist_sq / (c.gamma * alpha)) / static_cast<double>(r.k))
            ++dist_violations;
    };
    const auto trace = run_ireg_mm(prob, c, opts);
    EXPECT_EQ(dist_violations, 0);
    const double gap = outer_gap_exact_segment(prob.outer_map(), *prob.known_inner_solution_set,
                                               trace.solution);
    const double bound = std::max(prob.bounds.D_X_sq / (c.gamma * 0.03),
                                  BH * x0_dist_sq / (c.gamma * alpha)) / 1e4;
    EXPECT_LE(gap, bound);
}

TEST(IregMm, DivergenceIsRecorded) {
    auto prob = build_zero_sum(true);
    prob.inner_map.eval = [](const Point& x) -> Point {
        return x[0] > 30 ? Point::Constant(2, NAN) : Point::Zero(2);
    };
    const auto trace = run_ireg_mm(prob, zs_config(5));
    EXPECT_TRUE(trace.diverged);
    EXPECT_TRUE(trace.records.empty());
    EXPECT_FALSE(trace.message.empty());
}

TEST(IregMm, CallbackSeesEveryRecordAndCanDropPoints) {
    int calls = 0;
    RunOptions opts;
    opts.keep_points = false;
    opts.on_iteration = [&](IterateRecord& r) {
        ++calls;
        EXPECT_EQ(r.ybar.size(), 2);
        r.metrics["seen"] = 1.0;
    };
    const auto trace = run_ireg_mm(build_zero_sum(true), zs_config(25), opts);
    EXPECT_EQ(calls, 25);
    EXPECT_EQ(trace.back().x.size(), 0);
    EXPECT_EQ(trace.metric("seen").size(), 25u);
}

TEST(IregMm, InfiniteMapValueIsNotClippedAway) {
    auto prob = build_zero_sum(true);
    prob.inner_map.eval = [](const Point&) -> Point { return Point::Constant(2, INFINITY); };
    const auto trace = run_ireg_mm(prob, zs_config(5));
    EXPECT_TRUE(trace.diverged);
}
