#include "irvi/baseline_isr.hpp"
#include "irvi/errors.hpp"
#include "irvi/instances.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace irvi;

namespace {

Point p2(double a, double b) { return Point{{a, b}}; }

} // namespace

TEST(IsrCvx, DegenerateRegularizationIsPlainProjectedStep) {
    const auto prob = build_zero_sum(true);
    IsrCvxConfig c;
    c.eta0 = 0.0;
    c.alpha_tilde = 0.0;
    c.inner_step = 2.0;
    c.outer_iters = 1;
    c.x0 = p2(30, 20);
    const auto res = run_isr_cvx(prob, c);
    const Point expected = project(prob.inner_set, p2(30, 20) - 2.0 * prob.inner_map(p2(30, 20)));
    EXPECT_EQ(res.trace.solution, expected);
}

TEST(IsrCvx, FirstInnerStepSeesNoProximalTerm) {
    const auto prob = build_zero_sum(true);
    IsrCvxConfig c;
    c.eta0 = 0.5;
    c.alpha_tilde = 3.0;
    c.inner_step = 0.1;
    c.outer_iters = 1;
    c.x0 = p2(40, 40);
    const auto res = run_isr_cvx(prob, c);
    const Point x = *c.x0;
    const Point Fk = prob.inner_map(x) + 0.5 * prob.objective().grad(x);
    EXPECT_TRUE(res.trace.solution.isApprox(project(prob.inner_set, x - 0.1 * Fk)));
}

TEST(IsrCvx, ScheduleAndInnerCounts) {
    const auto prob = build_zero_sum(true);
    IsrCvxConfig c;
    c.outer_iters = 6;
    c.record_inner_residuals = true;
    const auto res = run_isr_cvx(prob, c);
    ASSERT_EQ(res.trace.records.size(), 6u);
    std::int64_t total = 0;
    for (int k = 0; k < 6; ++k) {
        total += k + 1;
        EXPECT_EQ(res.trace.records[k].projections, total);
        EXPECT_DOUBLE_EQ(res.trace.records[k].eta, 0.01 / std::sqrt(k + 1.0));
        EXPECT_EQ(res.inner_residuals[k].size(), static_cast<std::size_t>(k + 1));
    }
}

TEST(IsrCvx, ProjectionBudgetIsExact) {
    const auto [prob, inst] = build_traffic(1.0);
    IsrCvxConfig c;
    c.projection_budget = 1000;
    const auto res = run_isr_cvx(prob, c);
    EXPECT_EQ(res.trace.back().projections, 1000);
}

TEST(IsrCvx, IteratesStayFeasible) {
    const auto prob = build_zero_sum(true);
    IsrCvxConfig c;
    c.outer_iters = 200;
    c.inner_step = 5.0;
    const auto res = run_isr_cvx(prob, c);
    for (const auto& r : res.trace.records) EXPECT_TRUE(contains(prob.inner_set, r.x));
}

TEST(IsrCvx, DefaultStepContractsInnerResidual) {
    const auto [prob, inst] = build_traffic(1.0);
    IsrCvxConfig c;
    c.outer_iters = 150;
    c.record_inner_residuals = true;
    const auto res = run_isr_cvx(prob, c);
    for (const auto& rs : res.inner_residuals)
        for (std::size_t t = 10; t < rs.size(); ++t)
            EXPECT_LE(rs[t], rs[t - 1] * (1 + 1e-12) + 1e-12);
}

TEST(IsrCvx, DefaultInnerStep) {
    const auto prob = build_zero_sum(true);
    IsrCvxConfig c;
    const double L = 0.1 + 0.01 * 1.0 + 0.1;
    EXPECT_DOUBLE_EQ(isr_cvx_inner_step(prob, c), 0.1 / (L * L));
    c.inner_step = 0.3;
    EXPECT_EQ(isr_cvx_inner_step(prob, c), 0.3);
}

TEST(IsrCvx, Validation) {
    const auto prob = build_zero_sum(true);
    IsrCvxConfig c;
    c.b_tilde = 0.0;
    EXPECT_THROW(validate(prob, c), ContractViolation);
    c = IsrCvxConfig{};
    c.alpha_tilde = -1.0;
    EXPECT_THROW(validate(prob, c), ContractViolation);
    c = IsrCvxConfig{};
    c.outer_iters = 0;
    EXPECT_THROW(validate(prob, c), ContractViolation);
    c.projection_budget = 10;
    EXPECT_NO_THROW(validate(prob, c));
}

TEST(IsrCvx, DivergenceIsRecorded) {
    auto prob = build_zero_sum(true);
    prob.inner_map.eval = [](const Point&) -> Point { return Point::Constant(2, INFINITY); };
    IsrCvxConfig c;
    c.outer_iters = 3;
    c.inner_step = 1.0;
    const auto res = run_isr_cvx(prob, c);
    EXPECT_TRUE(res.trace.diverged);
}
