#include "irvi/errors.hpp"
#include "irvi/instances.hpp"
#include "irvi/solver_iregsm.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace irvi;

namespace {

Point p2(double a, double b) { return Point{{a, b}}; }

const double kGamma = 1.0 / (2.0 * std::sqrt(0.02));

double dist_to_segment(const Point& x) {
    const double t = std::clamp(x[0], 11.0, 60.0);
    return std::hypot(x[0] - t, x[1] - 10.0);
}

// Zero-sum inner level with H(x) = x supplied as a mapping (mu_H = L_H = 1).
BilevelVIProblem map_outer_problem() {
    auto prob = build_zero_sum(true);
    VectorMapping H;
    H.dim = 2;
    H.eval = [](const Point& x) -> Point { return x; };
    H.lipschitz_L = 1.0;
    H.strong_monotone_mu = 1.0;
    H.affine = true;
    prob.outer = H;
    return prob;
}

IregSmConfig objective_config(long K, IregSmRegime regime) {
    IregSmConfig c;
    c.gamma = kGamma;
    c.regime = regime;
    c.max_iters = K;
    c.objective_mode = true;
    c.x0 = p2(35.5, 30);
    return c;
}

} // namespace

TEST(IregSm, InitialThetaFromFirstEta) {
    WeightedAverage avg(p2(0, 0), 1.0 / (1.0 - 0.5));
    EXPECT_DOUBLE_EQ(std::exp(avg.log_theta()), 2.0);
}

TEST(IregSm, DiminishingScheduleClosedForm) {
    const auto prob = map_outer_problem();
    IregSmConfig c;
    c.gamma = 1.0;
    c.regime = Diminishing{};
    c.max_iters = 10;
    const auto consts = resolve_constants(prob, c);
    EXPECT_FALSE(consts.objective_mode);
    EXPECT_EQ(consts.mu_H, 1.0);
    EXPECT_DOUBLE_EQ(ireg_sm_eta(c, consts, 0), 0.2);
    const auto trace = run_ireg_sm(prob, c);
    for (const auto& r : trace.records)
        EXPECT_NEAR(std::exp(r.metrics.at("log_theta")), (r.k + 5.0) / 4.0, 1e-12);
    EXPECT_NEAR(std::exp(trace.records[1].metrics.at("log_theta")), 7.0 / 4.0, 1e-12);
}

TEST(IregSm, LogConstantEta) {
    const auto prob = map_outer_problem();
    IregSmConfig c;
    c.gamma = 1.0;
    c.regime = LogConstant{2.0, 151};
    const auto consts = resolve_constants(prob, c);
    EXPECT_NEAR(ireg_sm_eta(c, consts, 0), 3.0 * std::log(151.0) / 151.0, 1e-15);
    EXPECT_NEAR(ireg_sm_eta(c, consts, 99), 0.09968, 1e-5);
}

TEST(IregSm, ObjectiveModeSubstitution) {
    const auto prob = build_zero_sum(true);
    const auto consts = resolve_constants(prob, objective_config(1, Diminishing{}));
    EXPECT_EQ(consts.mu_H, 0.5);
    EXPECT_EQ(consts.L_H, 1.0);
}

TEST(IregSm, SingleStepAverageIsFirstY) {
    const auto trace = run_ireg_sm(build_zero_sum(true), objective_config(1, Diminishing{}));
    ASSERT_EQ(trace.records.size(), 1u);
    EXPECT_EQ(trace.back().ybar, trace.back().y);
    EXPECT_EQ(trace.back().projections, 2);
}

TEST(IregSm, ThresholdRegimeNeedsKnownThreshold) {
    auto prob = build_zero_sum(true);
    prob.sharpness->known_threshold.reset();
    EXPECT_THROW(validate(prob, objective_config(10, ThresholdConstant{0.03})), ContractViolation);
    const auto ok = build_zero_sum(true);
    EXPECT_NO_THROW(validate(ok, objective_config(10, ThresholdConstant{0.03})));
    EXPECT_THROW(validate(ok, objective_config(10, ThresholdConstant{0.05})), ContractViolation);
}

TEST(IregSm, RejectsMerelyMonotoneOuterMap) {
    auto prob = map_outer_problem();
    auto H = std::get<VectorMapping>(prob.outer);
    H.strong_monotone_mu = 0.0;
    prob.outer = H;
    IregSmConfig c;
    c.gamma = 1.0;
    EXPECT_THROW(validate(prob, c), ContractViolation);
}

TEST(IregSm, WeightedAverageMatchesDirectSum) {
    std::mt19937_64 rng(50);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int K = 1 + static_cast<int>(U(rng) * 100) % 100;
        const double gm = 0.05 + 0.9 * U(rng);  // gamma * mu_H
        std::vector<double> eta(K + 1);
        for (auto& e : eta) e = (0.01 + 0.89 * U(rng)) / gm;
        std::vector<Point> ys(K);
        for (auto& y : ys) y = Point::Random(3) * 50.0;

        WeightedAverage avg(Point::Zero(3), 1.0 / (1.0 - gm * eta[0]));
        for (int k = 0; k < K; ++k) {
            avg.add(ys[k], eta[k]);
            avg.advance(1.0 - gm * eta[k + 1]);
        }
        std::vector<double> w(K);
        double prod = 1.0, total = 0.0;
        for (int k = 0; k < K; ++k) {
            prod *= 1.0 - gm * eta[k];
            w[k] = eta[k] / prod;
            total += w[k];
        }
        Point direct = Point::Zero(3);
        double lam_sum = 0.0;
        for (int k = 0; k < K; ++k) {
            EXPECT_GT(w[k], 0.0);
            lam_sum += w[k] / total;
            direct += (w[k] / total) * ys[k];
        }
        EXPECT_LE((avg.ybar() - direct).norm(), 1e-10 * direct.norm());
        EXPECT_NEAR(lam_sum, 1.0, 1e-12);
    }
}

TEST(IregSm, WeightRescaleSurvivesThetaOverflow) {
    // decay 0.5 doubles theta each step, so raw theta would overflow after ~1024 steps.
    WeightedAverage avg(Point::Zero(1), 2.0);
    const int K = 3000;
    for (int k = 0; k < K; ++k) {
        avg.add(Point::Constant(1, static_cast<double>(k)), 1.0);
        avg.advance(0.5);
        ASSERT_TRUE(std::isfinite(avg.ybar()[0]));
    }
    EXPECT_NEAR(avg.log_theta(), (K + 1) * std::log(2.0), 1e-9 * K);
    // With weights 2^(k+1), the mean is dominated by the last terms: K-1 - sum_{j>=1} j 2^-j = K-2.
    EXPECT_NEAR(avg.ybar()[0], K - 2.0, 1e-9 * K);
    // log Gamma = log(sum_{k<K} 2^(k+1)) = log(2^(K+1) - 2).
    EXPECT_NEAR(avg.log_Gamma(), (K + 1) * std::log(2.0), 1e-9 * K);
}

TEST(IregSm, ThresholdRunLongEnoughToRescale) {
    const auto prob = build_zero_sum(true);
    const auto trace = run_ireg_sm(prob, objective_config(20000, ThresholdConstant{0.03}));
    EXPECT_FALSE(trace.diverged);
    EXPECT_GT(trace.back().metrics.at("log_theta"), std::log(1e300));
    EXPECT_TRUE(all_finite(trace.solution));
    EXPECT_LE(dist_to_segment(trace.solution), 1e-10);
}

TEST(IregSm, DiminishingObjectiveBoundAndTerminalDistance) {
    const auto prob = build_zero_sum(true);
    const auto c = objective_config(10000, Diminishing{});
    const Point xs = p2(11, 10);
    const double C = (5.0 - 0.5) * (*c.x0 - xs).squaredNorm() / 2.0;
    long violations = 0;
    double max_cond = 0.0;
    RunOptions opts;
    opts.on_iteration = [&](IterateRecord& r) {
        if (0.5 * r.ybar.squaredNorm() - 0.5 * xs.squaredNorm() > C / r.k) ++violations;
        max_cond = std::max(max_cond, r.metrics.at("step_condition"));
    };
    const auto trace = run_ireg_sm(prob, c, opts);
    EXPECT_EQ(violations, 0);
    EXPECT_LE(max_cond, 0.5);
    EXPECT_LE((trace.solution - xs).squaredNorm(), 1e-2);
}

TEST(IregSm, DiminishingOuterGapBoundInMapMode) {
    const auto prob = map_outer_problem();
    IregSmConfig c;
    c.gamma = kGamma;
    c.regime = Diminishing{};
    c.max_iters = 5000;
    c.x0 = p2(35.5, 30);
    const auto H = prob.outer_map();
    long violations = 0;
    RunOptions opts;
    opts.keep_points = false;
    opts.on_iteration = [&](IterateRecord& r) {
        const double g = outer_gap_exact_segment(H, *prob.known_inner_solution_set, r.ybar);
        if (g > prob.bounds.D_X_sq * (5.0 - 1.0) / r.k) ++violations;
    };
    run_ireg_sm(prob, c, opts);
    EXPECT_EQ(violations, 0);
}

TEST(IregSm, LogConstantTerminalGapBounds) {
    const auto prob = map_outer_problem();
    const long K = 20000;
    IregSmConfig c;
    c.gamma = kGamma;
    c.regime = LogConstant{1.0, K};
    c.max_iters = K;
    c.x0 = p2(35.5, 30);
    const auto trace = run_ireg_sm(prob, c);
    const double D2 = prob.bounds.D_X_sq;
    const double Kd = static_cast<double>(K);
    const double outer = outer_gap_exact_segment(prob.outer_map(), *prob.known_inner_solution_set,
                                                 trace.solution);
    EXPECT_LE(outer, (D2 / 2.0) / (std::log(Kd) * Kd));
    const auto samples = sample_uniform(prob.inner_set, 500, 51);
    const double inner = gap_lower_estimate(prob.inner_map, samples, trace.solution);
    const double CH = *prob.bounds.C_H;
    EXPECT_LE(inner, (D2 / c.gamma) / (Kd * Kd) +
                         (2.0 * std::sqrt(2.0) * CH * std::sqrt(D2) / c.gamma) * std::log(Kd) / Kd);
}

TEST(IregSm, ThresholdDistanceEnvelopeAndSlope) {
    const auto prob = build_zero_sum(true);
    const auto c = objective_config(2000, ThresholdConstant{0.03});
    const double rho = 1.0 - 0.5 * c.gamma * 0.03;
    const double C = (*c.x0 - p2(11, 10)).squaredNorm() / (c.gamma * 1.1);
    long violations = 0;
    std::vector<double> ks, logs;
    RunOptions opts;
    opts.on_iteration = [&](IterateRecord& r) {
        const double d = dist_to_segment(r.ybar);
        if (d > C * std::pow(rho, r.k) + kMembershipTol) ++violations;
        if (r.k >= 100 && r.k <= 300) {
            ks.push_back(r.k);
            logs.push_back(std::log(d));
        }
    };
    run_ireg_sm(prob, c, opts);
    EXPECT_EQ(violations, 0);
    const double n = static_cast<double>(ks.size());
    double sk = 0, sl = 0, skk = 0, skl = 0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        sk += ks[i], sl += logs[i], skk += ks[i] * ks[i], skl += ks[i] * logs[i];
    }
    const double slope = (n * skl - sk * sl) / (n * skk - sk * sk);
    EXPECT_NEAR(slope, std::log(rho), 0.1 * std::abs(std::log(rho)));
}
