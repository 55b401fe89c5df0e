#include "irvi/acceptance.hpp"

#include "irvi/baseline_isr.hpp"
#include "irvi/csv.hpp"
#include "irvi/harness.hpp"
#include "irvi/instances.hpp"
#include "irvi/solver_ipreg.hpp"
#include "irvi/solver_iregmm.hpp"
#include "irvi/solver_iregsm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace irvi {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v) { return format_double(v); }

// Closed-form distance to {(t, 10) : 11 <= t <= 60}, independent of the set classes.
double dist_to_ne_segment(const Point& x) {
    const double t = std::clamp(x[0], 11.0, 60.0);
    return std::hypot(x[0] - t, x[1] - 10.0);
}

Point box_center() { return Point{{35.5, 30.0}}; }
double zero_sum_gamma() { return 1.0 / (2.0 * std::sqrt(0.1 * 0.1 + 0.1 * 0.1)); }
constexpr double kDxSq = 0.5 * (49.0 * 49.0 + 40.0 * 40.0);  // 2000.5
const double kCH = std::hypot(60.0, 50.0);
constexpr double kAlpha = 1.1;

// ---- 1 and 2: IR-EG_mm on the best equilibrium ----

void criteria_1_2(std::vector<CriterionResult>& out) {
    const auto t0 = Clock::now();
    const auto prob = build_zero_sum(true);
    IregMmConfig c;
    c.gamma = zero_sum_gamma();
    c.eta0 = 0.01;
    c.b = 0.5;
    c.max_iters = 100000;
    c.x0 = box_center();

    const auto& seg = *prob.known_inner_solution_set;
    const auto H = prob.outer_map();
    const SampledGapEstimator gap(prob.inner_map, sample_uniform(prob.inner_set, 500, 11));
    const double D = std::sqrt(kDxSq);

    long gap_violations = 0, inner_violations = 0, checked = 0;
    double worst_gap_ratio = 0.0, worst_inner_ratio = 0.0;
    double min_inner = std::numeric_limits<double>::infinity();
    RunOptions opts;
    opts.keep_points = false;
    opts.on_iteration = [&](IterateRecord& r) {
        const double K = static_cast<double>(r.k);
        // ybar is feasible and part of the sample, so its own term contributes 0.
        const double inner = std::max(gap(r.ybar), 0.0);
        const double inner_bound =
            (kDxSq / c.gamma) / K + (std::sqrt(2.0) * c.eta0 * kCH * D / (1.0 - c.b)) / std::sqrt(K);
        min_inner = std::min(min_inner, inner);
        worst_inner_ratio = std::max(worst_inner_ratio, inner / inner_bound);
        if (inner < -1e-9 || inner > inner_bound) ++inner_violations;
        if (r.k >= 4) {
            const double g = outer_gap_exact_segment(H, seg, r.ybar);
            const double bound = (kDxSq / (c.gamma * c.eta0)) / std::sqrt(K);
            worst_gap_ratio = std::max(worst_gap_ratio, g / bound);
            if (g > bound) ++gap_violations;
            ++checked;
        }
    };
    const auto trace = run_ireg_mm(prob, c, opts);
    const double secs = seconds_since(t0);

    CriterionResult r1{1, "IR-EG_mm outer gap <= D_X^2/(gamma eta0) / sqrt(K), best NE, K = 1e5", false, "", 0.0};
    r1.passed = !trace.diverged && gap_violations == 0 && checked == 99997 && secs < 5.0;
    r1.detail = "violations=" + std::to_string(gap_violations) + "/" + std::to_string(checked) +
                " worst gap/bound=" + num(worst_gap_ratio) + " final dist=" +
                num(dist_to_ne_segment(trace.solution)) + " runtime=" + num(secs) + "s (< 5s)";
    r1.seconds = secs;
    out.push_back(r1);

    CriterionResult r2{2, "IR-EG_mm sampled inner gap in [-1e-9, rate bound] at every K", false, "", 0.0};
    r2.passed = !trace.diverged && inner_violations == 0 && trace.records.size() == 100000;
    r2.detail = "violations=" + std::to_string(inner_violations) + " min=" + num(min_inner) +
                " worst gap/bound=" + num(worst_inner_ratio) + " samples=500";
    r2.seconds = 0.0;
    out.push_back(r2);
}

// ---- 3: IR-EG_sm diminishing, objective mode ----

CriterionResult criterion_3() {
    const auto t0 = Clock::now();
    const auto prob = build_zero_sum(true);
    IregSmConfig c;
    c.gamma = zero_sum_gamma();
    c.regime = Diminishing{};
    c.max_iters = 10000;
    c.objective_mode = true;
    c.x0 = box_center();
    const Point xs{{11.0, 10.0}};
    const double L = 1.0, mu = 1.0;
    const double C = (5.0 * L - 0.5 * mu) * (*c.x0 - xs).squaredNorm() / 2.0;
    const double f_star = 0.5 * xs.squaredNorm();

    long violations = 0;
    double worst = 0.0;
    RunOptions opts;
    opts.keep_points = false;
    opts.on_iteration = [&](IterateRecord& r) {
        const double gap = 0.5 * r.ybar.squaredNorm() - f_star;
        const double bound = C / static_cast<double>(r.k);
        worst = std::max(worst, gap / bound);
        if (gap > bound) ++violations;
    };
    const auto trace = run_ireg_sm(prob, c, opts);
    const double secs = seconds_since(t0);
    const double final_dist = (trace.solution - xs).norm();

    CriterionResult r{3, "IR-EG_sm diminishing: f(ybar)-f* <= (5L-0.5mu)||x0-x*||^2/(2K), K = 1e4", false, "", 0.0};
    r.passed = !trace.diverged && violations == 0 && final_dist <= 0.1 && secs < 2.0 &&
               trace.records.size() == 10000;
    r.detail = "violations=" + std::to_string(violations) + " worst ratio=" + num(worst) +
               " ||ybar_K-(11,10)||=" + num(final_dist) + " (<= 0.1) runtime=" + num(secs) +
               "s (< 2s)";
    r.seconds = secs;
    return r;
}

// ---- 4: threshold-constant linear rate ----

CriterionResult criterion_4() {
    const auto t0 = Clock::now();
    const auto prob = build_zero_sum(true);
    IregSmConfig c;
    c.gamma = zero_sum_gamma();
    c.regime = ThresholdConstant{0.03};
    c.max_iters = 2000;
    c.objective_mode = true;
    c.x0 = box_center();
    const Point xs{{11.0, 10.0}};
    const double mu = 1.0, eta = 0.03;
    const double rho = 1.0 - 0.5 * c.gamma * eta * mu;
    const double C = (*c.x0 - xs).squaredNorm() / (c.gamma * kAlpha);
    // Distances below this are at the resolution of double coordinates near (11, 10)
    // after averaging; it is the library-wide membership tolerance.
    const double floor = kMembershipTol;

    long violations = 0, strict_violations = 0;
    long last_above_floor = 0;
    double worst = 0.0;
    IterateTrace fit;
    RunOptions opts;
    opts.keep_points = false;
    opts.on_iteration = [&](IterateRecord& r) {
        const double d = dist_to_ne_segment(r.ybar);
        const double env = C * std::pow(rho, static_cast<double>(r.k));
        if (d > env) ++strict_violations;
        if (d > env + floor) ++violations;
        if (d > env) worst = std::max(worst, d - env);
        if (d > floor) last_above_floor = r.k;
        IterateRecord f;
        f.k = r.k;
        f.metrics["dist"] = d;
        fit.records.push_back(std::move(f));
    };
    const auto trace = run_ireg_sm(prob, c, opts);
    const double secs = seconds_since(t0);

    const long hi = std::min<long>(2000, last_above_floor);
    double slope = std::numeric_limits<double>::quiet_NaN();
    bool slope_ok = false;
    if (hi >= 200) {
        slope = fit_rate_slope(fit, "dist", 100, hi, RateAxis::LinearK);
        slope_ok = std::abs(slope - std::log(rho)) <= 0.1 * std::abs(std::log(rho));
    }

    CriterionResult r{4, "IR-EG_sm eta = 0.03: dist <= (||x0-x*||^2/(gamma alpha)) rho^K, slope ~ ln rho", false, "", 0.0};
    r.passed = !trace.diverged && violations == 0 && slope_ok && secs < 1.0;
    r.detail = "violations=" + std::to_string(violations) + " (beyond 1e-10 tol; strict=" +
               std::to_string(strict_violations) + ", max excess=" + num(worst) + ") slope=" +
               num(slope) + " vs ln rho=" + num(std::log(rho)) + " over k in [100," +
               std::to_string(hi) + "] final dist=" + num(dist_to_ne_segment(trace.solution)) +
               " runtime=" + num(secs) + "s (< 1s)";
    r.seconds = secs;
    return r;
}

// ---- 5 and 6: IPR-EG on the worst equilibrium ----

void criteria_5_6(std::vector<CriterionResult>& out) {
    const auto t0 = Clock::now();
    const auto prob = build_zero_sum(false);
    IprEgConfig c;
    c.outer_iters = 60;
    c.gamma_inner = zero_sum_gamma();
    c.mode = Adaptive{1.0};
    c.x0 = box_center();
    const double gh = 1.0 / std::sqrt(60.0);
    const double D = std::sqrt(kDxSq);
    const double Cf = kCH;
    const double A = (25.0 * kDxSq + 17.0 * Cf * D * gh) / (kAlpha * c.gamma_inner);

    RunOptions opts;
    opts.keep_points = true;
    const auto res = run_ipr_eg(prob, c, opts);
    const double secs = seconds_since(t0);
    const auto& recs = res.trace.records;

    long env_viol = 0;
    double worst_env = 0.0;
    for (const auto& r : recs) {
        if (r.k < 1) continue;
        const double k = static_cast<double>(r.k);
        const double env = A * std::log(std::max(std::pow(k, 1.5), 151.0)) / std::pow(k, 1.5);
        const double d = dist_to_ne_segment(r.x);
        worst_env = std::max(worst_env, d / env);
        if (d > env) ++env_viol;
    }
    const double terminal = (res.trace.solution - Point{{60.0, 10.0}}).norm();

    CriterionResult r5{5, "IPR-EG adaptive M = 1: dist(xhat_k) below the infeasibility envelope, K = 60", false, "", 0.0};
    r5.passed = !res.trace.diverged && recs.size() == 61 && env_viol == 0 && terminal <= 0.5 &&
                secs < 60.0;
    r5.detail = "violations=" + std::to_string(env_viol) + " worst dist/envelope=" +
                num(worst_env) + " ||xhat_K-(60,10)||=" + num(terminal) +
                " (<= 0.5) projections=" + std::to_string(recs.back().projections) +
                " runtime=" + num(secs) + "s (< 60s)";
    r5.seconds = secs;
    out.push_back(r5);

    // Residual inequality with both sides recomputed from the stored iterates and the
    // closed-form segment projection.
    long lemma_viol = 0;
    double worst_ratio = 0.0;
    auto proj_seg = [](const Point& u) { return Point{{std::clamp(u[0], 11.0, 60.0), 10.0}}; };
    for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
        const Point& x = recs[i].x;
        const Point& xn = recs[i + 1].x;
        const Point z = x + gh * x;  // grad f = -x
        const Point G = (x - proj_seg(z)) / gh;
        const double lhs = 0.5 * gh * gh * G.squaredNorm();
        const double rhs = (xn - x).squaredNorm() + (xn - proj_seg(z)).squaredNorm();
        if (rhs > 0.0) worst_ratio = std::max(worst_ratio, lhs / rhs);
        if (lhs > rhs + 1e-10 * std::max(lhs, rhs)) ++lemma_viol;
    }
    CriterionResult r6{6, "(gh^2/2)||G(xhat_k)||^2 <= ||xhat_{k+1}-xhat_k||^2 + ||delta_k||^2 at every k", false, "", 0.0};
    r6.passed = !res.trace.diverged && lemma_viol == 0 && recs.size() == 61;
    r6.detail = "violations=" + std::to_string(lemma_viol) + "/" +
                std::to_string(recs.size() - 1) + " worst lhs/rhs=" + num(worst_ratio);
    out.push_back(r6);
}

// ---- 7: weighted averaging identity ----

CriterionResult criterion_7() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst_rel = 0.0, worst_sum = 0.0;
    int failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int K = 1 + static_cast<int>(U(rng) * 100.0) % 100;
        const double gamma = 0.1 + 1.9 * U(rng);
        const double mu = 0.05 + 0.95 * U(rng);
        std::vector<double> eta(static_cast<std::size_t>(K) + 1);
        for (auto& e : eta) e = (0.01 + 0.89 * U(rng)) / (gamma * mu);
        std::vector<Point> ys;
        for (int k = 0; k < K; ++k) {
            Point y(3);
            for (int i = 0; i < 3; ++i) y[i] = 100.0 * (U(rng) - 0.5);
            ys.push_back(y);
        }

        WeightedAverage avg(Point::Zero(3), 1.0 / (1.0 - gamma * eta[0] * mu));
        for (int k = 0; k < K; ++k) {
            avg.add(ys[static_cast<std::size_t>(k)], eta[static_cast<std::size_t>(k)]);
            avg.advance(1.0 - gamma * eta[static_cast<std::size_t>(k) + 1] * mu);
        }

        // Direct: theta_k = 1 / prod_{t<=k} (1 - gamma eta_t mu), lambda_k ~ eta_k theta_k.
        std::vector<double> w(static_cast<std::size_t>(K));
        double prod = 1.0, total = 0.0;
        for (int k = 0; k < K; ++k) {
            prod *= 1.0 - gamma * eta[static_cast<std::size_t>(k)] * mu;
            w[static_cast<std::size_t>(k)] = eta[static_cast<std::size_t>(k)] / prod;
            total += w[static_cast<std::size_t>(k)];
        }
        Point direct = Point::Zero(3);
        double lam_sum = 0.0;
        for (int k = 0; k < K; ++k) {
            const double lam = w[static_cast<std::size_t>(k)] / total;
            lam_sum += lam;
            direct += lam * ys[static_cast<std::size_t>(k)];
        }
        const double rel = (avg.ybar() - direct).norm() / std::max(direct.norm(), 1e-300);
        worst_rel = std::max(worst_rel, rel);
        worst_sum = std::max(worst_sum, std::abs(lam_sum - 1.0));
        if (rel > 1e-10 || std::abs(lam_sum - 1.0) > 1e-12) ++failures;
    }
    CriterionResult r{7, "Weighted average equals direct lambda-weighted sum (100 schedules, K <= 100)", false, "", 0.0};
    r.passed = failures == 0;
    r.detail = "failures=" + std::to_string(failures) + " worst rel err=" + num(worst_rel) +
               " worst |sum lambda - 1|=" + num(worst_sum);
    r.seconds = seconds_since(t0);
    return r;
}

// ---- 8: box projection vs grid search ----

CriterionResult criterion_8() {
    const auto t0 = Clock::now();
    const auto box = ProjectableSet::box(Point::Zero(2), Point::Ones(2));
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(-1.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Point u{{U(rng), U(rng)}};
        const Point p = project(box, u);
        double best = std::numeric_limits<double>::infinity();
        Point arg(2);
        for (int a = 0; a <= 1000; ++a)
            for (int b = 0; b <= 1000; ++b) {
                const double y0 = a * 1e-3, y1 = b * 1e-3;
                const double d = (u[0] - y0) * (u[0] - y0) + (u[1] - y1) * (u[1] - y1);
                if (d < best) {
                    best = d;
                    arg = Point{{y0, y1}};
                }
            }
        worst = std::max(worst, (p - arg).norm());
    }
    CriterionResult r{8, "Box projection matches 1e-3 grid search on [0,1]^2 (100 points)", false, "", 0.0};
    r.passed = worst <= 2e-3;
    r.detail = "max ||project - grid argmin||=" + num(worst) + " (<= 2e-3)";
    r.seconds = seconds_since(t0);
    return r;
}

// ---- 9: monotonicity and convexity suites ----

CriterionResult criterion_9() {
    const auto t0 = Clock::now();
    std::ostringstream detail;
    bool ok = true;

    const auto zs = build_zero_sum(true);
    const auto zx = sample_uniform(zs.inner_set, 10000, 91);
    const auto zy = sample_uniform(zs.inner_set, 10000, 92);
    double zmax = 0.0;
    for (std::size_t i = 0; i < zx.size(); ++i)
        zmax = std::max(zmax, std::abs((zs.inner_map(zx[i]) - zs.inner_map(zy[i])).dot(zx[i] - zy[i])));
    ok &= zmax <= 1e-12;
    detail << "zero-sum max|w|=" << num(zmax);

    const auto cube = ProjectableSet::box(Point::Zero(kTrafficDim), Point::Constant(kTrafficDim, 10.0));
    for (double n : {1.0, 1.2}) {
        const auto [prob, inst] = build_traffic(n);
        const double w = monotonicity_witness(prob.inner_map, cube, 1000, 93);
        const double q = curvature_witness(prob.objective(), cube, 1000, 94);
        ok &= w >= -1e-8 && q >= -1e-8;
        detail << "; traffic n=" << num(n) << " witness=" << num(w) << " curvature=" << num(q);
    }

    const auto sel = build_selection(random_qp_selection(4, 3, 95));
    const auto sel_box = ProjectableSet::product(
        {ProjectableSet::box(Point::Constant(4, -1.0), Point::Constant(4, 1.0)),
         ProjectableSet::box(Point::Zero(3), Point::Constant(3, 10.0))});
    const double sw = monotonicity_witness(sel.inner_map, sel_box, 1000, 96);
    ok &= sw >= -1e-9;
    detail << "; selection QP witness=" << num(sw);

    const double secs = seconds_since(t0);
    ok &= secs < 30.0;
    detail << "; runtime=" << num(secs) << "s (< 30s)";
    CriterionResult r{9, "Monotonicity / convexity witnesses (zero-sum, traffic n=1,1.2, selection)", false, "", 0.0};
    r.passed = ok;
    r.detail = detail.str();
    r.seconds = secs;
    return r;
}

// ---- 10: E1 budget-matched ordering ----

CriterionResult criterion_10() {
    const auto t0 = Clock::now();
    const auto [prob, inst] = build_traffic(1.0);
    const std::int64_t budget = 100000;

    IregMmConfig mm;
    mm.eta0 = 0.01;
    mm.b = 0.5;
    const double LF = *prob.inner_map.lipschitz_L;
    const double LH = prob.objective().smoothness_L;
    mm.gamma = 1.0 / (2.0 * std::sqrt(LF * LF + mm.eta0 * mm.eta0 * LH * LH));
    mm.max_iters = budget / 2;
    mm.x0 = Point::Zero(kTrafficDim);
    Point last_x;
    RunOptions opts;
    opts.keep_points = false;
    opts.on_iteration = [&](IterateRecord& r) { last_x = r.x; };
    const auto t_mm = run_ireg_mm(prob, mm, opts);
    opts.on_iteration = nullptr;

    IsrCvxConfig isr;
    isr.eta0 = 0.01;
    isr.b_tilde = 0.5;
    isr.alpha_tilde = 0.1;
    isr.projection_budget = budget;
    isr.x0 = Point::Zero(kTrafficDim);
    const auto t_isr = run_isr_cvx(prob, isr, opts).trace;
    const double secs = seconds_since(t0);

    const double phi_avg = infeasibility_phi(prob.inner_map, t_mm.solution);
    const double phi_last = infeasibility_phi(prob.inner_map, last_x);
    const double phi_isr = infeasibility_phi(prob.inner_map, t_isr.solution);

    CriterionResult r{10, "E1 (n_a = 1, 1e5 projections): phi(ireg_mm output) <= phi(isr_cvx)", false, "", 0.0};
    r.passed = !t_mm.diverged && !t_isr.diverged && phi_avg <= phi_isr && secs < 120.0;
    r.detail = "phi(ybar_K)=" + num(phi_avg) + " phi(ISR-cvx)=" + num(phi_isr) +
               " [last iterate phi(x_K)=" + num(phi_last) + "] projections " +
               std::to_string(t_mm.back().projections) + " vs " +
               std::to_string(t_isr.back().projections) + " runtime=" + num(secs) + "s (< 120s)";
    r.seconds = secs;
    return r;
}

// ---- 11: determinism ----

CriterionResult criterion_11() {
    const auto t0 = Clock::now();
    struct Case {
        Experiment e;
        SolverKind s;
        long iters;
        ConfigMap cfg;
    };
    const std::vector<Case> cases = {
        {Experiment::ZsBest, SolverKind::IregMm, 100000, {{"eta0", "0.01"}, {"b", "0.5"}, {"gap_samples", "500"}}},
        {Experiment::ZsBest, SolverKind::IregSm, 10000, {{"regime", "diminishing"}}},
        {Experiment::ZsBest, SolverKind::IregSm, 2000, {{"regime", "threshold"}, {"eta", "0.03"}}},
        {Experiment::ZsWorst, SolverKind::IprEg, 60, {{"mode", "adaptive"}, {"M", "1"}}},
        {Experiment::E1, SolverKind::IregMm, 0, {{"budget", "100000"}}},
        {Experiment::E1, SolverKind::IsrCvx, 0, {{"budget", "100000"}, {"alpha_tilde", "0.1"}}},
    };
    int mismatches = 0, timed_mismatches = 0;
    std::ostringstream detail;
    for (const auto& cs : cases) {
        ExperimentSpec spec;
        spec.experiment = cs.e;
        spec.solver = cs.s;
        spec.iters = cs.iters;
        spec.solver_config = cs.cfg;
        spec.seed = 2024;
        spec.wall_clock = false;
        auto render = [](const ExperimentSpec& sp, bool drop_wall) {
            auto run = execute_experiment(sp);
            if (drop_wall)
                for (auto& r : run.trace.records) r.wall_nanos = 0;
            std::ostringstream o;
            write_trace_csv(o, run.trace, run.columns);
            return o.str();
        };
        const std::string a = render(spec, false);
        const std::string b = render(spec, false);
        if (a != b) ++mismatches;
        // With the wall clock on, everything but wall_nanos must still agree.
        ExperimentSpec timed = spec;
        timed.wall_clock = true;
        if (render(timed, true) != a) ++timed_mismatches;
        detail << to_string(cs.e) << "/" << to_string(cs.s) << " " << a.size() << "B; ";
    }
    CriterionResult r{11, "Same seed reruns give byte-identical trace CSVs", false, "", 0.0};
    r.passed = mismatches == 0 && timed_mismatches == 0;
    r.detail = "mismatches=" + std::to_string(mismatches) + " (timed runs, wall_nanos excluded: " +
               std::to_string(timed_mismatches) + ") " + detail.str();
    r.seconds = seconds_since(t0);
    return r;
}

bool wanted(const AcceptanceOptions& o, int id) {
    return o.only.empty() || std::find(o.only.begin(), o.only.end(), id) != o.only.end();
}

} // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
    std::vector<CriterionResult> out;
    auto emit = [&](std::size_t from) {
        if (opts.on_result)
            for (std::size_t i = from; i < out.size(); ++i) opts.on_result(out[i]);
    };
    auto guarded = [&](int id, const std::string& title, auto&& fn) {
        const std::size_t from = out.size();
        try {
            fn();
        } catch (const std::exception& e) {
            out.push_back({id, title, false, std::string("exception: ") + e.what(), 0.0});
        }
        emit(from);
    };
    if (wanted(opts, 1) || wanted(opts, 2))
        guarded(1, "IR-EG_mm bounds", [&] {
            std::vector<CriterionResult> r;
            criteria_1_2(r);
            for (auto& x : r)
                if (wanted(opts, x.id)) out.push_back(x);
        });
    if (wanted(opts, 3)) guarded(3, "IR-EG_sm diminishing", [&] { out.push_back(criterion_3()); });
    if (wanted(opts, 4)) guarded(4, "IR-EG_sm threshold", [&] { out.push_back(criterion_4()); });
    if (wanted(opts, 5) || wanted(opts, 6))
        guarded(5, "IPR-EG", [&] {
            std::vector<CriterionResult> r;
            criteria_5_6(r);
            for (auto& x : r)
                if (wanted(opts, x.id)) out.push_back(x);
        });
    if (wanted(opts, 7)) guarded(7, "weighted average", [&] { out.push_back(criterion_7()); });
    if (wanted(opts, 8)) guarded(8, "projection", [&] { out.push_back(criterion_8()); });
    if (wanted(opts, 9)) guarded(9, "monotonicity", [&] { out.push_back(criterion_9()); });
    if (wanted(opts, 10)) guarded(10, "E1 ordering", [&] { out.push_back(criterion_10()); });
    if (wanted(opts, 11)) guarded(11, "determinism", [&] { out.push_back(criterion_11()); });
    return out;
}

std::string format_result_line(const CriterionResult& r) {
    return std::string(r.passed ? "PASS" : "FAIL") + " criterion " + std::to_string(r.id) + ": " +
           r.title + " | " + r.detail;
}

} // namespace irvi
