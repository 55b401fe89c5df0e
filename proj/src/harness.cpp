#include "irvi/harness.hpp"

#include "irvi/baseline_isr.hpp"
#include "irvi/csv.hpp"
#include "irvi/errors.hpp"
#include "irvi/instances.hpp"
#include "irvi/solver_ipreg.hpp"
#include "irvi/solver_iregmm.hpp"
#include "irvi/solver_iregsm.hpp"
#include "irvi/svg_plot.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace irvi {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    auto res = std::from_chars(v.data(), end, out);
    if (res.ec != std::errc() || res.ptr != end)
        throw UsageError("'" + key + "' expects a number, got '" + v + "'");
    return out;
}

long parse_long(const std::string& key, const std::string& v) {
    long out = 0;
    const auto* end = v.data() + v.size();
    auto res = std::from_chars(v.data(), end, out);
    if (res.ec != std::errc() || res.ptr != end) {
        // Accept integral scientific notation such as 1e5.
        const double d = parse_double(key, v);
        if (d != std::floor(d) || std::abs(d) > 9e15)
            throw UsageError("'" + key + "' expects an integer, got '" + v + "'");
        return static_cast<long>(d);
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw UsageError("'" + key + "' expects true or false, got '" + v + "'");
}

Point parse_point(const std::string& key, const std::string& v) {
    std::vector<double> vals;
    std::string tok;
    std::istringstream in(v);
    while (std::getline(in, tok, ',')) {
        std::istringstream ws(tok);
        std::string piece;
        while (ws >> piece) vals.push_back(parse_double(key, piece));
    }
    if (vals.empty()) throw UsageError("'" + key + "' expects a list of numbers");
    return Eigen::Map<Point>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

Matrix parse_matrix(const std::string& key, const std::string& v) {
    std::vector<Point> rows;
    std::string row;
    std::istringstream in(v);
    while (std::getline(in, row, ';')) rows.push_back(parse_point(key, row));
    if (rows.empty()) throw UsageError("'" + key + "' expects rows separated by ';'");
    Matrix M(static_cast<Eigen::Index>(rows.size()), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != M.cols()) throw UsageError("'" + key + "' has ragged rows");
        M.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    }
    return M;
}

class Params {
public:
    explicit Params(const ConfigMap& m) : m_(m) {}
    bool has(const std::string& k) const { return m_.count(k) > 0; }
    const std::string& str(const std::string& k) const { return m_.at(k); }
    std::string str(const std::string& k, const std::string& def) const {
        return has(k) ? m_.at(k) : def;
    }
    double num(const std::string& k, double def) const {
        return has(k) ? parse_double(k, m_.at(k)) : def;
    }
    std::optional<double> opt_num(const std::string& k) const {
        if (!has(k)) return std::nullopt;
        return parse_double(k, m_.at(k));
    }
    long integer(const std::string& k, long def) const {
        return has(k) ? parse_long(k, m_.at(k)) : def;
    }
    bool flag(const std::string& k, bool def) const {
        return has(k) ? parse_bool(k, m_.at(k)) : def;
    }
    std::optional<Point> point(const std::string& k) const {
        if (!has(k)) return std::nullopt;
        return parse_point(k, m_.at(k));
    }

private:
    const ConfigMap& m_;
};

const std::set<std::string>& allowed_keys(SolverKind s) {
    static const std::set<std::string> common = {
        "x0",     "gap_samples", "iterate", "budget", "allow_stepsize_violation",
        "delta_file", "omega_file", "matrix", "offset", "lower", "upper", "objective"};
    static const std::map<SolverKind, std::set<std::string>> extra = {
        {SolverKind::IregMm, {"gamma", "eta0", "b", "constant_eta"}},
        {SolverKind::IregSm, {"gamma", "regime", "p", "log_K", "eta", "eta_0_l", "objective_mode"}},
        {SolverKind::IprEg, {"gamma", "gamma_hat", "mode", "M", "eta", "tau"}},
        {SolverKind::IsrCvx, {"eta0", "b", "b_tilde", "alpha_tilde", "inner_step"}},
    };
    static std::map<SolverKind, std::set<std::string>> merged;
    static std::once_flag once;
    std::call_once(once, [] {
        for (const auto& [k, v] : extra) {
            auto all = common;
            all.insert(v.begin(), v.end());
            merged[k] = std::move(all);
        }
    });
    return merged.at(s);
}

bool is_zero_sum(Experiment e) { return e == Experiment::ZsBest || e == Experiment::ZsWorst; }
bool is_traffic(Experiment e) {
    return e == Experiment::E1 || e == Experiment::E2 || e == Experiment::E3;
}

bool custom_is_worst(const ExperimentSpec& spec) {
    return Params(spec.solver_config).str("objective", "half_norm_sq") == "neg_half_norm_sq";
}

double default_gamma(const ExperimentSpec& spec, const BilevelVIProblem& prob, const Params& p) {
    if (is_zero_sum(spec.experiment)) return 1.0 / (2.0 * zero_sum_instance().A.norm());
    const double LF = prob.inner_map.lipschitz_L.value_or(1.0);
    if (spec.solver == SolverKind::IregMm) {
        const double eta = p.opt_num("constant_eta").value_or(p.num("eta0", 0.01));
        const double LH = prob.outer_map().lipschitz_L.value_or(0.0);
        return 1.0 / (2.0 * std::sqrt(LF * LF + eta * eta * LH * LH));
    }
    return 1.0 / (2.0 * LF);
}

// Metric columns per experiment, excluding solver-specific extras.
std::vector<std::string> default_metrics(Experiment e) {
    if (is_zero_sum(e))
        return {"dist_solution_set", "dist_target", "outer_gap", "objective_gap", "inner_gap"};
    return {"phi", "subopt", "objective", "phi_last", "subopt_last", "objective_last"};
}

std::vector<std::string> solver_metrics(const ExperimentSpec& spec) {
    switch (spec.solver) {
    case SolverKind::IregSm: {
        std::vector<std::string> m{"step_condition"};
        if (Params(spec.solver_config).str("regime", "diminishing") == "threshold")
            m.push_back("envelope");
        return m;
    }
    case SolverKind::IprEg:
        return {"residual_sq", "infeasibility", "delta_norm", "e_norm", "inner_iters"};
    default:
        return {};
    }
}

struct MetricContext {
    const BilevelVIProblem* problem = nullptr;
    Experiment experiment{};
    bool use_average = true;
    std::optional<SampledGapEstimator> gap;
    Point prev_z;
    Point prev_last;
};

IterationCallback make_metric_callback(std::shared_ptr<MetricContext> ctx) {
    return [ctx](IterateRecord& r) {
        const auto& prob = *ctx->problem;
        const Point& z = ctx->use_average ? r.ybar : r.x;
        if (is_zero_sum(ctx->experiment) ||
            (ctx->experiment == Experiment::Custom && prob.known_inner_solution_set)) {
            if (prob.known_inner_solution_set)
                r.metrics["dist_solution_set"] = distance_to(*prob.known_inner_solution_set, z);
            if (prob.known_outer_solution) {
                r.metrics["dist_target"] = (z - *prob.known_outer_solution).norm();
                if (prob.outer_is_objective())
                    r.metrics["objective_gap"] =
                        prob.objective()(z) - prob.objective()(*prob.known_outer_solution);
            }
            const auto H = prob.outer_map();
            if (prob.known_inner_solution_set && H.affine)
                r.metrics["outer_gap"] =
                    outer_gap_exact_segment(H, *prob.known_inner_solution_set, z);
        }
        if (ctx->gap) {
            // z itself belongs to the sample when feasible: F(z)^T (z - z) = 0.
            double g = (*ctx->gap)(z);
            if (contains(prob.inner_set, z)) g = std::max(g, 0.0);
            r.metrics["inner_gap"] = g;
        }
        if (is_traffic(ctx->experiment) || ctx->experiment == Experiment::Custom) {
            r.metrics["phi"] = infeasibility_phi(prob.inner_map, z);
            r.metrics["subopt"] = (z - ctx->prev_z).norm();
            r.metrics["phi_last"] = infeasibility_phi(prob.inner_map, r.x);
            r.metrics["subopt_last"] = (r.x - ctx->prev_last).norm();
            if (prob.outer_is_objective()) {
                r.metrics["objective"] = prob.objective()(z);
                r.metrics["objective_last"] = prob.objective()(r.x);
            }
        }
        ctx->prev_z = z;
        ctx->prev_last = r.x;
    };
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string sanitize(std::string s) {
    for (char& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-' && c != '=')
            c = '_';
    return s;
}

} // namespace

ConfigMap parse_config(std::string_view text) {
    ConfigMap out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(std::string_view(t).substr(0, eq));
        std::string val = trim(std::string_view(t).substr(eq + 1));
        if (key.empty()) throw UsageError("config line " + std::to_string(lineno) + ": empty key");
        out[key] = val;
    }
    return out;
}

ConfigMap load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot open config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

Experiment parse_experiment(std::string_view n) {
    if (n == "zs_best") return Experiment::ZsBest;
    if (n == "zs_worst") return Experiment::ZsWorst;
    if (n == "e1") return Experiment::E1;
    if (n == "e2") return Experiment::E2;
    if (n == "e3") return Experiment::E3;
    if (n == "custom") return Experiment::Custom;
    throw UsageError("unknown experiment '" + std::string(n) + "'");
}

SolverKind parse_solver(std::string_view n) {
    if (n == "ireg_mm") return SolverKind::IregMm;
    if (n == "ireg_sm") return SolverKind::IregSm;
    if (n == "ipr_eg") return SolverKind::IprEg;
    if (n == "isr_cvx") return SolverKind::IsrCvx;
    throw UsageError("unknown solver '" + std::string(n) + "'");
}

std::string to_string(Experiment e) {
    switch (e) {
    case Experiment::ZsBest: return "zs_best";
    case Experiment::ZsWorst: return "zs_worst";
    case Experiment::E1: return "e1";
    case Experiment::E2: return "e2";
    case Experiment::E3: return "e3";
    case Experiment::Custom: return "custom";
    }
    return "?";
}

std::string to_string(SolverKind s) {
    switch (s) {
    case SolverKind::IregMm: return "ireg_mm";
    case SolverKind::IregSm: return "ireg_sm";
    case SolverKind::IprEg: return "ipr_eg";
    case SolverKind::IsrCvx: return "isr_cvx";
    }
    return "?";
}

void validate(const ExperimentSpec& spec) {
    const auto& allowed = allowed_keys(spec.solver);
    for (const auto& [k, v] : spec.solver_config)
        if (!allowed.count(k))
            throw UsageError("key '" + k + "' is not understood by solver " +
                             to_string(spec.solver));

    const Params p(spec.solver_config);
    if (spec.iters < 1 && !p.has("budget")) throw UsageError("--iters must be >= 1");

    const bool worst = spec.experiment == Experiment::ZsWorst || spec.experiment == Experiment::E3 ||
                       (spec.experiment == Experiment::Custom && custom_is_worst(spec));
    if (worst && spec.solver != SolverKind::IprEg)
        throw UsageError("experiment " + to_string(spec.experiment) +
                         " has a nonconvex objective and needs solver ipr_eg");
    if ((spec.experiment == Experiment::E1 || spec.experiment == Experiment::E2) &&
        spec.solver == SolverKind::IregSm)
        throw UsageError("ireg_sm needs a strongly convex objective; the traffic cost is not");
    if (spec.solver == SolverKind::IprEg && p.has("budget"))
        throw UsageError("ipr_eg runs a fixed number of outer steps; use --iters");
    if (spec.experiment == Experiment::Custom)
        for (const char* k : {"matrix", "offset", "lower", "upper"})
            if (!p.has(k)) throw UsageError(std::string("custom experiment needs key '") + k + "'");
    if (p.has("iterate") && p.str("iterate") != "average" && p.str("iterate") != "last")
        throw UsageError("iterate must be 'average' or 'last'");
}

BilevelVIProblem make_problem(const ExperimentSpec& spec) {
    const Params p(spec.solver_config);
    TrafficOptions topt;
    if (p.has("delta_file")) topt.delta_path = p.str("delta_file");
    if (p.has("omega_file")) topt.omega_path = p.str("omega_file");
    switch (spec.experiment) {
    case Experiment::ZsBest: return build_zero_sum(true);
    case Experiment::ZsWorst: return build_zero_sum(false);
    case Experiment::E1: return build_traffic(1.0, topt).first;
    case Experiment::E2: return build_traffic(1.2, topt).first;
    case Experiment::E3:
        topt.worst = true;
        return build_traffic(1.2, topt).first;
    case Experiment::Custom: break;
    }

    const Matrix A = parse_matrix("matrix", p.str("matrix"));
    const Point b = parse_point("offset", p.str("offset"));
    const Point lo = parse_point("lower", p.str("lower"));
    const Point hi = parse_point("upper", p.str("upper"));
    const auto n = A.rows();
    if (A.cols() != n || b.size() != n || lo.size() != n || hi.size() != n)
        throw UsageError("custom: matrix, offset, lower and upper disagree in dimension");
    const double sign = custom_is_worst(spec) ? -1.0 : 1.0;

    VectorMapping F;
    F.dim = n;
    F.eval = [A, b](const Point& x) -> Point { return A * x + b; };
    F.jacobian = [A](const Point&) -> Matrix { return A; };
    F.lipschitz_L = Eigen::JacobiSVD<Matrix>(A).singularValues()[0];
    F.strong_monotone_mu = 0.0;
    F.affine = true;

    SmoothObjective f;
    f.dim = n;
    f.value = [sign](const Point& x) { return sign * 0.5 * x.squaredNorm(); };
    f.gradient = [sign](const Point& x) -> Point { return sign * x; };
    f.smoothness_L = 1.0;
    f.strong_convexity_mu = sign > 0 ? 1.0 : 0.0;
    f.gradient_affine = true;

    auto X = ProjectableSet::box(lo, hi);
    ProblemBounds bounds;
    bounds.D_X_sq = half_diameter_sq(X);
    bounds.C_f = max_norm(X);
    bounds.C_H = max_norm(X);
    BilevelVIProblem prob{X, F, f, std::nullopt, bounds, std::nullopt, std::nullopt};
    prob.validate();
    return prob;
}

std::string config_hash(const ExperimentSpec& spec) {
    std::ostringstream o;
    o << "experiment=" << to_string(spec.experiment) << '\n'
      << "solver=" << to_string(spec.solver) << '\n'
      << "iters=" << spec.iters << '\n'
      << "seed=" << spec.seed << '\n';
    for (const auto& [k, v] : spec.solver_config) o << k << '=' << v << '\n';
    for (const auto& m : spec.metrics) o << "metric=" << m << '\n';
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(o.str())));
    return buf;
}

ExperimentRun execute_experiment(const ExperimentSpec& spec) {
    validate(spec);
    const Params p(spec.solver_config);
    const auto prob = make_problem(spec);
    const Point x0 = p.point("x0").value_or(prob.inner_set.reference_point());
    if (x0.size() != prob.dim()) throw UsageError("x0 has the wrong dimension");
    const bool allow = p.flag("allow_stepsize_violation", false);
    const double gamma = p.num("gamma", default_gamma(spec, prob, p));

    auto ctx = std::make_shared<MetricContext>();
    ctx->problem = &prob;
    ctx->experiment = spec.experiment;
    ctx->use_average = p.str("iterate", "average") == "average";
    ctx->prev_z = x0;
    ctx->prev_last = x0;
    const long gap_samples = p.integer("gap_samples", is_zero_sum(spec.experiment) ? 64 : 0);
    if (gap_samples > 0 && prob.inner_set.bounded())
        ctx->gap.emplace(prob.inner_map,
                         sample_uniform(prob.inner_set, static_cast<int>(gap_samples), spec.seed));

    RunOptions opts;
    opts.on_iteration = make_metric_callback(ctx);
    opts.keep_points = false;
    opts.wall_clock = spec.wall_clock;

    ExperimentRun run;
    const std::optional<long> budget =
        p.has("budget") ? std::optional<long>(p.integer("budget", 0)) : std::nullopt;
    switch (spec.solver) {
    case SolverKind::IregMm: {
        IregMmConfig c;
        c.gamma = gamma;
        c.eta0 = p.num("eta0", 0.01);
        c.b = p.num("b", 0.5);
        c.constant_eta = p.opt_num("constant_eta");
        c.max_iters = budget ? *budget / 2 : spec.iters;
        c.allow_stepsize_violation = allow;
        c.x0 = x0;
        run.trace = run_ireg_mm(prob, c, opts);
        break;
    }
    case SolverKind::IregSm: {
        IregSmConfig c;
        c.gamma = gamma;
        c.max_iters = budget ? *budget / 2 : spec.iters;
        c.allow_stepsize_violation = allow;
        c.x0 = x0;
        if (p.has("objective_mode")) c.objective_mode = p.flag("objective_mode", true);
        const std::string regime = p.str("regime", "diminishing");
        if (regime == "diminishing")
            c.regime = Diminishing{p.opt_num("eta_0_l")};
        else if (regime == "log")
            c.regime = LogConstant{p.num("p", 1.0), p.integer("log_K", c.max_iters)};
        else if (regime == "threshold")
            c.regime = ThresholdConstant{p.num("eta", 0.0)};
        else
            throw UsageError("regime must be diminishing, log or threshold");
        run.trace = run_ireg_sm(prob, c, opts);
        break;
    }
    case SolverKind::IprEg: {
        IprEgConfig c;
        c.outer_iters = spec.iters;
        c.gamma_hat = p.opt_num("gamma_hat");
        c.gamma_inner = gamma;
        c.allow_stepsize_violation = allow;
        c.x0 = x0;
        const std::string mode = p.str("mode", "adaptive");
        if (mode == "adaptive")
            c.mode = Adaptive{p.num("M", 1.0)};
        else if (mode == "known")
            c.mode = KnownThreshold{p.num("eta", 0.0), p.opt_num("tau")};
        else
            throw UsageError("mode must be adaptive or known");
        run.trace = run_ipr_eg(prob, c, opts).trace;
        break;
    }
    case SolverKind::IsrCvx: {
        IsrCvxConfig c;
        c.eta0 = p.num("eta0", 0.01);
        c.b_tilde = p.num("b_tilde", p.num("b", 0.5));
        c.alpha_tilde = p.num("alpha_tilde", 0.1);
        c.inner_step = p.opt_num("inner_step");
        c.outer_iters = spec.iters;
        if (budget) c.projection_budget = *budget;
        c.x0 = x0;
        run.trace = run_isr_cvx(prob, c, opts).trace;
        break;
    }
    }

    run.columns = spec.metrics.empty() ? default_metrics(spec.experiment) : spec.metrics;
    for (const auto& m : solver_metrics(spec))
        if (std::find(run.columns.begin(), run.columns.end(), m) == run.columns.end())
            run.columns.push_back(m);

    auto& s = run.summary;
    s.spec = spec;
    s.config_hash = config_hash(spec);
    s.diverged = run.trace.diverged;
    s.message = run.trace.message;
    s.records = static_cast<long>(run.trace.records.size());
    s.solution = run.trace.solution;
    if (!run.trace.records.empty()) {
        s.projections = run.trace.records.back().projections;
        s.final_metrics = run.trace.records.back().metrics;
    }
    return run;
}

std::string render_summary(const ExperimentSummary& s) {
    std::ostringstream o;
    o << "experiment = " << to_string(s.spec.experiment) << '\n'
      << "solver = " << to_string(s.spec.solver) << '\n'
      << "iters = " << s.spec.iters << '\n'
      << "seed = " << s.spec.seed << '\n'
      << "config_hash = " << s.config_hash << '\n';
    for (const auto& [k, v] : s.spec.solver_config) o << "config." << k << " = " << v << '\n';
    o << "status = " << (s.diverged ? "diverged" : "ok") << '\n';
    if (!s.message.empty()) o << "message = " << s.message << '\n';
    o << "records = " << s.records << '\n' << "projections = " << s.projections << '\n';
    for (const auto& [k, v] : s.final_metrics) o << "final." << k << " = " << format_double(v) << '\n';
    o << "solution = ";
    for (Eigen::Index i = 0; i < s.solution.size(); ++i)
        o << (i ? "," : "") << format_double(s.solution[i]);
    o << '\n';
    return o.str();
}

ExperimentSummary run_experiment(const ExperimentSpec& spec) {
    auto run = execute_experiment(spec);
    namespace fs = std::filesystem;
    fs::create_directories(spec.output_dir);
    const fs::path dir(spec.output_dir);
    write_trace_csv((dir / "trace.csv").string(), run.trace, run.columns);
    {
        std::ofstream f(dir / "summary.txt", std::ios::binary);
        f << render_summary(run.summary);
    }
    if (!spec.csv_only) {
        std::vector<double> ks, proj;
        for (const auto& r : run.trace.records) {
            ks.push_back(static_cast<double>(r.k));
            proj.push_back(static_cast<double>(r.projections));
        }
        const std::string tag = to_string(spec.experiment) + " / " + to_string(spec.solver);
        for (const auto& m : run.columns) {
            if (m == "inner_iters" || m == "step_condition") continue;
            const auto ys = run.trace.metric(m);
            write_log_plot((dir / (m + "_vs_k.svg")).string(), m + " (" + tag + ")", "iteration k",
                           {{m, ks, ys}});
            write_log_plot((dir / (m + "_vs_projections.svg")).string(), m + " (" + tag + ")",
                           "projections", {{m, proj, ys}});
        }
    }
    return run.summary;
}

double fit_rate_slope(const IterateTrace& trace, const std::string& metric, long k_lo, long k_hi,
                      RateAxis axis) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long n = 0;
    for (const auto& r : trace.records) {
        if (r.k < k_lo || r.k > k_hi) continue;
        auto it = r.metrics.find(metric);
        if (it == r.metrics.end()) throw ContractViolation("fit_rate_slope: metric missing");
        if (!(it->second > 0.0))
            throw ContractViolation("fit_rate_slope: non-positive " + metric + " at k = " +
                                    std::to_string(r.k));
        if (axis == RateAxis::LogK && r.k <= 0)
            throw ContractViolation("fit_rate_slope: log axis needs k >= 1");
        const double x = axis == RateAxis::LogK ? std::log(static_cast<double>(r.k))
                                                : static_cast<double>(r.k);
        const double y = std::log(it->second);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) throw ContractViolation("fit_rate_slope: need at least two points in the window");
    const double dn = static_cast<double>(n);
    const double den = sxx - sx * sx / dn;
    if (!(den > 0.0)) throw ContractViolation("fit_rate_slope: degenerate window");
    return (sxy - sx * sy / dn) / den;
}

GridSpec parse_grid(std::string_view text) {
    GridSpec out;
    for (const auto& [k, v] : parse_config(text)) {
        std::vector<std::string> vals;
        std::string tok;
        std::istringstream in(v);
        while (std::getline(in, tok, ',')) {
            auto t = trim(tok);
            if (t.empty()) throw UsageError("grid key '" + k + "' has an empty value");
            vals.push_back(std::move(t));
        }
        if (vals.empty()) throw UsageError("grid key '" + k + "' has no values");
        out[k] = std::move(vals);
    }
    return out;
}

GridSpec default_grid() { return {{"eta0", {"0.1", "0.01", "0.001"}}, {"b", {"0.25", "0.5", "0.75"}}}; }

std::vector<GridCell> expand_grid(const ExperimentSpec& base, const GridSpec& grid) {
    std::vector<GridCell> cells{{"", base}};
    for (const auto& [key, values] : grid) {
        std::vector<GridCell> next;
        for (const auto& c : cells)
            for (const auto& v : values) {
                GridCell g = c;
                if (key == "solver")
                    g.spec.solver = parse_solver(v);
                else if (key == "iters")
                    g.spec.iters = parse_long(key, v);
                else if (key == "seed")
                    g.spec.seed = static_cast<std::uint64_t>(parse_long(key, v));
                else
                    g.spec.solver_config[key] = v;
                g.name += (g.name.empty() ? "" : "_") + key + "=" + v;
                next.push_back(std::move(g));
            }
        cells = std::move(next);
    }
    for (auto& c : cells) {
        c.name = sanitize(c.name.empty() ? "base" : c.name);
        c.spec.output_dir = (std::filesystem::path(base.output_dir) / c.name).string();
    }
    return cells;
}

std::vector<ExperimentSummary> run_grid(const std::vector<GridCell>& cells, int jobs) {
    std::vector<ExperimentSummary> out(cells.size());
    std::vector<std::string> errors(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                out[i] = run_experiment(cells[i].spec);
            } catch (const std::exception& e) {
                errors[i] = cells[i].name + ": " + e.what();
            }
        }
    };
    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (!e.empty()) throw UsageError(e);
    return out;
}

} // namespace irvi
