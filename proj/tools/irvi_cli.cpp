// Command-line front end: single runs, parameter grids and the acceptance suite.
#include "irvi/acceptance.hpp"
#include "irvi/errors.hpp"
#include "irvi/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>
#include <iostream>

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitAcceptance = 4;

const char* kDescription =
    "Iteratively regularized extragradient solvers for bilevel VIs.\n\n"
    "Experiments: zs_best, zs_worst, e1, e2, e3, custom.\n"
    "Solvers: ireg_mm, ireg_sm, ipr_eg, isr_cvx.\n\n"
    "Suboptimality ||z_{k+1} - z_k|| uses z = the averaged iterate ybar_k for ireg_mm and\n"
    "ireg_sm (set iterate = last to use x_k instead) and z = x_k for ipr_eg and isr_cvx.\n\n"
    "Exit codes: 0 success, 2 usage error, 3 divergence, 4 acceptance failure.";

struct Common {
    std::string experiment;
    std::string solver = "ireg_mm";
    long iters = 0;
    std::string config_file;
    std::string out = "out";
    std::uint64_t seed = 0;
    int jobs = 1;
    bool csv_only = false;
    bool no_wall_clock = false;
    std::vector<std::string> overrides;
    std::vector<std::string> metrics;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--experiment", c.experiment, "Experiment name")->required();
    cmd->add_option("--solver", c.solver, "Solver name");
    cmd->add_option("--iters", c.iters, "Iteration count K (0 uses a projection budget or default)");
    cmd->add_option("--config", c.config_file, "Flat key = value config file");
    cmd->add_option("--set", c.overrides, "key=value override, applied after --config");
    cmd->add_option("--metrics", c.metrics, "Metric columns (default: experiment set)");
    cmd->add_option("--out", c.out, "Output directory");
    cmd->add_option("--seed", c.seed, "Seed for sampled metrics");
    cmd->add_option("--jobs", c.jobs, "Concurrent grid cells")->check(CLI::PositiveNumber);
    cmd->add_flag("--csv-only", c.csv_only, "Skip SVG plots");
    cmd->add_flag("--no-wall-clock", c.no_wall_clock, "Write wall_nanos = 0 for byte-stable CSVs");
}

irvi::ExperimentSpec make_spec(const Common& c) {
    irvi::ExperimentSpec spec;
    spec.experiment = irvi::parse_experiment(c.experiment);
    spec.solver = irvi::parse_solver(c.solver);
    spec.iters = c.iters;
    if (!c.config_file.empty()) spec.solver_config = irvi::load_config_file(c.config_file);
    for (const auto& kv : c.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw irvi::UsageError("--set expects key=value, got '" + kv + "'");
        spec.solver_config[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    spec.metrics = c.metrics;
    spec.seed = c.seed;
    spec.output_dir = c.out;
    spec.csv_only = c.csv_only;
    spec.wall_clock = !c.no_wall_clock;
    irvi::validate(spec);
    return spec;
}

int report(const irvi::ExperimentSummary& s) {
    std::cout << irvi::render_summary(s);
    return s.diverged ? kExitDivergence : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{kDescription, "irvi"};
    app.require_subcommand(1);

    Common run_opts;
    auto* run = app.add_subcommand("run", "Run one experiment and write trace.csv, summary.txt, plots");
    add_common(run, run_opts);

    Common grid_opts;
    std::string grid_file;
    auto* grid = app.add_subcommand(
        "grid", "Run a parameter grid (default: eta0 in {0.1,0.01,0.001} x b in {0.25,0.5,0.75})");
    add_common(grid, grid_opts);
    grid->add_option("--grid", grid_file, "Grid file: key = v1, v2, ...");

    std::vector<int> only;
    auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
    verify->add_option("--only", only, "Restrict to these criterion ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*run) return report(irvi::run_experiment(make_spec(run_opts)));

        if (*grid) {
            const auto base = make_spec(grid_opts);
            irvi::GridSpec g = irvi::default_grid();
            if (!grid_file.empty()) {
                std::ifstream in(grid_file);
                if (!in) throw irvi::UsageError("cannot read grid file " + grid_file);
                std::stringstream buf;
                buf << in.rdbuf();
                g = irvi::parse_grid(buf.str());
            }
            const auto cells = irvi::expand_grid(base, g);
            const auto summaries = irvi::run_grid(cells, grid_opts.jobs);
            int code = 0;
            for (std::size_t i = 0; i < summaries.size(); ++i) {
                std::cout << "== " << cells[i].name << "\n";
                if (report(summaries[i]) != 0) code = kExitDivergence;
            }
            return code;
        }

        if (*verify) {
            irvi::AcceptanceOptions opts;
            opts.only = only;
            opts.on_result = [](const irvi::CriterionResult& r) {
                std::cout << irvi::format_result_line(r) << std::endl;
            };
            const auto results = irvi::run_acceptance(opts);
            for (const auto& r : results)
                if (!r.passed) return kExitAcceptance;
            return 0;
        }
    } catch (const irvi::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const irvi::ContractViolation& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitUsage;
    } catch (const irvi::DivergenceError& e) {
        std::cerr << "diverged: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
