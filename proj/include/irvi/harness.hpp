#pragma once

#include "irvi/problems.hpp"
#include "irvi/trace.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace irvi {

using ConfigMap = std::map<std::string, std::string>;

// Flat `key = value` lines; `#` starts a comment. Throws UsageError on malformed lines.
ConfigMap parse_config(std::string_view text);
ConfigMap load_config_file(const std::string& path);

enum class Experiment { ZsBest, ZsWorst, E1, E2, E3, Custom };
enum class SolverKind { IregMm, IregSm, IprEg, IsrCvx };

Experiment parse_experiment(std::string_view name);
SolverKind parse_solver(std::string_view name);
std::string to_string(Experiment e);
std::string to_string(SolverKind s);

struct ExperimentSpec {
    Experiment experiment = Experiment::ZsBest;
    SolverKind solver = SolverKind::IregMm;
    long iters = 0;
    ConfigMap solver_config;
    // Empty selects the experiment's default metric set.
    std::vector<std::string> metrics;
    std::uint64_t seed = 0;
    std::string output_dir = "out";
    bool csv_only = false;
    bool wall_clock = true;
};

// Throws UsageError for incompatible experiment/solver pairs or unknown keys.
void validate(const ExperimentSpec& spec);

BilevelVIProblem make_problem(const ExperimentSpec& spec);

// FNV-1a over the canonical key=value rendering of the spec, as 16 hex digits.
std::string config_hash(const ExperimentSpec& spec);

struct ExperimentSummary {
    ExperimentSpec spec;
    std::string config_hash;
    bool diverged = false;
    std::string message;
    long records = 0;
    std::int64_t projections = 0;
    std::map<std::string, double> final_metrics;
    Point solution;
};

struct ExperimentRun {
    ExperimentSummary summary;
    IterateTrace trace;
    std::vector<std::string> columns;
};

// Runs without touching the file system.
ExperimentRun execute_experiment(const ExperimentSpec& spec);

// Writes trace.csv, summary.txt and (unless csv_only) SVG plots into output_dir.
ExperimentSummary run_experiment(const ExperimentSpec& spec);

std::string render_summary(const ExperimentSummary& s);

enum class RateAxis { LogK, LinearK };

// Least-squares slope of log(metric) against log(k) or k over lo <= k <= hi.
double fit_rate_slope(const IterateTrace& trace, const std::string& metric, long k_lo, long k_hi,
                      RateAxis axis = RateAxis::LogK);

using GridSpec = std::map<std::string, std::vector<std::string>>;

// Same syntax as the config file with comma-separated value lists.
GridSpec parse_grid(std::string_view text);
// eta0 in {0.1, 0.01, 0.001} x b in {0.25, 0.5, 0.75}.
GridSpec default_grid();

struct GridCell {
    std::string name;
    ExperimentSpec spec;
};

// Cartesian product over the grid; "solver" and "iters" keys are honoured.
std::vector<GridCell> expand_grid(const ExperimentSpec& base, const GridSpec& grid);

// Runs cells on up to `jobs` threads; summaries come back in cell order.
std::vector<ExperimentSummary> run_grid(const std::vector<GridCell>& cells, int jobs);

} // namespace irvi
