#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mapf/solver.hpp"

namespace mapf {

/// One solver run as written to the results CSV.
struct RunRecord
{
	std::string map;
	std::string scen;
	int agents = 0;
	Mode mode = Mode::EECBS;
	double w = 1.0;
	bool bp = false;
	bool pc = false;
	bool sr = false;
	bool wdg = false;
	std::uint64_t seed = 0;
	double time_limit = 0;

	SolveStatus status = SolveStatus::Infeasible;
	bool solved = false;
	int cost = -1;
	int lower_bound = 0;
	/// cost / lower_bound, 0 when unsolved.
	double suboptimality = 0;
	SolverStats stats;
};

/// Column names, comma separated, no trailing newline.
std::string csv_header();
std::vector<std::string> csv_columns();
/// Columns whose values depend on wall-clock time.
bool is_timing_column(const std::string& name);
std::string to_csv_row(const RunRecord& r);
/// The columns identifying a run's configuration (used to skip finished runs).
std::string config_key(const RunRecord& r);
std::string config_key_from_row(const std::string& row);
/// Parses a row written by to_csv_row. Throws std::runtime_error when malformed.
RunRecord parse_csv_row(const std::string& row);

std::string basename_of(const std::string& path);

struct RunSpec
{
	std::string map_path;
	std::string scen_path;
	int agents = 0;
	SolverConfig config;
};

RunRecord make_record(const RunSpec& spec, const SolveResult& result);

struct SingleOutcome
{
	RunRecord record;
	SolveResult result;
	std::vector<Violation> violations;
};

/// Solves one instance and re-validates a returned solution.
SingleOutcome run_single(const RunSpec& spec, const Instance& instance);

struct SweepSpec
{
	std::string map_path;
	std::vector<std::string> scen_paths;
	std::vector<int> agent_counts;
	std::vector<double> ws;
	/// Mode, toggles, time limit and seed shared by every run.
	SolverConfig base;
	int jobs = 1;
	/// Results CSV; rows already present (same configuration) are not rerun.
	std::string out_csv;
};

struct ConfigSummary
{
	int agents = 0;
	double w = 1.0;
	int runs = 0;
	int solved = 0;
	/// Mean runtime in ms with each unsolved run counted at the time limit.
	double mean_runtime_ms = 0;

	double success_rate() const { return runs ? double(solved) / runs : 0.0; }
};

struct SweepOutcome
{
	std::vector<RunRecord> records;
	std::vector<ConfigSummary> summaries;
	int skipped = 0;
	int validation_failures = 0;
};

/// Runs agents x w x scenario (in that nesting order). Throws std::invalid_argument
/// for an empty scenario list and std::runtime_error for unreadable inputs.
SweepOutcome run_sweep(const SweepSpec& spec, std::ostream& log);

std::vector<ConfigSummary> summarize(const std::vector<RunRecord>& records, double time_limit_s);
std::string format_summary(const ConfigSummary& s, Mode mode);

} // namespace mapf
