#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

#include "mapf/conflict.hpp"
#include "mapf/deadline.hpp"
#include "mapf/low_level.hpp"

namespace mapf {

enum class Mode
{
	CBS,
	ECBS,
	EECBS,
};

const char* to_string(Mode mode);
std::optional<Mode> parse_mode(std::string_view text);

/// Queue a CT node was selected from.
enum class Origin
{
	None,
	Cleanup,
	Open,
	Focal,
};

/// Reported after every low-level call made by the solver.
struct LowLevelCall
{
	const Instance* instance = nullptr;
	int agent = -1;
	const ConstraintTable* table = nullptr;
	double w = 1.0;
	const LowLevelResult* result = nullptr;
};

/// Reported for every symmetric split the solver performs.
struct SplitEvent
{
	const Instance* instance = nullptr;
	const Conflict* conflict = nullptr;
	/// Every constraint on the path from the root to the split node.
	std::vector<Constraint> node_constraints;
	std::array<std::vector<Constraint>, 2> children;
	const Path* path1 = nullptr;
	const Path* path2 = nullptr;
};

struct SolverConfig
{
	Mode mode = Mode::EECBS;
	double w = 1.0;
	bool bypass = true;
	bool prioritize = true;
	bool symmetry = true;
	bool wdg = true;
	/// Seconds; <= 0 means no limit.
	double time_limit = 60.0;
	/// Maximum number of CT expansions; < 0 means no limit.
	long node_limit = -1;
	/// 0 plans the root in agent order, anything else shuffles that order.
	std::uint64_t seed = 0;
	/// Expansion budget of each two-agent WDG sub-solve.
	long wdg_node_limit = 10000;

	std::function<void(const LowLevelCall&)> on_low_level;
	std::function<void(const SplitEvent&)> on_split;
	/// Called with every node selected for expansion (after any bypass), in order.
	std::function<void(int node_id, Origin origin, int cost, int lb)> on_expand;
};

enum class SolveStatus
{
	Solved,
	Timeout,
	NodeLimit,
	Infeasible,
};

const char* to_string(SolveStatus status);

struct SolverStats
{
	long expansions = 0;
	long expansions_cleanup = 0;
	long expansions_open = 0;
	long expansions_focal = 0;
	long generated = 0;
	long pruned = 0;
	long bypasses = 0;
	long wdg_reinsertions = 0;
	long low_level_calls = 0;
	long low_level_expansions = 0;
	long rectangle_splits = 0;
	long corridor_splits = 0;
	long target_splits = 0;
	long wdg_pair_solves = 0;
	long wdg_cache_hits = 0;

	/// Sum of f_min at the root (no heuristic).
	int root_lb = 0;
	int root_cost = 0;
	/// Best proven lower bound on the optimal sum of costs (lb + h of the best CLEANUP node).
	int lower_bound = 0;
	/// Sum of costs of the returned solution, -1 when unsolved.
	int cost = -1;
	std::vector<int> root_costs;

	double runtime_ms = 0;
	double wdg_runtime_ms = 0;

	int delta_lb() const { return lower_bound - root_lb; }
	double cleanup_fraction() const { return expansions ? double(expansions_cleanup) / expansions : 0.0; }
	double open_fraction() const { return expansions ? double(expansions_open) / expansions : 0.0; }
	double focal_fraction() const { return expansions ? double(expansions_focal) / expansions : 0.0; }
	double bypasses_per_expansion() const { return expansions ? double(bypasses) / expansions : 0.0; }
	double wdg_time_fraction() const { return runtime_ms > 0 ? wdg_runtime_ms / runtime_ms : 0.0; }
};

struct SolveResult
{
	SolveStatus status = SolveStatus::Infeasible;
	Solution solution;
	SolverStats stats;

	bool solved() const { return status == SolveStatus::Solved; }
};

/// Validates mode/w combinations. Returns an error message, or empty when fine.
std::string check_config(const SolverConfig& config);

/// Runs the configured search. `root_constraints` apply to every node (used by the
/// two-agent WDG sub-solves); `outer` caps the run in addition to config.time_limit.
SolveResult solve(const Instance& instance, const SolverConfig& config,
                  const std::vector<Constraint>& root_constraints = {}, const Deadline* outer = nullptr);

} // namespace mapf
