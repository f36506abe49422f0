#pragma once

#include "mapf/constraint.hpp"
#include "mapf/deadline.hpp"

namespace mapf {

enum class PlanStatus
{
	Found,
	Infeasible,
	Timeout,
};

struct LowLevelResult
{
	PlanStatus status = PlanStatus::Infeasible;
	Path path;
	/// Lower bound on the cost of any path satisfying the table.
	int f_min = 0;
	/// Conflicts of `path` against the avoidance table, stay-at-target included.
	int conflicts = 0;
	long expansions = 0;

	bool found() const { return status == PlanStatus::Found; }
};

/// Focal search over (cell, timestep). Returns a path of cost at most
/// floor(w * f_min) that minimizes conflicts with `cat` among the paths it
/// considers. `f_min_hint` is a known lower bound (e.g. the parent's), used to
/// seed the focal bound.
LowLevelResult plan_path(const GridMap& map, const Agent& agent, const DistanceTable& dist,
                         const ConstraintTable& table, const ConflictAvoidanceTable* cat, double w,
                         int f_min_hint = 0, const Deadline* deadline = nullptr);

/// Minimum-cost path under the table (w = 1, no conflict avoidance).
LowLevelResult plan_shortest_path(const GridMap& map, const Agent& agent, const DistanceTable& dist,
                                  const ConstraintTable& table, const Deadline* deadline = nullptr);

/// Static shortest move count from `from` to `to` with the edge {blocked_a, blocked_b}
/// removed in both directions. kForever when unreachable within `limit` moves.
int travel_time(const GridMap& map, CellId from, CellId to, CellId blocked_a, CellId blocked_b, int limit);

} // namespace mapf
