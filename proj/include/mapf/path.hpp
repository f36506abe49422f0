#pragma once

#include <string>
#include <vector>

#include "mapf/instance.hpp"

namespace mapf {

/// Cells indexed by timestep 0..T. The agent stays at back() after T.
using Path = std::vector<CellId>;
using Solution = std::vector<Path>;

/// Number of actions (arrival timestep at the goal).
inline int path_cost(const Path& path) { return static_cast<int>(path.size()) - 1; }

/// Location at timestep t under the stay-at-target rule.
inline CellId location_at(const Path& path, int t)
{
	return t < static_cast<int>(path.size()) ? path[t] : path.back();
}

int sum_of_costs(const Solution& solution);

struct Violation
{
	enum class Kind
	{
		MissingPath,
		WrongStart,
		WrongGoal,
		IllegalMove,
		VertexConflict,
		EdgeConflict,
	};

	Kind kind;
	int agent1 = -1;
	int agent2 = -1;
	CellId cell = kNoCell;
	CellId to = kNoCell;
	int timestep = 0;

	std::string describe(const GridMap& map) const;
};

/// Every endpoint mismatch, illegal move, vertex conflict and swapping conflict.
std::vector<Violation> validate_solution(const Instance& instance, const Solution& solution);

std::string format_path(const GridMap& map, const Path& path);
std::string format_solution(const GridMap& map, const Solution& solution);

} // namespace mapf
