#include "mapf/path.hpp"

#include <algorithm>
#include <sstream>

namespace mapf {

int sum_of_costs(const Solution& solution)
{
	int total = 0;
	for (const auto& p : solution)
		total += path_cost(p);
	return total;
}

std::string Violation::describe(const GridMap& map) const
{
	std::ostringstream out;
	switch (kind)
	{
	case Kind::MissingPath:
		out << "agent " << agent1 << " has no path";
		break;
	case Kind::WrongStart:
		out << "agent " << agent1 << " does not start at its start cell";
		break;
	case Kind::WrongGoal:
		out << "agent " << agent1 << " does not end at its goal cell";
		break;
	case Kind::IllegalMove:
		out << "agent " << agent1 << " makes an illegal move " << to_string(map, cell) << "->"
		    << to_string(map, to) << " at timestep " << timestep;
		break;
	case Kind::VertexConflict:
		out << "agents " << agent1 << " and " << agent2 << " collide at " << to_string(map, cell)
		    << " at timestep " << timestep;
		break;
	case Kind::EdgeConflict:
		out << "agents " << agent1 << " and " << agent2 << " swap along " << to_string(map, cell) << "->"
		    << to_string(map, to) << " at timestep " << timestep;
		break;
	}
	return out.str();
}

std::vector<Violation> validate_solution(const Instance& instance, const Solution& solution)
{
	using Kind = Violation::Kind;
	std::vector<Violation> out;
	const auto& map = instance.map();
	const int m = instance.num_agents();
	bool usable = static_cast<int>(solution.size()) == m;
	for (int i = 0; i < m; ++i)
	{
		if (i >= static_cast<int>(solution.size()) || solution[i].empty())
		{
			out.push_back({Kind::MissingPath, i});
			usable = false;
			continue;
		}
		const Path& p = solution[i];
		if (p.front() != instance.agent(i).start)
			out.push_back({Kind::WrongStart, i, -1, p.front()});
		if (p.back() != instance.agent(i).goal)
			out.push_back({Kind::WrongGoal, i, -1, p.back()});
		for (int t = 1; t < static_cast<int>(p.size()); ++t)
		{
			const bool ok = map.passable(p[t]) && (p[t] == p[t - 1] || map.adjacent(p[t - 1], p[t]));
			if (!ok)
				out.push_back({Kind::IllegalMove, i, -1, p[t - 1], p[t], t});
		}
	}
	if (!usable)
		return out;

	for (int i = 0; i < m; ++i)
	{
		for (int j = i + 1; j < m; ++j)
		{
			const Path& a = solution[i];
			const Path& b = solution[j];
			const int horizon = std::max(path_cost(a), path_cost(b));
			for (int t = 0; t <= horizon; ++t)
			{
				const CellId ai = location_at(a, t);
				const CellId bj = location_at(b, t);
				if (ai == bj)
				{
					out.push_back({Kind::VertexConflict, i, j, ai, kNoCell, t});
				}
				else if (t > 0 && ai == location_at(b, t - 1) && bj == location_at(a, t - 1))
				{
					out.push_back({Kind::EdgeConflict, i, j, location_at(a, t - 1), ai, t});
				}
			}
		}
	}
	return out;
}

std::string format_path(const GridMap& map, const Path& path)
{
	std::string s;
	for (std::size_t t = 0; t < path.size(); ++t)
	{
		if (t > 0)
			s += "->";
		s += to_string(map, path[t]);
	}
	return s;
}

std::string format_solution(const GridMap& map, const Solution& solution)
{
	std::string s;
	for (std::size_t i = 0; i < solution.size(); ++i)
		s += "agent " + std::to_string(i) + ": " + format_path(map, solution[i]) + "\n";
	return s;
}

} // namespace mapf
