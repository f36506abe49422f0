#include "mapf/mdd.hpp"

#include <algorithm>

namespace mapf {

MDD build_mdd(const GridMap& map, const Agent& agent, const DistanceTable& dist, const ConstraintTable& table,
              int cost)
{
	if (cost < 0 || !dist.reachable(agent.start) || dist[agent.start] > cost)
		return {};
	if (cost < table.min_length() || cost > table.max_length() || table.hold_time(agent.goal) > cost)
		return {};
	if (table.vertex_prohibited(agent.start, 0))
		return {};

	// forward reachability, pruned by the distance still to go
	std::vector<std::vector<CellId>> reach(cost + 1);
	std::vector<int> seen(map.num_cells(), -1);
	reach[0] = {agent.start};
	for (int t = 1; t <= cost; ++t)
	{
		for (CellId v : reach[t - 1])
		{
			auto visit = [&](CellId u) {
				if (seen[u] == t || dist[u] == DistanceTable::kUnreachable || t + dist[u] > cost)
					return;
				if (table.is_constrained(v, u, t))
					return;
				seen[u] = t;
				reach[t].push_back(u);
			};
			visit(v);
			for (CellId u : map.neighbors(v))
				visit(u);
		}
		if (reach[t].empty())
			return {};
	}
	if (std::find(reach[cost].begin(), reach[cost].end(), agent.goal) == reach[cost].end())
		return {};

	// backward pass keeps nodes that still reach the goal at `cost`
	std::vector<std::vector<CellId>> levels(cost + 1);
	levels[cost] = {agent.goal};
	std::vector<char> keep_next(map.num_cells(), 0);
	keep_next[agent.goal] = 1;
	for (int t = cost - 1; t >= 0; --t)
	{
		std::vector<char> keep(map.num_cells(), 0);
		for (CellId v : reach[t])
		{
			bool ok = keep_next[v] && !table.is_constrained(v, v, t + 1);
			for (CellId u : map.neighbors(v))
			{
				if (ok)
					break;
				ok = keep_next[u] && !table.is_constrained(v, u, t + 1);
			}
			if (ok)
			{
				keep[v] = 1;
				levels[t].push_back(v);
			}
		}
		if (levels[t].empty())
			return {};
		keep_next.swap(keep);
	}
	for (auto& level : levels)
		std::sort(level.begin(), level.end());
	return MDD(cost, std::move(levels));
}

MDDCache::Key MDDCache::make_key(int agent, const std::vector<Constraint>& constraints, int cost)
{
	std::size_t h = hash_constraints(constraints);
	h ^= static_cast<std::size_t>(agent) * 0x9E3779B97F4A7C15ULL + static_cast<std::size_t>(cost) * 0xC2B2AE3D27D4EB4FULL;
	return Key{agent, cost, constraints, h};
}

std::shared_ptr<const MDD> MDDCache::find(int agent, const std::vector<Constraint>& constraints, int cost)
{
	auto it = index_.find(make_key(agent, constraints, cost));
	if (it == index_.end())
		return nullptr;
	order_.splice(order_.begin(), order_, it->second);
	return it->second->second;
}

void MDDCache::insert(int agent, const std::vector<Constraint>& constraints, int cost,
                      std::shared_ptr<const MDD> mdd)
{
	Key key = make_key(agent, constraints, cost);
	if (auto it = index_.find(key); it != index_.end())
	{
		it->second->second = std::move(mdd);
		order_.splice(order_.begin(), order_, it->second);
		return;
	}
	order_.emplace_front(key, std::move(mdd));
	index_.emplace(std::move(key), order_.begin());
	while (index_.size() > capacity_)
	{
		index_.erase(order_.back().first);
		order_.pop_back();
	}
}

} // namespace mapf
