#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mapf/grid.hpp"

namespace mapf {

/// Thrown by the map and scenario readers. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error
{
public:
	ParseError(int line, const std::string& message);
	int line() const { return line_; }

private:
	int line_;
};

struct Agent
{
	int id = 0;
	CellId start = kNoCell;
	CellId goal = kNoCell;
};

/// Exact move counts to one goal cell. Cells that cannot reach the goal are absent.
class DistanceTable
{
public:
	static constexpr int kUnreachable = -1;

	DistanceTable() = default;
	DistanceTable(CellId goal, std::vector<int> distances) : goal_(goal), dist_(std::move(distances)) {}

	CellId goal() const { return goal_; }
	bool reachable(CellId c) const { return dist_[c] != kUnreachable; }
	std::optional<int> at(CellId c) const
	{
		if (dist_[c] == kUnreachable)
			return std::nullopt;
		return dist_[c];
	}
	/// Raw lookup: kUnreachable for absent cells.
	int operator[](CellId c) const { return dist_[c]; }

private:
	CellId goal_ = kNoCell;
	std::vector<int> dist_;
};

DistanceTable bfs_distances(const GridMap& map, CellId goal);

/// Per-goal distance tables, filled lazily. Safe for concurrent use.
class DistanceCache
{
public:
	explicit DistanceCache(std::shared_ptr<const GridMap> map) : map_(std::move(map)) {}
	const DistanceTable& get(CellId goal) const;

private:
	std::shared_ptr<const GridMap> map_;
	mutable std::mutex mutex_;
	mutable std::unordered_map<CellId, std::unique_ptr<DistanceTable>> tables_;
};

/// A grid plus an ordered list of agents. Immutable once built; copies share the
/// map and the distance cache.
class Instance
{
public:
	Instance() = default;
	Instance(GridMap map, std::vector<Agent> agents);
	Instance(std::shared_ptr<const GridMap> map, std::vector<Agent> agents,
	         std::shared_ptr<DistanceCache> cache = nullptr);

	const GridMap& map() const { return *map_; }
	const std::shared_ptr<const GridMap>& shared_map() const { return map_; }
	const std::vector<Agent>& agents() const { return agents_; }
	const Agent& agent(int i) const { return agents_[i]; }
	int num_agents() const { return static_cast<int>(agents_.size()); }

	const DistanceTable& distances_to(CellId goal) const { return cache_->get(goal); }
	const DistanceTable& goal_distances(int agent) const { return cache_->get(agents_[agent].goal); }

	/// Instance over the same map restricted to the listed agents (renumbered 0..k-1).
	Instance subset(const std::vector<int>& agent_ids) const;

private:
	std::shared_ptr<const GridMap> map_;
	std::vector<Agent> agents_;
	std::shared_ptr<DistanceCache> cache_;
};

GridMap parse_map(std::string_view text);
std::string serialize_map(const GridMap& map);

/// Reads the first `num_agents` entries of a scenario. Scenario x is the column, y the row.
Instance parse_scenario(std::string_view text, const GridMap& map, int num_agents);
Instance parse_scenario(std::string_view text, std::shared_ptr<const GridMap> map, int num_agents);

/// Number of entries in a scenario file (after the version line).
int count_scenario_entries(std::string_view text);

std::string read_file(const std::string& path);
GridMap load_map(const std::string& path);
Instance load_instance(const std::string& map_path, const std::string& scenario_path, int num_agents);

} // namespace mapf
