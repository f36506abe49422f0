#pragma once

#include <list>
#include <memory>
#include <unordered_map>

#include "mapf/constraint.hpp"

namespace mapf {

/// Every cell that lies on some constrained path of exactly `cost` moves, per
/// timestep. An empty MDD means no such path exists.
class MDD
{
public:
	MDD() = default;
	MDD(int cost, std::vector<std::vector<CellId>> levels) : cost_(cost), levels_(std::move(levels)) {}

	bool empty() const { return levels_.empty(); }
	int cost() const { return cost_; }
	/// Sorted cells at timestep t (0 <= t <= cost).
	const std::vector<CellId>& level(int t) const { return levels_[t]; }
	int width(int t) const { return static_cast<int>(levels_[t].size()); }
	bool is_singleton(int t) const { return levels_[t].size() == 1; }

private:
	int cost_ = -1;
	std::vector<std::vector<CellId>> levels_;
};

MDD build_mdd(const GridMap& map, const Agent& agent, const DistanceTable& dist, const ConstraintTable& table,
              int cost);

/// LRU cache of MDDs keyed by (agent, the constraints binding it, cost).
class MDDCache
{
public:
	explicit MDDCache(std::size_t capacity = 4096) : capacity_(capacity) {}

	/// Cached MDD, or nullptr.
	std::shared_ptr<const MDD> find(int agent, const std::vector<Constraint>& constraints, int cost);
	void insert(int agent, const std::vector<Constraint>& constraints, int cost, std::shared_ptr<const MDD> mdd);

	std::size_t size() const { return index_.size(); }

private:
	struct Key
	{
		int agent;
		int cost;
		std::vector<Constraint> constraints;
		std::size_t hash;
		bool operator==(const Key& o) const
		{
			return hash == o.hash && agent == o.agent && cost == o.cost && constraints == o.constraints;
		}
	};
	struct KeyHash
	{
		std::size_t operator()(const Key& k) const { return k.hash; }
	};
	using Entry = std::pair<Key, std::shared_ptr<const MDD>>;

	static Key make_key(int agent, const std::vector<Constraint>& constraints, int cost);

	std::size_t capacity_;
	std::list<Entry> order_;
	std::unordered_map<Key, std::list<Entry>::iterator, KeyHash> index_;
};

} // namespace mapf
