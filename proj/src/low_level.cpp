#include "mapf/low_level.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace mapf {

namespace {

struct SearchNode
{
	CellId cell;
	int g;
	// timestep used for duplicate detection; saturates once everything is static
	int tkey;
	int f;
	int d;
	int parent;
	bool terminal;
	bool open = true;
};

class FocalSearch
{
public:
	FocalSearch(const GridMap& map, const Agent& agent, const DistanceTable& dist, const ConstraintTable& table,
	            const ConflictAvoidanceTable* cat, double w, const Deadline* deadline)
		: map_(map), agent_(agent), dist_(dist), table_(table), cat_(cat), w_(w), deadline_(deadline),
		  open_(OpenLess{&nodes_}), focal_(FocalLess{&nodes_})
	{
	}

	LowLevelResult run(int f_min_hint)
	{
		LowLevelResult result;
		hold_ = table_.hold_time(agent_.goal);
		if (hold_ == kForever || !dist_.reachable(agent_.start) || table_.vertex_prohibited(agent_.start, 0))
			return result;
		min_len_ = std::max(table_.min_length(), hold_);
		max_len_ = table_.max_length();
		static_from_ = std::max(table_.latest_timestep(), min_len_) + 1;
		if (cat_)
			static_from_ = std::max(static_from_, cat_->horizon() + 1);

		const int h0 = heuristic(agent_.start, 0);
		if (h0 > max_len_)
			return result;
		lb_ = std::max(f_min_hint, h0);
		bound_ = focal_bound(lb_);
		insert(agent_.start, 0, 0, -1, false);

		long pops = 0;
		while (!open_.empty())
		{
			if ((++pops & 1023) == 0 && deadline_ && deadline_->expired())
			{
				result.status = PlanStatus::Timeout;
				result.expansions = pops;
				return result;
			}
			raise_bound();
			const int idx = *focal_.begin();
			focal_.erase(focal_.begin());
			open_.erase(idx);
			nodes_[idx].open = false;
			const SearchNode n = nodes_[idx];

			if (n.terminal)
				return finish(result, idx, pops);
			if (n.cell == agent_.goal && n.g >= min_len_ && n.g <= max_len_)
			{
				const int future = cat_ ? cat_->future_conflicts(n.cell, n.g) : 0;
				if (future == 0)
					return finish(result, idx, pops);
				insert(n.cell, n.g, n.d + future, idx, true);
			}
			expand(n, idx);
		}
		result.expansions = pops;
		return result;
	}

private:
	struct OpenLess
	{
		const std::deque<SearchNode>* nodes;
		bool operator()(int a, int b) const
		{
			const auto& x = (*nodes)[a];
			const auto& y = (*nodes)[b];
			if (x.f != y.f)
				return x.f < y.f;
			if (x.d != y.d)
				return x.d < y.d;
			return a < b;
		}
	};
	struct FocalLess
	{
		const std::deque<SearchNode>* nodes;
		bool operator()(int a, int b) const
		{
			const auto& x = (*nodes)[a];
			const auto& y = (*nodes)[b];
			if (x.d != y.d)
				return x.d < y.d;
			if (x.g != y.g)
				return x.g > y.g;
			if (x.f != y.f)
				return x.f < y.f;
			return a < b;
		}
	};

	int focal_bound(int lb) const { return static_cast<int>(std::floor(w_ * lb + 1e-9)); }

	int heuristic(CellId cell, int g) const
	{
		return std::max({dist_[cell], min_len_ - g, 0});
	}

	std::uint64_t key(CellId cell, int tkey, bool terminal) const
	{
		return ((static_cast<std::uint64_t>(tkey) * static_cast<std::uint64_t>(map_.num_cells()) +
		         static_cast<std::uint64_t>(cell))
		        << 1) |
		       static_cast<std::uint64_t>(terminal);
	}

	void raise_bound()
	{
		const int top = nodes_[*open_.begin()].f;
		if (top <= lb_)
			return;
		lb_ = top;
		const int new_bound = focal_bound(lb_);
		if (new_bound > bound_)
		{
			// admit OPEN entries with f in (bound_, new_bound]
			SearchNode probe{kNoCell, 0, 0, bound_ + 1, -1, -1, false};
			nodes_.push_back(probe);
			const int probe_idx = static_cast<int>(nodes_.size()) - 1;
			for (auto it = open_.lower_bound(probe_idx); it != open_.end() && nodes_[*it].f <= new_bound; ++it)
				focal_.insert(*it);
			nodes_.pop_back();
			bound_ = new_bound;
		}
	}

	void insert(CellId cell, int g, int d, int parent, bool terminal)
	{
		const int tkey = std::min(g, static_from_);
		const int f = terminal ? g : g + heuristic(cell, g);
		const std::uint64_t k = key(cell, tkey, terminal);
		auto it = index_.find(k);
		if (it != index_.end())
		{
			SearchNode& old = nodes_[it->second];
			if (g > old.g || (g == old.g && d >= old.d))
				return;
			if (old.open)
			{
				focal_.erase(it->second);
				open_.erase(it->second);
				old.open = false;
			}
		}
		nodes_.push_back({cell, g, tkey, f, d, parent, terminal});
		const int idx = static_cast<int>(nodes_.size()) - 1;
		index_[k] = idx;
		open_.insert(idx);
		if (f <= bound_)
			focal_.insert(idx);
	}

	void expand(const SearchNode& n, int idx)
	{
		const int ng = n.g + 1;
		if (ng > max_len_)
			return;
		auto consider = [&](CellId next) {
			if (next == n.cell && n.tkey >= static_from_)
				return; // waiting changes nothing once the world is static
			if (table_.is_constrained(n.cell, next, ng))
				return;
			const int h = dist_[next];
			if (h == DistanceTable::kUnreachable || ng + h > max_len_)
				return;
			const int nd = n.d + (cat_ ? cat_->count_conflicts(n.cell, next, ng) : 0);
			insert(next, ng, nd, idx, false);
		};
		for (CellId next : map_.neighbors(n.cell))
			consider(next);
		consider(n.cell);
	}

	LowLevelResult& finish(LowLevelResult& result, int idx, long pops)
	{
		if (nodes_[idx].terminal)
			idx = nodes_[idx].parent;
		result.status = PlanStatus::Found;
		// the goal entry's d covers moves only; future conflicts are added below
		result.conflicts = nodes_[idx].d;
		result.path.assign(static_cast<std::size_t>(nodes_[idx].g) + 1, kNoCell);
		for (int i = idx; i >= 0; i = nodes_[i].parent)
			result.path[nodes_[i].g] = nodes_[i].cell;
		result.f_min = std::min(lb_, path_cost(result.path));
		result.expansions = pops;
		if (cat_)
			result.conflicts += cat_->future_conflicts(result.path.back(), path_cost(result.path));
		return result;
	}

	const GridMap& map_;
	const Agent& agent_;
	const DistanceTable& dist_;
	const ConstraintTable& table_;
	const ConflictAvoidanceTable* cat_;
	double w_;
	const Deadline* deadline_;

	int hold_ = 0;
	int min_len_ = 0;
	int max_len_ = kForever;
	int static_from_ = 0;
	int lb_ = 0;
	int bound_ = 0;

	std::deque<SearchNode> nodes_;
	std::unordered_map<std::uint64_t, int> index_;
	std::set<int, OpenLess> open_;
	std::set<int, FocalLess> focal_;
};

} // namespace

LowLevelResult plan_path(const GridMap& map, const Agent& agent, const DistanceTable& dist,
                         const ConstraintTable& table, const ConflictAvoidanceTable* cat, double w, int f_min_hint,
                         const Deadline* deadline)
{
	FocalSearch search(map, agent, dist, table, cat, std::max(w, 1.0), deadline);
	return search.run(f_min_hint);
}

LowLevelResult plan_shortest_path(const GridMap& map, const Agent& agent, const DistanceTable& dist,
                                  const ConstraintTable& table, const Deadline* deadline)
{
	return plan_path(map, agent, dist, table, nullptr, 1.0, 0, deadline);
}

int travel_time(const GridMap& map, CellId from, CellId to, CellId blocked_a, CellId blocked_b, int limit)
{
	if (from == to)
		return 0;
	std::vector<int> dist(map.num_cells(), -1);
	std::deque<CellId> queue{from};
	dist[from] = 0;
	while (!queue.empty())
	{
		const CellId c = queue.front();
		queue.pop_front();
		if (dist[c] >= limit)
			break;
		for (CellId n : map.neighbors(c))
		{
			if ((c == blocked_a && n == blocked_b) || (c == blocked_b && n == blocked_a))
				continue;
			if (dist[n] != -1)
				continue;
			dist[n] = dist[c] + 1;
			if (n == to)
				return dist[n];
			queue.push_back(n);
		}
	}
	return kForever;
}

} // namespace mapf
