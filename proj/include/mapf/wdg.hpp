#pragma once

#include <functional>
#include <map>
#include <utility>

#include "mapf/solver.hpp"

namespace mapf {

struct WeightedEdge
{
	int u;
	int v;
	int weight;
};

inline int edge_weight(int joint_cost, int f_opt_i, int f_opt_j)
{
	const int w = joint_cost - f_opt_i - f_opt_j;
	return w > 0 ? w : 0;
}

/// Minimum sum of non-negative integer vertex values with x_u + x_v >= weight on
/// every edge. Exact on connected components of up to `exact_limit` vertices; larger
/// components contribute a matching lower bound, so the result stays admissible.
int min_weighted_vertex_cover(int num_vertices, const std::vector<WeightedEdge>& edges, int exact_limit = 16);

/// Outcome of the optimal two-agent sub-solve under the node's constraints.
struct PairResult
{
	enum class Status
	{
		Solved,
		Partial,
		Infeasible,
	};
	Status status = Status::Infeasible;
	/// Optimal joint cost, or a sound lower bound when Partial.
	int joint = 0;
	int f_opt_i = 0;
	int f_opt_j = 0;
	long expansions = 0;
};

/// Solves agents i and j alone with optimal CBS under their constraints.
/// `constraints_i`/`constraints_j` are the node's constraints as they bind each agent.
PairResult solve_two_agent(const Instance& instance, int i, int j, const std::vector<Constraint>& constraints_i,
                           const std::vector<Constraint>& constraints_j, long node_limit,
                           const Deadline* deadline = nullptr);

struct WdgValue
{
	bool infeasible = false;
	int h = 0;
};

/// h = sum over covered agents of (f_opt - f_min) plus the vertex cover of the
/// dependency graph built from the conflicting `pairs`.
WdgValue compute_wdg_h(const std::vector<std::pair<int, int>>& pairs, const std::vector<int>& f_min,
                       const std::function<PairResult(int, int)>& solve_pair);

/// Exact-key cache of pair sub-solves within one run.
class PairCache
{
public:
	struct Key
	{
		int i;
		int j;
		std::vector<Constraint> ci;
		std::vector<Constraint> cj;
		auto operator<=>(const Key&) const = default;
		bool operator==(const Key&) const = default;
	};

	const PairResult* find(const Key& key) const
	{
		auto it = cache_.find(key);
		return it == cache_.end() ? nullptr : &it->second;
	}
	void insert(Key key, const PairResult& result) { cache_.emplace(std::move(key), result); }
	std::size_t size() const { return cache_.size(); }

private:
	std::map<Key, PairResult> cache_;
};

} // namespace mapf
