#include "mapf/wdg.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace mapf {

namespace {

struct CoverSearch
{
	int n;
	std::vector<std::vector<std::pair<int, int>>> adj; // (neighbor, weight), local indices
	std::vector<int> value;
	std::vector<int> max_incident;
	int best;

	// Lower bound on the cost still to pay for vertices from `next` on.
	int remaining_bound(int next) const
	{
		std::vector<int> need(n, 0);
		for (int v = next; v < n; ++v)
			for (auto [u, w] : adj[v])
				if (u < next)
					need[v] = std::max(need[v], w - value[u]);
		std::vector<char> used(n, 0);
		int bound = 0;
		for (int v = next; v < n; ++v)
		{
			if (used[v])
				continue;
			int best_pair = -1;
			int best_gain = 0;
			for (auto [u, w] : adj[v])
			{
				if (u < next || used[u] || u == v)
					continue;
				const int gain = std::max(w, need[v] + need[u]);
				if (gain > best_gain)
				{
					best_gain = gain;
					best_pair = u;
				}
			}
			if (best_pair >= 0)
			{
				used[v] = used[best_pair] = 1;
				bound += best_gain;
			}
			else
			{
				used[v] = 1;
				bound += need[v];
			}
		}
		return bound;
	}

	void dfs(int v, int sum)
	{
		if (sum >= best)
			return;
		if (v == n)
		{
			best = sum;
			return;
		}
		if (sum + remaining_bound(v) >= best)
			return;
		int low = 0;
		for (auto [u, w] : adj[v])
			if (u < v)
				low = std::max(low, w - value[u]);
		for (int x = low; x <= std::max(low, max_incident[v]); ++x)
		{
			value[v] = x;
			dfs(v + 1, sum + x);
		}
		value[v] = 0;
	}
};

int exact_component_cover(const std::vector<int>& vertices, const std::vector<WeightedEdge>& edges)
{
	const int n = static_cast<int>(vertices.size());
	std::vector<int> local(*std::max_element(vertices.begin(), vertices.end()) + 1, -1);
	// high-degree vertices first tightens the lower bounds early
	std::vector<int> order = vertices;
	std::vector<int> degree(local.size(), 0);
	for (const auto& e : edges)
	{
		if (e.u < static_cast<int>(local.size()) && e.v < static_cast<int>(local.size()))
		{
			++degree[e.u];
			++degree[e.v];
		}
	}
	std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return degree[a] > degree[b]; });
	for (int k = 0; k < n; ++k)
		local[order[k]] = k;

	CoverSearch s;
	s.n = n;
	s.adj.assign(n, {});
	s.value.assign(n, 0);
	s.max_incident.assign(n, 0);
	int total = 0;
	for (const auto& e : edges)
	{
		if (e.u >= static_cast<int>(local.size()) || e.v >= static_cast<int>(local.size()))
			continue;
		const int a = local[e.u];
		const int b = local[e.v];
		if (a < 0 || b < 0)
			continue;
		s.adj[a].push_back({b, e.weight});
		s.adj[b].push_back({a, e.weight});
		s.max_incident[a] = std::max(s.max_incident[a], e.weight);
		s.max_incident[b] = std::max(s.max_incident[b], e.weight);
		total += e.weight;
	}
	s.best = total + 1;
	s.dfs(0, 0);
	return s.best;
}

int matching_bound(const std::vector<int>& vertices, const std::vector<WeightedEdge>& edges)
{
	std::set<int> members(vertices.begin(), vertices.end());
	std::vector<WeightedEdge> sorted;
	for (const auto& e : edges)
		if (members.count(e.u) && members.count(e.v))
			sorted.push_back(e);
	std::stable_sort(sorted.begin(), sorted.end(),
	                 [](const WeightedEdge& a, const WeightedEdge& b) { return a.weight > b.weight; });
	std::set<int> used;
	int bound = 0;
	for (const auto& e : sorted)
	{
		if (used.count(e.u) || used.count(e.v))
			continue;
		used.insert(e.u);
		used.insert(e.v);
		bound += e.weight;
	}
	return bound;
}

} // namespace

int min_weighted_vertex_cover(int num_vertices, const std::vector<WeightedEdge>& edges, int exact_limit)
{
	std::vector<int> parent(num_vertices);
	std::iota(parent.begin(), parent.end(), 0);
	auto find = [&](int x) {
		while (parent[x] != x)
			x = parent[x] = parent[parent[x]];
		return x;
	};
	std::vector<char> touched(num_vertices, 0);
	for (const auto& e : edges)
	{
		if (e.weight <= 0)
			continue;
		touched[e.u] = touched[e.v] = 1;
		parent[find(e.u)] = find(e.v);
	}
	std::vector<std::vector<int>> components(num_vertices);
	for (int v = 0; v < num_vertices; ++v)
		if (touched[v])
			components[find(v)].push_back(v);

	std::vector<WeightedEdge> positive;
	for (const auto& e : edges)
		if (e.weight > 0)
			positive.push_back(e);

	int total = 0;
	for (const auto& comp : components)
	{
		if (comp.empty())
			continue;
		if (static_cast<int>(comp.size()) <= exact_limit)
			total += exact_component_cover(comp, positive);
		else
			total += matching_bound(comp, positive);
	}
	return total;
}

PairResult solve_two_agent(const Instance& instance, int i, int j, const std::vector<Constraint>& constraints_i,
                           const std::vector<Constraint>& constraints_j, long node_limit, const Deadline* deadline)
{
	const Instance pair = instance.subset({i, j});
	std::vector<Constraint> root;
	root.reserve(constraints_i.size() + constraints_j.size());
	for (auto c : constraints_i)
	{
		c.agent = 0;
		root.push_back(std::move(c));
	}
	for (auto c : constraints_j)
	{
		c.agent = 1;
		root.push_back(std::move(c));
	}
	SolverConfig config;
	config.mode = Mode::CBS;
	config.w = 1.0;
	config.bypass = false;
	config.prioritize = true;
	config.symmetry = true;
	config.wdg = false;
	config.time_limit = 0;
	config.node_limit = node_limit;
	const SolveResult r = solve(pair, config, root, deadline);

	PairResult out;
	out.expansions = r.stats.expansions;
	if (r.status == SolveStatus::Infeasible)
		return out;
	out.f_opt_i = r.stats.root_costs.at(0);
	out.f_opt_j = r.stats.root_costs.at(1);
	if (r.solved())
	{
		out.status = PairResult::Status::Solved;
		out.joint = r.stats.cost;
	}
	else
	{
		out.status = PairResult::Status::Partial;
		out.joint = r.stats.lower_bound;
	}
	return out;
}

WdgValue compute_wdg_h(const std::vector<std::pair<int, int>>& pairs, const std::vector<int>& f_min,
                       const std::function<PairResult(int, int)>& solve_pair)
{
	WdgValue value;
	const int m = static_cast<int>(f_min.size());
	std::vector<WeightedEdge> edges;
	std::vector<int> f_opt(m, -1);
	for (auto [i, j] : pairs)
	{
		const PairResult r = solve_pair(i, j);
		if (r.status == PairResult::Status::Infeasible)
		{
			value.infeasible = true;
			return value;
		}
		f_opt[i] = r.f_opt_i;
		f_opt[j] = r.f_opt_j;
		const int w = edge_weight(r.joint, r.f_opt_i, r.f_opt_j);
		if (w > 0)
			edges.push_back({i, j, w});
	}
	std::vector<char> in_graph(m, 0);
	for (const auto& e : edges)
		in_graph[e.u] = in_graph[e.v] = 1;
	int correction = 0;
	for (int v = 0; v < m; ++v)
		if (in_graph[v])
			correction += std::max(0, f_opt[v] - f_min[v]);
	value.h = correction + min_weighted_vertex_cover(m, edges);
	return value;
}

} // namespace mapf
