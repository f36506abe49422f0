#include "mapf/solver.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "mapf/ct_queue.hpp"
#include "mapf/wdg.hpp"

namespace mapf {

const char* to_string(Mode mode)
{
	switch (mode)
	{
	case Mode::CBS:
		return "cbs";
	case Mode::ECBS:
		return "ecbs";
	case Mode::EECBS:
		return "eecbs";
	}
	return "?";
}

std::optional<Mode> parse_mode(std::string_view text)
{
	if (text == "cbs")
		return Mode::CBS;
	if (text == "ecbs")
		return Mode::ECBS;
	if (text == "eecbs")
		return Mode::EECBS;
	return std::nullopt;
}

const char* to_string(SolveStatus status)
{
	switch (status)
	{
	case SolveStatus::Solved:
		return "solved";
	case SolveStatus::Timeout:
		return "timeout";
	case SolveStatus::NodeLimit:
		return "node-limit";
	case SolveStatus::Infeasible:
		return "infeasible";
	}
	return "?";
}

std::string check_config(const SolverConfig& config)
{
	if (!(config.w >= 1.0) || config.w > 1e6)
		return "suboptimality factor w must be >= 1";
	if (config.mode == Mode::CBS && config.w != 1.0)
		return "cbs mode is optimal and requires w = 1";
	return {};
}

namespace {

constexpr double kEps = 1e-9;

struct CTNode : QueueEntry
{
	CTNode* parent = nullptr;
	std::vector<Constraint> constraints;
	std::vector<std::shared_ptr<const Path>> paths;
	std::vector<int> f_min;
	int lb = 0;
	int h = 0;
	bool h_computed = false;
	double h_hat = 0;
	std::vector<Conflict> conflicts;
	int depth = 0;

	int h_c() const { return static_cast<int>(conflicts.size()); }
};

class TimeoutSignal
{
};

class Engine
{
public:
	Engine(const Instance& instance, const SolverConfig& config, const std::vector<Constraint>& root_constraints,
	       const Deadline& deadline)
		: instance_(instance), config_(config), root_constraints_(root_constraints), deadline_(deadline),
		  queues_(config.mode, config.mode == Mode::CBS ? 1.0 : config.w),
		  w_(config.mode == Mode::CBS ? 1.0 : config.w), m_(instance.num_agents())
	{
	}

	SolveResult run()
	{
		const auto started = std::chrono::steady_clock::now();
		SolveResult result;
		try
		{
			result.status = search(result);
		}
		catch (const TimeoutSignal&)
		{
			result.status = SolveStatus::Timeout;
		}
		stats_.lower_bound = std::max(queues_.lower_bound(), stats_.root_lb);
		stats_.runtime_ms =
			std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
		result.stats = std::move(stats_);
		if (result.status == SolveStatus::Solved)
			result.stats.lower_bound = std::min(result.stats.lower_bound, result.stats.cost);
		return result;
	}

private:
	SolveStatus search(SolveResult& result)
	{
		CTNode* root = make_root();
		if (!root)
			return SolveStatus::Infeasible;
		if (config_.wdg && !compute_heuristic(root))
			return SolveStatus::Infeasible;
		root->h_computed = config_.wdg;
		enqueue(root);

		while (!queues_.empty())
		{
			if (deadline_.expired())
				return SolveStatus::Timeout;
			if (config_.node_limit >= 0 && stats_.expansions >= config_.node_limit)
				return SolveStatus::NodeLimit;

			auto [entry, origin] = queues_.select();
			CTNode* node = static_cast<CTNode*>(entry);
			if (node->conflicts.empty())
			{
				count_expansion(node, origin);
				return finish(node, result);
			}

			if (config_.wdg && config_.mode != Mode::ECBS && origin == Origin::Cleanup && !node->h_computed)
			{
				if (!compute_heuristic(node))
				{
					++stats_.pruned;
					continue;
				}
				node->h_computed = true;
				++stats_.wdg_reinsertions;
				enqueue(node);
				continue;
			}

			count_expansion(node, origin);
			if (expand(node, origin))
				return finish(node, result);
		}
		return SolveStatus::Infeasible;
	}

	// Selecting a conflict-free node counts as its expansion too.
	void count_expansion(const CTNode* node, Origin origin)
	{
		++stats_.expansions;
		switch (origin)
		{
		case Origin::Cleanup:
			++stats_.expansions_cleanup;
			break;
		case Origin::Open:
			++stats_.expansions_open;
			break;
		default:
			++stats_.expansions_focal;
			break;
		}
		if (config_.on_expand)
			config_.on_expand(node->id, origin, node->cost, node->lb);
	}

	SolveStatus finish(CTNode* node, SolveResult& result)
	{
		result.solution.clear();
		for (const auto& p : node->paths)
			result.solution.push_back(*p);
		stats_.cost = node->cost;
		return SolveStatus::Solved;
	}

	// Expands `node`; returns true when a bypass made it conflict-free.
	bool expand(CTNode* node, Origin origin)
	{
		while (true)
		{
			analyze_conflicts(node, origin);
			const Conflict& chosen = node->conflicts[choose_conflict(node->conflicts)];
			const auto split = split_for(chosen);
			note_split(node, chosen, split);

			std::vector<std::unique_ptr<CTNode>> children;
			for (int k = 0; k < 2; ++k)
			{
				auto child = generate_child(node, split[k]);
				if (child)
					children.push_back(std::move(child));
				else
					++stats_.pruned;
			}

			bool bypassed = false;
			if (config_.bypass)
			{
				for (auto& child : children)
				{
					if (!bypass_allowed(node, *child, origin))
						continue;
					node->paths = std::move(child->paths);
					node->conflicts = std::move(child->conflicts);
					node->cost = child->cost;
					++stats_.bypasses;
					bypassed = true;
					break;
				}
			}
			if (bypassed)
			{
				if (node->conflicts.empty())
					return true;
				continue;
			}

			if (!children.empty() && config_.mode == Mode::EECBS)
				learn(node, children);
			for (auto& child : children)
			{
				if (config_.mode == Mode::EECBS)
					child->h_hat = errors_.estimate(child->h_c());
				CTNode* raw = child.get();
				nodes_.push_back(std::move(child));
				++stats_.generated;
				enqueue(raw);
			}
			return false;
		}
	}

	bool bypass_allowed(const CTNode* parent, const CTNode& child, Origin origin) const
	{
		std::vector<int> costs(m_);
		for (int i = 0; i < m_; ++i)
			costs[i] = path_cost(*child.paths[i]);
		BypassCheck b;
		b.mode = config_.mode;
		b.w = w_;
		b.origin = origin;
		b.parent_hc = parent->h_c();
		b.parent_cost = parent->cost;
		b.parent_f_min = &parent->f_min;
		b.child_hc = child.h_c();
		b.child_cost = child.cost;
		b.child_path_costs = &costs;
		b.lower_bound = queues_.lower_bound();
		return mapf::bypass_allowed(b);
	}

	void enqueue(CTNode* n)
	{
		n->lbh = n->lb + n->h;
		n->fhat = config_.mode == Mode::EECBS ? n->cost + n->h_hat : n->cost;
		n->hc = n->h_c();
		queues_.push(n);
	}

	void learn(const CTNode* parent, const std::vector<std::unique_ptr<CTNode>>& children)
	{
		const CTNode* best = children.front().get();
		for (const auto& c : children)
		{
			// error learning compares children on cost + current estimate
			const double fc = c->cost + errors_.estimate(c->h_c());
			const double fb = best->cost + errors_.estimate(best->h_c());
			if (fc < fb - kEps || (std::abs(fc - fb) <= kEps && c->h_c() < best->h_c()))
				best = c.get();
		}
		const auto [eps_d, eps_h] = one_step_errors(parent->h_c(), parent->cost, best->h_c(), best->cost);
		errors_.observe(eps_d, eps_h);
	}

	// ---- constraints and planning -------------------------------------------------

	std::vector<const std::vector<Constraint>*> ancestry(const CTNode* node) const
	{
		std::vector<const std::vector<Constraint>*> chain;
		for (const CTNode* n = node; n; n = n->parent)
			if (!n->constraints.empty())
				chain.push_back(&n->constraints);
		chain.push_back(&root_constraints_);
		std::reverse(chain.begin(), chain.end());
		return chain;
	}

	std::vector<Constraint> binding(const CTNode* node, int agent) const
	{
		std::vector<Constraint> out;
		for (const auto* list : ancestry(node))
			for (const auto& c : *list)
				for (auto& b : constraints_binding(c, agent))
					out.push_back(std::move(b));
		return out;
	}

	ConstraintTable table_for(const std::vector<Constraint>& bound, int agent) const
	{
		ConstraintTable table;
		for (const auto& c : bound)
			table.add(c, agent);
		return table;
	}

	ConflictAvoidanceTable cat_for(const std::vector<std::shared_ptr<const Path>>& paths, int agent) const
	{
		ConflictAvoidanceTable cat(instance_.map().num_cells());
		for (int k = 0; k < m_; ++k)
			if (k != agent && paths[k])
				cat.add_path(*paths[k]);
		return cat;
	}

	LowLevelResult plan(int agent, const ConstraintTable& table, const ConflictAvoidanceTable& cat, int hint)
	{
		LowLevelResult r = plan_path(instance_.map(), instance_.agent(agent), instance_.goal_distances(agent), table,
		                             &cat, w_, hint, &deadline_);
		++stats_.low_level_calls;
		stats_.low_level_expansions += r.expansions;
		if (r.status == PlanStatus::Timeout)
			throw TimeoutSignal();
		if (config_.on_low_level)
			config_.on_low_level({&instance_, agent, &table, w_, &r});
		return r;
	}

	CTNode* make_root()
	{
		auto root = std::make_unique<CTNode>();
		root->id = next_id_++;
		root->paths.assign(m_, nullptr);
		root->f_min.assign(m_, 0);
		std::vector<int> order(m_);
		std::iota(order.begin(), order.end(), 0);
		if (config_.seed != 0)
		{
			std::mt19937_64 rng(config_.seed);
			std::shuffle(order.begin(), order.end(), rng);
		}
		for (int a : order)
		{
			const ConstraintTable table = table_for(binding(root.get(), a), a);
			const ConflictAvoidanceTable cat = cat_for(root->paths, a);
			LowLevelResult r = plan(a, table, cat, 0);
			if (!r.found())
				return nullptr;
			root->paths[a] = std::make_shared<const Path>(std::move(r.path));
			root->f_min[a] = r.f_min;
		}
		std::vector<const Path*> raw;
		for (const auto& p : root->paths)
			raw.push_back(p.get());
		root->conflicts = detect_conflicts(raw);
		refresh_totals(*root);
		stats_.root_lb = root->lb;
		stats_.root_cost = root->cost;
		for (const auto& p : root->paths)
			stats_.root_costs.push_back(path_cost(*p));
		CTNode* out = root.get();
		nodes_.push_back(std::move(root));
		return out;
	}

	void refresh_totals(CTNode& n) const
	{
		n.cost = 0;
		n.lb = 0;
		for (int i = 0; i < m_; ++i)
		{
			n.cost += path_cost(*n.paths[i]);
			n.lb += n.f_min[i];
		}
	}

	std::unique_ptr<CTNode> generate_child(CTNode* parent, const std::vector<Constraint>& constraints)
	{
		auto child = std::make_unique<CTNode>();
		child->id = next_id_++;
		child->parent = parent;
		child->constraints = constraints;
		child->paths = parent->paths;
		child->f_min = parent->f_min;
		child->depth = parent->depth + 1;

		std::vector<char> replan(m_, 0);
		for (const auto& c : constraints)
		{
			for (int k = 0; k < m_; ++k)
				if (!replan[k] && violates(c, k, *child->paths[k]))
					replan[k] = 1;
		}
		for (int a = 0; a < m_; ++a)
		{
			if (!replan[a])
				continue;
			const ConstraintTable table = table_for(binding(child.get(), a), a);
			const ConflictAvoidanceTable cat = cat_for(child->paths, a);
			LowLevelResult r = plan(a, table, cat, child->f_min[a]);
			if (!r.found())
				return nullptr;
			child->paths[a] = std::make_shared<const Path>(std::move(r.path));
			child->f_min[a] = std::max(child->f_min[a], r.f_min);
		}

		for (const auto& c : parent->conflicts)
			if (!replan[c.a1] && !replan[c.a2])
				child->conflicts.push_back(c);
		for (int a = 0; a < m_; ++a)
		{
			if (!replan[a])
				continue;
			for (int b = 0; b < m_; ++b)
			{
				if (b == a || (replan[b] && b < a))
					continue;
				const int i = std::min(a, b);
				const int j = std::max(a, b);
				detect_pair_conflicts(i, j, *child->paths[i], *child->paths[j], child->conflicts);
			}
		}
		refresh_totals(*child);
		child->h = std::max(0, parent->lb + parent->h - child->lb);
		return child;
	}

	// ---- conflict analysis ---------------------------------------------------------

	void analyze_conflicts(CTNode* node, Origin origin)
	{
		if (!config_.prioritize && !config_.symmetry)
			return;
		std::vector<std::optional<std::vector<Constraint>>> bound(m_);
		auto bound_for = [&](int a) -> const std::vector<Constraint>& {
			if (!bound[a])
				bound[a] = binding(node, a);
			return *bound[a];
		};
		auto optimal = [&](int a) { return path_cost(*node->paths[a]) == node->f_min[a]; };

		for (auto& c : node->conflicts)
		{
			const bool classifiable = origin == Origin::Cleanup || optimal(c.a1) || optimal(c.a2);
			if (c.analyzed && !(config_.prioritize && c.priority == ConflictPriority::Unclassified && classifiable))
				continue;
			const Path& p1 = *node->paths[c.a1];
			const Path& p2 = *node->paths[c.a2];
			if (config_.prioritize)
			{
				if (classifiable)
				{
					const auto m1 = mdd_for(c.a1, bound_for(c.a1), node->f_min[c.a1]);
					const auto m2 = mdd_for(c.a2, bound_for(c.a2), node->f_min[c.a2]);
					c.priority = classify_conflict(c, m1.get(), instance_.agent(c.a1).goal, m2.get(),
					                               instance_.agent(c.a2).goal);
				}
				else
				{
					c.priority = ConflictPriority::Unclassified;
				}
			}
			if (config_.symmetry && !c.analyzed)
			{
				if (auto s = detect_target(instance_, c, p1, p2))
				{
					c.symmetry = SymmetryKind::Target;
					c.symmetric_split = std::move(*s);
				}
				else if (auto s2 = detect_corridor(instance_, c, p1, p2))
				{
					c.symmetry = SymmetryKind::Corridor;
					c.symmetric_split = std::move(*s2);
				}
				else if (optimal(c.a1) && optimal(c.a2))
				{
					if (auto s3 = detect_rectangle(instance_, c, p1, p2))
					{
						c.symmetry = SymmetryKind::Rectangle;
						c.symmetric_split = std::move(*s3);
					}
				}
			}
			c.analyzed = true;
		}
	}

	std::shared_ptr<const MDD> mdd_for(int agent, const std::vector<Constraint>& bound, int cost)
	{
		if (auto hit = mdds_.find(agent, bound, cost))
			return hit;
		const ConstraintTable table = table_for(bound, agent);
		auto mdd = std::make_shared<const MDD>(
			build_mdd(instance_.map(), instance_.agent(agent), instance_.goal_distances(agent), table, cost));
		mdds_.insert(agent, bound, cost, mdd);
		return mdd;
	}

	void note_split(const CTNode* node, const Conflict& c, const std::array<std::vector<Constraint>, 2>& split)
	{
		switch (c.symmetry)
		{
		case SymmetryKind::None:
			return;
		case SymmetryKind::Rectangle:
			++stats_.rectangle_splits;
			break;
		case SymmetryKind::Corridor:
			++stats_.corridor_splits;
			break;
		case SymmetryKind::Target:
			++stats_.target_splits;
			break;
		}
		if (!config_.on_split)
			return;
		SplitEvent e;
		e.instance = &instance_;
		e.conflict = &c;
		for (const auto* list : ancestry(node))
			e.node_constraints.insert(e.node_constraints.end(), list->begin(), list->end());
		e.children = split;
		e.path1 = node->paths[c.a1].get();
		e.path2 = node->paths[c.a2].get();
		config_.on_split(e);
	}

	// ---- WDG -------------------------------------------------------------------------

	bool compute_heuristic(CTNode* node)
	{
		const auto started = std::chrono::steady_clock::now();
		std::set<std::pair<int, int>> unique;
		for (const auto& c : node->conflicts)
			unique.insert({c.a1, c.a2});
		const std::vector<std::pair<int, int>> pairs(unique.begin(), unique.end());
		const WdgValue v = compute_wdg_h(pairs, node->f_min, [&](int i, int j) {
			PairCache::Key key{i, j, binding(node, i), binding(node, j)};
			if (const PairResult* hit = pair_cache_.find(key))
			{
				++stats_.wdg_cache_hits;
				return *hit;
			}
			++stats_.wdg_pair_solves;
			const PairResult r = solve_two_agent(instance_, i, j, key.ci, key.cj, config_.wdg_node_limit, &deadline_);
			if (deadline_.expired())
				throw TimeoutSignal();
			pair_cache_.insert(std::move(key), r);
			return r;
		});
		stats_.wdg_runtime_ms +=
			std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
		if (v.infeasible)
			return false;
		node->h = std::max(node->h, v.h);
		return true;
	}

	const Instance& instance_;
	const SolverConfig& config_;
	const std::vector<Constraint>& root_constraints_;
	Deadline deadline_;
	QueueSet queues_;
	double w_;
	int m_;
	int next_id_ = 0;
	ErrorModel errors_;
	MDDCache mdds_;
	PairCache pair_cache_;
	SolverStats stats_;
	std::vector<std::unique_ptr<CTNode>> nodes_;
};

} // namespace

SolveResult solve(const Instance& instance, const SolverConfig& config, const std::vector<Constraint>& root_constraints,
                  const Deadline* outer)
{
	if (const std::string err = check_config(config); !err.empty())
		throw std::invalid_argument(err);
	Deadline deadline = Deadline::after(config.time_limit);
	if (outer)
		deadline = Deadline::earliest(deadline, *outer);
	Engine engine(instance, config, root_constraints, deadline);
	return engine.run();
}

} // namespace mapf
