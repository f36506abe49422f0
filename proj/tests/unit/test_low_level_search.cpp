#include <functional>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "mapf/low_level.hpp"
#include "oracles.hpp"

using namespace mapf;

namespace {

int conflicts_of(const ConflictAvoidanceTable& cat, const Path& p)
{
	int d = 0;
	for (int t = 1; t < static_cast<int>(p.size()); ++t)
		d += cat.count_conflicts(p[t - 1], p[t], t);
	return d + cat.future_conflicts(p.back(), path_cost(p));
}

// Fewest conflicts over every table-satisfying path of exactly `cost` moves.
int min_conflicts_at_cost(const GridMap& map, const Agent& agent, const ConstraintTable& table,
                          const ConflictAvoidanceTable& cat, int cost)
{
	int best = INT_MAX;
	Path p{agent.start};
	std::function<void()> extend = [&] {
		const int t = path_cost(p);
		if (map.manhattan(p.back(), agent.goal) > cost - t)
			return;
		if (t == cost)
		{
			if (oracle::path_satisfies_table(map, agent, table, p))
				best = std::min(best, conflicts_of(cat, p));
			return;
		}
		std::vector<CellId> options{p.back()};
		for (CellId n : map.neighbors(p.back()))
			options.push_back(n);
		for (CellId n : options)
		{
			p.push_back(n);
			extend();
			p.pop_back();
		}
	};
	extend();
	return best;
}

Path random_route(const GridMap& map, const Agent& a, std::mt19937_64& rng)
{
	Path p{a.start};
	const DistanceTable d = bfs_distances(map, a.goal);
	while (p.back() != a.goal)
	{
		std::vector<CellId> options{p.back()};
		for (CellId n : map.neighbors(p.back()))
			if (d[n] < d[p.back()])
				options.push_back(n);
		p.push_back(options[rng() % options.size()]);
	}
	return p;
}

} // namespace

TEST_CASE("unconstrained query returns the exact distance")
{
	const GridMap m = fixtures::empty_grid(4, 4);
	const Instance inst = fixtures::instance(m, {{{0, 0}, {3, 3}}});
	const auto r = plan_path(m, inst.agent(0), inst.goal_distances(0), ConstraintTable{}, nullptr, 1.5);
	REQUIRE(r.found());
	CHECK(path_cost(r.path) == 6);
	CHECK(r.f_min == 6);
	CHECK(validate_solution(inst, {r.path}).empty());
}

TEST_CASE("blocked first moves force a wait")
{
	const GridMap m = fixtures::empty_grid(4, 4);
	const Instance inst = fixtures::instance(m, {{{0, 0}, {3, 3}}});
	ConstraintTable table;
	table.add({0, VertexConstraint{m.id(0, 1), 1}}, 0);
	table.add({0, VertexConstraint{m.id(1, 0), 1}}, 0);
	const auto r = plan_path(m, inst.agent(0), inst.goal_distances(0), table, nullptr, 1.5);
	REQUIRE(r.found());
	CHECK(path_cost(r.path) == 7);
	CHECK(r.f_min == 7);
	CHECK(r.path[1] == m.id(0, 0));
	CHECK(oracle::constrained_optimum(m, inst.agent(0), table) == 7);
}

TEST_CASE("focal search takes a conflict-free detour within the bound")
{
	const GridMap m = fixtures::grid({".....", ".@@@.", "....."});
	const Instance inst = fixtures::instance(m, {{{0, 0}, {0, 4}}});
	ConflictAvoidanceTable cat(m.num_cells());
	cat.add_path(fixtures::path_of(m, {{0, 2}})); // parked on the only shortest route

	const auto wide = plan_path(m, inst.agent(0), inst.goal_distances(0), ConstraintTable{}, &cat, 2.0);
	REQUIRE(wide.found());
	CHECK(wide.f_min == 4);
	CHECK(path_cost(wide.path) <= 8);
	CHECK(wide.conflicts == 0);
	CHECK(conflicts_of(cat, wide.path) == 0);

	const auto tight = plan_path(m, inst.agent(0), inst.goal_distances(0), ConstraintTable{}, &cat, 1.5);
	REQUIRE(tight.found());
	CHECK(path_cost(tight.path) <= 6);
	CHECK(tight.conflicts == conflicts_of(cat, tight.path));
	CHECK(tight.conflicts >= 1);
}

TEST_CASE("shortest path examples")
{
	const GridMap m = fixtures::grid({"....", ".@@.", "...@"});
	const Instance inst = fixtures::instance(m, {{{0, 0}, {2, 2}}, {{0, 1}, {0, 3}}});
	const auto r = plan_shortest_path(m, inst.agent(0), inst.goal_distances(0), ConstraintTable{});
	REQUIRE(r.found());
	CHECK(path_cost(r.path) == inst.goal_distances(0)[inst.agent(0).start]);

	ConstraintTable at_least;
	at_least.add({1, LengthAtLeastConstraint{7}}, 1);
	const auto padded = plan_shortest_path(m, inst.agent(1), inst.goal_distances(1), at_least);
	REQUIRE(padded.found());
	CHECK(path_cost(padded.path) == 7);
	CHECK(padded.f_min == 7);
	CHECK(oracle::path_satisfies_table(m, inst.agent(1), at_least, padded.path));

	const GridMap split = fixtures::grid({".@.", ".@."});
	const Instance cut = fixtures::instance(split, {{{0, 0}, {0, 2}}});
	CHECK(plan_shortest_path(split, cut.agent(0), cut.goal_distances(0), ConstraintTable{}).status ==
	      PlanStatus::Infeasible);

	// a goal blocked forever by another agent's length bound
	ConstraintTable forever;
	forever.add({1, LengthAtMostConstraint{3, m.id(2, 2)}}, 0);
	CHECK(plan_shortest_path(m, inst.agent(0), inst.goal_distances(0), forever).status == PlanStatus::Infeasible);

	ConstraintTable too_short;
	too_short.add({0, LengthAtMostConstraint{2, m.id(2, 2)}}, 0);
	CHECK(plan_shortest_path(m, inst.agent(0), inst.goal_distances(0), too_short).status == PlanStatus::Infeasible);
}

TEST_CASE("expired deadline stops a large search")
{
	const GridMap m = fixtures::empty_grid(200, 200);
	const Instance inst = fixtures::instance(m, {{{0, 0}, {199, 199}}});
	ConstraintTable table;
	table.add({0, RangeConstraint{m.id(199, 199), 1, 100000}}, 0);
	const Deadline past = Deadline::after(1e-9);
	const auto r = plan_path(m, inst.agent(0), inst.goal_distances(0), table, nullptr, 1.0, 0, &past);
	CHECK(r.status == PlanStatus::Timeout);
}

TEST_CASE("cost bound chain on random constrained queries")
{
	std::mt19937_64 rng(23);
	int checked = 0;
	for (int trial = 0; trial < 500; ++trial)
	{
		const GridMap m = oracle::random_grid(5 + trial % 3, 5, 0.15, rng);
		auto inst = oracle::random_instance(m, 2, rng);
		if (!inst)
			continue;
		ConstraintTable table;
		std::uniform_int_distribution<int> cell(0, m.num_cells() - 1), t(1, 10), kind(0, 3);
		for (int k = 0; k < 1 + trial % 8; ++k)
		{
			const CellId c = cell(rng);
			if (m.blocked(c))
				continue;
			switch (kind(rng))
			{
			case 0:
				table.add({0, VertexConstraint{c, t(rng)}}, 0);
				break;
			case 1:
				if (!m.neighbors(c).empty())
					table.add({0, EdgeConstraint{c, m.neighbors(c)[0], t(rng)}}, 0);
				break;
			case 2:
			{
				const int lo = t(rng);
				table.add({0, RangeConstraint{c, lo, lo + t(rng) % 4}}, 0);
				break;
			}
			default:
				table.add({0, LengthAtLeastConstraint{t(rng)}}, 0);
				break;
			}
		}
		ConflictAvoidanceTable cat(m.num_cells());
		cat.add_path(random_route(m, inst->agent(1), rng));

		const auto opt = oracle::constrained_optimum(m, inst->agent(0), table);
		const auto shortest = plan_shortest_path(m, inst->agent(0), inst->goal_distances(0), table);
		REQUIRE(shortest.found() == opt.has_value());
		if (!opt)
			continue;
		CHECK(path_cost(shortest.path) == *opt);
		CHECK(oracle::path_satisfies_table(m, inst->agent(0), table, shortest.path));

		for (const auto [num, den] : {std::pair{1, 1}, {21, 20}, {6, 5}, {2, 1}})
		{
			const double w = double(num) / den;
			const auto r = plan_path(m, inst->agent(0), inst->goal_distances(0), table, &cat, w);
			REQUIRE(r.found());
			const int cost = path_cost(r.path);
			CHECK(r.f_min <= *opt);
			CHECK(*opt <= cost);
			CHECK(cost * den <= num * r.f_min);
			CHECK(oracle::path_satisfies_table(m, inst->agent(0), table, r.path));
			CHECK(r.conflicts == conflicts_of(cat, r.path));
			if (num == den)
			{
				CHECK(cost == *opt);
				if (*opt <= 11)
					CHECK(r.conflicts == min_conflicts_at_cost(m, inst->agent(0), table, cat, *opt));
			}
			++checked;
		}
	}
	CHECK(checked > 1000);
}

TEST_CASE("travel time with a removed edge")
{
	const GridMap m = fixtures::grid({"...", ".@.", "..."});
	CHECK(travel_time(m, m.id(0, 0), m.id(0, 2), kNoCell, kNoCell, 100) == 2);
	CHECK(travel_time(m, m.id(0, 0), m.id(0, 2), m.id(0, 0), m.id(0, 1), 100) == 6);
	CHECK(travel_time(m, m.id(0, 0), m.id(0, 2), m.id(0, 1), m.id(0, 0), 100) == 6);
	CHECK(travel_time(m, m.id(0, 0), m.id(0, 2), m.id(0, 1), m.id(0, 0), 5) == kForever);
}
