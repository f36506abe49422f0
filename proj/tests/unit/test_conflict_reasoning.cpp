#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "mapf/conflict.hpp"
#include "mapf/low_level.hpp"
#include "oracles.hpp"

using namespace mapf;
using fixtures::path_of;

namespace {

Conflict vertex_conflict(int a1, int a2, CellId cell, int t, ConflictPriority p = ConflictPriority::Unclassified)
{
	Conflict c;
	c.a1 = a1;
	c.a2 = a2;
	c.cell = cell;
	c.to = kNoCell;
	c.t = t;
	c.priority = p;
	return c;
}

// Three rows with a one-cell-wide corridor in the middle row between two rooms.
GridMap corridor_map()
{
	return fixtures::grid({"..@@@@@..", ".........", "..@@@@@.."});
}

Path shortest(const Instance& inst, int a)
{
	return plan_shortest_path(inst.map(), inst.agent(a), inst.goal_distances(a), ConstraintTable{}).path;
}

} // namespace

TEST_CASE("detect_conflicts matches the validator examples")
{
	const GridMap m = fixtures::empty_grid(2, 2);
	const Path a = path_of(m, {{0, 0}, {0, 1}});
	const Path b = path_of(m, {{0, 1}, {0, 0}});
	auto swap = detect_conflicts({&a, &b});
	REQUIRE(swap.size() == 1);
	CHECK(swap[0].kind == Conflict::Kind::Edge);
	CHECK(swap[0].t == 1);
	CHECK(swap[0].cell == m.id(0, 0));
	CHECK(swap[0].to == m.id(0, 1));

	const Path c = path_of(m, {{1, 1}, {0, 1}});
	auto vertex = detect_conflicts({&a, &c});
	REQUIRE(vertex.size() == 1);
	CHECK(vertex[0].kind == Conflict::Kind::Vertex);
	CHECK(vertex[0].cell == m.id(0, 1));
	CHECK(vertex[0].t == 1);

	const Path parked = path_of(m, {{0, 0}});
	const Path passing = path_of(m, {{1, 0}, {0, 0}, {0, 1}});
	auto stay = detect_conflicts({&parked, &passing});
	REQUIRE(stay.size() == 1);
	CHECK(stay[0].cell == m.id(0, 0));
	CHECK(stay[0].t == 1);

	const Path d = path_of(m, {{1, 0}, {1, 1}});
	CHECK(detect_conflicts({&a, &d}).empty());
}

TEST_CASE("detect_conflicts agrees with the validator on random paths")
{
	std::mt19937_64 rng(8);
	for (int trial = 0; trial < 200; ++trial)
	{
		const GridMap m = oracle::random_grid(4, 4, 0.1, rng);
		auto inst = oracle::random_instance(m, 3, rng);
		if (!inst)
			continue;
		Solution s;
		for (int a = 0; a < 3; ++a)
		{
			Path p = shortest(*inst, a);
			const int waits = static_cast<int>(rng() % 3);
			p.insert(p.begin(), waits, p.front());
			s.push_back(p);
		}
		std::vector<const Path*> raw;
		for (const auto& p : s)
			raw.push_back(&p);
		const auto conflicts = detect_conflicts(raw);
		const auto violations = validate_solution(*inst, s);
		REQUIRE(conflicts.size() == violations.size());
		for (std::size_t k = 0; k < conflicts.size(); ++k)
		{
			CHECK(conflicts[k].a1 == violations[k].agent1);
			CHECK(conflicts[k].a2 == violations[k].agent2);
			CHECK(conflicts[k].t == violations[k].timestep);
		}
	}
}

TEST_CASE("rectangle example has a vertex conflict inside the rectangle")
{
	const Instance inst = fixtures::rectangle_example();
	const GridMap& m = inst.map();
	const Path a = path_of(m, {{0, 2}, {1, 2}, {2, 2}, {3, 2}, {4, 2}, {5, 2}, {5, 3}, {5, 4}});
	const Path b = path_of(m, {{2, 0}, {2, 1}, {2, 2}, {2, 3}, {2, 4}, {2, 5}, {3, 5}, {4, 5}});
	const auto conflicts = detect_conflicts({&a, &b});
	REQUIRE_FALSE(conflicts.empty());
	const Cell at = m.cell(conflicts[0].cell);
	CHECK(conflicts[0].kind == Conflict::Kind::Vertex);
	CHECK(at.row >= 2);
	CHECK(at.row <= 4);
	CHECK(at.col >= 2);
	CHECK(at.col <= 4);

	const auto split = detect_rectangle(inst, conflicts[0], a, b);
	REQUIRE(split.has_value());
	for (int k = 0; k < 2; ++k)
	{
		REQUIRE((*split)[k].size() == 1);
		CHECK(std::holds_alternative<BarrierConstraint>((*split)[k][0].kind));
		CHECK(violates((*split)[k][0], (*split)[k][0].agent, k == 0 ? a : b));
	}
	CHECK((*split)[0][0].agent == 0);
	CHECK((*split)[1][0].agent == 1);

	// each child still admits a path of cost 8 for the constrained agent: exactly one wait
	for (int k = 0; k < 2; ++k)
	{
		ConstraintTable table;
		table.add_all((*split)[k], k);
		CHECK(oracle::constrained_optimum(m, inst.agent(k), table) == 8);
	}
}

TEST_CASE("rectangle needs compatible directions and shortest paths")
{
	const GridMap m = fixtures::empty_grid(6, 6);
	// opposite directions along both axes
	const Instance opposite = fixtures::instance(m, {{{0, 2}, {5, 4}}, {{4, 5}, {2, 0}}});
	const Path a = path_of(m, {{0, 2}, {1, 2}, {2, 2}, {3, 2}, {4, 2}, {5, 2}, {5, 3}, {5, 4}});
	const Path b = path_of(m, {{4, 5}, {4, 4}, {4, 3}, {4, 2}, {3, 2}, {2, 2}, {2, 1}, {2, 0}});
	for (const auto& c : detect_conflicts({&a, &b}))
		CHECK_FALSE(detect_rectangle(opposite, c, a, b).has_value());

	const Instance inst = fixtures::rectangle_example();
	const Path slow = path_of(m, {{0, 2}, {0, 2}, {1, 2}, {2, 2}, {3, 2}, {4, 2}, {5, 2}, {5, 3}, {5, 4}});
	const Path fast = path_of(m, {{2, 0}, {2, 1}, {2, 2}, {2, 3}, {2, 4}, {2, 5}, {3, 5}, {4, 5}});
	// the waiting agent sits on (3,2) at timestep 4
	CHECK_FALSE(detect_rectangle(inst, vertex_conflict(0, 1, m.id(3, 2), 4), slow, fast).has_value());
}

TEST_CASE("corridor detection")
{
	const GridMap m = corridor_map();
	const Instance inst = fixtures::instance(m, {{{1, 0}, {1, 8}}, {{1, 8}, {1, 0}}});
	const Path a = shortest(inst, 0);
	const Path b = shortest(inst, 1);
	const auto conflicts = detect_conflicts({&a, &b});
	REQUIRE_FALSE(conflicts.empty());
	const auto split = detect_corridor(inst, conflicts[0], a, b);
	REQUIRE(split.has_value());
	for (int k = 0; k < 2; ++k)
	{
		REQUIRE((*split)[k].size() == 1);
		CHECK((*split)[k][0].agent == k);
		CHECK(std::holds_alternative<RangeConstraint>((*split)[k][0].kind));
		CHECK(violates((*split)[k][0], k, k == 0 ? a : b));
	}

	// same direction: one agent follows the other through the corridor
	const Instance follow = fixtures::instance(m, {{{1, 1}, {1, 8}}, {{1, 0}, {1, 7}}});
	const Path lead = path_of(m, {{1, 1}, {1, 2}, {1, 3}, {1, 4}, {1, 5}, {1, 6}, {1, 7}, {1, 8}});
	const Path tail = path_of(m, {{1, 0}, {1, 1}, {1, 1}, {1, 2}, {1, 3}, {1, 4}, {1, 5}, {1, 6}, {1, 7}});
	for (const auto& c : detect_conflicts({&lead, &tail}))
		CHECK_FALSE(detect_corridor(follow, c, lead, tail).has_value());
	Conflict forced = vertex_conflict(0, 1, m.id(1, 4), 4);
	CHECK_FALSE(detect_corridor(follow, forced, lead, tail).has_value());

	// open space
	const Instance open = fixtures::rectangle_example();
	const GridMap& om = open.map();
	const Path p = path_of(om, {{0, 2}, {1, 2}, {2, 2}, {3, 2}, {4, 2}, {5, 2}, {5, 3}, {5, 4}});
	const Path q = path_of(om, {{2, 0}, {2, 1}, {2, 2}, {2, 3}, {2, 4}, {2, 5}, {3, 5}, {4, 5}});
	for (const auto& c : detect_conflicts({&p, &q}))
		CHECK_FALSE(detect_corridor(open, c, p, q).has_value());
}

TEST_CASE("target detection")
{
	const GridMap m = fixtures::empty_grid(3, 12);
	const Instance inst = fixtures::instance(m, {{{1, 0}, {1, 5}}, {{2, 0}, {0, 5}}});
	const Path pi = path_of(m, {{1, 0}, {1, 1}, {1, 2}, {1, 3}, {1, 4}, {1, 5}});
	const Path pj = path_of(m, {{2, 0}, {2, 1}, {2, 2}, {2, 3}, {2, 4}, {2, 5}, {2, 5}, {2, 5}, {1, 5}, {0, 5}});
	const auto conflicts = detect_conflicts({&pi, &pj});
	REQUIRE(conflicts.size() == 1);
	CHECK(conflicts[0].t == 8);
	const auto split = detect_target(inst, conflicts[0], pi, pj);
	REQUIRE(split.has_value());
	REQUIRE((*split)[0].size() == 1);
	REQUIRE((*split)[1].size() == 1);
	CHECK((*split)[0][0] == Constraint{0, LengthAtLeastConstraint{9}});
	CHECK((*split)[1][0] == Constraint{0, LengthAtMostConstraint{8, m.id(1, 5)}});
	// the goal block applies to the other agent from timestep 8 on
	CHECK(violates((*split)[1][0], 1, pj));
	CHECK_FALSE(violates((*split)[1][0], 0, pi));

	// a_j crosses g_i before a_i gets there
	const Path early = path_of(m, {{2, 0}, {2, 1}, {2, 2}, {1, 2}, {1, 3}, {1, 4}, {1, 5}, {0, 5}});
	const Conflict before = vertex_conflict(0, 1, m.id(1, 5), 3);
	CHECK_FALSE(detect_target(inst, before, pi, early).has_value());
}

TEST_CASE("classification examples")
{
	const GridMap m = corridor_map();
	const Instance inst = fixtures::instance(m, {{{1, 0}, {1, 8}}, {{1, 8}, {1, 0}}});
	const Path a = shortest(inst, 0);
	const Path b = shortest(inst, 1);
	const auto conflicts = detect_conflicts({&a, &b});
	REQUIRE_FALSE(conflicts.empty());
	const MDD m0 = build_mdd(m, inst.agent(0), inst.goal_distances(0), ConstraintTable{}, 8);
	const MDD m1 = build_mdd(m, inst.agent(1), inst.goal_distances(1), ConstraintTable{}, 8);
	CHECK(classify_conflict(conflicts[0], &m0, inst.agent(0).goal, &m1, inst.agent(1).goal) ==
	      ConflictPriority::Cardinal);

	const GridMap open = fixtures::empty_grid(5, 5);
	const Instance cross = fixtures::instance(open, {{{0, 0}, {4, 4}}, {{0, 4}, {4, 0}}});
	const MDD c0 = build_mdd(open, cross.agent(0), cross.goal_distances(0), ConstraintTable{}, 8);
	const MDD c1 = build_mdd(open, cross.agent(1), cross.goal_distances(1), ConstraintTable{}, 8);
	const Conflict centre = vertex_conflict(0, 1, open.id(2, 2), 4);
	CHECK(classify_conflict(centre, &c0, cross.agent(0).goal, &c1, cross.agent(1).goal) ==
	      ConflictPriority::NonCardinal);
	CHECK(classify_conflict(centre, nullptr, cross.agent(0).goal, nullptr, cross.agent(1).goal) ==
	      ConflictPriority::NonCardinal);
}

TEST_CASE("cardinal sides are exactly the sides whose cost rises")
{
	std::mt19937_64 rng(31);
	int cardinal_sides = 0;
	int sides = 0;
	for (int trial = 0; trial < 300; ++trial)
	{
		const GridMap m = oracle::random_grid(5, 5, 0.25, rng);
		auto inst = oracle::random_instance(m, 2, rng);
		if (!inst)
			continue;
		const Path p0 = shortest(*inst, 0);
		const Path p1 = shortest(*inst, 1);
		const MDD m0 = build_mdd(m, inst->agent(0), inst->goal_distances(0), ConstraintTable{}, path_cost(p0));
		const MDD m1 = build_mdd(m, inst->agent(1), inst->goal_distances(1), ConstraintTable{}, path_cost(p1));
		for (const auto& c : detect_conflicts({&p0, &p1}))
		{
			const auto priority = classify_conflict(c, &m0, inst->agent(0).goal, &m1, inst->agent(1).goal);
			const auto split = standard_split(c);
			bool rises[2];
			for (int k = 0; k < 2; ++k)
			{
				ConstraintTable table;
				table.add_all(split[k], k);
				const auto opt = oracle::constrained_optimum(m, inst->agent(k), table);
				rises[k] = !opt || *opt > path_cost(k == 0 ? p0 : p1);
				cardinal_sides += rises[k];
				++sides;
			}
			const int count = rises[0] + rises[1];
			CHECK(priority == (count == 2   ? ConflictPriority::Cardinal
			                   : count == 1 ? ConflictPriority::SemiCardinal
			                                : ConflictPriority::NonCardinal));
		}
	}
	CHECK(cardinal_sides > 20);
	CHECK(sides > cardinal_sides);
}

TEST_CASE("conflict choice order")
{
	std::vector<Conflict> cs{vertex_conflict(0, 1, 3, 2, ConflictPriority::NonCardinal),
	                         vertex_conflict(1, 2, 4, 7, ConflictPriority::Cardinal)};
	CHECK(choose_conflict(cs) == 1);

	std::vector<Conflict> unclassified{vertex_conflict(0, 1, 3, 5), vertex_conflict(1, 2, 4, 2),
	                                   vertex_conflict(0, 2, 5, 2)};
	CHECK(choose_conflict(unclassified) == 2);

	std::vector<Conflict> semi{vertex_conflict(0, 1, 3, 5, ConflictPriority::SemiCardinal),
	                           vertex_conflict(1, 2, 4, 1, ConflictPriority::NonCardinal),
	                           vertex_conflict(0, 2, 5, 9, ConflictPriority::Unclassified)};
	CHECK(choose_conflict(semi) == 0);

	// symmetric conflicts come first
	std::vector<Conflict> sym{vertex_conflict(0, 1, 3, 1, ConflictPriority::Cardinal),
	                          vertex_conflict(1, 2, 4, 9, ConflictPriority::NonCardinal)};
	sym[1].symmetry = SymmetryKind::Target;
	CHECK(choose_conflict(sym) == 1);
}
