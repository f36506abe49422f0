#include "mapf/conflict.hpp"

#include <algorithm>
#include <tuple>

#include "mapf/low_level.hpp"

namespace mapf {

const char* to_string(ConflictPriority p)
{
	switch (p)
	{
	case ConflictPriority::Cardinal:
		return "cardinal";
	case ConflictPriority::SemiCardinal:
		return "semi-cardinal";
	case ConflictPriority::NonCardinal:
		return "non-cardinal";
	case ConflictPriority::Unclassified:
		return "unclassified";
	}
	return "?";
}

const char* to_string(SymmetryKind s)
{
	switch (s)
	{
	case SymmetryKind::None:
		return "none";
	case SymmetryKind::Rectangle:
		return "rectangle";
	case SymmetryKind::Corridor:
		return "corridor";
	case SymmetryKind::Target:
		return "target";
	}
	return "?";
}

std::array<std::vector<Constraint>, 2> standard_split(const Conflict& c)
{
	if (c.kind == Conflict::Kind::Vertex)
		return {std::vector{Constraint{c.a1, VertexConstraint{c.cell, c.t}}},
		        std::vector{Constraint{c.a2, VertexConstraint{c.cell, c.t}}}};
	return {std::vector{Constraint{c.a1, EdgeConstraint{c.cell, c.to, c.t}}},
	        std::vector{Constraint{c.a2, EdgeConstraint{c.to, c.cell, c.t}}}};
}

std::array<std::vector<Constraint>, 2> split_for(const Conflict& c)
{
	return c.symmetry == SymmetryKind::None ? standard_split(c) : c.symmetric_split;
}

void detect_pair_conflicts(int i, int j, const Path& pi, const Path& pj, std::vector<Conflict>& out)
{
	const int horizon = std::max(path_cost(pi), path_cost(pj));
	for (int t = 1; t <= horizon; ++t)
	{
		const CellId a = location_at(pi, t);
		const CellId b = location_at(pj, t);
		if (a == b)
		{
			Conflict c;
			c.a1 = i;
			c.a2 = j;
			c.kind = Conflict::Kind::Vertex;
			c.cell = a;
			c.t = t;
			out.push_back(std::move(c));
		}
		else if (a == location_at(pj, t - 1) && b == location_at(pi, t - 1))
		{
			Conflict c;
			c.a1 = i;
			c.a2 = j;
			c.kind = Conflict::Kind::Edge;
			c.cell = b;
			c.to = a;
			c.t = t;
			out.push_back(std::move(c));
		}
	}
}

std::vector<Conflict> detect_conflicts(const std::vector<const Path*>& paths)
{
	std::vector<Conflict> out;
	for (int i = 0; i < static_cast<int>(paths.size()); ++i)
		for (int j = i + 1; j < static_cast<int>(paths.size()); ++j)
			detect_pair_conflicts(i, j, *paths[i], *paths[j], out);
	return out;
}

namespace {

bool cardinal_side(const Conflict& c, const MDD* mdd, CellId goal, bool first)
{
	if (!mdd || mdd->empty())
		return false;
	const int cost = mdd->cost();
	if (c.kind == Conflict::Kind::Vertex)
	{
		if (c.t > cost)
			return c.cell == goal;
		return mdd->is_singleton(c.t) && mdd->level(c.t)[0] == c.cell;
	}
	if (c.t > cost)
		return false;
	const CellId from = first ? c.cell : c.to;
	const CellId to = first ? c.to : c.cell;
	return mdd->is_singleton(c.t - 1) && mdd->level(c.t - 1)[0] == from && mdd->is_singleton(c.t) &&
	       mdd->level(c.t)[0] == to;
}

} // namespace

ConflictPriority classify_conflict(const Conflict& c, const MDD* mdd1, CellId goal1, const MDD* mdd2, CellId goal2)
{
	const bool s1 = cardinal_side(c, mdd1, goal1, true);
	const bool s2 = cardinal_side(c, mdd2, goal2, false);
	if (s1 && s2)
		return ConflictPriority::Cardinal;
	if (s1 || s2)
		return ConflictPriority::SemiCardinal;
	return ConflictPriority::NonCardinal;
}

bool conflict_before(const Conflict& x, const Conflict& y)
{
	auto rank = [](const Conflict& c) {
		return std::make_tuple(c.symmetry == SymmetryKind::None ? 1 : 0, static_cast<int>(c.priority), c.t, c.a1, c.a2,
		                       static_cast<int>(c.kind), c.cell, c.to);
	};
	return rank(x) < rank(y);
}

std::size_t choose_conflict(const std::vector<Conflict>& conflicts)
{
	std::size_t best = 0;
	for (std::size_t k = 1; k < conflicts.size(); ++k)
		if (conflict_before(conflicts[k], conflicts[best]))
			best = k;
	return best;
}

std::optional<std::array<std::vector<Constraint>, 2>> detect_target(const Instance& instance, const Conflict& c,
                                                                     const Path& p1, const Path& p2)
{
	if (c.kind != Conflict::Kind::Vertex)
		return std::nullopt;
	auto split = [&](int finished) -> std::array<std::vector<Constraint>, 2> {
		const CellId goal = instance.agent(finished).goal;
		return {std::vector{Constraint{finished, LengthAtLeastConstraint{c.t + 1}}},
		        std::vector{Constraint{finished, LengthAtMostConstraint{c.t, goal}}}};
	};
	if (c.cell == instance.agent(c.a1).goal && c.t >= path_cost(p1))
		return split(c.a1);
	if (c.cell == instance.agent(c.a2).goal && c.t >= path_cost(p2))
		return split(c.a2);
	return std::nullopt;
}

namespace {

// Walks back along `path` from t while inside a chain of degree-2 cells, stopping
// at the agent's own start or the other agent's goal.
int entering_time(const GridMap& map, const Path& path, const Path& other, int t)
{
	t = std::min(t, path_cost(path));
	CellId loc = path[t];
	while (loc != path.front() && loc != other.back() && map.degree(loc) == 2)
	{
		--t;
		loc = path[t];
	}
	return t;
}

// Net moves along the corridor from path[t_start] until reaching `end`; also the first
// forward edge taken.
int corridor_length(const Path& path, int t_start, CellId end, CellId& edge_a, CellId& edge_b)
{
	CellId curr = path[t_start];
	CellId prev = kNoCell;
	int length = 0;
	bool forward = true;
	bool have_edge = false;
	int t = t_start;
	while (curr != end)
	{
		++t;
		const CellId next = location_at(path, t);
		if (next == curr)
			continue;
		if (next == prev)
			forward = !forward;
		if (forward)
		{
			if (!have_edge)
			{
				edge_a = curr;
				edge_b = next;
				have_edge = true;
			}
			++length;
		}
		else
		{
			--length;
		}
		prev = curr;
		curr = next;
	}
	return length;
}

} // namespace

std::optional<std::array<std::vector<Constraint>, 2>> detect_corridor(const Instance& instance, const Conflict& c,
                                                                      const Path& p1, const Path& p2)
{
	const GridMap& map = instance.map();
	int timestep = c.t;
	CellId curr = kNoCell;
	if (map.degree(c.cell) == 2)
	{
		curr = c.cell;
		if (c.kind == Conflict::Kind::Edge)
			--timestep;
	}
	else if (c.kind == Conflict::Kind::Edge && map.degree(c.to) == 2)
	{
		curr = c.to;
	}
	if (curr == kNoCell)
		return std::nullopt;

	int a[2] = {c.a1, c.a2};
	const Path* p[2] = {&p1, &p2};
	int t[2] = {entering_time(map, p1, p2, timestep), entering_time(map, p2, p1, timestep)};
	if (t[0] > t[1])
	{
		std::swap(t[0], t[1]);
		std::swap(a[0], a[1]);
		std::swap(p[0], p[1]);
	}
	const CellId u[2] = {(*p[0])[t[0]], (*p[1])[t[1]]};
	if (u[0] == u[1])
		return std::nullopt;
	for (int i = 0; i < 2; ++i)
	{
		const Path& path = *p[i];
		bool found = false;
		for (int time = t[i]; time <= path_cost(path) && !found; ++time)
			found = path[time] == u[1 - i];
		if (!found)
			return std::nullopt;
	}

	CellId edge_a = kNoCell;
	CellId edge_b = kNoCell;
	const int k = corridor_length(*p[0], t[0], u[1], edge_a, edge_b);
	if (k <= 0 || edge_a == kNoCell)
		return std::nullopt;
	const CellId s0 = instance.agent(a[0]).start;
	const CellId s1 = instance.agent(a[1]).start;
	const int unlimited = map.num_cells() + 1;
	const int t3 = travel_time(map, s0, u[1], kNoCell, kNoCell, unlimited);
	const int t4 = travel_time(map, s1, u[0], kNoCell, kNoCell, unlimited);
	if (t3 == kForever || t4 == kForever)
		return std::nullopt;
	const int t3_ = travel_time(map, s0, u[1], edge_a, edge_b, t3 + 2 * k + 1);
	const int t4_ = travel_time(map, s1, u[0], edge_a, edge_b, t4 + 2 * k + 1);
	if (std::abs(t3 - t4) > k || t3_ <= t3 || t4_ <= t4)
		return std::nullopt;

	const int end0 = std::min(t3_ == kForever ? kForever : t3_ - 1, t4 + k);
	const int end1 = std::min(t4_ == kForever ? kForever : t4_ - 1, t3 + k);
	const Constraint r0{a[0], RangeConstraint{u[1], 0, end0}};
	const Constraint r1{a[1], RangeConstraint{u[0], 0, end1}};
	if (!violates(r0, a[0], *p[0]) || !violates(r1, a[1], *p[1]))
		return std::nullopt;
	if (a[0] == c.a1)
		return std::array{std::vector{r0}, std::vector{r1}};
	return std::array{std::vector{r1}, std::vector{r0}};
}

std::optional<std::array<std::vector<Constraint>, 2>> detect_rectangle(const Instance& instance, const Conflict& c,
                                                                       const Path& p1, const Path& p2)
{
	if (c.kind != Conflict::Kind::Vertex)
		return std::nullopt;
	const GridMap& map = instance.map();
	const Agent& ag1 = instance.agent(c.a1);
	const Agent& ag2 = instance.agent(c.a2);
	if (path_cost(p1) != map.manhattan(ag1.start, ag1.goal) || path_cost(p2) != map.manhattan(ag2.start, ag2.goal))
		return std::nullopt;

	const Cell s1 = map.cell(ag1.start), g1 = map.cell(ag1.goal);
	const Cell s2 = map.cell(ag2.start), g2 = map.cell(ag2.goal);
	auto sign = [](int v) { return (v > 0) - (v < 0); };
	auto axis_sign = [&](int d1, int d2) {
		if (sign(d1) * sign(d2) < 0)
			return 0;
		return sign(d1) != 0 ? sign(d1) : (sign(d2) != 0 ? sign(d2) : 1);
	};
	// x is the column, y the row; both are flipped so that every move is non-decreasing
	const int sx = axis_sign(g1.col - s1.col, g2.col - s2.col);
	const int sy = axis_sign(g1.row - s1.row, g2.row - s2.row);
	if (sx == 0 || sy == 0)
		return std::nullopt;
	struct P
	{
		int x, y;
	};
	auto norm = [&](Cell q) { return P{sx * q.col, sy * q.row}; };
	const P S[2] = {norm(s1), norm(s2)};
	const P G[2] = {norm(g1), norm(g2)};
	// equal offsets make the monotone crossing a same-timestep collision
	if (S[0].x + S[0].y != S[1].x + S[1].y)
		return std::nullopt;

	for (int v = 0; v < 2; ++v)
	{
		const int h = 1 - v;
		if (!(S[v].x >= S[h].x && S[v].y <= S[h].y && G[v].x <= G[h].x && G[v].y >= G[h].y))
			continue;
		const P rs{S[v].x, S[h].y};
		const P rg{G[v].x, G[h].y};
		if (rs.x > rg.x || rs.y > rg.y || (rs.x == rg.x && rs.y == rg.y))
			continue;
		auto to_cell = [&](int x, int y) { return map.id(sy * y, sx * x); };
		const CellId start_v = v == 0 ? ag1.start : ag2.start;
		const CellId start_h = v == 0 ? ag2.start : ag1.start;
		BarrierConstraint bv;
		for (int x = rs.x; x <= rg.x; ++x)
		{
			const CellId cell = to_cell(x, rg.y);
			if (map.passable(cell))
				bv.cells.push_back({cell, map.manhattan(start_v, cell)});
		}
		BarrierConstraint bh;
		for (int y = rs.y; y <= rg.y; ++y)
		{
			const CellId cell = to_cell(rg.x, y);
			if (map.passable(cell))
				bh.cells.push_back({cell, map.manhattan(start_h, cell)});
		}
		const int agent_v = v == 0 ? c.a1 : c.a2;
		const int agent_h = v == 0 ? c.a2 : c.a1;
		const Constraint cv{agent_v, std::move(bv)};
		const Constraint ch{agent_h, std::move(bh)};
		if (!violates(cv, agent_v, v == 0 ? p1 : p2) || !violates(ch, agent_h, v == 0 ? p2 : p1))
			continue;
		if (v == 0)
			return std::array{std::vector{cv}, std::vector{ch}};
		return std::array{std::vector{ch}, std::vector{cv}};
	}
	return std::nullopt;
}

std::string describe(const GridMap& map, const Conflict& c)
{
	std::string s = c.kind == Conflict::Kind::Vertex ? "vertex " + to_string(map, c.cell)
	                                                 : "edge " + to_string(map, c.cell) + "-" + to_string(map, c.to);
	s += " t=" + std::to_string(c.t) + " agents " + std::to_string(c.a1) + "," + std::to_string(c.a2);
	s += " [" + std::string(to_string(c.priority)) + ", " + to_string(c.symmetry) + "]";
	return s;
}

} // namespace mapf
