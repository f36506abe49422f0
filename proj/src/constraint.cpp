#include "mapf/constraint.hpp"

#include <algorithm>

namespace mapf {

namespace {

template <class... Ts>
struct Overloaded : Ts...
{
	using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t mix(std::size_t seed, std::size_t v)
{
	return seed ^ (v + 0x9E3779B97F4A7C15ULL + (seed << 6) + (seed >> 2));
}

} // namespace

std::vector<Constraint> constraints_binding(const Constraint& c, int agent)
{
	if (c.agent == agent)
		return {c};
	if (const auto* at_most = std::get_if<LengthAtMostConstraint>(&c.kind))
		return {Constraint{agent, RangeConstraint{at_most->goal, at_most->length, kForever}}};
	return {};
}

bool violates(const Constraint& c, int agent, const Path& path)
{
	const int cost = path_cost(path);
	auto occupies = [&](CellId cell, int t_min, int t_max) {
		for (int t = std::max(t_min, 0); t <= t_max; ++t)
		{
			if (location_at(path, t) == cell)
				return true;
			if (t >= cost)
				return false; // parked from here on at a different cell
		}
		return false;
	};
	if (c.agent != agent)
	{
		if (const auto* at_most = std::get_if<LengthAtMostConstraint>(&c.kind))
			return occupies(at_most->goal, at_most->length, kForever);
		return false;
	}
	return std::visit(
		Overloaded{
			[&](const VertexConstraint& v) { return location_at(path, v.t) == v.cell; },
			[&](const EdgeConstraint& e) {
				return e.t >= 1 && location_at(path, e.t - 1) == e.from && location_at(path, e.t) == e.to;
			},
			[&](const BarrierConstraint& b) {
				return std::any_of(b.cells.begin(), b.cells.end(),
				                   [&](const SpaceTime& st) { return location_at(path, st.t) == st.cell; });
			},
			[&](const RangeConstraint& r) { return occupies(r.cell, r.t_min, r.t_max); },
			[&](const LengthAtLeastConstraint& l) { return cost < l.length; },
			[&](const LengthAtMostConstraint& l) { return cost > l.length; },
		},
		c.kind);
}

std::size_t hash_constraints(const std::vector<Constraint>& constraints)
{
	std::size_t h = constraints.size();
	for (const auto& c : constraints)
	{
		h = mix(h, static_cast<std::size_t>(c.agent));
		h = mix(h, c.kind.index());
		std::visit(Overloaded{
					   [&](const VertexConstraint& v) {
						   h = mix(h, static_cast<std::size_t>(v.cell));
						   h = mix(h, static_cast<std::size_t>(v.t));
					   },
					   [&](const EdgeConstraint& e) {
						   h = mix(h, static_cast<std::size_t>(e.from));
						   h = mix(h, static_cast<std::size_t>(e.to));
						   h = mix(h, static_cast<std::size_t>(e.t));
					   },
					   [&](const BarrierConstraint& b) {
						   for (const auto& st : b.cells)
						   {
							   h = mix(h, static_cast<std::size_t>(st.cell));
							   h = mix(h, static_cast<std::size_t>(st.t));
						   }
					   },
					   [&](const RangeConstraint& r) {
						   h = mix(h, static_cast<std::size_t>(r.cell));
						   h = mix(h, static_cast<std::size_t>(r.t_min));
						   h = mix(h, static_cast<std::size_t>(r.t_max));
					   },
					   [&](const LengthAtLeastConstraint& l) { h = mix(h, static_cast<std::size_t>(l.length)); },
					   [&](const LengthAtMostConstraint& l) {
						   h = mix(h, static_cast<std::size_t>(l.length));
						   h = mix(h, static_cast<std::size_t>(l.goal));
					   },
				   },
		           c.kind);
	}
	return h;
}

void ConstraintTable::prohibit_vertex(CellId cell, int t)
{
	vertex_.insert(vertex_key(cell, t));
	auto& latest = cell_latest_[cell];
	latest = std::max(latest, t);
	latest_ = std::max(latest_, t);
}

void ConstraintTable::add(const Constraint& c, int agent)
{
	for (const auto& bound : constraints_binding(c, agent))
	{
		std::visit(Overloaded{
					   [&](const VertexConstraint& v) { prohibit_vertex(v.cell, v.t); },
					   [&](const EdgeConstraint& e) {
						   edge_.insert({e.from, e.to, e.t});
						   latest_ = std::max(latest_, e.t);
					   },
					   [&](const BarrierConstraint& b) {
						   for (const auto& st : b.cells)
							   prohibit_vertex(st.cell, st.t);
					   },
					   [&](const RangeConstraint& r) {
						   if (r.t_max == kForever)
						   {
							   auto [it, inserted] = forever_.try_emplace(r.cell, r.t_min);
							   if (!inserted)
								   it->second = std::min(it->second, r.t_min);
							   latest_ = std::max(latest_, r.t_min);
						   }
						   else
						   {
							   for (int t = std::max(r.t_min, 0); t <= r.t_max; ++t)
								   prohibit_vertex(r.cell, t);
						   }
					   },
					   [&](const LengthAtLeastConstraint& l) { min_length_ = std::max(min_length_, l.length); },
					   [&](const LengthAtMostConstraint& l) { max_length_ = std::min(max_length_, l.length); },
				   },
		           bound.kind);
	}
}

void ConstraintTable::add_all(const std::vector<Constraint>& cs, int agent)
{
	for (const auto& c : cs)
		add(c, agent);
}

bool ConstraintTable::vertex_prohibited(CellId cell, int t) const
{
	if (!forever_.empty())
	{
		auto it = forever_.find(cell);
		if (it != forever_.end() && t >= it->second)
			return true;
	}
	return !vertex_.empty() && vertex_.count(vertex_key(cell, t)) > 0;
}

bool ConstraintTable::edge_prohibited(CellId from, CellId to, int t) const
{
	return !edge_.empty() && edge_.count({from, to, t}) > 0;
}

bool ConstraintTable::is_constrained(CellId from, CellId to, int t) const
{
	if (t > max_length_)
		return true;
	return vertex_prohibited(to, t) || edge_prohibited(from, to, t);
}

int ConstraintTable::blocked_from(CellId cell) const
{
	auto it = forever_.find(cell);
	return it == forever_.end() ? kForever : it->second;
}

int ConstraintTable::hold_time(CellId cell) const
{
	if (forever_.count(cell))
		return kForever;
	auto it = cell_latest_.find(cell);
	return it == cell_latest_.end() ? 0 : it->second + 1;
}

bool ConstraintTable::satisfied_by(const Path& path) const
{
	if (path.empty())
		return false;
	const int cost = path_cost(path);
	if (cost < min_length_ || cost > max_length_)
		return false;
	if (vertex_prohibited(path[0], 0))
		return false;
	for (int t = 1; t <= cost; ++t)
		if (is_constrained(path[t - 1], path[t], t))
			return false;
	return cost >= hold_time(path.back());
}

void ConflictAvoidanceTable::add_path(const Path& path)
{
	if (path.empty())
		return;
	const int cost = path_cost(path);
	if (cost > max_t_)
	{
		occupancy_.resize(static_cast<std::size_t>(cost + 1) * num_cells_, 0);
		max_t_ = cost;
	}
	for (int t = 0; t <= cost; ++t)
	{
		++occupancy_[static_cast<std::size_t>(t) * num_cells_ + path[t]];
		if (t > 0 && path[t] != path[t - 1])
			++moves_[(static_cast<std::uint64_t>(t) << 40) | (static_cast<std::uint64_t>(path[t - 1]) << 20) |
			         static_cast<std::uint64_t>(path[t])];
	}
	parked_[path.back()].push_back(cost);
}

int ConflictAvoidanceTable::vertex_count(CellId cell, int t) const
{
	int n = 0;
	if (t <= max_t_)
		n += occupancy_[static_cast<std::size_t>(t) * num_cells_ + cell];
	if (!parked_.empty())
	{
		auto it = parked_.find(cell);
		if (it != parked_.end())
			for (int end : it->second)
				n += end < t;
	}
	return n;
}

int ConflictAvoidanceTable::count_conflicts(CellId from, CellId to, int t) const
{
	int n = vertex_count(to, t);
	if (from != to && t <= max_t_ && !moves_.empty())
	{
		auto it = moves_.find((static_cast<std::uint64_t>(t) << 40) | (static_cast<std::uint64_t>(to) << 20) |
		                      static_cast<std::uint64_t>(from));
		if (it != moves_.end())
			n += it->second;
	}
	return n;
}

int ConflictAvoidanceTable::future_conflicts(CellId cell, int t) const
{
	int n = 0;
	for (int s = t + 1; s <= max_t_; ++s)
		n += occupancy_[static_cast<std::size_t>(s) * num_cells_ + cell];
	// an agent parked here collides with anyone ending here; count it once
	if (auto it = parked_.find(cell); it != parked_.end())
		n += static_cast<int>(it->second.size());
	return n;
}

} // namespace mapf
