#pragma once

#include <climits>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "mapf/path.hpp"

namespace mapf {

inline constexpr int kForever = INT_MAX;

/// A (cell, timestep) pair.
struct SpaceTime
{
	CellId cell = kNoCell;
	int t = 0;

	auto operator<=>(const SpaceTime&) const = default;
};

/// The subject may not be at `cell` at timestep t.
struct VertexConstraint
{
	CellId cell;
	int t;
	auto operator<=>(const VertexConstraint&) const = default;
};

/// The subject may not move from `from` to `to` arriving at timestep t (directed).
struct EdgeConstraint
{
	CellId from;
	CellId to;
	int t;
	auto operator<=>(const EdgeConstraint&) const = default;
};

/// The subject may not occupy any of the listed (cell, timestep) pairs.
struct BarrierConstraint
{
	std::vector<SpaceTime> cells;
	auto operator<=>(const BarrierConstraint&) const = default;
};

/// The subject may not occupy `cell` during [t_min, t_max]; t_max may be kForever.
struct RangeConstraint
{
	CellId cell;
	int t_min;
	int t_max;
	auto operator<=>(const RangeConstraint&) const = default;
};

/// The subject's path cost is at least `length`.
struct LengthAtLeastConstraint
{
	int length;
	auto operator<=>(const LengthAtLeastConstraint&) const = default;
};

/// The subject's path cost is at most `length`; every other agent is kept off
/// `goal` (the subject's goal) from timestep `length` on.
struct LengthAtMostConstraint
{
	int length;
	CellId goal;
	auto operator<=>(const LengthAtMostConstraint&) const = default;
};

using ConstraintKind = std::variant<VertexConstraint, EdgeConstraint, BarrierConstraint, RangeConstraint,
                                    LengthAtLeastConstraint, LengthAtMostConstraint>;

struct Constraint
{
	int agent = -1;
	ConstraintKind kind;

	auto operator<=>(const Constraint&) const = default;
	bool operator==(const Constraint&) const = default;
};

/// The constraint as it binds `agent`: the constraint itself when `agent` is the
/// subject, the goal block of a LengthAtMost constraint for every other agent, or
/// nothing. Results are re-labelled to `agent`.
std::vector<Constraint> constraints_binding(const Constraint& c, int agent);

/// True when the path (under stay-at-target) violates the constraint as it binds `agent`.
bool violates(const Constraint& c, int agent, const Path& path);

std::size_t hash_constraints(const std::vector<Constraint>& constraints);

/// Hashed prohibitions for one agent at one CT node.
class ConstraintTable
{
public:
	ConstraintTable() = default;

	/// Adds `c` as it binds `agent` (see constraints_binding).
	void add(const Constraint& c, int agent);
	void add_all(const std::vector<Constraint>& cs, int agent);

	/// Moving from->to (or waiting when equal) arriving at timestep t.
	bool is_constrained(CellId from, CellId to, int t) const;
	bool vertex_prohibited(CellId cell, int t) const;
	bool edge_prohibited(CellId from, CellId to, int t) const;

	int min_length() const { return min_length_; }
	/// kForever when unbounded.
	int max_length() const { return max_length_; }
	/// Largest finite timestep mentioned by any prohibition (forever-blocks count their start).
	int latest_timestep() const { return latest_; }

	/// Earliest T such that staying at `cell` during [T, inf) violates no prohibition;
	/// kForever when the cell is blocked forever.
	int hold_time(CellId cell) const;
	/// Timestep from which the cell is blocked forever, kForever when never.
	int blocked_from(CellId cell) const;

	/// Path satisfies every prohibition (including goal stays) and the length bounds.
	bool satisfied_by(const Path& path) const;

	bool empty() const
	{
		return vertex_.empty() && edge_.empty() && forever_.empty() && min_length_ == 0 && max_length_ == kForever;
	}

private:
	static std::uint64_t vertex_key(CellId cell, int t)
	{
		return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(t)) << 32) | static_cast<std::uint32_t>(cell);
	}

	struct EdgeKey
	{
		CellId from;
		CellId to;
		int t;
		bool operator==(const EdgeKey&) const = default;
	};
	struct EdgeKeyHash
	{
		std::size_t operator()(const EdgeKey& k) const
		{
			std::uint64_t h = static_cast<std::uint32_t>(k.from);
			h = h * 0x9E3779B97F4A7C15ULL + static_cast<std::uint32_t>(k.to);
			h = h * 0x9E3779B97F4A7C15ULL + static_cast<std::uint32_t>(k.t);
			return static_cast<std::size_t>(h ^ (h >> 29));
		}
	};

	void prohibit_vertex(CellId cell, int t);

	std::unordered_set<std::uint64_t> vertex_;
	std::unordered_set<EdgeKey, EdgeKeyHash> edge_;
	std::unordered_map<CellId, int> forever_;
	std::unordered_map<CellId, int> cell_latest_;
	int min_length_ = 0;
	int max_length_ = kForever;
	int latest_ = 0;
};

/// Occupancy of the other agents' current paths, for counting conflicts of a move.
class ConflictAvoidanceTable
{
public:
	ConflictAvoidanceTable() = default;
	explicit ConflictAvoidanceTable(int num_cells) : num_cells_(num_cells) {}

	void add_path(const Path& path);

	/// Number of other agents this move (from->to, arriving at t) collides or swaps with.
	int count_conflicts(CellId from, CellId to, int t) const;
	/// Number of (agent, timestep) occupancies of `cell` strictly after t; what an agent
	/// ending at `cell` at t would later collide with.
	int future_conflicts(CellId cell, int t) const;

	bool empty() const { return max_t_ < 0; }
	/// Last timestep at which any stored path still moves.
	int horizon() const { return max_t_; }

private:
	int vertex_count(CellId cell, int t) const;

	int num_cells_ = 0;
	int max_t_ = -1;
	// occupancy for t <= path end, indexed t * num_cells + cell
	std::vector<std::uint16_t> occupancy_;
	std::unordered_map<std::uint64_t, int> moves_;
	// agents parked at a cell from timestep T onwards (exclusive of T itself in occupancy_)
	std::unordered_map<CellId, std::vector<int>> parked_;
};

} // namespace mapf
