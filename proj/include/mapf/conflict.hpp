#pragma once

#include <array>
#include <optional>
#include <string>

#include "mapf/mdd.hpp"

namespace mapf {

enum class ConflictPriority
{
	Cardinal = 0,
	SemiCardinal = 1,
	NonCardinal = 2,
	Unclassified = 3,
};

enum class SymmetryKind
{
	None,
	Rectangle,
	Corridor,
	Target,
};

const char* to_string(ConflictPriority p);
const char* to_string(SymmetryKind s);

struct Conflict
{
	enum class Kind
	{
		Vertex,
		Edge,
	};

	int a1 = -1;
	int a2 = -1;
	Kind kind = Kind::Vertex;
	/// Vertex: the shared cell. Edge: a1 moves cell->to while a2 moves to->cell.
	CellId cell = kNoCell;
	CellId to = kNoCell;
	int t = 0;

	ConflictPriority priority = ConflictPriority::Unclassified;
	SymmetryKind symmetry = SymmetryKind::None;
	/// Priority and symmetry have been worked out for the current paths.
	bool analyzed = false;
	/// Constraints for the two children when a symmetry was detected.
	std::array<std::vector<Constraint>, 2> symmetric_split;

	bool same_event(const Conflict& o) const
	{
		return a1 == o.a1 && a2 == o.a2 && kind == o.kind && cell == o.cell && to == o.to && t == o.t;
	}
};

/// The two constraints of an ordinary split: a1 and a2 each lose the conflicting
/// vertex or (directed) edge.
std::array<std::vector<Constraint>, 2> standard_split(const Conflict& c);

/// The children for `c`: the symmetric split when one was detected, else the standard one.
std::array<std::vector<Constraint>, 2> split_for(const Conflict& c);

/// All vertex and swapping conflicts between agents i < j, stay-at-target included.
std::vector<Conflict> detect_conflicts(const std::vector<const Path*>& paths);
/// Conflicts of one pair, in timestep order.
void detect_pair_conflicts(int i, int j, const Path& pi, const Path& pj, std::vector<Conflict>& out);

/// Cardinality from MDDs at cost f_min for each side. A null or empty MDD side
/// counts as non-cardinal.
ConflictPriority classify_conflict(const Conflict& c, const MDD* mdd1, CellId goal1, const MDD* mdd2, CellId goal2);

/// Ordering used to pick the conflict to split: symmetric conflicts first, then
/// priority, earliest timestep, lowest agent pair.
bool conflict_before(const Conflict& x, const Conflict& y);
/// Index of the conflict to split. Precondition: non-empty.
std::size_t choose_conflict(const std::vector<Conflict>& conflicts);

/// Length split at a finished agent's goal. Only vertex conflicts at g_i after a_i arrived.
std::optional<std::array<std::vector<Constraint>, 2>> detect_target(const Instance& instance, const Conflict& c,
                                                                     const Path& p1, const Path& p2);

/// Range split for two agents meeting head-on inside a chain of degree-2 cells.
std::optional<std::array<std::vector<Constraint>, 2>> detect_corridor(const Instance& instance, const Conflict& c,
                                                                      const Path& p1, const Path& p2);

/// Barrier split for two agents on Manhattan-optimal paths crossing a shared
/// rectangle. The caller checks that both paths are provably shortest.
std::optional<std::array<std::vector<Constraint>, 2>> detect_rectangle(const Instance& instance, const Conflict& c,
                                                                       const Path& p1, const Path& p2);

std::string describe(const GridMap& map, const Conflict& c);

} // namespace mapf
