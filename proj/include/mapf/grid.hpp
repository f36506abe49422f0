#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mapf {

/// Row-major index of a grid cell (row * width + col).
using CellId = int;

inline constexpr CellId kNoCell = -1;

struct Cell
{
	int row = 0;
	int col = 0;

	auto operator<=>(const Cell&) const = default;
};

/// 4-neighbor grid. Adjacency is precomputed so neighbor queries are a span lookup.
class GridMap
{
public:
	GridMap() = default;
	GridMap(int height, int width, std::vector<std::uint8_t> blocked);

	int height() const { return height_; }
	int width() const { return width_; }
	int num_cells() const { return height_ * width_; }

	bool in_bounds(int row, int col) const { return row >= 0 && row < height_ && col >= 0 && col < width_; }
	bool in_bounds(Cell c) const { return in_bounds(c.row, c.col); }

	CellId id(Cell c) const { return c.row * width_ + c.col; }
	CellId id(int row, int col) const { return row * width_ + col; }
	Cell cell(CellId id) const { return {id / width_, id % width_}; }

	bool blocked(CellId id) const { return blocked_[id] != 0; }
	bool passable(CellId id) const { return id >= 0 && id < num_cells() && blocked_[id] == 0; }
	int num_blocked() const;

	/// Passable 4-neighbors of a passable cell.
	std::span<const CellId> neighbors(CellId id) const
	{
		return {neighbors_[id].data(), static_cast<std::size_t>(degree_[id])};
	}
	int degree(CellId id) const { return degree_[id]; }
	bool adjacent(CellId a, CellId b) const;

	/// Manhattan distance ignoring obstacles.
	int manhattan(CellId a, CellId b) const;

	const std::vector<std::uint8_t>& blocked_mask() const { return blocked_; }

	bool operator==(const GridMap& other) const
	{
		return height_ == other.height_ && width_ == other.width_ && blocked_ == other.blocked_;
	}

private:
	int height_ = 0;
	int width_ = 0;
	std::vector<std::uint8_t> blocked_;
	std::vector<std::array<CellId, 4>> neighbors_;
	std::vector<std::uint8_t> degree_;
};

std::string to_string(const GridMap& map, CellId id);

} // namespace mapf
