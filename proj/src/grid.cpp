#include "mapf/grid.hpp"

#include <cstdlib>
#include <stdexcept>

namespace mapf {

GridMap::GridMap(int height, int width, std::vector<std::uint8_t> blocked)
	: height_(height), width_(width), blocked_(std::move(blocked))
{
	if (height <= 0 || width <= 0)
		throw std::invalid_argument("grid dimensions must be positive");
	if (static_cast<int>(blocked_.size()) != height * width)
		throw std::invalid_argument("blocked mask size does not match grid dimensions");

	neighbors_.assign(num_cells(), {kNoCell, kNoCell, kNoCell, kNoCell});
	degree_.assign(num_cells(), 0);
	constexpr int kDr[4] = {-1, 0, 1, 0};
	constexpr int kDc[4] = {0, 1, 0, -1};
	for (CellId c = 0; c < num_cells(); ++c)
	{
		if (blocked_[c])
			continue;
		const Cell here = cell(c);
		for (int d = 0; d < 4; ++d)
		{
			const int r = here.row + kDr[d];
			const int col = here.col + kDc[d];
			if (in_bounds(r, col) && !blocked_[id(r, col)])
				neighbors_[c][degree_[c]++] = id(r, col);
		}
	}
}

int GridMap::num_blocked() const
{
	int n = 0;
	for (auto b : blocked_)
		n += b != 0;
	return n;
}

bool GridMap::adjacent(CellId a, CellId b) const
{
	for (CellId n : neighbors(a))
		if (n == b)
			return true;
	return false;
}

int GridMap::manhattan(CellId a, CellId b) const
{
	const Cell ca = cell(a);
	const Cell cb = cell(b);
	return std::abs(ca.row - cb.row) + std::abs(ca.col - cb.col);
}

std::string to_string(const GridMap& map, CellId id)
{
	const Cell c = map.cell(id);
	return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
}

} // namespace mapf
