#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mapf/path.hpp"

namespace mapf::fixtures {

/// Map from rows of '.' and '@'.
inline GridMap grid(const std::vector<std::string>& rows)
{
	std::string text = "type octile\nheight " + std::to_string(rows.size()) + "\nwidth " +
	                   std::to_string(rows.front().size()) + "\nmap\n";
	for (const auto& r : rows)
		text += r + "\n";
	return parse_map(text);
}

inline GridMap empty_grid(int height, int width)
{
	return grid(std::vector<std::string>(height, std::string(width, '.')));
}

/// Agents given as ((start row, start col), (goal row, goal col)).
inline Instance instance(const GridMap& map, const std::vector<std::pair<Cell, Cell>>& agents)
{
	std::vector<Agent> out;
	for (const auto& [s, g] : agents)
		out.push_back({static_cast<int>(out.size()), map.id(s), map.id(g)});
	return Instance(map, std::move(out));
}

/// Two agents on an empty 6x6 grid whose shortest paths cross inside a shared
/// rectangle; one of them has to wait once.
inline Instance rectangle_example()
{
	return instance(empty_grid(6, 6), {{{0, 2}, {5, 4}}, {{2, 0}, {4, 5}}});
}

inline Path path_of(const GridMap& map, const std::vector<Cell>& cells)
{
	Path p;
	for (const auto& c : cells)
		p.push_back(map.id(c));
	return p;
}

} // namespace mapf::fixtures
