#include "mapf/instance.hpp"

#include <charconv>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

namespace mapf {

namespace {

std::vector<std::string_view> split_lines(std::string_view text)
{
	std::vector<std::string_view> lines;
	std::size_t pos = 0;
	while (pos <= text.size())
	{
		std::size_t end = text.find('\n', pos);
		if (end == std::string_view::npos)
			end = text.size();
		std::string_view line = text.substr(pos, end - pos);
		if (!line.empty() && line.back() == '\r')
			line.remove_suffix(1);
		lines.push_back(line);
		pos = end + 1;
	}
	// a trailing newline produces one empty pseudo-line
	while (!lines.empty() && lines.back().empty())
		lines.pop_back();
	return lines;
}

std::vector<std::string_view> split_ws(std::string_view line)
{
	std::vector<std::string_view> tokens;
	std::size_t i = 0;
	while (i < line.size())
	{
		while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
			++i;
		std::size_t j = i;
		while (j < line.size() && line[j] != ' ' && line[j] != '\t')
			++j;
		if (j > i)
			tokens.push_back(line.substr(i, j - i));
		i = j;
	}
	return tokens;
}

bool parse_int(std::string_view token, int& out)
{
	auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
	return ec == std::errc() && ptr == token.data() + token.size();
}

int header_value(const std::vector<std::string_view>& lines, int index, std::string_view key)
{
	if (index >= static_cast<int>(lines.size()))
		throw ParseError(index + 1, "missing '" + std::string(key) + "' header");
	auto tokens = split_ws(lines[index]);
	int value = 0;
	if (tokens.size() != 2 || tokens[0] != key || !parse_int(tokens[1], value) || value <= 0)
		throw ParseError(index + 1, "expected '" + std::string(key) + " <positive integer>'");
	return value;
}

} // namespace

ParseError::ParseError(int line, const std::string& message)
	: std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line)
{
}

DistanceTable bfs_distances(const GridMap& map, CellId goal)
{
	std::vector<int> dist(map.num_cells(), DistanceTable::kUnreachable);
	if (!map.passable(goal))
		return DistanceTable(goal, std::move(dist));
	std::deque<CellId> queue{goal};
	dist[goal] = 0;
	while (!queue.empty())
	{
		const CellId c = queue.front();
		queue.pop_front();
		for (CellId n : map.neighbors(c))
		{
			if (dist[n] == DistanceTable::kUnreachable)
			{
				dist[n] = dist[c] + 1;
				queue.push_back(n);
			}
		}
	}
	return DistanceTable(goal, std::move(dist));
}

const DistanceTable& DistanceCache::get(CellId goal) const
{
	std::lock_guard lock(mutex_);
	auto& slot = tables_[goal];
	if (!slot)
		slot = std::make_unique<DistanceTable>(bfs_distances(*map_, goal));
	return *slot;
}

Instance::Instance(GridMap map, std::vector<Agent> agents)
	: Instance(std::make_shared<const GridMap>(std::move(map)), std::move(agents))
{
}

Instance::Instance(std::shared_ptr<const GridMap> map, std::vector<Agent> agents,
                   std::shared_ptr<DistanceCache> cache)
	: map_(std::move(map)), agents_(std::move(agents)), cache_(std::move(cache))
{
	if (!cache_)
		cache_ = std::make_shared<DistanceCache>(map_);
	std::set<CellId> starts;
	std::set<CellId> goals;
	for (std::size_t i = 0; i < agents_.size(); ++i)
	{
		auto& a = agents_[i];
		a.id = static_cast<int>(i);
		if (!map_->passable(a.start) || !map_->passable(a.goal))
			throw std::invalid_argument("agent " + std::to_string(i) + " has a blocked or out-of-bounds endpoint");
		if (!starts.insert(a.start).second)
			throw std::invalid_argument("agent " + std::to_string(i) + " shares its start with another agent");
		if (!goals.insert(a.goal).second)
			throw std::invalid_argument("agent " + std::to_string(i) + " shares its goal with another agent");
	}
}

Instance Instance::subset(const std::vector<int>& agent_ids) const
{
	std::vector<Agent> agents;
	agents.reserve(agent_ids.size());
	for (int id : agent_ids)
		agents.push_back(agents_.at(id));
	return Instance(map_, std::move(agents), cache_);
}

GridMap parse_map(std::string_view text)
{
	const auto lines = split_lines(text);
	if (lines.empty() || split_ws(lines[0]).size() != 2 || split_ws(lines[0])[0] != "type")
		throw ParseError(1, "expected 'type <name>'");
	const int height = header_value(lines, 1, "height");
	const int width = header_value(lines, 2, "width");
	if (lines.size() < 4 || split_ws(lines[3]).size() != 1 || split_ws(lines[3])[0] != "map")
		throw ParseError(4, "expected 'map'");
	if (static_cast<int>(lines.size()) - 4 != height)
		throw ParseError(static_cast<int>(lines.size()),
		                 "header declares height " + std::to_string(height) + " but body has " +
		                     std::to_string(static_cast<int>(lines.size()) - 4) + " rows");

	std::vector<std::uint8_t> blocked(static_cast<std::size_t>(height) * width, 0);
	for (int r = 0; r < height; ++r)
	{
		const auto row = lines[4 + r];
		if (static_cast<int>(row.size()) != width)
			throw ParseError(5 + r, "row has " + std::to_string(row.size()) + " cells, expected " +
			                            std::to_string(width));
		for (int c = 0; c < width; ++c)
		{
			switch (row[c])
			{
			case '.':
			case 'G':
			case 'S':
				break;
			case '@':
			case 'O':
			case 'T':
				blocked[static_cast<std::size_t>(r) * width + c] = 1;
				break;
			default:
				throw ParseError(5 + r, std::string("unknown cell character '") + row[c] + "'");
			}
		}
	}
	return GridMap(height, width, std::move(blocked));
}

std::string serialize_map(const GridMap& map)
{
	std::ostringstream out;
	out << "type octile\nheight " << map.height() << "\nwidth " << map.width() << "\nmap\n";
	for (int r = 0; r < map.height(); ++r)
	{
		for (int c = 0; c < map.width(); ++c)
			out << (map.blocked(map.id(r, c)) ? '@' : '.');
		out << '\n';
	}
	return out.str();
}

Instance parse_scenario(std::string_view text, const GridMap& map, int num_agents)
{
	return parse_scenario(text, std::make_shared<const GridMap>(map), num_agents);
}

Instance parse_scenario(std::string_view text, std::shared_ptr<const GridMap> map, int num_agents)
{
	if (num_agents <= 0)
		throw ParseError(0, "at least one agent is required");
	const auto lines = split_lines(text);
	if (lines.empty())
		throw ParseError(1, "missing 'version' line");
	const auto version = split_ws(lines[0]);
	if (version.size() != 2 || version[0] != "version")
		throw ParseError(1, "missing 'version' line");

	std::vector<Agent> agents;
	for (std::size_t i = 1; i < lines.size() && static_cast<int>(agents.size()) < num_agents; ++i)
	{
		const int line_no = static_cast<int>(i) + 1;
		const auto tokens = split_ws(lines[i]);
		if (tokens.empty())
			continue;
		// bucket, map name (may contain spaces), width, height, sx, sy, gx, gy, optimal distance
		if (tokens.size() < 9)
			throw ParseError(line_no, "expected 9 fields");
		int fields[6];
		for (int k = 0; k < 6; ++k)
		{
			if (!parse_int(tokens[tokens.size() - 7 + k], fields[k]))
				throw ParseError(line_no, "non-integer coordinate field");
		}
		const int map_width = fields[0];
		const int map_height = fields[1];
		if (map_width != map->width() || map_height != map->height())
			throw ParseError(line_no, "scenario dimensions do not match the map");
		const Cell start{fields[3], fields[2]};
		const Cell goal{fields[5], fields[4]};
		if (!map->in_bounds(start) || !map->in_bounds(goal))
			throw ParseError(line_no, "start or goal out of bounds");
		if (map->blocked(map->id(start)) || map->blocked(map->id(goal)))
			throw ParseError(line_no, "start or goal on a blocked cell");
		agents.push_back({static_cast<int>(agents.size()), map->id(start), map->id(goal)});
	}
	if (static_cast<int>(agents.size()) < num_agents)
		throw ParseError(0, "scenario has " + std::to_string(agents.size()) + " entries, " +
		                        std::to_string(num_agents) + " requested");
	try
	{
		return Instance(std::move(map), std::move(agents));
	}
	catch (const std::invalid_argument& e)
	{
		throw ParseError(0, e.what());
	}
}

int count_scenario_entries(std::string_view text)
{
	const auto lines = split_lines(text);
	int n = 0;
	for (std::size_t i = 1; i < lines.size(); ++i)
		n += !split_ws(lines[i]).empty();
	return n;
}

std::string read_file(const std::string& path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw std::runtime_error("cannot open " + path);
	std::ostringstream buf;
	buf << in.rdbuf();
	return buf.str();
}

GridMap load_map(const std::string& path) { return parse_map(read_file(path)); }

Instance load_instance(const std::string& map_path, const std::string& scenario_path, int num_agents)
{
	auto map = std::make_shared<const GridMap>(load_map(map_path));
	return parse_scenario(read_file(scenario_path), std::move(map), num_agents);
}

} // namespace mapf
