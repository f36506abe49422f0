#include "mapf/bench.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mapf {

namespace {

const std::vector<std::string> kColumns = {
	"map",
	"scen",
	"agents",
	"mode",
	"w",
	"bp",
	"pc",
	"sr",
	"wdg",
	"seed",
	"time_limit_s",
	"status",
	"solved",
	"runtime_ms",
	"cost",
	"lower_bound",
	"suboptimality",
	"root_lb",
	"root_cost",
	"delta_lb",
	"expansions",
	"expansions_cleanup",
	"expansions_open",
	"expansions_focal",
	"cleanup_fraction",
	"generated",
	"pruned",
	"bypasses",
	"bypasses_per_expansion",
	"low_level_calls",
	"rectangle_splits",
	"corridor_splits",
	"target_splits",
	"wdg_pair_solves",
	"wdg_runtime_ms",
	"wdg_time_fraction",
};
constexpr std::size_t kKeyColumns = 11; // map .. time_limit_s

std::string fmt(const char* f, double v)
{
	char buf[64];
	std::snprintf(buf, sizeof buf, f, v);
	return buf;
}

std::vector<std::string> split_csv(const std::string& row)
{
	std::vector<std::string> out;
	std::string cell;
	std::istringstream in(row);
	while (std::getline(in, cell, ','))
		out.push_back(cell);
	if (!row.empty() && row.back() == ',')
		out.emplace_back();
	return out;
}

std::optional<SolveStatus> parse_status(const std::string& s)
{
	for (auto st : {SolveStatus::Solved, SolveStatus::Timeout, SolveStatus::NodeLimit, SolveStatus::Infeasible})
		if (s == to_string(st))
			return st;
	return std::nullopt;
}

std::string trim_cr(std::string s)
{
	while (!s.empty() && (s.back() == '\r' || s.back() == '\n'))
		s.pop_back();
	return s;
}

} // namespace

std::vector<std::string> csv_columns() { return kColumns; }

std::string csv_header()
{
	std::string s;
	for (std::size_t i = 0; i < kColumns.size(); ++i)
		s += (i ? "," : "") + kColumns[i];
	return s;
}

bool is_timing_column(const std::string& name)
{
	return name == "runtime_ms" || name == "wdg_runtime_ms" || name == "wdg_time_fraction";
}

std::string basename_of(const std::string& path)
{
	const auto pos = path.find_last_of("/\\");
	return pos == std::string::npos ? path : path.substr(pos + 1);
}

std::string to_csv_row(const RunRecord& r)
{
	const auto& s = r.stats;
	std::vector<std::string> v = {
		r.map,
		r.scen,
		std::to_string(r.agents),
		to_string(r.mode),
		fmt("%.4g", r.w),
		std::to_string(int(r.bp)),
		std::to_string(int(r.pc)),
		std::to_string(int(r.sr)),
		std::to_string(int(r.wdg)),
		std::to_string(r.seed),
		fmt("%g", r.time_limit),
		to_string(r.status),
		std::to_string(int(r.solved)),
		fmt("%.3f", s.runtime_ms),
		std::to_string(r.cost),
		std::to_string(r.lower_bound),
		fmt("%.6f", r.suboptimality),
		std::to_string(s.root_lb),
		std::to_string(s.root_cost),
		std::to_string(s.delta_lb()),
		std::to_string(s.expansions),
		std::to_string(s.expansions_cleanup),
		std::to_string(s.expansions_open),
		std::to_string(s.expansions_focal),
		fmt("%.6f", s.cleanup_fraction()),
		std::to_string(s.generated),
		std::to_string(s.pruned),
		std::to_string(s.bypasses),
		fmt("%.6f", s.bypasses_per_expansion()),
		std::to_string(s.low_level_calls),
		std::to_string(s.rectangle_splits),
		std::to_string(s.corridor_splits),
		std::to_string(s.target_splits),
		std::to_string(s.wdg_pair_solves),
		fmt("%.3f", s.wdg_runtime_ms),
		fmt("%.6f", s.wdg_time_fraction()),
	};
	std::string out;
	for (std::size_t i = 0; i < v.size(); ++i)
		out += (i ? "," : "") + v[i];
	return out;
}

std::string config_key(const RunRecord& r) { return config_key_from_row(to_csv_row(r)); }

std::string config_key_from_row(const std::string& row)
{
	const auto cells = split_csv(trim_cr(row));
	std::string key;
	for (std::size_t i = 0; i < kKeyColumns && i < cells.size(); ++i)
		key += (i ? "," : "") + cells[i];
	return key;
}

RunRecord parse_csv_row(const std::string& line)
{
	const auto c = split_csv(trim_cr(line));
	if (c.size() != kColumns.size())
		throw std::runtime_error("results row has " + std::to_string(c.size()) + " columns, expected " +
		                         std::to_string(kColumns.size()));
	auto col = [&](const char* name) -> const std::string& {
		for (std::size_t i = 0; i < kColumns.size(); ++i)
			if (kColumns[i] == name)
				return c[i];
		throw std::logic_error("unknown column");
	};
	try
	{
		RunRecord r;
		r.map = col("map");
		r.scen = col("scen");
		r.agents = std::stoi(col("agents"));
		const auto mode = parse_mode(col("mode"));
		const auto status = parse_status(col("status"));
		if (!mode || !status)
			throw std::runtime_error("bad mode or status");
		r.mode = *mode;
		r.status = *status;
		r.w = std::stod(col("w"));
		r.bp = col("bp") == "1";
		r.pc = col("pc") == "1";
		r.sr = col("sr") == "1";
		r.wdg = col("wdg") == "1";
		r.seed = std::stoull(col("seed"));
		r.time_limit = std::stod(col("time_limit_s"));
		r.solved = col("solved") == "1";
		r.cost = std::stoi(col("cost"));
		r.lower_bound = std::stoi(col("lower_bound"));
		r.suboptimality = std::stod(col("suboptimality"));
		auto& s = r.stats;
		s.runtime_ms = std::stod(col("runtime_ms"));
		s.root_lb = std::stoi(col("root_lb"));
		s.root_cost = std::stoi(col("root_cost"));
		s.lower_bound = r.lower_bound;
		s.cost = r.cost;
		s.expansions = std::stol(col("expansions"));
		s.expansions_cleanup = std::stol(col("expansions_cleanup"));
		s.expansions_open = std::stol(col("expansions_open"));
		s.expansions_focal = std::stol(col("expansions_focal"));
		s.generated = std::stol(col("generated"));
		s.pruned = std::stol(col("pruned"));
		s.bypasses = std::stol(col("bypasses"));
		s.low_level_calls = std::stol(col("low_level_calls"));
		s.rectangle_splits = std::stol(col("rectangle_splits"));
		s.corridor_splits = std::stol(col("corridor_splits"));
		s.target_splits = std::stol(col("target_splits"));
		s.wdg_pair_solves = std::stol(col("wdg_pair_solves"));
		s.wdg_runtime_ms = std::stod(col("wdg_runtime_ms"));
		return r;
	}
	catch (const std::logic_error&)
	{
		throw std::runtime_error("malformed results row: " + line);
	}
}

RunRecord make_record(const RunSpec& spec, const SolveResult& result)
{
	RunRecord r;
	r.map = basename_of(spec.map_path);
	r.scen = basename_of(spec.scen_path);
	r.agents = spec.agents;
	r.mode = spec.config.mode;
	r.w = spec.config.w;
	r.bp = spec.config.bypass;
	r.pc = spec.config.prioritize;
	r.sr = spec.config.symmetry;
	r.wdg = spec.config.wdg;
	r.seed = spec.config.seed;
	r.time_limit = spec.config.time_limit;
	r.status = result.status;
	r.solved = result.solved();
	r.stats = result.stats;
	r.lower_bound = result.stats.lower_bound;
	if (r.solved)
	{
		r.cost = result.stats.cost;
		r.suboptimality = r.lower_bound > 0 ? double(r.cost) / r.lower_bound : 1.0;
	}
	return r;
}

SingleOutcome run_single(const RunSpec& spec, const Instance& instance)
{
	SingleOutcome out;
	out.result = solve(instance, spec.config);
	if (out.result.solved())
	{
		out.violations = validate_solution(instance, out.result.solution);
		if (sum_of_costs(out.result.solution) != out.result.stats.cost)
			out.violations.push_back({Violation::Kind::MissingPath});
	}
	out.record = make_record(spec, out.result);
	return out;
}

std::vector<ConfigSummary> summarize(const std::vector<RunRecord>& records, double time_limit_s)
{
	std::map<std::pair<int, double>, ConfigSummary> by_config;
	std::vector<std::pair<int, double>> order;
	for (const auto& r : records)
	{
		const auto key = std::make_pair(r.agents, r.w);
		auto [it, inserted] = by_config.try_emplace(key);
		if (inserted)
		{
			order.push_back(key);
			it->second.agents = r.agents;
			it->second.w = r.w;
		}
		auto& s = it->second;
		++s.runs;
		s.solved += r.solved;
		s.mean_runtime_ms += r.solved ? r.stats.runtime_ms : time_limit_s * 1000.0;
	}
	std::vector<ConfigSummary> out;
	for (const auto& key : order)
	{
		auto s = by_config[key];
		s.mean_runtime_ms /= std::max(1, s.runs);
		out.push_back(s);
	}
	return out;
}

std::string format_summary(const ConfigSummary& s, Mode mode)
{
	char buf[256];
	std::snprintf(buf, sizeof buf, "%s agents=%d w=%.4g: solved %d/%d (%.1f%%), mean runtime %.1f ms", to_string(mode),
	              s.agents, s.w, s.solved, s.runs, 100.0 * s.success_rate(), s.mean_runtime_ms);
	return buf;
}

SweepOutcome run_sweep(const SweepSpec& spec, std::ostream& log)
{
	if (spec.scen_paths.empty())
		throw std::invalid_argument("sweep needs at least one scenario file");
	if (spec.agent_counts.empty() || spec.ws.empty())
		throw std::invalid_argument("sweep needs at least one agent count and one w");

	std::shared_ptr<const GridMap> map = std::make_shared<const GridMap>(load_map(spec.map_path));
	auto cache = std::make_shared<DistanceCache>(map);
	std::vector<std::string> scen_texts;
	for (const auto& p : spec.scen_paths)
		scen_texts.push_back(read_file(p));

	std::vector<RunSpec> tasks;
	std::vector<std::size_t> scen_of;
	for (int n : spec.agent_counts)
	{
		for (double w : spec.ws)
		{
			for (std::size_t s = 0; s < spec.scen_paths.size(); ++s)
			{
				RunSpec t;
				t.map_path = spec.map_path;
				t.scen_path = spec.scen_paths[s];
				t.agents = n;
				t.config = spec.base;
				t.config.w = w;
				if (const auto err = check_config(t.config); !err.empty())
					throw std::invalid_argument(err);
				tasks.push_back(std::move(t));
				scen_of.push_back(s);
			}
		}
	}

	// rows already on disk, keyed by configuration
	std::map<std::string, RunRecord> existing;
	bool need_header = true;
	if (!spec.out_csv.empty())
	{
		std::ifstream in(spec.out_csv);
		std::string line;
		bool first = true;
		while (std::getline(in, line))
		{
			line = trim_cr(line);
			if (line.empty())
				continue;
			if (first)
			{
				first = false;
				need_header = false;
				if (line == csv_header())
					continue;
				throw std::runtime_error(spec.out_csv + " exists with a different header");
			}
			existing.emplace(config_key_from_row(line), parse_csv_row(line));
		}
	}
	std::ofstream out;
	if (!spec.out_csv.empty())
	{
		out.open(spec.out_csv, std::ios::app);
		if (!out)
			throw std::runtime_error("cannot write " + spec.out_csv);
		if (need_header)
			out << csv_header() << '\n' << std::flush;
	}

	SweepOutcome outcome;
	std::vector<std::optional<RunRecord>> results(tasks.size());
	std::vector<char> fresh(tasks.size(), 0);
	for (std::size_t k = 0; k < tasks.size(); ++k)
	{
		RunRecord probe = make_record(tasks[k], SolveResult{});
		if (auto it = existing.find(config_key(probe)); it != existing.end())
		{
			results[k] = it->second;
			++outcome.skipped;
		}
	}

	std::mutex mu;
	std::size_t next_to_write = 0;
	std::atomic<std::size_t> next_task{0};
	std::atomic<int> failures{0};
	auto flush_ready = [&] {
		while (next_to_write < tasks.size() && results[next_to_write])
		{
			if (fresh[next_to_write])
			{
				const auto row = to_csv_row(*results[next_to_write]);
				if (out.is_open())
					out << row << '\n' << std::flush;
				else
					log << row << '\n';
			}
			++next_to_write;
		}
	};
	auto worker = [&] {
		while (true)
		{
			const std::size_t k = next_task++;
			if (k >= tasks.size())
				return;
			if (results[k])
				continue;
			std::optional<SingleOutcome> o;
			std::string error;
			try
			{
				const Instance inst = parse_scenario(scen_texts[scen_of[k]], map, tasks[k].agents);
				const Instance shared(map, inst.agents(), cache);
				o = run_single(tasks[k], shared);
			}
			catch (const std::exception& e)
			{
				error = e.what();
			}
			std::lock_guard lock(mu);
			if (!o)
			{
				// unreadable instance: recorded as an unsolved run so the sweep continues
				log << "error: " << basename_of(tasks[k].scen_path) << " agents=" << tasks[k].agents << ": " << error
				    << '\n';
				results[k] = make_record(tasks[k], SolveResult{});
			}
			else
			{
				if (!o->violations.empty())
				{
					++failures;
					log << "VALIDATION FAILURE: " << basename_of(tasks[k].scen_path) << " agents=" << tasks[k].agents
					    << " w=" << tasks[k].config.w << ": " << o->violations.front().describe(*map) << '\n';
				}
				results[k] = o->record;
			}
			fresh[k] = 1;
			flush_ready();
		}
	};

	{
		std::lock_guard lock(mu);
		flush_ready();
	}
	const int jobs = std::max(1, spec.jobs);
	if (jobs == 1)
	{
		worker();
	}
	else
	{
		std::vector<std::thread> pool;
		for (int j = 0; j < jobs; ++j)
			pool.emplace_back(worker);
		for (auto& t : pool)
			t.join();
	}

	for (auto& r : results)
		outcome.records.push_back(*r);
	outcome.validation_failures = failures;
	outcome.summaries = summarize(outcome.records, spec.base.time_limit);
	return outcome;
}

} // namespace mapf
