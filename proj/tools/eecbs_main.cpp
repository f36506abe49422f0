#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "mapf/bench.hpp"

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitUnsolved = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInvalid = 3;

struct Options
{
	std::string map;
	std::vector<std::string> scens;
	int agents = 0;
	std::string mode = "eecbs";
	double w = 1.0;
	double time_limit = 60.0;
	bool no_bp = false;
	bool no_pc = false;
	bool no_sr = false;
	bool no_wdg = false;
	std::uint64_t seed = 0;
	std::string out;
	std::string paths;
	std::vector<int> sweep_agents;
	std::vector<double> sweep_w;
	int jobs = 1;
};

int usage(const std::string& message)
{
	std::cerr << "error: " << message << '\n';
	return kExitUsage;
}

void append_row(const std::string& path, const mapf::RunRecord& record)
{
	const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
	std::ofstream out(path, std::ios::app);
	if (!out)
		throw std::runtime_error("cannot write " + path);
	if (fresh)
		out << mapf::csv_header() << '\n';
	out << mapf::to_csv_row(record) << '\n';
}

int run_one(const Options& opt, const mapf::SolverConfig& config)
{
	mapf::RunSpec spec{opt.map, opt.scens.front(), opt.agents, config};
	mapf::Instance instance;
	try
	{
		instance = mapf::load_instance(opt.map, spec.scen_path, opt.agents);
	}
	catch (const std::exception& e)
	{
		return usage(e.what());
	}

	const auto outcome = mapf::run_single(spec, instance);
	const auto& r = outcome.record;
	std::cerr << mapf::to_string(r.status) << ": cost " << r.cost << ", lower bound " << r.lower_bound << ", "
	          << r.stats.expansions << " expansions, " << r.stats.runtime_ms << " ms\n";
	if (!outcome.violations.empty())
	{
		for (const auto& v : outcome.violations)
			std::cerr << "VALIDATION FAILURE: " << v.describe(instance.map()) << '\n';
		return kExitInvalid;
	}

	if (opt.out.empty())
	{
		std::cout << mapf::csv_header() << '\n' << mapf::to_csv_row(r) << '\n';
	}
	else
	{
		append_row(opt.out, r);
	}
	if (!opt.paths.empty() && outcome.result.solved())
	{
		std::ofstream out(opt.paths);
		if (!out)
			throw std::runtime_error("cannot write " + opt.paths);
		out << mapf::format_solution(instance.map(), outcome.result.solution);
	}
	return r.solved ? kExitSolved : kExitUnsolved;
}

int run_many(const Options& opt, const mapf::SolverConfig& config)
{
	mapf::SweepSpec spec;
	spec.map_path = opt.map;
	spec.scen_paths = opt.scens;
	spec.agent_counts = opt.sweep_agents.empty() ? std::vector<int>{opt.agents} : opt.sweep_agents;
	spec.ws = opt.sweep_w.empty() ? std::vector<double>{opt.w} : opt.sweep_w;
	spec.base = config;
	spec.jobs = opt.jobs;
	spec.out_csv = opt.out;
	for (int n : spec.agent_counts)
		if (n <= 0)
			return usage("agent counts must be positive");
	for (double w : spec.ws)
	{
		auto c = config;
		c.w = w;
		if (const auto err = mapf::check_config(c); !err.empty())
			return usage(err);
	}

	mapf::SweepOutcome outcome;
	try
	{
		outcome = mapf::run_sweep(spec, opt.out.empty() ? std::cout : std::cerr);
	}
	catch (const std::invalid_argument& e)
	{
		return usage(e.what());
	}
	if (outcome.skipped > 0)
		std::cerr << outcome.skipped << " runs already in " << opt.out << ", skipped\n";
	for (const auto& s : outcome.summaries)
		std::cerr << mapf::format_summary(s, config.mode) << '\n';
	if (outcome.validation_failures > 0)
		return kExitInvalid;
	for (const auto& r : outcome.records)
		if (!r.solved)
			return kExitUnsolved;
	return kExitSolved;
}

} // namespace

int main(int argc, char** argv)
{
	Options opt;
	CLI::App app{"Bounded-suboptimal multi-agent path finding (CBS / ECBS / EECBS)"};
	app.option_defaults()->always_capture_default();
	app.add_option("--map", opt.map, "Grid map file")->required();
	app.add_option("--scen", opt.scens, "Scenario file (repeat for a sweep)")->required();
	app.add_option("--agents", opt.agents, "Number of agents taken from the scenario");
	app.add_option("--mode", opt.mode, "cbs, ecbs or eecbs")->check(CLI::IsMember({"cbs", "ecbs", "eecbs"}));
	app.add_option("-w", opt.w, "Suboptimality factor (>= 1)");
	app.add_option("--time-limit", opt.time_limit, "Seconds per instance");
	app.add_flag("--no-bp", opt.no_bp, "Disable bypassing");
	app.add_flag("--no-pc", opt.no_pc, "Disable prioritizing conflicts");
	app.add_flag("--no-sr", opt.no_sr, "Disable symmetry reasoning");
	app.add_flag("--no-wdg", opt.no_wdg, "Disable the WDG heuristic");
	app.add_option("--seed", opt.seed, "0 keeps agent order at the root, other values shuffle it");
	app.add_option("--out", opt.out, "Append result rows to this CSV");
	app.add_option("--paths", opt.paths, "Write the solution paths here");
	app.add_option("--sweep-agents", opt.sweep_agents, "Agent counts for a sweep")->delimiter(',');
	app.add_option("--sweep-w", opt.sweep_w, "Suboptimality factors for a sweep")->delimiter(',');
	app.add_option("--jobs", opt.jobs, "Parallel instances in a sweep")->check(CLI::PositiveNumber);

	try
	{
		app.parse(argc, argv);
	}
	catch (const CLI::CallForHelp& e)
	{
		return app.exit(e);
	}
	catch (const CLI::ParseError& e)
	{
		app.exit(e);
		return kExitUsage;
	}

	mapf::SolverConfig config;
	config.mode = *mapf::parse_mode(opt.mode);
	config.w = opt.w;
	config.time_limit = opt.time_limit;
	config.bypass = !opt.no_bp;
	config.prioritize = !opt.no_pc;
	config.symmetry = !opt.no_sr;
	config.wdg = !opt.no_wdg;
	config.seed = opt.seed;
	if (const auto err = mapf::check_config(config); !err.empty())
		return usage(err);
	if (!std::filesystem::exists(opt.map))
		return usage("map file not found: " + opt.map);
	for (const auto& s : opt.scens)
		if (!std::filesystem::exists(s))
			return usage("scenario file not found: " + s);

	const bool sweep = !opt.sweep_agents.empty() || !opt.sweep_w.empty() || opt.scens.size() > 1;
	if (!sweep && opt.agents <= 0)
		return usage("--agents must be positive");
	try
	{
		return sweep ? run_many(opt, config) : run_one(opt, config);
	}
	catch (const std::exception& e)
	{
		std::cerr << "error: " << e.what() << '\n';
		return kExitUsage;
	}
}
