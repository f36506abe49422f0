#include <filesystem>
#include <fstream>
#include <sstream>

#include "benchmark_data.hpp"
#include "doctest.h"
#include "mapf/bench.hpp"

using namespace mapf;

namespace {

std::filesystem::path scratch(const std::string& name)
{
	const auto dir = std::filesystem::temp_directory_path() / "mapf_bench_test" / name;
	std::filesystem::remove_all(dir);
	std::filesystem::create_directories(dir);
	return dir;
}

int count_lines(const std::filesystem::path& file)
{
	std::ifstream in(file);
	std::string line;
	int n = 0;
	while (std::getline(in, line))
		n += !line.empty();
	return n;
}

} // namespace

TEST_CASE("csv rows round trip")
{
	RunRecord r;
	r.map = "random-32-32-20.map";
	r.scen = "random-32-32-20-random-3.scen";
	r.agents = 75;
	r.mode = Mode::ECBS;
	r.w = 1.1;
	r.bp = true;
	r.sr = true;
	r.seed = 42;
	r.time_limit = 60;
	r.status = SolveStatus::Solved;
	r.solved = true;
	r.cost = 1967;
	r.lower_bound = 1958;
	r.suboptimality = 1967.0 / 1958.0;
	r.stats.expansions = 12;
	r.stats.expansions_focal = 12;
	r.stats.root_lb = 1950;
	r.stats.lower_bound = 1958;
	r.stats.cost = 1967;
	r.stats.bypasses = 3;
	r.stats.runtime_ms = 812.5;

	const std::string row = to_csv_row(r);
	const RunRecord back = parse_csv_row(row);
	CHECK(to_csv_row(back) == row);
	CHECK(back.mode == Mode::ECBS);
	CHECK(back.cost == 1967);
	CHECK(back.stats.delta_lb() == 8);
	CHECK(config_key_from_row(row) == config_key(r));
	CHECK(std::count(row.begin(), row.end(), ',') + 1 == static_cast<long>(csv_columns().size()));
	CHECK(csv_header().rfind("map,scen,agents,mode,w,", 0) == 0);

	CHECK(is_timing_column("runtime_ms"));
	CHECK(is_timing_column("wdg_runtime_ms"));
	CHECK_FALSE(is_timing_column("cost"));
	CHECK_THROWS_AS(parse_csv_row("a,b,c"), std::runtime_error);
	CHECK(basename_of("/x/y/random-1.scen") == "random-1.scen");
}

TEST_CASE("summary counts unsolved runs at the time limit")
{
	std::vector<RunRecord> rs(25);
	for (int k = 0; k < 25; ++k)
	{
		rs[k].agents = 45;
		rs[k].w = 1.05;
		rs[k].stats.runtime_ms = 60000;
	}
	for (int k = 0; k < 3; ++k)
	{
		rs[k].solved = true;
		rs[k].stats.runtime_ms = 100.0 * (k + 1);
	}
	const auto s = summarize(rs, 60);
	REQUIRE(s.size() == 1);
	CHECK(s[0].runs == 25);
	CHECK(s[0].solved == 3);
	CHECK(s[0].success_rate() == doctest::Approx(0.12));
	CHECK(s[0].mean_runtime_ms == doctest::Approx((600.0 + 22 * 60000.0) / 25));
	const std::string line = format_summary(s[0], Mode::EECBS);
	CHECK(line.find("3/25") != std::string::npos);
	CHECK(line.find("12") != std::string::npos);
}

TEST_CASE("sweep covers the full product")
{
	const auto dir = scratch("product");
	const auto set = oracle::write_benchmark_set(dir.string(), 25, 150);
	SweepSpec spec;
	spec.map_path = set.map_path;
	spec.scen_paths = set.scen_paths;
	for (int a = 45; a <= 150; a += 15)
		spec.agent_counts.push_back(a);
	for (int k = 1; k <= 10; ++k)
		spec.ws.push_back(1.0 + 0.02 * k);
	spec.base.time_limit = 1e-4;
	spec.base.wdg = false;
	spec.out_csv = (dir / "runs.csv").string();
	std::ostringstream log;
	const auto out = run_sweep(spec, log);
	CHECK(out.records.size() == 2000);
	CHECK(out.summaries.size() == 80);
	for (const auto& s : out.summaries)
		CHECK(s.runs == 25);
	CHECK(count_lines(dir / "runs.csv") == 2001);
	CHECK(out.validation_failures == 0);
}

TEST_CASE("sweep resumes from an existing file")
{
	const auto dir = scratch("resume");
	const auto set = oracle::write_benchmark_set(dir.string(), 2, 10);
	SweepSpec spec;
	spec.map_path = set.map_path;
	spec.scen_paths = set.scen_paths;
	spec.agent_counts = {5};
	spec.ws = {1.1, 1.2};
	spec.base.time_limit = 10;
	spec.out_csv = (dir / "runs.csv").string();
	std::ostringstream log;
	const auto first = run_sweep(spec, log);
	CHECK(first.skipped == 0);
	CHECK(first.records.size() == 4);
	for (const auto& r : first.records)
		CHECK(r.solved);
	CHECK(count_lines(dir / "runs.csv") == 5);

	const auto again = run_sweep(spec, log);
	CHECK(again.skipped == 4);
	CHECK(count_lines(dir / "runs.csv") == 5);
	for (std::size_t k = 0; k < 4; ++k)
		CHECK(again.records[k].cost == first.records[k].cost);

	spec.ws.push_back(1.3);
	const auto more = run_sweep(spec, log);
	CHECK(more.skipped == 4);
	CHECK(count_lines(dir / "runs.csv") == 7);

	std::ofstream(dir / "other.csv") << "some,other,header\n";
	spec.out_csv = (dir / "other.csv").string();
	CHECK_THROWS_AS(run_sweep(spec, log), std::runtime_error);
}

TEST_CASE("sweep input errors")
{
	SweepSpec spec;
	spec.map_path = "missing.map";
	spec.agent_counts = {5};
	spec.ws = {1.1};
	std::ostringstream log;
	CHECK_THROWS_AS(run_sweep(spec, log), std::invalid_argument);
	spec.scen_paths = {"missing.scen"};
	CHECK_THROWS_AS(run_sweep(spec, log), std::runtime_error);
}
