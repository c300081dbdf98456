// bcmpc: run scenarios, single planner solves and penalty rasters from the command line.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "bcmpc/bcmpc.hpp"

namespace fs = std::filesystem;
using namespace bcmpc;

namespace {

struct Options {
	std::string config;
	std::string scenario;
	std::string out = ".";
	std::optional<std::uint64_t> seed;
	std::optional<std::string> noise;
	std::string snapshot;
	std::string kind;
	double course_deg = 0.0;
	double extent = 400.0;
	double step = 5.0;
	bool dump = false;
};

ScenarioConfig resolve(const Options& o, bool required = true)
{
	ScenarioConfig c;
	if (!o.config.empty() && !o.scenario.empty())
		throw ConfigError("--config and --scenario are mutually exclusive");
	if (!o.config.empty())
		c = load_config(o.config);
	else if (!o.scenario.empty())
		c = make_scenario(o.scenario);
	else if (required)
		throw ConfigError("one of --config or --scenario is required");
	if (o.seed)
		c.seed = *o.seed;
	if (o.noise) {
		try {
			c.noise = EstimateNoise::preset(*o.noise);
		} catch (const std::invalid_argument& e) {
			throw ConfigError(e.what());
		}
	}
	c.validate();
	return c;
}

void write_file(const fs::path& p, const std::string& content)
{
	std::ofstream f(p, std::ios::binary);
	if (!f)
		throw std::runtime_error("cannot write '" + p.string() + "'");
	f << content;
}

int cmd_run(const Options& o)
{
	const ScenarioConfig cfg = resolve(o);
	fs::create_directories(o.out);
	const RunLog log = run(cfg);
	const Metrics m = compute_metrics(log, cfg.planner.penalty);
	const fs::path dir(o.out);
	write_file(dir / "trajectory.csv", csv_string(log));
	write_file(dir / "metrics.json", metrics_to_json(m).dump(2) + "\n");
	write_file(dir / "config.json", config_to_json(cfg).dump(2) + "\n");
	const std::string summary = summary_text(m);
	write_file(dir / "summary.txt", summary);
	std::cout << summary;
	return 0;
}

/// Snapshot: {"t_s", "ownship": {...}, "obstacles": [{"id", "north_m", "east_m", "sog_mps", "course_rad"}]}.
void apply_snapshot(const std::string& file, PlanRequest& req)
{
	std::ifstream in(file);
	if (!in)
		throw ConfigError("cannot open snapshot '" + file + "'");
	nlohmann::json j;
	try {
		in >> j;
	} catch (const nlohmann::json::parse_error& e) {
		throw ConfigError(std::string("malformed snapshot: ") + e.what());
	}
	detail::StrictObject root(j, "");
	req.state.time = root.number("t_s", 0.0);
	if (root.has("ownship")) {
		detail::StrictObject s(root.at("ownship"), "ownship");
		req.state.pose = make_pose(s.number("north_m"), s.number("east_m"), s.number("course_rad"));
		req.state.vel = {s.number("sog_mps"), s.number("rot_radps", 0.0)};
		s.finish();
	} else {
		root.number("ownship", 0.0);
	}
	if (root.has("obstacles")) {
		const auto& arr = root.at("obstacles");
		if (!arr.is_array())
			throw ConfigError("obstacles: expected an array");
		req.obstacles.clear();
		for (std::size_t i = 0; i < arr.size(); ++i) {
			detail::StrictObject e(arr[i], "obstacles[" + std::to_string(i) + "]");
			ObstacleEstimate est;
			est.id = static_cast<int>(e.integer("id", static_cast<long long>(i) + 1));
			est.position = {e.number("north_m"), e.number("east_m")};
			est.sog = e.number("sog_mps");
			est.course = e.number("course_rad");
			est.timestamp = req.state.time;
			e.finish();
			req.obstacles.push_back(est);
		}
	} else {
		root.number("obstacles", 0.0);
	}
	root.finish();
}

int cmd_solve(const Options& o)
{
	const ScenarioConfig cfg = resolve(o);
	PlanRequest req;
	req.state = cfg.initial;
	req.state.time = 0.0;
	Rng rng(cfg.seed);
	for (const auto& s : cfg.obstacles)
		req.obstacles.push_back(observe(s, cfg.noise, 0.0, rng));
	if (!o.snapshot.empty())
		apply_snapshot(o.snapshot, req);
	req.tau = inverse_model(cfg.vessel, req.state.vel).cwiseMax(cfg.vessel.tau_min).cwiseMin(cfg.vessel.tau_max);
	req.desired_sog = req.state.vel.sog;
	req.desired_course = req.state.pose.course;

	const auto start = std::chrono::steady_clock::now();
	const PlanResult res = plan(cfg.planner, cfg.vessel, cfg.desired, req);
	const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

	if (res.failsafe) {
		std::cout << "failsafe: no feasible candidate, holding the previous reference\n";
		return 0;
	}
	std::printf("%5s  %-12s %14s %14s %5s %14s\n", "id", "branch", "align", "avoid", "tran", "total");
	for (std::size_t i = 0; i < res.candidates.size(); ++i) {
		const auto& c = res.candidates[i];
		std::string branch;
		for (const auto& b : c.branch)
			branch += (branch.empty() ? "" : "/") + std::to_string(b[0]) + ":" + std::to_string(b[1]);
		const auto& cb = res.selection.costs[i];
		std::printf("%5zu  %-12s %14.6g %14.6g %5d %14.6g\n", c.id, branch.c_str(), cb.align, cb.avoid, cb.tran,
		            cb.total);
	}
	std::printf("selected: %zu of %zu candidates (%.1f ms)\n", res.selected().id, res.candidates.size(), ms);
	return 0;
}

int cmd_raster(const Options& o)
{
	PenaltyGeometry g;
	if (!o.config.empty() || !o.scenario.empty())
		g = resolve(o).planner.penalty;
	if (o.kind == "circular")
		g.kind = PenaltyKind::circular;
	else if (o.kind == "elliptical_colregs")
		g.kind = PenaltyKind::elliptical_colregs;
	else if (!o.kind.empty())
		throw ConfigError("--kind: expected 'circular' or 'elliptical_colregs'");
	g.validate();
	fs::create_directories(o.out);
	const fs::path p = fs::path(o.out) / "penalty_raster.csv";
	std::ofstream f(p, std::ios::binary);
	if (!f)
		throw std::runtime_error("cannot write '" + p.string() + "'");
	write_raster(f, g, {deg2rad(o.course_deg), o.extent, o.step});
	std::cout << "wrote " << p.string() << '\n';
	return 0;
}

int cmd_validate(const Options& o)
{
	const ScenarioConfig c = resolve(o);
	if (o.dump)
		std::cout << config_to_json(c).dump(2) << '\n';
	else
		std::cout << "ok: " << c.name << '\n';
	return 0;
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Branching-course MPC collision avoidance simulator"};
	app.require_subcommand(1);
	Options o;

	auto add_source = [&](CLI::App* sub) {
		sub->add_option("--config", o.config, "Scenario config (JSON)")->check(CLI::ExistingFile);
		sub->add_option("--scenario", o.scenario, "Shipped scenario name")
		    ->check(CLI::IsMember(scenario_names()));
		sub->add_option("--seed", o.seed, "Override the random seed");
		sub->add_option("--noise", o.noise, "Override the obstacle noise preset")
		    ->check(CLI::IsMember({"radar", "ais", "none"}));
	};

	auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write logs, metrics and a summary");
	add_source(run_cmd);
	run_cmd->add_option("--out", o.out, "Output directory");

	auto* solve_cmd = app.add_subcommand("solve", "Run one planner iteration and print the candidate costs");
	add_source(solve_cmd);
	solve_cmd->add_option("--snapshot", o.snapshot, "Ownship/obstacle state to solve from (JSON)")
	    ->check(CLI::ExistingFile);

	auto* raster_cmd = app.add_subcommand("raster", "Write the penalty field around an obstacle as CSV");
	add_source(raster_cmd);
	raster_cmd->add_option("--out", o.out, "Output directory");
	raster_cmd->add_option("--kind", o.kind, "circular or elliptical_colregs");
	raster_cmd->add_option("--course-deg", o.course_deg, "Obstacle course [deg]");
	raster_cmd->add_option("--extent", o.extent, "Half width of the raster [m]");
	raster_cmd->add_option("--step", o.step, "Cell size [m]");

	auto* validate_cmd = app.add_subcommand("validate", "Check a config file");
	add_source(validate_cmd);
	validate_cmd->add_flag("--dump", o.dump, "Print the fully resolved config as JSON");

	CLI11_PARSE(app, argc, argv);

	try {
		if (run_cmd->parsed())
			return cmd_run(o);
		if (solve_cmd->parsed())
			return cmd_solve(o);
		if (raster_cmd->parsed())
			return cmd_raster(o);
		return cmd_validate(o);
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << '\n';
		return 2;
	}
}
