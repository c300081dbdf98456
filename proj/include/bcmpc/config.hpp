#pragma once

// Scenario configuration: strict JSON reader/writer (schema_version 1) and the
// built-in encounter library.

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcmpc/sim.hpp"

namespace bcmpc {

inline constexpr int kSchemaVersion = 1;

class ConfigError : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

namespace detail {

using json = nlohmann::json;

// Object reader that tracks which keys were consumed and rejects the rest.
class StrictObject
{
public:
	StrictObject(const json& j, std::string path) : j_(j), path_(std::move(path))
	{
		if (!j_.is_object())
			throw ConfigError(where() + ": expected an object");
	}

	bool has(const std::string& key) const { return j_.contains(key); }

	const json& at(const std::string& key)
	{
		seen_.insert(key);
		if (!j_.contains(key))
			throw ConfigError(where() + ": missing required key '" + key + "'");
		return j_.at(key);
	}

	double number(const std::string& key, double fallback)
	{
		return has(key) ? number(key) : (seen_.insert(key), fallback);
	}

	double number(const std::string& key)
	{
		const json& v = at(key);
		if (!v.is_number())
			throw ConfigError(child(key) + ": expected a number");
		const double x = v.get<double>();
		if (!std::isfinite(x))
			throw ConfigError(child(key) + ": expected a finite number");
		return x;
	}

	long long integer(const std::string& key, long long fallback)
	{
		if (!has(key)) {
			seen_.insert(key);
			return fallback;
		}
		const json& v = at(key);
		if (!v.is_number_integer())
			throw ConfigError(child(key) + ": expected an integer");
		return v.get<long long>();
	}

	std::string string(const std::string& key)
	{
		const json& v = at(key);
		if (!v.is_string())
			throw ConfigError(child(key) + ": expected a string");
		return v.get<std::string>();
	}

	std::string string(const std::string& key, const std::string& fallback)
	{
		return has(key) ? string(key) : (seen_.insert(key), fallback);
	}

	std::vector<double> numbers(const std::string& key, std::vector<double> fallback)
	{
		if (!has(key)) {
			seen_.insert(key);
			return fallback;
		}
		const json& v = at(key);
		if (!v.is_array())
			throw ConfigError(child(key) + ": expected an array of numbers");
		std::vector<double> out;
		for (std::size_t i = 0; i < v.size(); ++i) {
			if (!v[i].is_number())
				throw ConfigError(child(key) + "[" + std::to_string(i) + "]: expected a number");
			out.push_back(v[i].get<double>());
		}
		return out;
	}

	std::vector<int> integers(const std::string& key, std::vector<int> fallback)
	{
		if (!has(key)) {
			seen_.insert(key);
			return fallback;
		}
		const json& v = at(key);
		if (!v.is_array())
			throw ConfigError(child(key) + ": expected an array of integers");
		std::vector<int> out;
		for (std::size_t i = 0; i < v.size(); ++i) {
			if (!v[i].is_number_integer())
				throw ConfigError(child(key) + "[" + std::to_string(i) + "]: expected an integer");
			out.push_back(v[i].get<int>());
		}
		return out;
	}

	template <std::size_t N>
	std::array<double, N> fixed(const std::string& key, const std::array<double, N>& fallback)
	{
		const auto v = numbers(key, {fallback.begin(), fallback.end()});
		if (v.size() != N)
			throw ConfigError(child(key) + ": expected " + std::to_string(N) + " numbers");
		std::array<double, N> out{};
		std::copy(v.begin(), v.end(), out.begin());
		return out;
	}

	std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

	/// Throws on the first key that was never read.
	void finish() const
	{
		for (const auto& [k, v] : j_.items())
			if (!seen_.count(k))
				throw ConfigError("unknown config key '" + child(k) + "'");
	}

private:
	std::string where() const { return path_.empty() ? "<root>" : path_; }

	const json& j_;
	std::string path_;
	std::set<std::string> seen_;
};

inline VesselModel read_vessel(const json& j, const std::string& path)
{
	StrictObject o(j, path);
	VesselModel m;
	m.m_u0 = o.number("m_u0", m.m_u0);
	m.m_u1 = o.number("m_u1", m.m_u1);
	m.m_r0 = o.number("m_r0", m.m_r0);
	m.m_r1 = o.number("m_r1", m.m_r1);
	m.d_u1 = o.number("d_u1", m.d_u1);
	m.d_u2 = o.number("d_u2", m.d_u2);
	m.d_r1 = o.number("d_r1", m.d_r1);
	m.d_r2 = o.number("d_r2", m.d_r2);
	m.d_ru = o.number("d_ru", m.d_ru);
	auto vec2 = [&](const std::string& key, const Force2& fb) {
		const auto a = o.fixed<2>(key, {fb(0), fb(1)});
		return Force2{a[0], a[1]};
	};
	m.tau_min = vec2("tau_min", m.tau_min);
	m.tau_max = vec2("tau_max", m.tau_max);
	m.tau_rate_min = vec2("tau_rate_min", m.tau_rate_min);
	m.tau_rate_max = vec2("tau_rate_max", m.tau_rate_max);
	m.u_max = o.number("u_max_mps", m.u_max);
	m.u_min = o.number("u_min_mps", m.u_min);
	o.finish();
	return m;
}

inline ControllerGains read_controller(const json& j, const std::string& path)
{
	StrictObject o(j, path);
	ControllerGains g;
	if (o.has("kp")) {
		const json& kp = o.at("kp");
		if (!kp.is_array() || kp.size() != 2)
			throw ConfigError(o.child("kp") + ": expected a 2x3 array");
		for (int r = 0; r < 2; ++r) {
			if (!kp[r].is_array() || kp[r].size() != 3)
				throw ConfigError(o.child("kp") + ": expected a 2x3 array");
			for (int c = 0; c < 3; ++c) {
				if (!kp[r][c].is_number())
					throw ConfigError(o.child("kp") + ": expected numbers");
				g.kp(r, c) = kp[r][c].get<double>();
			}
		}
	} else {
		o.number("kp", 0.0); // mark seen
	}
	const auto ki = o.fixed<2>("ki", {g.ki(0), g.ki(1)});
	g.ki = {ki[0], ki[1]};
	g.integral_limit = o.number("integral_limit", g.integral_limit);
	o.finish();
	return g;
}

inline PlannerConfig read_planner(const json& j, const std::string& path)
{
	StrictObject o(j, path);
	PlannerConfig p;
	if (o.has("tree")) {
		StrictObject t(o.at("tree"), o.child("tree"));
		p.tree.step_times = t.numbers("step_times_s", p.tree.step_times);
		p.tree.n_sog = t.integers("n_sog", p.tree.n_sog);
		p.tree.n_course = t.integers("n_course", p.tree.n_course);
		p.tree.t_ramp = t.number("t_ramp_s", p.tree.t_ramp);
		p.tree.t_sog = t.number("t_sog_s", p.tree.t_sog);
		p.tree.t_course = t.number("t_course_s", p.tree.t_course);
		t.finish();
	}
	if (o.has("error_model")) {
		StrictObject e(o.at("error_model"), o.child("error_model"));
		p.error.t_sog = e.number("t_sog_s", p.error.t_sog);
		p.error.t_course = e.number("t_course_s", p.error.t_course);
		e.finish();
	}
	if (o.has("los")) {
		StrictObject l(o.at("los"), o.child("los"));
		p.los.lookahead = l.number("lookahead_m", p.los.lookahead);
		p.los.gamma_s = l.number("gamma_s", p.los.gamma_s);
		p.los.epsilon = l.number("epsilon", p.los.epsilon);
		p.los.u_max = l.number("u_max_mps", p.los.u_max);
		l.finish();
	}
	if (o.has("weights")) {
		StrictObject w(o.at("weights"), o.child("weights"));
		p.weights.align = w.number("align", p.weights.align);
		p.weights.avoid = w.number("avoid", p.weights.avoid);
		p.weights.tran = w.number("tran", p.weights.tran);
		p.weights.position = w.number("position", p.weights.position);
		p.weights.course = w.number("course", p.weights.course);
		p.weights.obstacle = w.numbers("obstacle", p.weights.obstacle);
		w.finish();
	}
	if (o.has("penalty")) {
		StrictObject g(o.at("penalty"), o.child("penalty"));
		const auto kind = g.string("kind", to_string(p.penalty.kind));
		if (kind == "circular")
			p.penalty.kind = PenaltyKind::circular;
		else if (kind == "elliptical_colregs")
			p.penalty.kind = PenaltyKind::elliptical_colregs;
		else
			throw ConfigError(g.child("kind") + ": expected 'circular' or 'elliptical_colregs'");
		p.penalty.radius = g.fixed<3>("radius_m", p.penalty.radius);
		p.penalty.major = g.fixed<3>("major_m", p.penalty.major);
		p.penalty.minor = g.fixed<3>("minor_m", p.penalty.minor);
		p.penalty.d_colregs = g.number("d_colregs_m", p.penalty.d_colregs);
		p.penalty.gamma1 = g.number("gamma1", p.penalty.gamma1);
		g.finish();
	}
	p.eval_dt = o.number("eval_dt_s", p.eval_dt);
	for (const char* k : {"tree", "error_model", "los", "weights", "penalty"})
		if (!o.has(k))
			o.number(k, 0.0);
	o.finish();
	return p;
}

inline DesiredTrajectory read_desired(const json& j, const std::string& path)
{
	StrictObject o(j, path);
	const std::string type = o.string("type");
	DesiredTrajectory out;
	if (type == "straight_line") {
		const Position start{o.number("north_m"), o.number("east_m")};
		const double course = o.number("course_rad");
		const double speed = o.number("sog_mps");
		const double t0 = o.number("t0_s", 0.0);
		if (speed < 0.0)
			throw ConfigError(o.child("sog_mps") + ": must be non-negative");
		out = DesiredTrajectory::straight_line(start, course, speed, t0);
	} else if (type == "waypoints") {
		const json& arr = o.at("waypoints");
		if (!arr.is_array())
			throw ConfigError(o.child("waypoints") + ": expected an array");
		std::vector<TimedWaypoint> wps;
		for (std::size_t i = 0; i < arr.size(); ++i) {
			StrictObject w(arr[i], o.child("waypoints") + "[" + std::to_string(i) + "]");
			wps.push_back({w.number("t_s"), {w.number("north_m"), w.number("east_m")}});
			w.finish();
		}
		try {
			out = DesiredTrajectory(std::move(wps));
		} catch (const std::invalid_argument& e) {
			throw ConfigError(o.child("waypoints") + ": " + e.what());
		}
	} else {
		throw ConfigError(o.child("type") + ": expected 'straight_line' or 'waypoints'");
	}
	o.finish();
	return out;
}

inline ObstacleScript read_obstacle(const json& j, const std::string& path)
{
	StrictObject o(j, path);
	ObstacleScript s;
	s.id = static_cast<int>(o.integer("id", 0));
	s.initial = {o.number("north_m"), o.number("east_m")};
	s.sog = o.number("sog_mps");
	s.course = o.number("course_rad");
	if (o.has("changes")) {
		const json& arr = o.at("changes");
		if (!arr.is_array())
			throw ConfigError(o.child("changes") + ": expected an array");
		for (std::size_t i = 0; i < arr.size(); ++i) {
			StrictObject c(arr[i], o.child("changes") + "[" + std::to_string(i) + "]");
			s.changes.push_back({c.number("t_s"), c.number("sog_mps"), c.number("course_rad")});
			c.finish();
		}
	} else {
		o.number("changes", 0.0);
	}
	o.finish();
	return s;
}

inline EstimateNoise read_noise(const json& j, const std::string& path)
{
	StrictObject o(j, path);
	EstimateNoise n;
	if (o.has("preset")) {
		try {
			n = EstimateNoise::preset(o.string("preset"));
		} catch (const std::invalid_argument& e) {
			throw ConfigError(o.child("preset") + ": " + e.what());
		}
	} else {
		o.number("preset", 0.0);
	}
	n.position_std = o.number("position_std_m", n.position_std);
	n.sog_std = o.number("sog_std_mps", n.sog_std);
	n.course_std = o.number("course_std_rad", n.course_std);
	n.latency = o.number("latency_s", n.latency);
	n.period = o.number("period_s", n.period);
	o.finish();
	return n;
}

} // namespace detail

/// Parses and validates a configuration document. Throws ConfigError naming the offending key.
inline ScenarioConfig config_from_json(const nlohmann::json& j)
{
	using detail::StrictObject;
	StrictObject root(j, "");
	const auto version = root.integer("schema_version", -1);
	if (version != kSchemaVersion)
		throw ConfigError("schema_version: expected " + std::to_string(kSchemaVersion));

	ScenarioConfig c;
	c.name = root.string("name");
	const auto seed = root.integer("seed", 1);
	if (seed < 0)
		throw ConfigError("seed: must be non-negative");
	c.seed = static_cast<std::uint64_t>(seed);
	c.duration = root.number("duration_s");
	c.dt = root.number("dt_s", c.dt);
	c.planner_period = root.number("planner_period_s", c.planner_period);

	{
		StrictObject o(root.at("ownship"), "ownship");
		c.initial.pose = make_pose(o.number("north_m"), o.number("east_m"), o.number("course_rad"));
		c.initial.vel = {o.number("sog_mps"), o.number("rot_radps", 0.0)};
		o.finish();
	}
	c.desired = detail::read_desired(root.at("desired_trajectory"), "desired_trajectory");

	if (root.has("obstacles")) {
		const auto& arr = root.at("obstacles");
		if (!arr.is_array())
			throw ConfigError("obstacles: expected an array");
		for (std::size_t i = 0; i < arr.size(); ++i)
			c.obstacles.push_back(detail::read_obstacle(arr[i], "obstacles[" + std::to_string(i) + "]"));
	} else {
		root.number("obstacles", 0.0);
	}
	c.noise = root.has("noise") ? detail::read_noise(root.at("noise"), "noise") : (root.number("noise", 0.0), c.noise);
	c.vessel = root.has("vessel") ? detail::read_vessel(root.at("vessel"), "vessel")
	                              : (root.number("vessel", 0.0), c.vessel);
	c.gains = root.has("controller") ? detail::read_controller(root.at("controller"), "controller")
	                                 : (root.number("controller", 0.0), c.gains);
	c.planner = root.has("planner") ? detail::read_planner(root.at("planner"), "planner")
	                                : (root.number("planner", 0.0), c.planner);
	c.planner.tree.dt = c.dt;
	root.finish();

	try {
		c.validate();
	} catch (const std::invalid_argument& e) {
		throw ConfigError(std::string("invalid configuration: ") + e.what());
	}
	return c;
}

inline ScenarioConfig load_config(const std::string& file)
{
	std::ifstream in(file);
	if (!in)
		throw ConfigError("cannot open config file '" + file + "'");
	nlohmann::json j;
	try {
		in >> j;
	} catch (const nlohmann::json::parse_error& e) {
		throw ConfigError("malformed JSON in '" + file + "': " + e.what());
	}
	return config_from_json(j);
}

/// Fully-resolved document; config_from_json(config_to_json(c)) reproduces c.
inline nlohmann::json config_to_json(const ScenarioConfig& c)
{
	using nlohmann::json;
	json j;
	j["schema_version"] = kSchemaVersion;
	j["name"] = c.name;
	j["seed"] = c.seed;
	j["duration_s"] = c.duration;
	j["dt_s"] = c.dt;
	j["planner_period_s"] = c.planner_period;
	j["ownship"] = {{"north_m", c.initial.pose.north},
	                {"east_m", c.initial.pose.east},
	                {"course_rad", c.initial.pose.course},
	                {"sog_mps", c.initial.vel.sog},
	                {"rot_radps", c.initial.vel.rot}};

	json wps = json::array();
	for (const auto& w : c.desired.waypoints())
		wps.push_back({{"t_s", w.t}, {"north_m", w.p.north}, {"east_m", w.p.east}});
	j["desired_trajectory"] = {{"type", "waypoints"}, {"waypoints", wps}};

	json obs = json::array();
	for (const auto& o : c.obstacles) {
		json ch = json::array();
		for (const auto& x : o.changes)
			ch.push_back({{"t_s", x.t}, {"sog_mps", x.sog}, {"course_rad", x.course}});
		obs.push_back({{"id", o.id},
		               {"north_m", o.initial.north},
		               {"east_m", o.initial.east},
		               {"sog_mps", o.sog},
		               {"course_rad", o.course},
		               {"changes", ch}});
	}
	j["obstacles"] = obs;
	j["noise"] = {{"position_std_m", c.noise.position_std},
	              {"sog_std_mps", c.noise.sog_std},
	              {"course_std_rad", c.noise.course_std},
	              {"latency_s", c.noise.latency},
	              {"period_s", c.noise.period}};

	const auto& v = c.vessel;
	auto v2 = [](const Force2& f) { return json::array({f(0), f(1)}); };
	j["vessel"] = {{"m_u0", v.m_u0},        {"m_u1", v.m_u1},
	               {"m_r0", v.m_r0},        {"m_r1", v.m_r1},
	               {"d_u1", v.d_u1},        {"d_u2", v.d_u2},
	               {"d_r1", v.d_r1},        {"d_r2", v.d_r2},
	               {"d_ru", v.d_ru},        {"tau_min", v2(v.tau_min)},
	               {"tau_max", v2(v.tau_max)}, {"tau_rate_min", v2(v.tau_rate_min)},
	               {"tau_rate_max", v2(v.tau_rate_max)}, {"u_max_mps", v.u_max},
	               {"u_min_mps", v.u_min}};

	const auto& g = c.gains;
	j["controller"] = {{"kp", json::array({json::array({g.kp(0, 0), g.kp(0, 1), g.kp(0, 2)}),
	                                       json::array({g.kp(1, 0), g.kp(1, 1), g.kp(1, 2)})})},
	                   {"ki", v2(g.ki)},
	                   {"integral_limit", g.integral_limit}};

	const auto& p = c.planner;
	j["planner"] = {
	    {"tree",
	     {{"step_times_s", p.tree.step_times},
	      {"n_sog", p.tree.n_sog},
	      {"n_course", p.tree.n_course},
	      {"t_ramp_s", p.tree.t_ramp},
	      {"t_sog_s", p.tree.t_sog},
	      {"t_course_s", p.tree.t_course}}},
	    {"error_model", {{"t_sog_s", p.error.t_sog}, {"t_course_s", p.error.t_course}}},
	    {"los",
	     {{"lookahead_m", p.los.lookahead},
	      {"gamma_s", p.los.gamma_s},
	      {"epsilon", p.los.epsilon},
	      {"u_max_mps", p.los.u_max}}},
	    {"weights",
	     {{"align", p.weights.align},
	      {"avoid", p.weights.avoid},
	      {"tran", p.weights.tran},
	      {"position", p.weights.position},
	      {"course", p.weights.course},
	      {"obstacle", p.weights.obstacle}}},
	    {"penalty",
	     {{"kind", to_string(p.penalty.kind)},
	      {"radius_m", p.penalty.radius},
	      {"major_m", p.penalty.major},
	      {"minor_m", p.penalty.minor},
	      {"d_colregs_m", p.penalty.d_colregs},
	      {"gamma1", p.penalty.gamma1}}},
	    {"eval_dt_s", p.eval_dt}};
	return j;
}

// ---------------------------------------------------------------------------
// Encounter library: ownship at the origin heading north at 5 m/s, obstacle at
// 2.5 m/s, 1000 m initial separation, desired path straight ahead.

inline constexpr double kOwnshipSpeed = 5.0;
inline constexpr double kObstacleSpeed = 2.5;
inline constexpr double kInitialSeparation = 1000.0;

inline std::vector<std::string> scenario_names()
{
	return {"head_on", "crossing_starboard", "overtaking", "crossing_port"};
}

inline ScenarioConfig make_scenario(const std::string& name)
{
	ScenarioConfig c;
	c.name = name;
	c.initial.pose = {0.0, 0.0, 0.0};
	c.initial.vel = {kOwnshipSpeed, 0.0};
	c.desired = DesiredTrajectory::straight_line({0.0, 0.0}, 0.0, kOwnshipSpeed);
	c.planner.tree.dt = c.dt;
	c.planner.los.u_max = c.vessel.u_max;

	ObstacleScript ob;
	ob.id = 1;
	ob.sog = kObstacleSpeed;
	// Crossing geometries meet at the collision point after t_c seconds.
	const double t_cross = kInitialSeparation / std::hypot(kOwnshipSpeed, kObstacleSpeed);
	if (name == "head_on") {
		ob.initial = {kInitialSeparation, 0.0};
		ob.course = -kPi;
		c.duration = 300.0;
	} else if (name == "crossing_starboard") {
		ob.initial = {kOwnshipSpeed * t_cross, kObstacleSpeed * t_cross};
		ob.course = -kPi / 2.0;
		c.duration = 360.0;
	} else if (name == "overtaking") {
		ob.initial = {kInitialSeparation, 0.0};
		ob.course = 0.0;
		c.duration = 600.0;
	} else if (name == "crossing_port") {
		ob.initial = {kOwnshipSpeed * t_cross, -kObstacleSpeed * t_cross};
		ob.course = kPi / 2.0;
		c.duration = 360.0;
	} else {
		throw ConfigError("unknown scenario '" + name + "'");
	}
	c.obstacles.push_back(ob);
	c.validate();
	return c;
}

} // namespace bcmpc
