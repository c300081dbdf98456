#pragma once

// Closed-loop scenario engine (tracker -> planner -> controller -> plant),
// COLREGs situation classification and run metrics.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcmpc/core.hpp"
#include "bcmpc/obstacles.hpp"
#include "bcmpc/planner.hpp"
#include "bcmpc/vessel.hpp"

namespace bcmpc {

struct ScenarioConfig {
	std::string name = "unnamed";
	VesselState initial;
	VesselModel vessel;
	ControllerGains gains;
	PlannerConfig planner;
	DesiredTrajectory desired;
	std::vector<ObstacleScript> obstacles;
	EstimateNoise noise = EstimateNoise::none();
	double planner_period = 5.0;
	double duration = 300.0;
	double dt = 0.1;
	std::uint64_t seed = 1;

	void validate() const
	{
		vessel.validate();
		gains.validate();
		planner.validate();
		noise.validate();
		for (const auto& o : obstacles)
			o.validate();
		if (!(duration > 0.0))
			throw std::invalid_argument("ScenarioConfig: duration must be positive");
		if (!(dt > 0.0) || std::abs(planner.tree.dt - dt) > 1e-12)
			throw std::invalid_argument("ScenarioConfig: tree step must equal the integration step");
		if (std::abs(planner_period - planner.tree.step_times.front()) > 1e-9)
			throw std::invalid_argument("ScenarioConfig: planner period must equal the first step length");
		if (!input_blocking_check(planner.tree, planner_period))
			throw std::invalid_argument("ScenarioConfig: step lengths must be multiples of the planner period");
		for (double period : {planner_period, noise.period, duration}) {
			const double k = period / dt;
			if (std::abs(k - std::round(k)) > 1e-6)
				throw std::invalid_argument("ScenarioConfig: periods must be multiples of dt");
		}
		if (initial.vel.sog < 0.0)
			throw std::invalid_argument("ScenarioConfig: negative initial speed");
	}
};

struct LogRow {
	double t = 0.0;
	VesselState own;
	Force2 tau = Force2::Zero();
	double desired_sog = 0.0;
	double desired_rot = 0.0;
	double desired_course = 0.0;
	long selected = -1;
	bool failsafe = false;
	CostBreakdown cost;
	std::vector<ObstacleTruth> truth;
	std::vector<ObstacleEstimate> estimates;
};

struct PlannerRecord {
	double t = 0.0;
	long selected = -1;
	std::size_t candidates = 0;
	CostBreakdown cost;
	bool failsafe = false;
	double course_change = 0.0; ///< commanded by the executed first maneuver [rad]
	double sog_change = 0.0;    ///< [m/s]
};

struct RunLog {
	std::string scenario;
	double dt = 0.1;
	std::vector<int> obstacle_ids;
	std::vector<LogRow> rows;
	std::vector<PlannerRecord> plans;
};

namespace detail {

struct DesiredSample {
	double sog, rot, course, sog_acc, rot_acc;
};

inline DesiredSample desired_at(const VelocityTrajectory& ref, double t)
{
	const auto b = bracket(ref.grid, t);
	return {lerp_at(ref.sog, b), lerp_at(ref.rot, b), lerp_at(ref.course, b), lerp_at(ref.sog_acc, b),
	        lerp_at(ref.rot_acc, b)};
}

inline std::size_t steps_of(double period, double dt)
{
	return static_cast<std::size_t>(std::llround(period / dt));
}

} // namespace detail

/**
 * Runs a scenario. Obstacles are observed every noise period, the planner runs
 * every planner period and hands the selected candidate's desired trajectory to
 * the controller, and the plant is stepped every dt. Deterministic for a given
 * configuration and seed.
 */
inline RunLog run(const ScenarioConfig& cfg)
{
	cfg.validate();
	RunLog log;
	log.scenario = cfg.name;
	log.dt = cfg.dt;
	for (const auto& o : cfg.obstacles)
		log.obstacle_ids.push_back(o.id);

	Rng rng(cfg.seed);
	VesselState state = cfg.initial;
	state.time = 0.0;
	Force2 tau = inverse_model(cfg.vessel, state.vel).cwiseMax(cfg.vessel.tau_min).cwiseMin(cfg.vessel.tau_max);
	ControllerState ctrl;

	const double horizon = cfg.planner.tree.horizon();
	VelocityTrajectory reference = VelocityTrajectory::constant(TimeGrid::spanning(0.0, horizon, cfg.dt),
	                                                            state.vel.sog, state.pose.course);

	const auto total_steps = detail::steps_of(cfg.duration, cfg.dt);
	const auto plan_steps = detail::steps_of(cfg.planner_period, cfg.dt);
	const auto obs_steps = detail::steps_of(cfg.noise.period, cfg.dt);

	std::vector<ObstacleEstimate> estimates(cfg.obstacles.size());
	std::vector<double> held_course(cfg.obstacles.size());
	for (std::size_t i = 0; i < cfg.obstacles.size(); ++i)
		held_course[i] = cfg.obstacles[i].course;

	long selected = -1;
	bool failsafe = false;
	CostBreakdown cost;
	log.rows.reserve(total_steps + 1);

	for (std::size_t k = 0;; ++k) {
		const double t = static_cast<double>(k) * cfg.dt;
		state.time = t;

		if (k % obs_steps == 0) {
			for (std::size_t i = 0; i < cfg.obstacles.size(); ++i) {
				auto est = observe(cfg.obstacles[i], cfg.noise, t, rng);
				if (est.sog > 1e-6)
					held_course[i] = est.course;
				else
					est.course = held_course[i];
				estimates[i] = est;
			}
		}

		if (k % plan_steps == 0 && k < total_steps) {
			const auto seed = detail::desired_at(reference, t);
			PlanRequest req;
			req.state = state;
			req.tau = tau;
			req.desired_sog = seed.sog;
			req.desired_course = seed.course;
			req.previous = reference;
			req.obstacles = estimates;
			const PlanResult res = plan(cfg.planner, cfg.vessel, cfg.desired, req);

			PlannerRecord rec;
			rec.t = t;
			rec.candidates = res.candidates.size();
			rec.failsafe = res.failsafe;
			failsafe = res.failsafe;
			if (!res.failsafe) {
				const auto& sel = res.selected();
				reference = sel.desired;
				selected = static_cast<long>(res.selection.index);
				cost = res.selection.costs[res.selection.index];
				rec.selected = selected;
				rec.cost = cost;
				rec.course_change = std::abs(sel.first_maneuver.course.back() - sel.first_maneuver.course.front());
				rec.sog_change = std::abs(sel.first_maneuver.sog.back() - sel.first_maneuver.sog.front());
			} else {
				selected = -1;
			}
			log.plans.push_back(rec);
		}

		const auto d = detail::desired_at(reference, t);
		const Force2 tau_cmd = control_law(cfg.vessel, cfg.gains, ctrl, state.vel, state.pose.course,
		                                   {d.sog, d.rot}, d.course, Rate2{d.sog_acc, d.rot_acc}, cfg.dt);
		tau = rate_limit(cfg.vessel, tau, tau_cmd, cfg.dt);

		LogRow row;
		row.t = t;
		row.own = state;
		row.tau = tau;
		row.desired_sog = d.sog;
		row.desired_rot = d.rot;
		row.desired_course = d.course;
		row.selected = selected;
		row.failsafe = failsafe;
		row.cost = cost;
		row.estimates = estimates;
		row.truth.reserve(cfg.obstacles.size());
		for (const auto& o : cfg.obstacles)
			row.truth.push_back(ground_truth(o, t));
		log.rows.push_back(std::move(row));

		if (k == total_steps)
			break;
		state = step_plant(cfg.vessel, state, tau, cfg.dt);
	}
	return log;
}

// ---------------------------------------------------------------------------
// COLREGs situations

enum class Situation { head_on, crossing_give_way, crossing_stand_on, overtaking, overtaken, none };

inline std::string to_string(Situation s)
{
	switch (s) {
	case Situation::head_on: return "head_on";
	case Situation::crossing_give_way: return "crossing_give_way";
	case Situation::crossing_stand_on: return "crossing_stand_on";
	case Situation::overtaking: return "overtaking";
	case Situation::overtaken: return "overtaken";
	case Situation::none: return "none";
	}
	return "none";
}

struct ColregsThresholds {
	double min_speed = 0.2;               ///< [m/s]
	double head_on_margin = deg2rad(6.0); ///< reciprocal-course tolerance
	double head_on_sector = deg2rad(22.5);
	double abaft_beam = deg2rad(112.5); ///< 22.5 deg abaft the beam
};

/**
 * Situation of the ownship with respect to one obstacle, from the ownship's
 * point of view. `none` unless both vessels move and the range is closing.
 */
inline Situation classify_situation(const VesselState& own, const ObstacleTruth& obs,
                                    const ColregsThresholds& th = {})
{
	if (own.vel.sog <= th.min_speed || obs.sog <= th.min_speed)
		return Situation::none;

	const Position rel = obs.position - own.pose.position();
	const Position v_own = own.vel.sog * Position{std::cos(own.pose.course), std::sin(own.pose.course)};
	const Position v_obs = obs.sog * Position{std::cos(obs.course), std::sin(obs.course)};
	const Position v_rel = v_obs - v_own;
	const double range_rate = rel.north * v_rel.north + rel.east * v_rel.east;
	if (!(range_rate < 0.0))
		return Situation::none;

	// bearing of the obstacle from the ownship bow, and of the ownship from the obstacle bow
	const double bearing_obs = wrap_angle(std::atan2(rel.east, rel.north) - own.pose.course);
	const double bearing_own = wrap_angle(std::atan2(-rel.east, -rel.north) - obs.course);
	const double course_diff = wrap_angle(obs.course - own.pose.course);

	if (angle_distance(course_diff, kPi) <= th.head_on_margin && std::abs(bearing_obs) <= th.head_on_sector)
		return Situation::head_on;
	if (std::abs(bearing_own) > th.abaft_beam && own.vel.sog > obs.sog)
		return Situation::overtaking;
	if (std::abs(bearing_obs) > th.abaft_beam && obs.sog > own.vel.sog)
		return Situation::overtaken;
	if (std::abs(bearing_obs) > th.abaft_beam)
		return Situation::none;
	return bearing_obs >= 0.0 ? Situation::crossing_give_way : Situation::crossing_stand_on;
}

// ---------------------------------------------------------------------------
// Metrics

enum class Compliance { compliant, noncompliant, aware_noncompliant, not_applicable };

inline std::string to_string(Compliance c)
{
	switch (c) {
	case Compliance::compliant: return "compliant";
	case Compliance::noncompliant: return "noncompliant";
	case Compliance::aware_noncompliant: return "aware_noncompliant";
	case Compliance::not_applicable: return "not_applicable";
	}
	return "not_applicable";
}

struct ObstacleMetrics {
	int id = 0;
	double min_distance = std::numeric_limits<double>::infinity();
	double time_of_min = 0.0;
	/// Smallest d - D_0(beta) over the run.
	double min_collision_clearance = std::numeric_limits<double>::infinity();
	std::array<double, 3> incursion{0.0, 0.0, 0.0}; ///< time inside collision, safety, margin [s]
	Situation situation = Situation::none;
	/// Ownship position in the obstacle body frame at closest approach (x ahead, y starboard).
	double cpa_along = 0.0;
	double cpa_lateral = 0.0;
	Compliance compliance = Compliance::not_applicable;

	double collision_time() const { return incursion[0]; }
	double safety_time() const { return incursion[1]; }
	double margin_time() const { return incursion[2]; }
};

/// Commanded maneuvers above these thresholds count as readily observable.
inline constexpr double kObservableCourseChange = deg2rad(15.0);
inline constexpr double kObservableSogChange = 1.0;

struct Metrics {
	std::string scenario;
	std::vector<ObstacleMetrics> obstacles;
	int switch_count = 0;
	int observable_maneuvers = 0;
	int failsafe_count = 0;
	double max_course_change = 0.0;
};

inline Compliance judge_compliance(Situation s, double along, double lateral)
{
	switch (s) {
	case Situation::head_on: return lateral < 0.0 ? Compliance::compliant : Compliance::noncompliant;
	case Situation::crossing_give_way: return along < 0.0 ? Compliance::compliant : Compliance::aware_noncompliant;
	case Situation::overtaking: return lateral < 0.0 ? Compliance::compliant : Compliance::noncompliant;
	default: return Compliance::not_applicable;
	}
}

inline Metrics compute_metrics(const RunLog& log, const PenaltyGeometry& g)
{
	Metrics m;
	m.scenario = log.scenario;
	const std::size_t n_obs = log.obstacle_ids.size();
	m.obstacles.resize(n_obs);
	for (std::size_t i = 0; i < n_obs; ++i)
		m.obstacles[i].id = log.obstacle_ids[i];

	for (const auto& row : log.rows) {
		for (std::size_t i = 0; i < n_obs; ++i) {
			auto& om = m.obstacles[i];
			const auto& ob = row.truth[i];
			const auto rel = relative_geometry(row.own.pose.position(), ob.position, ob.course);
			if (om.situation == Situation::none)
				om.situation = classify_situation(row.own, ob);
			for (std::size_t k = 0; k < 3; ++k)
				if (rel.distance < region_radius(g, k, rel.bearing))
					om.incursion[k] += log.dt;
			om.min_collision_clearance =
			    std::min(om.min_collision_clearance, rel.distance - region_radius(g, 0, rel.bearing));
			if (rel.distance < om.min_distance) {
				om.min_distance = rel.distance;
				om.time_of_min = row.t;
				om.cpa_along = rel.distance * std::cos(rel.bearing);
				om.cpa_lateral = rel.distance * std::sin(rel.bearing);
			}
		}
	}
	for (auto& om : m.obstacles)
		om.compliance = judge_compliance(om.situation, om.cpa_along, om.cpa_lateral);

	for (std::size_t p = 0; p < log.plans.size(); ++p) {
		const auto& rec = log.plans[p];
		if (rec.failsafe) {
			++m.failsafe_count;
			continue;
		}
		if (p > 0 && rec.cost.tran == 1)
			++m.switch_count;
		m.max_course_change = std::max(m.max_course_change, rec.course_change);
		if (rec.course_change > kObservableCourseChange || rec.sog_change > kObservableSogChange)
			++m.observable_maneuvers;
	}
	return m;
}

} // namespace bcmpc
