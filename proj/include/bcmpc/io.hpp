#pragma once

// Run artifacts: trajectory CSV, metrics JSON, penalty raster and a text summary.

#include <nlohmann/json.hpp>

#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bcmpc/objective.hpp"
#include "bcmpc/sim.hpp"

namespace bcmpc {

namespace detail {

/// Locale-independent shortest-ish representation; identical inputs give identical bytes.
inline std::string num(double v)
{
	char buf[32];
	std::snprintf(buf, sizeof buf, "%.10g", v);
	return buf;
}

} // namespace detail

/// Column names of the trajectory CSV for a log with the given obstacle ids.
inline std::vector<std::string> csv_header(const std::vector<int>& obstacle_ids)
{
	std::vector<std::string> h{"t_s",          "north_m",      "east_m",        "course_rad",    "sog_mps",
	                           "rot_radps",    "tau_m",        "tau_delta",     "des_sog_mps",   "des_rot_radps",
	                           "des_course_rad", "selected_id", "failsafe",      "cost_align",    "cost_avoid",
	                           "cost_tran",    "cost_total"};
	for (int id : obstacle_ids) {
		const std::string p = "obs" + std::to_string(id) + "_";
		for (const char* s : {"north_m", "east_m", "sog_mps", "course_rad", "est_north_m", "est_east_m", "est_sog_mps",
		                      "est_course_rad", "est_stamp_s"})
			h.push_back(p + s);
	}
	return h;
}

inline void write_csv(std::ostream& os, const RunLog& log)
{
	const auto header = csv_header(log.obstacle_ids);
	for (std::size_t i = 0; i < header.size(); ++i)
		os << (i ? "," : "") << header[i];
	os << '\n';
	using detail::num;
	for (const auto& r : log.rows) {
		os << num(r.t) << ',' << num(r.own.pose.north) << ',' << num(r.own.pose.east) << ','
		   << num(r.own.pose.course) << ',' << num(r.own.vel.sog) << ',' << num(r.own.vel.rot) << ','
		   << num(r.tau(0)) << ',' << num(r.tau(1)) << ',' << num(r.desired_sog) << ',' << num(r.desired_rot)
		   << ',' << num(r.desired_course) << ',' << r.selected << ',' << (r.failsafe ? 1 : 0) << ','
		   << num(r.cost.align) << ',' << num(r.cost.avoid) << ',' << r.cost.tran << ',' << num(r.cost.total);
		for (std::size_t i = 0; i < log.obstacle_ids.size(); ++i) {
			const auto& tr = r.truth[i];
			const auto& es = r.estimates[i];
			os << ',' << num(tr.position.north) << ',' << num(tr.position.east) << ',' << num(tr.sog) << ','
			   << num(tr.course) << ',' << num(es.position.north) << ',' << num(es.position.east) << ','
			   << num(es.sog) << ',' << num(es.course) << ',' << num(es.timestamp);
		}
		os << '\n';
	}
}

inline std::string csv_string(const RunLog& log)
{
	std::ostringstream os;
	write_csv(os, log);
	return os.str();
}

inline nlohmann::json metrics_to_json(const Metrics& m)
{
	nlohmann::json obs = nlohmann::json::array();
	for (const auto& o : m.obstacles)
		obs.push_back({{"id", o.id},
		               {"situation", to_string(o.situation)},
		               {"compliance", to_string(o.compliance)},
		               {"min_distance_m", o.min_distance},
		               {"time_of_min_s", o.time_of_min},
		               {"min_collision_clearance_m", o.min_collision_clearance},
		               {"cpa_along_m", o.cpa_along},
		               {"cpa_lateral_m", o.cpa_lateral},
		               {"collision_time_s", o.collision_time()},
		               {"safety_time_s", o.safety_time()},
		               {"margin_time_s", o.margin_time()}});
	return {{"scenario", m.scenario},
	        {"switch_count", m.switch_count},
	        {"observable_maneuvers", m.observable_maneuvers},
	        {"failsafe_count", m.failsafe_count},
	        {"max_course_change_deg", rad2deg(m.max_course_change)},
	        {"obstacles", obs}};
}

/// One row per obstacle, column layout of a results table.
inline std::string summary_text(const Metrics& m)
{
	std::ostringstream os;
	char line[256];
	os << "scenario: " << m.scenario << '\n';
	std::snprintf(line, sizeof line, "%-4s %-18s %-19s %10s %10s %10s %10s %10s\n", "id", "situation", "compliance",
	              "min_d[m]", "t_min[s]", "coll[s]", "safe[s]", "margin[s]");
	os << line;
	for (const auto& o : m.obstacles) {
		std::snprintf(line, sizeof line, "%-4d %-18s %-19s %10.1f %10.1f %10.1f %10.1f %10.1f\n", o.id,
		              to_string(o.situation).c_str(), to_string(o.compliance).c_str(), o.min_distance,
		              o.time_of_min, o.collision_time(), o.safety_time(), o.margin_time());
		os << line;
	}
	std::snprintf(line, sizeof line, "switches: %d  observable maneuvers: %d  fail-safe plans: %d  max course change: %.1f deg\n",
	              m.switch_count, m.observable_maneuvers, m.failsafe_count, rad2deg(m.max_course_change));
	os << line;
	return os.str();
}

struct RasterSpec {
	double course = 0.0;  ///< obstacle course [rad]
	double extent = 400.0; ///< half width of the square [m]
	double step = 5.0;     ///< [m]
};

/// Penalty around an obstacle at the origin, north-major rows.
inline void write_raster(std::ostream& os, const PenaltyGeometry& g, const RasterSpec& spec)
{
	if (!(spec.step > 0.0) || !(spec.extent > 0.0))
		throw std::invalid_argument("write_raster: extent and step must be positive");
	os << "north_m,east_m,penalty\n";
	const auto n = static_cast<long>(std::floor(2.0 * spec.extent / spec.step + 1e-9));
	for (long i = 0; i <= n; ++i) {
		const double north = -spec.extent + static_cast<double>(i) * spec.step;
		for (long j = 0; j <= n; ++j) {
			const double east = -spec.extent + static_cast<double>(j) * spec.step;
			const auto rel = relative_geometry({north, east}, {0.0, 0.0}, spec.course);
			os << detail::num(north) << ',' << detail::num(east) << ','
			   << detail::num(penalty(g, rel.distance, rel.bearing)) << '\n';
		}
	}
}

} // namespace bcmpc
