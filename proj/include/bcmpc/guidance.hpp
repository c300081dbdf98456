#pragma once

// LOS guidance with a time-fixed path particle. Produces the (SOG, course)
// targets and the primitive accelerations that reach them in one maneuver.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bcmpc/core.hpp"
#include "bcmpc/primitives.hpp"

namespace bcmpc {

struct TimedWaypoint {
	double t = 0.0; // [s]
	Position p;
};

/**
 * Time-parameterized piecewise-linear path p_d(t). Before the first waypoint and
 * after the last one the path continues along the first / last segment.
 */
class DesiredTrajectory
{
public:
	DesiredTrajectory() = default;

	explicit DesiredTrajectory(std::vector<TimedWaypoint> wps) : wps_(std::move(wps))
	{
		if (wps_.size() < 2)
			throw std::invalid_argument("DesiredTrajectory: need at least two waypoints");
		for (std::size_t i = 1; i < wps_.size(); ++i)
			if (!(wps_[i].t > wps_[i - 1].t))
				throw std::invalid_argument("DesiredTrajectory: waypoint times must increase");
	}

	/// Straight line from `start` at constant speed and course.
	static DesiredTrajectory straight_line(Position start, double course, double speed, double t0 = 0.0)
	{
		const Position dir{std::cos(course), std::sin(course)};
		return DesiredTrajectory({{t0, start}, {t0 + 1.0, start + speed * dir}});
	}

	Position position(double t) const
	{
		const auto i = segment(t);
		const auto& a = wps_[i];
		const auto& b = wps_[i + 1];
		const double s = (t - a.t) / (b.t - a.t);
		return a.p + s * (b.p - a.p);
	}

	Position velocity(double t) const { return segment_velocity(segment(t)); }

	double speed(double t) const { return norm(velocity(t)); }

	/// Path course atan2(E_dot, N_dot); on a stationary segment the nearest moving
	/// segment (earlier first) supplies it, and 0 if the whole path is stationary.
	double course(double t) const
	{
		const auto i = segment(t);
		for (std::size_t k = i + 1; k-- > 0;) {
			const Position v = segment_velocity(k);
			if (norm(v) > 1e-9)
				return std::atan2(v.east, v.north);
		}
		for (std::size_t k = i + 1; k + 1 < wps_.size(); ++k) {
			const Position v = segment_velocity(k);
			if (norm(v) > 1e-9)
				return std::atan2(v.east, v.north);
		}
		return 0.0;
	}

	const std::vector<TimedWaypoint>& waypoints() const { return wps_; }

private:
	std::size_t segment(double t) const
	{
		std::size_t i = 0;
		while (i + 2 < wps_.size() && t >= wps_[i + 1].t)
			++i;
		return i;
	}

	Position segment_velocity(std::size_t i) const
	{
		const auto& a = wps_[i];
		const auto& b = wps_[i + 1];
		return (1.0 / (b.t - a.t)) * (b.p - a.p);
	}

	std::vector<TimedWaypoint> wps_;
};

struct LosParams {
	double lookahead = 500.0; ///< Delta [m]
	double gamma_s = 0.005;   ///< along-track gain [1/s]
	double epsilon = 0.05;    ///< guard on |cos(chi - chi_path)|
	double u_max = 18.0;      ///< speed saturation [m/s]

	void validate() const
	{
		if (!(lookahead > 0.0 && gamma_s > 0.0 && epsilon > 0.0 && epsilon < 1.0 && u_max > 0.0))
			throw std::invalid_argument("LosParams: parameters out of range");
	}
};

struct LosTargets {
	double sog = 0.0;    // U_d,LOS
	double course = 0.0; // chi_d,LOS, wrapped
};

/// Along-track (positive ahead of the particle) and cross-track (positive to
/// starboard of the path direction) offsets of a point from a path point.
struct PathErrors {
	double along = 0.0;
	double cross = 0.0;
};

inline PathErrors path_errors(Position vessel, Position particle, double path_course)
{
	const Position d = vessel - particle;
	const double c = std::cos(path_course);
	const double s = std::sin(path_course);
	return {c * d.north + s * d.east, -s * d.north + c * d.east};
}

/**
 * LOS course and speed targets with the path particle fixed at p_d(t):
 *
 *   chi_d = chi_path + atan(-e / Delta)
 *   U_d   = sat((U_t - gamma_s s) / cos(chi - chi_path), 0, U_max)
 *
 * where the cosine is replaced by epsilon when |cos| <= epsilon.
 */
inline LosTargets los_targets(const DesiredTrajectory& path, Position vessel, double vessel_course, double t,
                              const LosParams& p)
{
	const double chi_path = path.course(t);
	const double u_t = path.speed(t);
	const auto err = path_errors(vessel, path.position(t), chi_path);

	LosTargets out;
	out.course = wrap_angle(chi_path + std::atan(-err.cross / p.lookahead));
	const double c = std::cos(vessel_course - chi_path);
	const double denom = std::abs(c) > p.epsilon ? c : p.epsilon;
	out.sog = sat((u_t - p.gamma_s * err.along) / denom, 0.0, p.u_max);
	return out;
}

inline LosTargets los_targets(const DesiredTrajectory& path, const VesselState& state, double t,
                              const LosParams& p)
{
	return los_targets(path, state.pose.position(), state.pose.course, t, p);
}

/// Primitive accelerations whose maneuver ends exactly at the targets.
inline AccelPair desired_acceleration(const LosTargets& targets, double sog_d0, double course_d0,
                                      const StepParams& p)
{
	if (!(p.t_sog > p.t_ramp) || !(p.t_course > 2.0 * p.t_ramp))
		throw std::invalid_argument("desired_acceleration: maneuver too short for the ramp time");
	return {(targets.sog - sog_d0) / (p.t_sog - p.t_ramp),
	        wrap_angle(targets.course - course_d0) / (p.t_ramp * (p.t_course - 2.0 * p.t_ramp))};
}

} // namespace bcmpc
