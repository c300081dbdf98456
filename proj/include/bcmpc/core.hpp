#pragma once

// Shared value types for the branching-course planner: angles, time grids and
// sampled velocity / pose trajectories.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace bcmpc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Maps an angle to [-pi, pi).
inline double wrap_angle(double a)
{
	if (!std::isfinite(a))
		throw std::invalid_argument("wrap_angle: non-finite angle");
	double r = std::fmod(a + kPi, kTwoPi);
	if (r < 0.0)
		r += kTwoPi;
	if (r >= kTwoPi)
		r -= kTwoPi;
	return r - kPi;
}

/// Unsigned angular distance on the circle, in [0, pi].
inline double angle_distance(double a, double b)
{
	return std::abs(wrap_angle(a - b));
}

struct Position {
	double north = 0.0; // [m]
	double east = 0.0;  // [m]
};

inline Position operator+(Position a, Position b) { return {a.north + b.north, a.east + b.east}; }
inline Position operator-(Position a, Position b) { return {a.north - b.north, a.east - b.east}; }
inline Position operator*(double s, Position p) { return {s * p.north, s * p.east}; }
inline double norm(Position p) { return std::hypot(p.north, p.east); }

struct Pose {
	double north = 0.0;  // [m]
	double east = 0.0;   // [m]
	double course = 0.0; // [rad], wrapped to [-pi, pi)

	Position position() const { return {north, east}; }
};

inline Pose make_pose(double north, double east, double course)
{
	return {north, east, wrap_angle(course)};
}

struct Velocity2 {
	double sog = 0.0; // U [m/s]
	double rot = 0.0; // r [rad/s]
};

struct VesselState {
	Pose pose;
	Velocity2 vel;
	double time = 0.0; // [s]
};

/// Uniform time grid t0, t0 + dt, ..., t0 + (n - 1) dt.
class TimeGrid
{
public:
	TimeGrid() = default;

	TimeGrid(double t0, double dt, std::size_t n) : t0_(t0), dt_(dt), n_(n)
	{
		if (!(dt > 0.0) || !std::isfinite(dt) || !std::isfinite(t0))
			throw std::invalid_argument("TimeGrid: dt must be positive and finite");
		if (n < 2)
			throw std::invalid_argument("TimeGrid: need at least two samples");
	}

	/// Grid covering [t0, t0 + span] with step dt. span must be a multiple of dt.
	static TimeGrid spanning(double t0, double span, double dt)
	{
		const double steps = span / dt;
		const double rounded = std::round(steps);
		if (std::abs(steps - rounded) > 1e-6 || rounded < 1.0)
			throw std::invalid_argument("TimeGrid: span " + std::to_string(span) +
			                            " is not a positive multiple of dt " + std::to_string(dt));
		return TimeGrid(t0, dt, static_cast<std::size_t>(rounded) + 1);
	}

	double t0() const { return t0_; }
	double dt() const { return dt_; }
	std::size_t size() const { return n_; }
	double time(std::size_t i) const { return t0_ + static_cast<double>(i) * dt_; }
	double t_end() const { return time(n_ - 1); }
	double span() const { return static_cast<double>(n_ - 1) * dt_; }

	bool contains(double t, double tol = 1e-9) const { return t >= t0_ - tol && t <= t_end() + tol; }

private:
	double t0_ = 0.0;
	double dt_ = 1.0;
	std::size_t n_ = 2;
};

/// Desired SOG / ROT / course on a grid. Course is stored unwrapped.
struct VelocityTrajectory {
	TimeGrid grid;
	std::vector<double> sog;
	std::vector<double> rot;
	std::vector<double> course;
	std::vector<double> sog_acc;
	std::vector<double> rot_acc;

	std::size_t size() const { return grid.size(); }

	void check() const
	{
		const auto n = grid.size();
		if (sog.size() != n || rot.size() != n || course.size() != n || sog_acc.size() != n ||
		    rot_acc.size() != n)
			throw std::invalid_argument("VelocityTrajectory: channel length mismatch");
	}

	/// Constant speed and course over the grid.
	static VelocityTrajectory constant(const TimeGrid& grid, double sog, double course)
	{
		const auto n = grid.size();
		return {grid,
		        std::vector<double>(n, sog),
		        std::vector<double>(n, 0.0),
		        std::vector<double>(n, course),
		        std::vector<double>(n, 0.0),
		        std::vector<double>(n, 0.0)};
	}
};

struct PoseTrajectory {
	TimeGrid grid;
	std::vector<Pose> poses;

	std::size_t size() const { return grid.size(); }
};

namespace detail {

struct Bracket {
	std::size_t lo;
	double frac;
};

// Locates t inside grid as (index, fraction). Caller guarantees containment.
inline Bracket bracket(const TimeGrid& grid, double t)
{
	const double x = (t - grid.t0()) / grid.dt();
	const auto last = grid.size() - 1;
	if (x <= 0.0)
		return {0, 0.0};
	if (x >= static_cast<double>(last))
		return {last - 1, 1.0};
	const double nearest = std::round(x);
	if (std::abs(x - nearest) < 1e-9) {
		const auto i = static_cast<std::size_t>(nearest);
		return i == last ? Bracket{last - 1, 1.0} : Bracket{i, 0.0};
	}
	const auto lo = static_cast<std::size_t>(std::floor(x));
	return {lo, x - static_cast<double>(lo)};
}

inline double lerp_at(const std::vector<double>& v, Bracket b)
{
	if (b.frac == 0.0)
		return v[b.lo];
	if (b.frac == 1.0)
		return v[b.lo + 1];
	return v[b.lo] + b.frac * (v[b.lo + 1] - v[b.lo]);
}

} // namespace detail

/// Linear interpolation of a sampled channel at time t (clamped to the grid span).
inline double interpolate(const TimeGrid& grid, const std::vector<double>& values, double t)
{
	return detail::lerp_at(values, detail::bracket(grid, t));
}

/// Resamples every channel of a velocity trajectory onto another grid by linear
/// interpolation. The target grid has to lie inside the source span.
inline VelocityTrajectory resample(const VelocityTrajectory& traj, const TimeGrid& grid)
{
	traj.check();
	if (!traj.grid.contains(grid.t0()) || !traj.grid.contains(grid.t_end()))
		throw std::out_of_range("resample: target grid outside source span");

	VelocityTrajectory out;
	out.grid = grid;
	const auto n = grid.size();
	for (auto* ch : {&out.sog, &out.rot, &out.course, &out.sog_acc, &out.rot_acc})
		ch->resize(n);
	for (std::size_t i = 0; i < n; ++i) {
		const auto b = detail::bracket(traj.grid, grid.time(i));
		out.sog[i] = detail::lerp_at(traj.sog, b);
		out.rot[i] = detail::lerp_at(traj.rot, b);
		out.course[i] = detail::lerp_at(traj.course, b);
		out.sog_acc[i] = detail::lerp_at(traj.sog_acc, b);
		out.rot_acc[i] = detail::lerp_at(traj.rot_acc, b);
	}
	return out;
}

/// Pose at time t, interpolating position linearly and course along the shortest arc.
inline Pose interpolate_pose(const PoseTrajectory& traj, double t)
{
	const auto b = detail::bracket(traj.grid, t);
	const Pose& p0 = traj.poses[b.lo];
	if (b.frac == 0.0)
		return p0;
	const Pose& p1 = traj.poses[b.lo + 1];
	if (b.frac == 1.0)
		return p1;
	const double dchi = wrap_angle(p1.course - p0.course);
	return {p0.north + b.frac * (p1.north - p0.north), p0.east + b.frac * (p1.east - p0.east),
	        wrap_angle(p0.course + b.frac * dchi)};
}

/// Composite trapezoidal rule over samples spaced h apart.
inline double trapezoid(const std::vector<double>& f, double h)
{
	if (f.size() < 2)
		return 0.0;
	double s = 0.5 * (f.front() + f.back());
	for (std::size_t i = 1; i + 1 < f.size(); ++i)
		s += f[i];
	return s * h;
}

/// Index stride that maps an evaluation step onto a finer trajectory grid.
inline std::size_t eval_stride(const TimeGrid& grid, double eval_dt)
{
	const double ratio = eval_dt / grid.dt();
	const double r = std::round(ratio);
	if (r < 1.0 || std::abs(ratio - r) > 1e-6)
		throw std::invalid_argument("evaluation step must be an integer multiple of the trajectory step");
	const auto stride = static_cast<std::size_t>(r);
	if ((grid.size() - 1) % stride != 0)
		throw std::invalid_argument("trajectory span is not a multiple of the evaluation step");
	return stride;
}

} // namespace bcmpc
