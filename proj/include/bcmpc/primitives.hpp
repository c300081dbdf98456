#pragma once

// Single-step trajectory generation: reachable acceleration box, sampling,
// piecewise-linear SOG / course acceleration primitives, their integration
// into desired velocity trajectories, feedback-corrected prediction and
// position rollout.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bcmpc/core.hpp"
#include "bcmpc/vessel.hpp"

namespace bcmpc {

/// Timing and branching of one maneuver step.
struct StepParams {
	double T = 5.0;        ///< total step length [s]
	double t_ramp = 1.0;   ///< actuator ramp time [s]
	double t_sog = 5.0;    ///< SOG maneuver length [s]
	double t_course = 5.0; ///< course maneuver length [s]
	int n_sog = 1;
	int n_course = 1;

	void validate(double dt) const
	{
		if (!(t_ramp > 0.0))
			throw std::invalid_argument("StepParams: t_ramp must be positive");
		if (t_sog < 2.0 * t_ramp - 1e-12)
			throw std::invalid_argument("StepParams: t_sog must be at least 2 t_ramp");
		if (t_course < 4.0 * t_ramp - 1e-12)
			throw std::invalid_argument("StepParams: t_course must be at least 4 t_ramp");
		if (T < std::max(t_sog, t_course) - 1e-12)
			throw std::invalid_argument("StepParams: step length shorter than a maneuver");
		if (n_sog < 1 || n_course < 1)
			throw std::invalid_argument("StepParams: need at least one sample per channel");
		const double steps = T / dt;
		if (std::abs(steps - std::round(steps)) > 1e-6)
			throw std::invalid_argument("StepParams: step length not divisible by the grid step");
	}
};

/// Reachable SOG / ROT accelerations over one ramp time.
struct AccelBox {
	double sog_min = 0.0;
	double sog_max = 0.0;
	double rot_min = 0.0;
	double rot_max = 0.0;

	bool contains_sog(double a) const { return a >= sog_min && a <= sog_max; }
	bool contains_rot(double a) const { return a >= rot_min && a <= rot_max; }
};

/// First-order closed-loop error time constants.
struct ErrorModel {
	double t_sog = 5.0;
	double t_course = 5.0;

	void validate() const
	{
		if (!(t_sog > 0.0 && t_course > 0.0))
			throw std::invalid_argument("ErrorModel: time constants must be positive");
	}
};

/// A desired (SOG, ROT) acceleration pair, e.g. from guidance.
struct AccelPair {
	double sog = 0.0; // [m/s^2]
	double rot = 0.0; // [rad/s^2]
};

/// Component-wise clamp. Throws std::invalid_argument on size mismatch.
template <typename A, typename L, typename H>
typename A::PlainObject sat(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<L>& lo,
                            const Eigen::MatrixBase<H>& hi)
{
	if (a.size() != lo.size() || a.size() != hi.size())
		throw std::invalid_argument("sat: dimension mismatch");
	return a.derived().cwiseMax(lo.derived()).cwiseMin(hi.derived());
}

inline double sat(double a, double lo, double hi) { return std::clamp(a, lo, hi); }

/// Reachable acceleration box given the current velocity and actuator command.
inline AccelBox possible_accelerations(const VesselModel& model, const Velocity2& x0, const Force2& tau0,
                                       double t_ramp)
{
	const Force2 hi = sat(Force2(tau0 + t_ramp * model.tau_rate_max), model.tau_min, model.tau_max);
	const Force2 lo = sat(Force2(tau0 + t_ramp * model.tau_rate_min), model.tau_min, model.tau_max);
	const Eigen::Vector2d m = model.inertia(x0);
	const Force2 s = model.damping(x0);
	const Rate2 acc_hi = ((hi - s).array() / m.array()).matrix();
	const Rate2 acc_lo = ((lo - s).array() / m.array()).matrix();
	return {acc_lo(0), acc_hi(0), acc_lo(1), acc_hi(1)};
}

struct AccelSamples {
	std::vector<double> sog;
	std::vector<double> rot;
};

namespace detail {

inline std::vector<double> sample_channel(double lo, double hi, int n, std::optional<double> desired)
{
	std::vector<double> s(static_cast<std::size_t>(n));
	if (n == 1) {
		s[0] = 0.0;
	} else {
		for (int i = 0; i < n; ++i)
			s[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
		s.back() = hi;
	}
	if (desired && *desired >= lo && *desired <= hi) {
		std::size_t best = 0;
		for (std::size_t i = 1; i < s.size(); ++i)
			if (std::abs(s[i] - *desired) < std::abs(s[best] - *desired))
				best = i;
		s[best] = *desired;
	}
	return s;
}

} // namespace detail

/**
 * Uniform, endpoint-inclusive sampling of the acceleration box. A channel with a
 * single sample is pinned to zero acceleration. When a desired acceleration
 * component lies inside the box, the nearest sample of that channel is replaced
 * by it (ties go to the lower index).
 */
inline AccelSamples sample_accelerations(const AccelBox& box, int n_sog, int n_course,
                                         std::optional<AccelPair> desired = std::nullopt)
{
	if (n_sog < 1 || n_course < 1)
		throw std::invalid_argument("sample_accelerations: need at least one sample per channel");
	std::optional<double> dsog, drot;
	if (desired) {
		dsog = desired->sog;
		drot = desired->rot;
	}
	return {detail::sample_channel(box.sog_min, box.sog_max, n_sog, dsog),
	        detail::sample_channel(box.rot_min, box.rot_max, n_course, drot)};
}

/**
 * Piecewise-linear acceleration profile over step-relative time, zero outside
 * its knot span. Knots may coincide (zero-length segments); the value on a
 * left-closed interval comes from the later segment.
 */
class AccelProfile
{
public:
	AccelProfile(std::vector<double> times, std::vector<double> values)
	    : t_(std::move(times)), a_(std::move(values))
	{
		if (t_.size() != a_.size() || t_.size() < 2)
			throw std::invalid_argument("AccelProfile: need matching knot arrays");
		for (std::size_t i = 1; i < t_.size(); ++i)
			if (t_[i] < t_[i - 1])
				throw std::invalid_argument("AccelProfile: knots must be non-decreasing");
	}

	double operator()(double t) const
	{
		if (t < t_.front() || t >= t_.back())
			return 0.0;
		const auto seg = segment_at(t);
		return on_segment(seg, t);
	}

	std::vector<double> sample(const TimeGrid& grid) const
	{
		std::vector<double> out(grid.size());
		for (std::size_t i = 0; i < grid.size(); ++i)
			out[i] = (*this)(grid.time(i) - grid.t0());
		return out;
	}

	/// Largest absolute slope over the non-degenerate segments.
	double max_slope() const
	{
		double k = 0.0;
		for (std::size_t i = 0; i + 1 < t_.size(); ++i)
			if (t_[i + 1] > t_[i])
				k = std::max(k, std::abs((a_[i + 1] - a_[i]) / (t_[i + 1] - t_[i])));
		return k;
	}

	/// Exact integral of the profile over [t0, t1] (step-relative time).
	double integral(double t0, double t1) const
	{
		double v = 0.0;
		double x = 0.0;
		advance(t0, t1, v, x);
		return v;
	}

	/**
	 * Advances (v, x) with v' = a(t), x' = v from s0 to s1 in closed form, splitting
	 * at knots so every piece integrates a linear function exactly.
	 */
	void advance(double s0, double s1, double& v, double& x) const
	{
		double a = s0;
		for (std::size_t k = 0; k <= t_.size(); ++k) {
			const double b = k < t_.size() ? std::min(s1, std::max(a, t_[k])) : s1;
			if (b > a) {
				const double mid = 0.5 * (a + b);
				double fa = 0.0;
				double fb = 0.0;
				if (mid >= t_.front() && mid < t_.back()) {
					const auto seg = segment_at(mid);
					fa = on_segment(seg, a);
					fb = on_segment(seg, b);
				}
				const double h = b - a;
				x += h * v + h * h * (2.0 * fa + fb) / 6.0;
				v += 0.5 * h * (fa + fb);
				a = b;
			}
			if (a >= s1)
				break;
		}
	}

	const std::vector<double>& knot_times() const { return t_; }
	const std::vector<double>& knot_values() const { return a_; }

private:
	std::size_t segment_at(double t) const
	{
		// last i with t_[i] <= t and t_[i+1] > t
		std::size_t i = 0;
		for (std::size_t j = 0; j + 1 < t_.size(); ++j)
			if (t_[j] <= t && t < t_[j + 1])
				i = j;
		return i;
	}

	double on_segment(std::size_t i, double t) const
	{
		const double dt = t_[i + 1] - t_[i];
		if (dt <= 0.0)
			return a_[i + 1];
		return a_[i] + (a_[i + 1] - a_[i]) * (t - t_[i]) / dt;
	}

	std::vector<double> t_;
	std::vector<double> a_;
};

/// Trapezoidal SOG acceleration: ramp up over t_ramp, hold, ramp down by t_sog.
inline AccelProfile sog_profile(double accel, const StepParams& p)
{
	return AccelProfile({0.0, p.t_ramp, p.t_sog - p.t_ramp, p.t_sog}, {0.0, accel, accel, 0.0});
}

/// Antisymmetric double pulse of ROT acceleration with zero net integral.
inline AccelProfile course_profile(double accel, const StepParams& p)
{
	const double r = p.t_ramp;
	const double tc = p.t_course;
	return AccelProfile({0.0, r, 2.0 * r, tc - 2.0 * r, tc - r, tc}, {0.0, accel, 0.0, 0.0, -accel, 0.0});
}

inline std::vector<double> sog_primitive(double accel, const StepParams& p, const TimeGrid& grid)
{
	return sog_profile(accel, p).sample(grid);
}

inline std::vector<double> course_primitive(double accel, const StepParams& p, const TimeGrid& grid)
{
	return course_profile(accel, p).sample(grid);
}

/// Desired values the maneuver starts from (taken from the previous iteration).
struct InitialDesired {
	double sog = 0.0;
	double rot = 0.0;
	double course = 0.0; // unwrapped
};

/// One feasible desired maneuver with the sample indices that produced it.
struct DesiredManeuver {
	VelocityTrajectory traj;
	std::size_t sog_index = 0;
	std::size_t course_index = 0;
	double sog_accel = 0.0;
	double rot_accel = 0.0;
};

/// Whether holding the terminal speed at zero turn rate is within the model envelope.
inline bool steady_state_feasible(const VesselModel& model, double sog)
{
	if (sog < model.u_min - 1e-9 || sog > model.u_max + 1e-9)
		return false;
	return model.within_limits(inverse_model(model, {sog, 0.0}));
}

/**
 * Integrates every SOG and course primitive from the initial desired values and
 * forms their cross product. Combinations whose terminal steady state is
 * infeasible are dropped; the result is empty if none survive. Output order is
 * SOG-major: (0,0), (0,1), ..., (1,0), ...
 */
inline std::vector<DesiredManeuver> integrate_primitives(const std::vector<double>& sog_accels,
                                                         const std::vector<double>& rot_accels,
                                                         const StepParams& p, const InitialDesired& init,
                                                         const TimeGrid& grid, const VesselModel& model)
{
	const auto n = grid.size();
	struct Channel {
		std::vector<double> acc, v, x;
	};
	auto integrate = [&](const AccelProfile& prof, double v0, double x0) {
		Channel c{prof.sample(grid), std::vector<double>(n), std::vector<double>(n)};
		double v = v0;
		double x = x0;
		c.v[0] = v;
		c.x[0] = x;
		for (std::size_t i = 1; i < n; ++i) {
			prof.advance(grid.time(i - 1) - grid.t0(), grid.time(i) - grid.t0(), v, x);
			c.v[i] = v;
			c.x[i] = x;
		}
		return c;
	};

	std::vector<Channel> sog_ch;
	std::vector<Channel> rot_ch;
	sog_ch.reserve(sog_accels.size());
	rot_ch.reserve(rot_accels.size());
	for (double a : sog_accels)
		sog_ch.push_back(integrate(sog_profile(a, p), init.sog, 0.0));
	for (double a : rot_accels)
		rot_ch.push_back(integrate(course_profile(a, p), init.rot, init.course));

	std::vector<DesiredManeuver> out;
	for (std::size_t i = 0; i < sog_ch.size(); ++i) {
		if (!steady_state_feasible(model, sog_ch[i].v.back()))
			continue;
		for (std::size_t j = 0; j < rot_ch.size(); ++j) {
			DesiredManeuver m;
			m.traj = {grid, sog_ch[i].v, rot_ch[j].v, rot_ch[j].x, sog_ch[i].acc, rot_ch[j].acc};
			m.sog_index = i;
			m.course_index = j;
			m.sog_accel = sog_accels[i];
			m.rot_accel = rot_accels[j];
			out.push_back(std::move(m));
		}
	}
	return out;
}

/// Predicted SOG and (unwrapped) course under first-order error decay.
struct PredictedVelocity {
	std::vector<double> sog;
	std::vector<double> course;
};

/**
 * U(t) = U_err0 exp(-(t - t0) / T_U) + U_d(t), same for course, with the initial
 * errors taken from the actual vessel speed and course.
 */
inline PredictedVelocity predict(const VelocityTrajectory& traj, const ErrorModel& em, double sog0, double course0)
{
	const double u_err = sog0 - traj.sog.front();
	const double chi_err = wrap_angle(course0 - traj.course.front());
	PredictedVelocity out{std::vector<double>(traj.size()), std::vector<double>(traj.size())};
	for (std::size_t i = 0; i < traj.size(); ++i) {
		const double tau = traj.grid.time(i) - traj.grid.t0();
		out.sog[i] = u_err * std::exp(-tau / em.t_sog) + traj.sog[i];
		out.course[i] = chi_err * std::exp(-tau / em.t_course) + traj.course[i];
	}
	return out;
}

/// Euler integration of pdot = U [cos chi, sin chi] from p0.
inline PoseTrajectory rollout_position(const std::vector<double>& sog, const std::vector<double>& course,
                                       const TimeGrid& grid, Position p0)
{
	if (sog.size() != grid.size() || course.size() != grid.size())
		throw std::invalid_argument("rollout_position: sequences must match the grid");
	PoseTrajectory out{grid, std::vector<Pose>(grid.size())};
	double n = p0.north;
	double e = p0.east;
	const double h = grid.dt();
	for (std::size_t i = 0; i < grid.size(); ++i) {
		out.poses[i] = {n, e, wrap_angle(course[i])};
		n += h * sog[i] * std::cos(course[i]);
		e += h * sog[i] * std::sin(course[i]);
	}
	return out;
}

} // namespace bcmpc
