#pragma once

// Control-oriented 2DOF speed / rate-of-turn model M(x) xdot + sigma(x) = tau,
// its steady-state inverse, the feedforward-feedback speed and course
// controller, and an explicit Euler plant step.

#include <Eigen/Core>

#include <algorithm>
#include <stdexcept>

#include "bcmpc/core.hpp"

namespace bcmpc {

/// Normalized actuator command [tau_m (throttle), tau_delta (rudder)].
using Force2 = Eigen::Vector2d;
/// Time derivative of Velocity2: [Udot, rdot].
using Rate2 = Eigen::Vector2d;

/**
 * Diagonal, speed-dependent inertia and polynomial damping:
 *
 *   M(x)     = diag(m_u0 + m_u1 U, m_r0 + m_r1 U)
 *   sigma(x) = [d_u1 U + d_u2 U|U|,  d_r1 r + d_r2 r|r| + d_ru U r]
 *
 * Coefficients are in normalized-force units. The defaults put the full
 * throttle equilibrium at 18 m/s and full rudder at 5 m/s near 0.25 rad/s.
 */
struct VesselModel {
	double m_u0 = 0.5;
	double m_u1 = 0.01;
	double m_r0 = 2.0;
	double m_r1 = 0.2;

	double d_u1 = 0.02;
	double d_u2 = 0.64 / 324.0;
	double d_r1 = 1.0;
	double d_r2 = 4.0;
	double d_ru = 0.4;

	Force2 tau_min{0.05, -1.0};
	Force2 tau_max{1.0, 1.0};
	Force2 tau_rate_min{-0.5, -0.5};
	Force2 tau_rate_max{0.5, 0.5};

	double u_max = 18.0;
	double u_min = 0.0;

	void validate() const
	{
		if (!(m_u0 > 0.0 && m_r0 > 0.0 && m_u1 >= 0.0 && m_r1 >= 0.0))
			throw std::invalid_argument("VesselModel: inertia must be positive on [0, u_max]");
		if (!(tau_min.array() < tau_max.array()).all())
			throw std::invalid_argument("VesselModel: tau_min must be below tau_max");
		if (!(tau_rate_min.array() <= 0.0).all() || !(tau_rate_max.array() >= 0.0).all())
			throw std::invalid_argument("VesselModel: rate limits must bracket zero");
		if (!(u_min >= 0.0 && u_max > u_min))
			throw std::invalid_argument("VesselModel: need 0 <= u_min < u_max");
	}

	Eigen::Vector2d inertia(const Velocity2& x) const
	{
		return {m_u0 + m_u1 * x.sog, m_r0 + m_r1 * x.sog};
	}

	Force2 damping(const Velocity2& x) const
	{
		const double u = x.sog;
		const double r = x.rot;
		return {d_u1 * u + d_u2 * u * std::abs(u), d_r1 * r + d_r2 * r * std::abs(r) + d_ru * u * r};
	}

	bool within_limits(const Force2& tau, double tol = 1e-9) const
	{
		return ((tau - tau_min).array() >= -tol).all() && ((tau_max - tau).array() >= -tol).all();
	}
};

/// xdot = M(x)^-1 (tau - sigma(x)). Throws std::out_of_range if tau violates the actuator box.
inline Rate2 dynamics(const VesselModel& model, const Velocity2& x, const Force2& tau)
{
	if (!model.within_limits(tau))
		throw std::out_of_range("dynamics: tau outside actuator limits");
	return ((tau - model.damping(x)).array() / model.inertia(x).array()).matrix();
}

/// Steady-state input holding x_ss: tau = sigma(x_ss). Feasibility is up to the caller.
inline Force2 inverse_model(const VesselModel& model, const Velocity2& x_ss)
{
	return model.damping(x_ss);
}

/// Proportional and integral gains of the speed / course controller.
struct ControllerGains {
	/// Rows: [tau_m, tau_delta]; columns: [U error, r error, course error].
	Eigen::Matrix<double, 2, 3> kp = (Eigen::Matrix<double, 2, 3>() << 0.5, 0.0, 0.0, 0.0, 1.5, 1.5).finished();
	/// Diagonal integral gains acting on [U error, course error].
	Eigen::Vector2d ki{0.02, 0.02};
	/// Bound on each component of the integral contribution (normalized units).
	double integral_limit = 0.3;

	void validate() const
	{
		if (!(ki.array() > 0.0).all())
			throw std::invalid_argument("ControllerGains: integral gains must be positive");
		if ((kp.array() < 0.0).any())
			throw std::invalid_argument("ControllerGains: proportional gains must be non-negative");
		if (!(integral_limit >= 0.0))
			throw std::invalid_argument("ControllerGains: integral limit must be non-negative");
	}
};

/// Integral state K_i * int(zeta_1), owned by one control loop.
struct ControllerState {
	Eigen::Vector2d integral = Eigen::Vector2d::Zero();
};

/**
 * Feedforward-feedback speed and course control law
 *
 *   tau = M(x) xdot_d + sigma(x_d) - M(x) K_p zeta - K_i int(zeta_1)
 *
 * with zeta = [U - U_d, r - r_d, wrap(chi - chi_d)] and zeta_1 = [U - U_d, wrap(chi - chi_d)].
 * Advances the integral state by dt and returns the command clamped to the actuator box.
 */
inline Force2 control_law(const VesselModel& model, const ControllerGains& gains, ControllerState& state,
                          const Velocity2& x, double chi, const Velocity2& x_d, double chi_d,
                          const Rate2& xdot_d, double dt)
{
	if (!(dt > 0.0))
		throw std::invalid_argument("control_law: dt must be positive");

	const double u_err = x.sog - x_d.sog;
	const double r_err = x.rot - x_d.rot;
	const double chi_err = wrap_angle(chi - chi_d);

	const Eigen::Vector3d zeta{u_err, r_err, chi_err};
	const Eigen::Vector2d zeta1{u_err, chi_err};

	state.integral += (gains.ki.array() * zeta1.array()).matrix() * dt;
	state.integral = state.integral.cwiseMax(-gains.integral_limit).cwiseMin(gains.integral_limit);

	const Eigen::Vector2d m = model.inertia(x);
	const Force2 feedforward = (m.array() * xdot_d.array()).matrix() + model.damping(x_d);
	const Force2 feedback = (m.array() * (gains.kp * zeta).array()).matrix();
	const Force2 tau = feedforward - feedback - state.integral;
	return tau.cwiseMax(model.tau_min).cwiseMin(model.tau_max);
}

/// Limits the change from tau_prev to tau_cmd to the actuator rate box over dt.
inline Force2 rate_limit(const VesselModel& model, const Force2& tau_prev, const Force2& tau_cmd, double dt)
{
	const Force2 delta = (tau_cmd - tau_prev).cwiseMax(model.tau_rate_min * dt).cwiseMin(model.tau_rate_max * dt);
	return (tau_prev + delta).cwiseMax(model.tau_min).cwiseMin(model.tau_max);
}

/// One explicit Euler step: velocity from the model (plus an additive disturbance
/// acceleration), pose from the kinematics with sideslip neglected (chi_dot = r).
inline VesselState step_plant(const VesselModel& model, const VesselState& state, const Force2& tau, double dt,
                              const Rate2& disturbance = Rate2::Zero())
{
	if (!(dt > 0.0))
		throw std::invalid_argument("step_plant: dt must be positive");
	const Rate2 xdot = dynamics(model, state.vel, tau) + disturbance;

	VesselState next;
	next.time = state.time + dt;
	next.vel.sog = std::max(0.0, state.vel.sog + dt * xdot(0));
	next.vel.rot = state.vel.rot + dt * xdot(1);
	const double chi = state.pose.course;
	next.pose.north = state.pose.north + dt * std::cos(chi) * state.vel.sog;
	next.pose.east = state.pose.east + dt * std::sin(chi) * state.vel.sog;
	next.pose.course = wrap_angle(chi + dt * state.vel.rot);
	return next;
}

} // namespace bcmpc
