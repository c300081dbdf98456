#pragma once

// Candidate scoring: trajectory alignment, obstacle avoidance over circular or
// COLREGs-shaped elliptical penalty regions, the transitional (hysteresis)
// term, and the argmin over a candidate set.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcmpc/core.hpp"
#include "bcmpc/guidance.hpp"
#include "bcmpc/tree.hpp"

namespace bcmpc {

enum class PenaltyKind { circular, elliptical_colregs };

inline std::string to_string(PenaltyKind k)
{
	return k == PenaltyKind::circular ? "circular" : "elliptical_colregs";
}

/**
 * Collision (k = 0), safety (k = 1) and margin (k = 2) regions around an obstacle.
 *
 * Circular regions use the radii D_k. The elliptical COLREGs regions are built
 * per quadrant of the relative bearing: a circle of radius b_k port-aft, an
 * (a_k, b_k) ellipse port-fore, an (a_k, c_k) ellipse starboard-fore and a
 * (b_k, c_k) ellipse starboard-aft, with c_k = b_k + d_colregs.
 */
struct PenaltyGeometry {
	PenaltyKind kind = PenaltyKind::elliptical_colregs;
	std::array<double, 3> radius{25.0, 75.0, 125.0};
	std::array<double, 3> major{50.0, 150.0, 250.0};
	std::array<double, 3> minor{25.0, 75.0, 125.0};
	double d_colregs = 100.0;
	double gamma1 = 0.1;

	static PenaltyGeometry elliptical() { return {}; }

	static PenaltyGeometry circular()
	{
		PenaltyGeometry g;
		g.kind = PenaltyKind::circular;
		return g;
	}

	double starboard(std::size_t k) const { return minor[k] + d_colregs; }

	/// Every length multiplied by `factor`.
	PenaltyGeometry scaled(double factor) const
	{
		PenaltyGeometry g = *this;
		for (std::size_t k = 0; k < 3; ++k) {
			g.radius[k] *= factor;
			g.major[k] *= factor;
			g.minor[k] *= factor;
		}
		g.d_colregs *= factor;
		return g;
	}

	void validate() const
	{
		if (!(gamma1 > 0.0 && gamma1 < 1.0))
			throw std::invalid_argument("PenaltyGeometry: gamma1 must lie in (0, 1)");
		if (kind == PenaltyKind::circular) {
			if (!(radius[0] > 0.0 && radius[1] > radius[0] && radius[2] > radius[1]))
				throw std::invalid_argument("PenaltyGeometry: need 0 < D0 < D1 < D2");
			return;
		}
		for (std::size_t k = 0; k < 3; ++k)
			if (!(minor[k] > 0.0 && major[k] > minor[k]))
				throw std::invalid_argument("PenaltyGeometry: need a_k > b_k > 0");
		for (std::size_t k = 1; k < 3; ++k)
			if (!(major[k] > major[k - 1] && minor[k] > minor[k - 1]))
				throw std::invalid_argument("PenaltyGeometry: regions must be strictly nested");
		if (!(d_colregs > 0.0))
			throw std::invalid_argument("PenaltyGeometry: d_colregs must be positive");
	}
};

namespace detail {

// Polar radius of an axis-aligned ellipse with semi-axis `ax` along the obstacle
// heading and `ay` across it.
inline double ellipse_radius(double ax, double ay, double beta)
{
	const double c = ay * std::cos(beta);
	const double s = ax * std::sin(beta);
	return ax * ay / std::sqrt(c * c + s * s);
}

// Collision-region core without the starboard expansion.
inline double inner_radius(const PenaltyGeometry& g, double beta)
{
	if (std::abs(beta) < kPi / 2.0)
		return ellipse_radius(g.major[0], g.minor[0], beta);
	return g.minor[0];
}

} // namespace detail

/// Region size D_k at relative bearing beta (wrapped to [-pi, pi) first).
inline double region_radius(const PenaltyGeometry& g, std::size_t k, double beta)
{
	if (k > 2)
		throw std::out_of_range("region_radius: k must be 0, 1 or 2");
	if (g.kind == PenaltyKind::circular)
		return g.radius[k];
	beta = wrap_angle(beta);
	const double a = g.major[k];
	const double b = g.minor[k];
	const double c = g.starboard(k);
	if (beta < -kPi / 2.0)
		return b;
	if (beta < 0.0)
		return detail::ellipse_radius(a, b, beta);
	if (beta < kPi / 2.0)
		return detail::ellipse_radius(a, c, beta);
	return detail::ellipse_radius(b, c, beta);
}

/// Piecewise-linear decay from 1 inside D_0 through gamma1 at D_1 to 0 at D_2.
inline double outer_penalty(const PenaltyGeometry& g, double d, double beta)
{
	const double d0 = region_radius(g, 0, beta);
	const double d1 = region_radius(g, 1, beta);
	const double d2 = region_radius(g, 2, beta);
	if (d < d0)
		return 1.0;
	if (d < d1)
		return 1.0 + (g.gamma1 - 1.0) / (d1 - d0) * (d - d0);
	if (d < d2)
		return g.gamma1 - g.gamma1 / (d2 - d1) * (d - d1);
	return 0.0;
}

/**
 * Extra cost inside the elliptical collision region: 1 inside the symmetric
 * core D_0*, then decaying with the lateral (obstacle-frame y) distance y_b
 * from the core boundary as 1 - y_b / d_colregs. Zero for circular geometry.
 */
inline double inner_penalty(const PenaltyGeometry& g, double d, double beta)
{
	if (g.kind == PenaltyKind::circular)
		return 0.0;
	beta = wrap_angle(beta);
	if (d < detail::inner_radius(g, beta))
		return 1.0;
	if (d >= region_radius(g, 0, beta))
		return 0.0;

	const double x = d * std::cos(beta);
	const double y = std::abs(d * std::sin(beta));
	const double a0 = g.major[0];
	const double b0 = g.minor[0];
	double y_core = 0.0;
	if (x >= 0.0) {
		if (x < a0)
			y_core = b0 * std::sqrt(1.0 - (x * x) / (a0 * a0));
	} else if (-x < b0) {
		y_core = std::sqrt(b0 * b0 - x * x);
	}
	const double y_b = std::max(0.0, y - y_core);
	return std::clamp(1.0 - y_b / g.d_colregs, 0.0, 1.0);
}

inline double penalty(const PenaltyGeometry& g, double d, double beta)
{
	return inner_penalty(g, d, beta) + outer_penalty(g, d, beta);
}

/// Distance and relative bearing of the ownship seen from an obstacle, the
/// bearing measured from the obstacle course (positive to starboard).
struct RelativeGeometry {
	double distance = 0.0;
	double bearing = 0.0;
};

inline RelativeGeometry relative_geometry(Position ownship, Position obstacle, double obstacle_course)
{
	const Position r = ownship - obstacle;
	const double d = norm(r);
	const double bearing = d > 0.0 ? std::atan2(r.east, r.north) : 0.0;
	return {d, wrap_angle(bearing - obstacle_course)};
}

/// Constant-velocity obstacle track over a time grid.
struct ObstaclePrediction {
	int id = 0;
	TimeGrid grid;
	std::vector<Position> positions;
	double course = 0.0;
	double sog = 0.0;

	Position position_at(double t) const
	{
		const auto b = detail::bracket(grid, t);
		const Position& p0 = positions[b.lo];
		const Position& p1 = positions[b.lo + 1];
		return p0 + b.frac * (p1 - p0);
	}
};

struct ObjectiveWeights {
	double align = 1.0;
	double avoid = 6000.0;
	double tran = 4200.0;
	double position = 1.0;
	double course = 100.0;
	/// Per-obstacle weights by prediction index; missing entries count as 1.
	std::vector<double> obstacle;

	double obstacle_weight(std::size_t i) const { return i < obstacle.size() ? obstacle[i] : 1.0; }

	void validate() const
	{
		if (align < 0.0 || avoid < 0.0 || tran < 0.0 || !(position > 0.0) || !(course > 0.0))
			throw std::invalid_argument("ObjectiveWeights: weights must be non-negative");
		for (double w : obstacle)
			if (w < 0.0)
				throw std::invalid_argument("ObjectiveWeights: obstacle weights must be non-negative");
	}
};

/// Integral over the horizon of w_p |p - p_d| + w_chi |wrap(chi - chi_d)|, sampled every eval_dt.
inline double align_cost(const PoseTrajectory& pose, const DesiredTrajectory& path, double w_course, double eval_dt,
                         double w_position = 1.0)
{
	const auto stride = eval_stride(pose.grid, eval_dt);
	std::vector<double> f;
	f.reserve(pose.size() / stride + 1);
	for (std::size_t i = 0; i < pose.size(); i += stride) {
		const double t = pose.grid.time(i);
		const Pose& p = pose.poses[i];
		const double pos_err = norm(p.position() - path.position(t));
		f.push_back(w_position * pos_err + w_course * angle_distance(p.course, path.course(t)));
	}
	return trapezoid(f, eval_dt);
}

/// Sum over obstacles of the weighted penalty integral along the predicted pose.
inline double avoid_cost(const PoseTrajectory& pose, std::span<const ObstaclePrediction> obstacles,
                         const PenaltyGeometry& g, const ObjectiveWeights& w, double eval_dt)
{
	const auto stride = eval_stride(pose.grid, eval_dt);
	double total = 0.0;
	std::vector<double> f;
	for (std::size_t k = 0; k < obstacles.size(); ++k) {
		const auto& ob = obstacles[k];
		if (!ob.grid.contains(pose.grid.t0()) || !ob.grid.contains(pose.grid.t_end()))
			throw std::out_of_range("avoid_cost: obstacle prediction does not cover the horizon");
		f.clear();
		for (std::size_t i = 0; i < pose.size(); i += stride) {
			const double t = pose.grid.time(i);
			const auto rel = relative_geometry(pose.poses[i].position(), ob.position_at(t), ob.course);
			f.push_back(penalty(g, rel.distance, rel.bearing));
		}
		total += w.obstacle_weight(k) * trapezoid(f, eval_dt);
	}
	return total;
}

/// Integrated |U_d - U_d^-| and |wrap(chi_d - chi_d^-)| over the first maneuver.
struct TransitionErrors {
	double sog = 0.0;
	double course = 0.0;
};

/// `previous` is resampled onto the candidate's first-maneuver grid.
inline TransitionErrors transition_errors(const VelocityTrajectory& candidate_first,
                                          const VelocityTrajectory& previous, double eval_dt)
{
	const auto stride = eval_stride(candidate_first.grid, eval_dt);
	const VelocityTrajectory prev = resample(previous, candidate_first.grid);
	std::vector<double> fu;
	std::vector<double> fc;
	for (std::size_t i = 0; i < candidate_first.size(); i += stride) {
		fu.push_back(std::abs(candidate_first.sog[i] - prev.sog[i]));
		fc.push_back(angle_distance(candidate_first.course[i], prev.course[i]));
	}
	return {trapezoid(fu, eval_dt), trapezoid(fc, eval_dt)};
}

inline constexpr double kTransitionTolerance = 1e-6;

/// 0 for candidates attaining both set minima (within tol), 1 otherwise.
inline std::vector<int> tran_costs(std::span<const TransitionErrors> errors, double tol = kTransitionTolerance)
{
	double u_min = std::numeric_limits<double>::infinity();
	double c_min = std::numeric_limits<double>::infinity();
	for (const auto& e : errors) {
		u_min = std::min(u_min, e.sog);
		c_min = std::min(c_min, e.course);
	}
	std::vector<int> out;
	out.reserve(errors.size());
	for (const auto& e : errors)
		out.push_back(e.sog <= u_min + tol && e.course <= c_min + tol ? 0 : 1);
	return out;
}

struct CostBreakdown {
	double align = 0.0;
	double avoid = 0.0;
	int tran = 0;
	double total = 0.0;
};

struct Selection {
	std::size_t index = 0;
	std::vector<CostBreakdown> costs;
};

/**
 * Scores every candidate with G = w_al align + w_av avoid + w_t tran and returns
 * the argmin; ties go to the lowest index. `previous` must cover the first
 * maneuver window of the candidates.
 */
inline Selection select(std::span<const CandidateTrajectory> candidates, const DesiredTrajectory& path,
                        std::span<const ObstaclePrediction> obstacles, const PenaltyGeometry& g,
                        const ObjectiveWeights& w, const VelocityTrajectory& previous, double eval_dt)
{
	if (candidates.empty())
		throw std::invalid_argument("select: empty candidate set");

	std::vector<TransitionErrors> errs;
	errs.reserve(candidates.size());
	for (const auto& c : candidates)
		errs.push_back(transition_errors(c.first_maneuver, previous, eval_dt));
	const auto tran = tran_costs(errs);

	Selection sel;
	sel.costs.resize(candidates.size());
	double best = std::numeric_limits<double>::infinity();
	for (std::size_t i = 0; i < candidates.size(); ++i) {
		auto& cb = sel.costs[i];
		cb.align = align_cost(candidates[i].predicted_pose, path, w.course, eval_dt, w.position);
		cb.avoid = obstacles.empty() ? 0.0 : avoid_cost(candidates[i].predicted_pose, obstacles, g, w, eval_dt);
		cb.tran = tran[i];
		cb.total = w.align * cb.align + w.avoid * cb.avoid + w.tran * static_cast<double>(cb.tran);
		if (cb.total < best) {
			best = cb.total;
			sel.index = i;
		}
	}
	return sel;
}

} // namespace bcmpc
