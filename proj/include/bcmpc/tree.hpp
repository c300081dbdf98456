#pragma once

// Multi-level maneuver tree. Each level applies the single-step generator at
// every node; leaves are backtraced into full-horizon candidate trajectories.

#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "bcmpc/core.hpp"
#include "bcmpc/primitives.hpp"
#include "bcmpc/vessel.hpp"

namespace bcmpc {

struct TreeParams {
	std::vector<double> step_times{5.0, 20.0, 30.0};
	std::vector<int> n_sog{5, 1, 1};
	std::vector<int> n_course{5, 3, 3};
	double t_ramp = 1.0;
	double t_sog = 5.0;
	double t_course = 5.0;
	/// Integration / storage step of generated trajectories [s].
	double dt = 0.1;

	std::size_t levels() const { return step_times.size(); }

	double horizon() const { return std::accumulate(step_times.begin(), step_times.end(), 0.0); }

	StepParams level(std::size_t l) const
	{
		return {step_times.at(l), t_ramp, t_sog, t_course, n_sog.at(l), n_course.at(l)};
	}

	std::size_t max_leaves() const
	{
		std::size_t n = 1;
		for (std::size_t l = 0; l < levels(); ++l)
			n *= static_cast<std::size_t>(n_sog[l] * n_course[l]);
		return n;
	}

	void validate() const
	{
		if (step_times.empty())
			throw std::invalid_argument("TreeParams: need at least one level");
		if (n_sog.size() != step_times.size() || n_course.size() != step_times.size())
			throw std::invalid_argument("TreeParams: per-level sequences must have equal length");
		if (!(dt > 0.0))
			throw std::invalid_argument("TreeParams: dt must be positive");
		for (std::size_t l = 0; l < levels(); ++l)
			level(l).validate(dt);
	}
};

/// True iff every step length is an integer multiple of the planner sample period.
inline bool input_blocking_check(const TreeParams& params, double sample_period)
{
	if (!(sample_period > 0.0))
		return false;
	for (double T : params.step_times) {
		const double k = T / sample_period;
		if (std::abs(k - std::round(k)) > 1e-9 || std::round(k) < 1.0)
			return false;
	}
	return true;
}

/// State at a tree node: actual state at the root, predicted state further down.
struct NodeState {
	std::size_t level = 0;
	double time = 0.0;
	Position position;
	double sog = 0.0;
	double course = 0.0; ///< unwrapped
	double desired_sog = 0.0;
	double desired_course = 0.0; ///< unwrapped
};

/// Supplies the desired acceleration pair to seed the samples at a node.
using GuidanceHook = std::function<AccelPair(const NodeState&, const StepParams&)>;

struct CandidateTrajectory {
	std::size_t id = 0;
	/// (SOG sample index, course sample index) of the edge taken at each level.
	std::vector<std::array<std::size_t, 2>> branch;
	VelocityTrajectory desired;
	PredictedVelocity predicted;
	PoseTrajectory predicted_pose;
	VelocityTrajectory first_maneuver;
};

namespace detail {

struct TreeEdge {
	DesiredManeuver maneuver;
	PredictedVelocity predicted;
	PoseTrajectory pose;
	std::ptrdiff_t parent = -1;
};

inline void append_skip_first(std::vector<double>& dst, const std::vector<double>& src, bool skip)
{
	dst.insert(dst.end(), src.begin() + (skip ? 1 : 0), src.end());
}

} // namespace detail

/**
 * Expands the maneuver tree to depth B and returns one candidate per leaf, in
 * depth-first sample-index order. Each node integrates from its parent's
 * terminal desired values and re-seeds prediction feedback from the parent's
 * terminal predicted SOG / course. Inner nodes take tau from the inverse model
 * at the predicted speed. Empty if no level-0 maneuver is feasible.
 */
inline std::vector<CandidateTrajectory> generate_tree(const TreeParams& params, const VesselModel& model,
                                                      const ErrorModel& em, const VesselState& state,
                                                      double desired_sog0, double desired_course0,
                                                      const Force2& tau0, const GuidanceHook& guidance = {})
{
	params.validate();
	std::vector<detail::TreeEdge> edges;
	std::vector<std::size_t> leaves;
	const std::size_t depth = params.levels();

	auto expand = [&](auto&& self, const NodeState& node, const Velocity2& x0, const Force2& tau,
	                  std::ptrdiff_t parent) -> void {
		const StepParams sp = params.level(node.level);
		const AccelBox box = possible_accelerations(model, x0, tau, sp.t_ramp);

		std::optional<AccelPair> wanted;
		if (guidance) {
			AccelPair a = guidance(node, sp);
			if (sp.n_sog == 1)
				a.sog = 0.0;
			if (sp.n_course == 1)
				a.rot = 0.0;
			wanted = a;
		}
		const AccelSamples samples = sample_accelerations(box, sp.n_sog, sp.n_course, wanted);

		const TimeGrid grid = TimeGrid::spanning(node.time, sp.T, params.dt);
		auto maneuvers = integrate_primitives(samples.sog, samples.rot, sp,
		                                      {node.desired_sog, 0.0, node.desired_course}, grid, model);

		for (auto& m : maneuvers) {
			detail::TreeEdge e;
			e.predicted = predict(m.traj, em, node.sog, node.course);
			e.pose = rollout_position(e.predicted.sog, e.predicted.course, grid, node.position);
			e.maneuver = std::move(m);
			e.parent = parent;
			edges.push_back(std::move(e));
			const auto idx = edges.size() - 1;

			if (node.level + 1 == depth) {
				leaves.push_back(idx);
				continue;
			}
			const auto& ed = edges[idx];
			NodeState child;
			child.level = node.level + 1;
			child.time = grid.t_end();
			child.position = ed.pose.poses.back().position();
			child.sog = ed.predicted.sog.back();
			child.course = ed.predicted.course.back();
			child.desired_sog = ed.maneuver.traj.sog.back();
			child.desired_course = ed.maneuver.traj.course.back();
			const Velocity2 xc{std::max(0.0, child.sog), 0.0};
			const Force2 tc = inverse_model(model, xc).cwiseMax(model.tau_min).cwiseMin(model.tau_max);
			self(self, child, xc, tc, static_cast<std::ptrdiff_t>(idx));
		}
	};

	NodeState root;
	root.level = 0;
	root.time = state.time;
	root.position = state.pose.position();
	root.sog = state.vel.sog;
	root.course = state.pose.course;
	root.desired_sog = desired_sog0;
	root.desired_course = desired_course0;
	expand(expand, root, state.vel, tau0, -1);

	const TimeGrid full = TimeGrid::spanning(state.time, params.horizon(), params.dt);
	std::vector<CandidateTrajectory> out;
	out.reserve(leaves.size());
	std::vector<std::size_t> chain;
	for (std::size_t leaf : leaves) {
		chain.clear();
		for (auto e = static_cast<std::ptrdiff_t>(leaf); e >= 0; e = edges[static_cast<std::size_t>(e)].parent)
			chain.push_back(static_cast<std::size_t>(e));

		CandidateTrajectory c;
		c.id = out.size();
		c.desired.grid = full;
		c.predicted_pose.grid = full;
		bool skip = false;
		for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
			const auto& e = edges[*it];
			const auto& t = e.maneuver.traj;
			c.branch.push_back({e.maneuver.sog_index, e.maneuver.course_index});
			detail::append_skip_first(c.desired.sog, t.sog, skip);
			detail::append_skip_first(c.desired.rot, t.rot, skip);
			detail::append_skip_first(c.desired.course, t.course, skip);
			detail::append_skip_first(c.desired.sog_acc, t.sog_acc, skip);
			detail::append_skip_first(c.desired.rot_acc, t.rot_acc, skip);
			detail::append_skip_first(c.predicted.sog, e.predicted.sog, skip);
			detail::append_skip_first(c.predicted.course, e.predicted.course, skip);
			c.predicted_pose.poses.insert(c.predicted_pose.poses.end(), e.pose.poses.begin() + (skip ? 1 : 0),
			                              e.pose.poses.end());
			skip = true;
		}
		c.first_maneuver = edges[chain.back()].maneuver.traj;
		c.desired.check();
		out.push_back(std::move(c));
	}
	return out;
}

} // namespace bcmpc
