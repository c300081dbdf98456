#pragma once

// One receding-horizon iteration: obstacle prediction, guided tree generation,
// scoring and selection, with a hold-previous fallback when no candidate exists.

#include <cmath>
#include <optional>
#include <vector>

#include "bcmpc/guidance.hpp"
#include "bcmpc/objective.hpp"
#include "bcmpc/obstacles.hpp"
#include "bcmpc/tree.hpp"
#include "bcmpc/vessel.hpp"

namespace bcmpc {

struct PlannerConfig {
	TreeParams tree;
	ErrorModel error;
	LosParams los;
	ObjectiveWeights weights;
	PenaltyGeometry penalty;
	double eval_dt = 0.5; ///< cost quadrature step [s]

	void validate() const
	{
		tree.validate();
		error.validate();
		los.validate();
		weights.validate();
		penalty.validate();
		const double ratio = eval_dt / tree.dt;
		if (!(eval_dt > 0.0) || std::abs(ratio - std::round(ratio)) > 1e-6)
			throw std::invalid_argument("PlannerConfig: eval_dt must be a multiple of the tree step");
		for (double T : tree.step_times) {
			const double k = T / eval_dt;
			if (std::abs(k - std::round(k)) > 1e-6)
				throw std::invalid_argument("PlannerConfig: step lengths must be multiples of eval_dt");
		}
	}
};

struct PlanRequest {
	VesselState state;
	Force2 tau = Force2::Zero();
	double desired_sog = 0.0;
	double desired_course = 0.0; ///< unwrapped
	/// Desired trajectory currently being tracked; must cover the first step to be used.
	std::optional<VelocityTrajectory> previous;
	std::vector<ObstacleEstimate> obstacles;
};

struct PlanResult {
	std::vector<CandidateTrajectory> candidates;
	std::vector<ObstaclePrediction> predictions;
	Selection selection;
	bool failsafe = false;

	const CandidateTrajectory& selected() const { return candidates.at(selection.index); }
};

/// Guidance hook steering toward `path` from each node's predicted state.
inline GuidanceHook make_los_hook(const DesiredTrajectory& path, const LosParams& los)
{
	return [&path, los](const NodeState& node, const StepParams& sp) {
		const LosTargets tgt = los_targets(path, node.position, node.course, node.time, los);
		return desired_acceleration(tgt, node.desired_sog, node.desired_course, sp);
	};
}

inline PlanResult plan(const PlannerConfig& cfg, const VesselModel& model, const DesiredTrajectory& path,
                       const PlanRequest& req)
{
	PlanResult out;
	const double t0 = req.state.time;
	const TimeGrid horizon = TimeGrid::spanning(t0, cfg.tree.horizon(), cfg.eval_dt);
	out.predictions.reserve(req.obstacles.size());
	for (const auto& est : req.obstacles)
		out.predictions.push_back(predict_obstacle(est, horizon));

	out.candidates = generate_tree(cfg.tree, model, cfg.error, req.state, req.desired_sog, req.desired_course,
	                               req.tau, make_los_hook(path, cfg.los));
	if (out.candidates.empty()) {
		out.failsafe = true;
		return out;
	}

	const TimeGrid first = out.candidates.front().first_maneuver.grid;
	const bool covers = req.previous && req.previous->grid.contains(first.t0()) &&
	                    req.previous->grid.contains(first.t_end());
	const VelocityTrajectory previous =
	    covers ? *req.previous : VelocityTrajectory::constant(first, req.desired_sog, req.desired_course);

	out.selection = select(out.candidates, path, out.predictions, cfg.penalty, cfg.weights, previous, cfg.eval_dt);
	return out;
}

} // namespace bcmpc
