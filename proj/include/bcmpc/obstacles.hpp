#pragma once

// Synthetic obstacle tracker: scripted ground truth, noisy delayed estimates
// and constant-velocity prediction.

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcmpc/core.hpp"
#include "bcmpc/objective.hpp"

namespace bcmpc {

/// Speed / course change taking effect at time t.
struct ScriptChange {
	double t = 0.0;
	double sog = 0.0;
	double course = 0.0;
};

struct ObstacleScript {
	int id = 0;
	Position initial;
	double sog = 0.0;
	double course = 0.0;
	std::vector<ScriptChange> changes; ///< sorted by time

	void validate() const
	{
		if (sog < 0.0)
			throw std::invalid_argument("ObstacleScript: negative speed");
		for (std::size_t i = 0; i < changes.size(); ++i) {
			if (changes[i].sog < 0.0)
				throw std::invalid_argument("ObstacleScript: negative speed in change");
			if (changes[i].t < 0.0 || (i > 0 && changes[i].t < changes[i - 1].t))
				throw std::invalid_argument("ObstacleScript: changes must be sorted and non-negative");
		}
	}
};

struct ObstacleTruth {
	Position position;
	double sog = 0.0;
	double course = 0.0;
};

/// Piecewise constant-velocity motion of a script at time t >= 0.
inline ObstacleTruth ground_truth(const ObstacleScript& s, double t)
{
	if (t < 0.0)
		throw std::invalid_argument("ground_truth: negative time");
	Position p = s.initial;
	double sog = s.sog;
	double course = s.course;
	double t_prev = 0.0;
	for (const auto& c : s.changes) {
		if (c.t > t)
			break;
		p = p + (sog * (c.t - t_prev)) * Position{std::cos(course), std::sin(course)};
		t_prev = c.t;
		sog = c.sog;
		course = c.course;
	}
	p = p + (sog * (t - t_prev)) * Position{std::cos(course), std::sin(course)};
	return {p, sog, wrap_angle(course)};
}

struct EstimateNoise {
	double position_std = 0.0; // [m]
	double sog_std = 0.0;      // [m/s]
	double course_std = 0.0;   // [rad]
	double latency = 0.0;      // [s]
	double period = 1.0;       // [s]

	void validate() const
	{
		if (position_std < 0.0 || sog_std < 0.0 || course_std < 0.0 || latency < 0.0)
			throw std::invalid_argument("EstimateNoise: standard deviations and latency must be non-negative");
		if (!(period > 0.0))
			throw std::invalid_argument("EstimateNoise: update period must be positive");
	}

	static EstimateNoise radar() { return {10.0, 0.3, deg2rad(15.0), 2.5, 2.5}; }
	static EstimateNoise ais() { return {0.0, 0.0, 0.0, 0.0, 10.0}; }
	static EstimateNoise none() { return {0.0, 0.0, 0.0, 0.0, 1.0}; }

	/// "radar", "ais" or "none".
	static EstimateNoise preset(const std::string& name)
	{
		if (name == "radar")
			return radar();
		if (name == "ais")
			return ais();
		if (name == "none")
			return none();
		throw std::invalid_argument("unknown noise preset '" + name + "'");
	}
};

struct ObstacleEstimate {
	int id = 0;
	Position position;
	double sog = 0.0;
	double course = 0.0;
	double timestamp = 0.0;
};

using Rng = std::mt19937_64;

/// Ground truth at t - latency with independent Gaussian noise on every field.
inline ObstacleEstimate observe(const ObstacleScript& s, const EstimateNoise& noise, double t, Rng& rng)
{
	const double stamp = std::max(0.0, t - noise.latency);
	const ObstacleTruth truth = ground_truth(s, stamp);
	std::normal_distribution<double> n01(0.0, 1.0);
	// Draw in a fixed order so the stream is reproducible regardless of which stds are zero.
	const double zn = n01(rng);
	const double ze = n01(rng);
	const double zu = n01(rng);
	const double zc = n01(rng);

	ObstacleEstimate est;
	est.id = s.id;
	est.position = {truth.position.north + noise.position_std * zn, truth.position.east + noise.position_std * ze};
	est.sog = std::max(0.0, truth.sog + noise.sog_std * zu);
	est.course = wrap_angle(truth.course + noise.course_std * zc);
	est.timestamp = stamp;
	return est;
}

/// Straight-line extrapolation of an estimate over a grid starting at or after its timestamp.
inline ObstaclePrediction predict_obstacle(const ObstacleEstimate& est, const TimeGrid& grid)
{
	if (grid.t0() < est.timestamp - 1e-9)
		throw std::invalid_argument("predict_obstacle: grid starts before the estimate");
	ObstaclePrediction out;
	out.id = est.id;
	out.grid = grid;
	out.course = est.course;
	out.sog = est.sog;
	out.positions.resize(grid.size());
	const Position dir{std::cos(est.course), std::sin(est.course)};
	for (std::size_t i = 0; i < grid.size(); ++i)
		out.positions[i] = est.position + (est.sog * (grid.time(i) - est.timestamp)) * dir;
	return out;
}

} // namespace bcmpc
