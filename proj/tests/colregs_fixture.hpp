#pragma once

// Encounter fixture: four situations, each at four relative bearings, placed
// 800 m from an ownship whose absolute course varies per case.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "bcmpc/sim.hpp"

namespace bcmpc::fixture {

struct Encounter {
	std::string label;
	VesselState own;
	ObstacleTruth obstacle;
	Situation expected;
};

inline std::vector<Encounter> colregs_cases()
{
	struct Row {
		Situation expected;
		const char* name;
		std::array<double, 4> bearing_deg;      // obstacle seen from the ownship bow
		std::array<double, 4> rel_course_deg;   // obstacle course relative to ownship course
		double obstacle_sog;
	};
	const std::array<Row, 4> rows{{
	    {Situation::head_on, "head_on", {0.0, 5.0, -5.0, 10.0}, {180.0, 184.0, 176.0, 182.0}, 2.5},
	    {Situation::crossing_give_way, "crossing_give_way", {30.0, 60.0, 90.0, 110.0}, {-90.0, -90.0, -90.0, -90.0}, 2.5},
	    {Situation::crossing_stand_on, "crossing_stand_on", {-30.0, -60.0, -90.0, -110.0}, {90.0, 90.0, 90.0, 90.0}, 2.5},
	    {Situation::overtaking, "overtaking", {0.0, 10.0, -10.0, 20.0}, {0.0, 0.0, 0.0, 0.0}, 2.5},
	}};
	const std::array<double, 4> own_course_deg{0.0, 90.0, 200.0, 315.0};

	std::vector<Encounter> out;
	for (const auto& r : rows)
		for (std::size_t j = 0; j < 4; ++j) {
			Encounter e;
			const double psi = deg2rad(own_course_deg[j]);
			e.own.pose = make_pose(100.0, -40.0, psi);
			e.own.vel = {5.0, 0.0};
			const double b = psi + deg2rad(r.bearing_deg[j]);
			e.obstacle.position = e.own.pose.position() + 800.0 * Position{std::cos(b), std::sin(b)};
			e.obstacle.course = wrap_angle(psi + deg2rad(r.rel_course_deg[j]));
			e.obstacle.sog = r.obstacle_sog;
			e.expected = r.expected;
			e.label = std::string(r.name) + "@" + std::to_string(static_cast<int>(r.bearing_deg[j]));
			out.push_back(e);
		}
	return out;
}

} // namespace bcmpc::fixture
