#include <gtest/gtest.h>

#include "bcmpc/config.hpp"
#include "bcmpc/io.hpp"
#include "bcmpc/sim.hpp"
#include "colregs_fixture.hpp"

using namespace bcmpc;

namespace {

ObstacleTruth truth_at(Position p, double course, double sog)
{
	return {p, sog, course};
}

VesselState own_at(Position p, double course, double sog)
{
	VesselState s;
	s.pose = make_pose(p.north, p.east, course);
	s.vel = {sog, 0.0};
	return s;
}

/// Log of the ownship sailing north along east = `offset` past a stationary obstacle at the origin.
RunLog pass_log(double offset, double obstacle_course = 0.0)
{
	RunLog log;
	log.dt = 1.0;
	log.obstacle_ids = {1};
	for (int k = 0; k <= 200; ++k) {
		LogRow r;
		r.t = k;
		r.own = own_at({-500.0 + 5.0 * k, offset}, 0.0, 5.0);
		r.truth = {truth_at({0.0, 0.0}, obstacle_course, 0.0)};
		r.estimates = {ObstacleEstimate{1, {0.0, 0.0}, 0.0, obstacle_course, r.t}};
		log.rows.push_back(r);
	}
	return log;
}

ScenarioConfig free_sailing()
{
	auto c = make_scenario("head_on");
	c.obstacles.clear();
	c.name = "free";
	return c;
}

} // namespace

TEST(Classify, Examples)
{
	const auto own = own_at({0.0, 0.0}, 0.0, 5.0);
	EXPECT_EQ(classify_situation(own, truth_at({800.0, 0.0}, kPi, 2.5)), Situation::head_on);
	EXPECT_EQ(classify_situation(own, truth_at({0.0, 800.0}, -kPi / 2.0, 2.5)), Situation::crossing_give_way);
	EXPECT_EQ(classify_situation(own, truth_at({0.0, -800.0}, kPi / 2.0, 2.5)), Situation::crossing_stand_on);
	EXPECT_EQ(classify_situation(own, truth_at({300.0, 0.0}, 0.0, 2.5)), Situation::overtaking);
	EXPECT_EQ(classify_situation(own_at({0.0, 0.0}, 0.0, 2.0), truth_at({-300.0, 0.0}, 0.0, 5.0)),
	          Situation::overtaken);
	// opening range
	EXPECT_EQ(classify_situation(own, truth_at({-800.0, 0.0}, kPi, 2.5)), Situation::none);
	// reciprocal course but 10 deg outside the head-on margin
	EXPECT_EQ(classify_situation(own, truth_at({800.0, 20.0}, kPi - deg2rad(10.0), 2.5)),
	          Situation::crossing_give_way);
}

TEST(Classify, SixteenCaseFixture)
{
	for (const auto& e : fixture::colregs_cases())
		EXPECT_EQ(classify_situation(e.own, e.obstacle), e.expected) << e.label;
}

TEST(Metrics, NoIncursionWhenFar)
{
	const auto m = compute_metrics(pass_log(400.0), PenaltyGeometry::elliptical());
	EXPECT_EQ(m.obstacles[0].incursion, (std::array<double, 3>{0.0, 0.0, 0.0}));
	EXPECT_NEAR(m.obstacles[0].min_distance, 400.0, 1e-9);
}

TEST(Metrics, StarboardPassInsideMarginOnly)
{
	// 214 m abeam on the obstacle's starboard side: inside the margin region, outside safety
	const auto m = compute_metrics(pass_log(214.0), PenaltyGeometry::elliptical());
	EXPECT_GT(m.obstacles[0].margin_time(), 0.0);
	EXPECT_EQ(m.obstacles[0].safety_time(), 0.0);
	EXPECT_EQ(m.obstacles[0].collision_time(), 0.0);
	EXPECT_NEAR(m.obstacles[0].cpa_lateral, 214.0, 1e-9);
}

TEST(Metrics, ConstantManeuverHasNoSwitches)
{
	RunLog log = pass_log(400.0);
	for (int k = 0; k < 10; ++k) {
		PlannerRecord r;
		r.t = 5.0 * k;
		r.selected = 3;
		r.cost.tran = 0;
		log.plans.push_back(r);
	}
	EXPECT_EQ(compute_metrics(log, PenaltyGeometry::elliptical()).switch_count, 0);
	log.plans[4].cost.tran = 1;
	EXPECT_EQ(compute_metrics(log, PenaltyGeometry::elliptical()).switch_count, 1);
}

TEST(Metrics, EnlargedRegionsNeverShrinkIncursions)
{
	const auto log = run(make_scenario("head_on"));
	for (const auto& g0 : {PenaltyGeometry::elliptical(), PenaltyGeometry::circular()}) {
		auto prev = compute_metrics(log, g0).obstacles[0].incursion;
		for (double f : {1.25, 1.5, 2.0, 3.0}) {
			const auto cur = compute_metrics(log, g0.scaled(f)).obstacles[0].incursion;
			for (std::size_t k = 0; k < 3; ++k)
				EXPECT_GE(cur[k], prev[k]);
			prev = cur;
		}
	}
}

TEST(Compliance, PassingSides)
{
	EXPECT_EQ(judge_compliance(Situation::head_on, 0.0, -50.0), Compliance::compliant);
	EXPECT_EQ(judge_compliance(Situation::head_on, 0.0, 50.0), Compliance::noncompliant);
	EXPECT_EQ(judge_compliance(Situation::crossing_give_way, -80.0, 10.0), Compliance::compliant);
	EXPECT_EQ(judge_compliance(Situation::crossing_give_way, 80.0, 10.0), Compliance::aware_noncompliant);
	EXPECT_EQ(judge_compliance(Situation::crossing_stand_on, 80.0, 10.0), Compliance::not_applicable);
}

TEST(Run, FreeSailingStaysOnPath)
{
	const auto cfg = free_sailing();
	const auto log = run(cfg);
	ASSERT_EQ(log.rows.size(), static_cast<std::size_t>(std::llround(cfg.duration / cfg.dt)) + 1);
	double worst = 0.0;
	for (const auto& r : log.rows) {
		const auto e = path_errors(r.own.pose.position(), cfg.desired.position(r.t), cfg.desired.course(r.t));
		worst = std::max(worst, std::abs(e.cross));
	}
	EXPECT_LT(worst, 5.0);
}

TEST(Run, HeadOnKeepsOutOfCollisionRegion)
{
	const auto cfg = make_scenario("head_on");
	const auto log = run(cfg);
	const auto m = compute_metrics(log, cfg.planner.penalty);
	const auto& om = m.obstacles[0];
	EXPECT_EQ(om.collision_time(), 0.0);
	EXPECT_GT(om.min_collision_clearance, 0.0);
	EXPECT_EQ(om.situation, Situation::head_on);
}

TEST(Run, DeterministicLog)
{
	auto cfg = make_scenario("head_on");
	cfg.noise = EstimateNoise::radar();
	cfg.seed = 7;
	cfg.duration = 120.0;
	EXPECT_EQ(csv_string(run(cfg)), csv_string(run(cfg)));
	auto other = cfg;
	other.seed = 8;
	EXPECT_NE(csv_string(run(cfg)), csv_string(run(other)));
}

TEST(Run, CommandedReferenceIsContinuous)
{
	auto cfg = make_scenario("crossing_starboard");
	cfg.noise = EstimateNoise::radar();
	const auto log = run(cfg);
	const auto& v = cfg.vessel;
	// fastest reachable speed change: full throttle swing on the lightest hull
	const double max_sog_acc = (v.tau_max(0) - v.tau_min(0)) / v.m_u0;
	for (std::size_t i = 1; i < log.rows.size(); ++i) {
		const auto& a = log.rows[i - 1];
		const auto& b = log.rows[i];
		EXPECT_LE(std::abs(b.desired_sog - a.desired_sog), cfg.dt * max_sog_acc) << "t=" << b.t;
		// course advances by the desired turn rate, also across replanning
		const double rot = std::max(std::abs(a.desired_rot), std::abs(b.desired_rot));
		EXPECT_LE(std::abs(b.desired_course - a.desired_course), cfg.dt * rot + 1e-4) << "t=" << b.t;
	}
}

TEST(Run, PlannerRunsOnItsPeriod)
{
	const auto cfg = make_scenario("overtaking");
	const auto log = run(cfg);
	ASSERT_EQ(log.plans.size(), static_cast<std::size_t>(cfg.duration / cfg.planner_period));
	for (std::size_t k = 0; k < log.plans.size(); ++k) {
		EXPECT_NEAR(log.plans[k].t, cfg.planner_period * k, 1e-9);
		EXPECT_FALSE(log.plans[k].failsafe);
		EXPECT_LE(log.plans[k].candidates, 225u);
	}
}

TEST(Run, InvalidConfigRejected)
{
	auto cfg = make_scenario("head_on");
	cfg.planner_period = 4.0;
	EXPECT_THROW(run(cfg), std::invalid_argument);
	cfg = make_scenario("head_on");
	cfg.planner.tree.step_times = {5.0, 12.0, 30.0};
	EXPECT_THROW(run(cfg), std::invalid_argument);
}
