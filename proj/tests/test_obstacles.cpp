#include <gtest/gtest.h>

#include <cmath>

#include "bcmpc/obstacles.hpp"

using namespace bcmpc;

namespace {

ObstacleScript northbound()
{
	ObstacleScript s;
	s.id = 4;
	s.initial = {100.0, -50.0};
	s.sog = 2.5;
	s.course = 0.0;
	return s;
}

} // namespace

TEST(GroundTruth, ConstantVelocity)
{
	const auto s = northbound();
	const auto t0 = ground_truth(s, 0.0);
	EXPECT_EQ(t0.position.north, 100.0);
	EXPECT_EQ(t0.position.east, -50.0);
	const auto t60 = ground_truth(s, 60.0);
	EXPECT_NEAR(t60.position.north, 250.0, 1e-9);
	EXPECT_NEAR(t60.position.east, -50.0, 1e-9);
	EXPECT_THROW(ground_truth(s, -1.0), std::invalid_argument);
}

TEST(GroundTruth, ContinuousAcrossScriptedChange)
{
	auto s = northbound();
	s.changes.push_back({30.0, 4.0, kPi / 2.0});
	const auto before = ground_truth(s, 30.0 - 1e-9);
	const auto at = ground_truth(s, 30.0);
	EXPECT_NEAR(norm(before.position - at.position), 0.0, 1e-6);
	EXPECT_EQ(at.sog, 4.0);
	const auto later = ground_truth(s, 40.0);
	EXPECT_NEAR(later.position.north, 175.0, 1e-9);
	EXPECT_NEAR(later.position.east, -10.0, 1e-9);
}

TEST(Observe, NoiselessIsExact)
{
	const auto s = northbound();
	Rng rng(1);
	const auto e = observe(s, EstimateNoise::none(), 20.0, rng);
	const auto t = ground_truth(s, 20.0);
	EXPECT_EQ(e.position.north, t.position.north);
	EXPECT_EQ(e.position.east, t.position.east);
	EXPECT_EQ(e.sog, t.sog);
	EXPECT_EQ(e.course, t.course);
	EXPECT_EQ(e.timestamp, 20.0);
}

TEST(Observe, LatencyDelaysStamp)
{
	const auto s = northbound();
	Rng rng(1);
	EstimateNoise n = EstimateNoise::none();
	n.latency = 2.5;
	const auto e = observe(s, n, 20.0, rng);
	EXPECT_EQ(e.timestamp, 17.5);
	EXPECT_NEAR(e.position.north, ground_truth(s, 17.5).position.north, 1e-12);
	EXPECT_EQ(observe(s, n, 1.0, rng).timestamp, 0.0);
}

TEST(Observe, CourseNoiseWithinFourSigma)
{
	// P(|z| > 4) = 6.3e-5, so about 0.6 of 10^4 draws land outside 4 sigma;
	// more than 5 has probability below 1e-5
	const auto s = northbound();
	EstimateNoise n = EstimateNoise::none();
	n.course_std = deg2rad(10.0);
	Rng rng(42);
	int outside = 0;
	double sum_sq = 0.0;
	for (int i = 0; i < 10000; ++i) {
		const double e = angle_distance(observe(s, n, 10.0, rng).course, 0.0);
		outside += e > deg2rad(40.0);
		sum_sq += e * e;
		EXPECT_LE(e, deg2rad(60.0));
	}
	EXPECT_LE(outside, 5);
	EXPECT_NEAR(std::sqrt(sum_sq / 10000.0), deg2rad(10.0), deg2rad(0.3));
}

TEST(Observe, SameSeedSameEstimate)
{
	const auto s = northbound();
	Rng a(7), b(7);
	const auto ea = observe(s, EstimateNoise::radar(), 12.0, a);
	const auto eb = observe(s, EstimateNoise::radar(), 12.0, b);
	EXPECT_EQ(ea.position.north, eb.position.north);
	EXPECT_EQ(ea.position.east, eb.position.east);
	EXPECT_EQ(ea.sog, eb.sog);
	EXPECT_EQ(ea.course, eb.course);
}

TEST(NoisePresets, Lookup)
{
	EXPECT_EQ(EstimateNoise::preset("radar").course_std, deg2rad(15.0));
	EXPECT_EQ(EstimateNoise::preset("ais").position_std, 0.0);
	EXPECT_THROW(EstimateNoise::preset("lidar"), std::invalid_argument);
}

TEST(PredictObstacle, Examples)
{
	ObstacleEstimate e{1, {10.0, 20.0}, 0.0, 1.0, 3.0};
	const auto still = predict_obstacle(e, TimeGrid::spanning(3.0, 55.0, 0.5));
	for (const auto& p : still.positions) {
		EXPECT_EQ(p.north, 10.0);
		EXPECT_EQ(p.east, 20.0);
	}
	e.sog = 2.5;
	e.course = kPi / 2.0;
	const auto moving = predict_obstacle(e, TimeGrid::spanning(3.0, 55.0, 0.5));
	EXPECT_NEAR(moving.positions.back().east - 20.0, 137.5, 1e-9);
	EXPECT_NEAR(moving.positions.front().north, 10.0, 1e-12);
	EXPECT_NEAR(moving.positions.front().east, 20.0, 1e-12);
	EXPECT_EQ(moving.course, e.course);
	EXPECT_THROW(predict_obstacle(e, TimeGrid::spanning(0.0, 55.0, 0.5)), std::invalid_argument);
}

TEST(PredictObstacle, StraightRay)
{
	const ObstacleEstimate e{1, {0.0, 0.0}, 3.0, 0.7, 0.0};
	const auto p = predict_obstacle(e, TimeGrid::spanning(0.0, 55.0, 0.5));
	for (const auto& x : p.positions) {
		if (norm(x) > 0.0) {
			EXPECT_NEAR(std::atan2(x.east, x.north), 0.7, 1e-12);
		}
	}
}

TEST(PredictObstacle, NoiselessObservationMatchesFutureTruth)
{
	const auto s = northbound();
	Rng rng(3);
	const auto est = observe(s, EstimateNoise::none(), 10.0, rng);
	const auto p = predict_obstacle(est, TimeGrid::spanning(10.0, 55.0, 0.5));
	for (std::size_t i = 0; i < p.grid.size(); ++i) {
		const auto t = ground_truth(s, p.grid.time(i));
		EXPECT_NEAR(p.positions[i].north, t.position.north, 1e-9);
		EXPECT_NEAR(p.positions[i].east, t.position.east, 1e-9);
	}
}
