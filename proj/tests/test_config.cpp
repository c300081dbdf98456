#include <gtest/gtest.h>

#include <fstream>

#include "bcmpc/config.hpp"

using namespace bcmpc;
using nlohmann::json;

namespace {

json minimal()
{
	return json::parse(R"({
		"schema_version": 1,
		"name": "mini",
		"duration_s": 60,
		"ownship": {"north_m": 0, "east_m": 0, "course_rad": 0, "sog_mps": 5},
		"desired_trajectory": {"type": "straight_line", "north_m": 0, "east_m": 0, "course_rad": 0, "sog_mps": 5},
		"obstacles": [{"id": 2, "north_m": 800, "east_m": 0, "sog_mps": 2.5, "course_rad": 3.14159}],
		"noise": {"preset": "radar"}
	})");
}

std::string error_of(const json& j)
{
	try {
		config_from_json(j);
	} catch (const ConfigError& e) {
		return e.what();
	}
	return {};
}

json shipped(const std::string& name)
{
	std::ifstream in(std::string(BCMPC_SCENARIO_DIR) + "/" + name + ".json");
	EXPECT_TRUE(in.good()) << name;
	json j;
	in >> j;
	return j;
}

// Every leaf (scalar) of a document as a JSON pointer.
void leaves(const json& j, const json::json_pointer& at, std::vector<json::json_pointer>& out)
{
	if (j.is_object()) {
		for (const auto& [k, v] : j.items())
			leaves(v, at / k, out);
	} else if (j.is_array()) {
		for (std::size_t i = 0; i < j.size(); ++i)
			leaves(j[i], at / i, out);
	} else {
		out.push_back(at);
	}
}

// Every object key of a document as (parent pointer, key).
void keys(const json& j, const json::json_pointer& at, std::vector<std::pair<json::json_pointer, std::string>>& out)
{
	if (j.is_object()) {
		for (const auto& [k, v] : j.items()) {
			out.emplace_back(at, k);
			keys(v, at / k, out);
		}
	} else if (j.is_array()) {
		for (std::size_t i = 0; i < j.size(); ++i)
			keys(j[i], at / i, out);
	}
}

} // namespace

TEST(Config, MinimalDocumentUsesDefaults)
{
	const auto c = config_from_json(minimal());
	EXPECT_EQ(c.name, "mini");
	EXPECT_EQ(c.noise.course_std, EstimateNoise::radar().course_std);
	EXPECT_EQ(c.planner.tree.n_course, (std::vector<int>{5, 3, 3}));
	EXPECT_EQ(c.planner.weights.tran, 4200.0);
	EXPECT_EQ(c.planner.tree.dt, c.dt);
	ASSERT_EQ(c.obstacles.size(), 1u);
	EXPECT_EQ(c.obstacles[0].id, 2);
	EXPECT_NEAR(c.desired.position(10.0).north, 50.0, 1e-12);
}

TEST(Config, RoundTrip)
{
	for (const auto& name : scenario_names()) {
		const auto c = make_scenario(name);
		const json j = config_to_json(c);
		EXPECT_EQ(config_to_json(config_from_json(j)), j) << name;
		EXPECT_EQ(config_to_json(config_from_json(json::parse(j.dump()))), j) << name;
	}
}

TEST(Config, ShippedFilesMatchLibrary)
{
	for (const auto& name : scenario_names())
		EXPECT_EQ(config_to_json(config_from_json(shipped(name))), config_to_json(make_scenario(name))) << name;
}

TEST(Config, UnknownKeyNamed)
{
	auto j = minimal();
	j["planner"] = {{"weights", {{"tarn", 1.0}}}};
	EXPECT_NE(error_of(j).find("planner.weights.tarn"), std::string::npos) << error_of(j);
	j = minimal();
	j["colour"] = "blue";
	EXPECT_NE(error_of(j).find("colour"), std::string::npos);
}

TEST(Config, WrongTypeAndMissingKeyRejected)
{
	auto j = minimal();
	j["duration_s"] = "sixty";
	EXPECT_NE(error_of(j).find("duration_s"), std::string::npos);
	j = minimal();
	j["ownship"].erase("sog_mps");
	EXPECT_NE(error_of(j).find("sog_mps"), std::string::npos);
	j = minimal();
	j["schema_version"] = 2;
	EXPECT_NE(error_of(j).find("schema_version"), std::string::npos);
	j = minimal();
	j["noise"] = {{"preset", "sonar"}};
	EXPECT_NE(error_of(j).find("noise.preset"), std::string::npos);
}

TEST(Config, SemanticValidation)
{
	auto j = minimal();
	j["planner"] = {{"tree", {{"step_times_s", {5, 12, 30}}}}};
	EXPECT_FALSE(error_of(j).empty());
	j = minimal();
	j["dt_s"] = -0.1;
	EXPECT_FALSE(error_of(j).empty());
}

TEST(Config, EverySingleFieldCorruptionRejected)
{
	for (const auto& name : scenario_names()) {
		const json base = shipped(name);
		ASSERT_NO_THROW(config_from_json(base));

		std::vector<json::json_pointer> ls;
		leaves(base, json::json_pointer{}, ls);
		ASSERT_GT(ls.size(), 50u);
		for (const auto& p : ls) {
			json bad = base;
			bad[p] = bad[p].is_string() ? json(12345) : json("corrupt");
			EXPECT_FALSE(error_of(bad).empty()) << name << " " << p.to_string();
		}

		std::vector<std::pair<json::json_pointer, std::string>> ks;
		keys(base, json::json_pointer{}, ks);
		for (const auto& [parent, key] : ks) {
			json bad = base;
			auto& obj = bad[parent];
			obj[key + "_x"] = obj[key];
			obj.erase(key);
			EXPECT_FALSE(error_of(bad).empty()) << name << " " << parent.to_string() << "/" << key;
		}
	}
}

TEST(ScenarioLibrary, Geometry)
{
	const auto ho = make_scenario("head_on");
	EXPECT_NEAR(norm(ho.obstacles[0].initial), kInitialSeparation, 1e-9);
	const auto cs = make_scenario("crossing_starboard");
	EXPECT_NEAR(norm(cs.obstacles[0].initial), kInitialSeparation, 1e-9);
	// collision course: both reach the same point at the same time
	const double tc = cs.obstacles[0].initial.north / kOwnshipSpeed;
	EXPECT_NEAR(norm(ground_truth(cs.obstacles[0], tc).position - Position{kOwnshipSpeed * tc, 0.0}), 0.0, 1e-9);
	EXPECT_THROW(make_scenario("nope"), ConfigError);
}
