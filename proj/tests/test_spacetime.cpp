#include "qswitch/spacetime.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qswitch;

namespace {

SpacetimeEvent at(double t, double x, double y = 0.0) { return {"e", t, {x, y, 0.0}}; }

const SpacetimeEvent& find(const std::vector<SpacetimeEvent>& ev, const std::string& name) {
  for (const auto& e : ev)
    if (e.name == name) return e;
  throw std::runtime_error("missing " + name);
}

}  // namespace

TEST(Spacetime, WindowVersusSeparation) {
  EXPECT_NEAR(kSpeedOfLight * 22.6e-9, 6.78, 0.01);
  EXPECT_TRUE(is_spacelike(at(0.0, 0.0), at(22.6e-9, 20.0)));
  EXPECT_EQ(classify(at(0.0, 0.0), at(22.6e-9, 5.0)), Separation::kTimelike);
}

TEST(Spacetime, BoundaryCases) {
  EXPECT_FALSE(is_spacelike(at(0.0, 3.0), at(0.0, 3.0)));
  EXPECT_EQ(classify(at(0.0, 1.0), at(1e-6, 1.0)), Separation::kTimelike);
  // Exactly on the light cone: 1 s apart, c metres away.
  const SpacetimeEvent a = at(0.0, 0.0);
  const SpacetimeEvent b = at(1.0, kSpeedOfLight);
  EXPECT_EQ(classify(a, b), Separation::kLightlike);
  EXPECT_FALSE(is_spacelike(a, b));
  EXPECT_THROW(classify(at(NAN, 0.0), a), std::invalid_argument);
}

TEST(Spacetime, ReferenceGeometry) {
  const auto ev = reference_geometry();
  const auto& bob = find(ev, "bob_measurement");
  const auto& charlie = find(ev, "charlie_measurement");
  auto dist = [](const SpacetimeEvent& p, const SpacetimeEvent& q) {
    return std::hypot(p.position[0] - q.position[0], p.position[1] - q.position[1],
                      p.position[2] - q.position[2]);
  };
  const SpacetimeEvent source{"source", 0.0, {0.0, 0.0, 0.0}};
  EXPECT_NEAR(dist(bob, source), 9.0, 1e-12);
  EXPECT_NEAR(dist(charlie, source), 15.0, 1e-12);
  EXPECT_NEAR(dist(bob, charlie), 20.0, 1e-12);
  EXPECT_TRUE(is_spacelike(bob, charlie));
  EXPECT_TRUE(is_spacelike(find(ev, "bob_setting"), charlie));
  EXPECT_TRUE(is_spacelike(find(ev, "charlie_setting"), bob));
}

TEST(Spacetime, JsonEventsAndPairs) {
  const nlohmann::json j = nlohmann::json::parse(R"({"events": [
      {"name": "a", "t": 0, "position": [0, 0, 0]},
      {"name": "b", "t": 1e-9, "position": [10, 0, 0]},
      {"name": "c", "t": 1e-6, "position": [0, 0, 0]}]})");
  const auto ev = events_from_json(j);
  ASSERT_EQ(ev.size(), 3u);
  const nlohmann::json pairs = classify_all(ev);
  ASSERT_EQ(pairs.size(), 3u);
  EXPECT_EQ(pairs[0]["separation"], "spacelike");
  EXPECT_EQ(pairs[1]["separation"], "timelike");
  EXPECT_EQ(pairs[1]["b"], "c");
  EXPECT_EQ(events_from_json(j["events"]).size(), 3u);
  EXPECT_THROW(events_from_json(nlohmann::json::parse(R"([{"t": 0, "position": [0, 0]}])")),
               std::invalid_argument);
}
