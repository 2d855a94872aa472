#include "qswitch/spacetime.hpp"

#include "qswitch/correlation.hpp"

#include <cmath>
#include <stdexcept>

namespace qswitch {

std::string to_string(Separation s) {
  switch (s) {
    case Separation::kSpacelike: return "spacelike";
    case Separation::kLightlike: return "lightlike";
    case Separation::kTimelike: return "timelike";
  }
  return "?";
}

namespace {

double distance(const SpacetimeEvent& a, const SpacetimeEvent& b) {
  const double dx = a.position[0] - b.position[0];
  const double dy = a.position[1] - b.position[1];
  const double dz = a.position[2] - b.position[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

void check_finite(const SpacetimeEvent& e) {
  bool ok = std::isfinite(e.t);
  for (double x : e.position) ok = ok && std::isfinite(x);
  if (!ok) throw std::invalid_argument("event '" + e.name + "' has non-finite coordinates");
}

}  // namespace

Separation classify(const SpacetimeEvent& a, const SpacetimeEvent& b) {
  check_finite(a);
  check_finite(b);
  const double dx = distance(a, b);
  const double light = kSpeedOfLight * std::abs(a.t - b.t);
  if (dx > light) return Separation::kSpacelike;
  if (dx == light) return Separation::kLightlike;
  return Separation::kTimelike;
}

bool is_spacelike(const SpacetimeEvent& a, const SpacetimeEvent& b) {
  return classify(a, b) == Separation::kSpacelike;
}

std::vector<SpacetimeEvent> reference_geometry() {
  // Source at the origin, Bob on the -x axis, Charlie placed so that the
  // three pairwise distances are 9 m, 15 m and 20 m.
  constexpr double kBob = 9.0;
  constexpr double kCharlie = 15.0;
  constexpr double kApart = 20.0;
  constexpr double kWindow = 22.6e-9;
  const double cx = (kApart * kApart - kBob * kBob - kCharlie * kCharlie) / (2 * kBob);
  const double cy = std::sqrt(kCharlie * kCharlie - cx * cx);
  const std::array<double, 3> bob{-kBob, 0.0, 0.0};
  const std::array<double, 3> charlie{cx, cy, 0.0};
  // Equal fiber lengths put both detections at the same time.
  return {
      {"bob_setting", -kWindow, bob},
      {"bob_measurement", 0.0, bob},
      {"charlie_setting", -kWindow, charlie},
      {"charlie_measurement", 0.0, charlie},
  };
}

std::vector<SpacetimeEvent> events_from_json(const nlohmann::json& j) {
  const auto& list = j.is_object() ? j.at("events") : j;
  if (!list.is_array()) throw std::invalid_argument("events must be an array");
  std::vector<SpacetimeEvent> out;
  for (const auto& e : list) {
    SpacetimeEvent ev;
    ev.name = e.value("name", "event" + std::to_string(out.size()));
    ev.t = e.at("t").get<double>();
    const auto& pos = e.at("position");
    if (!pos.is_array() || pos.size() != 3) throw std::invalid_argument("position must have 3 entries");
    for (int i = 0; i < 3; ++i) ev.position[i] = pos[i].get<double>();
    check_finite(ev);
    out.push_back(std::move(ev));
  }
  return out;
}

nlohmann::json classify_all(const std::vector<SpacetimeEvent>& events) {
  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t i = 0; i < events.size(); ++i) {
    for (std::size_t k = i + 1; k < events.size(); ++k) {
      const auto& a = events[i];
      const auto& b = events[k];
      pairs.push_back({{"a", a.name},
                       {"b", b.name},
                       {"distance_m", round_sig12(distance(a, b))},
                       {"light_distance_m", round_sig12(kSpeedOfLight * std::abs(a.t - b.t))},
                       {"separation", to_string(classify(a, b))}});
    }
  }
  return pairs;
}

}  // namespace qswitch
