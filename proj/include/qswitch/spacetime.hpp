// spacetime.hpp: causal classification of measurement events.

#pragma once

#include "json.hpp"

#include <array>
#include <string>
#include <vector>

namespace qswitch {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

struct SpacetimeEvent {
  std::string name;
  double t = 0.0;                            // seconds
  std::array<double, 3> position{};          // meters
};

enum class Separation { kSpacelike, kLightlike, kTimelike };
std::string to_string(Separation s);

/// |dx| vs c |dt|; equality is lightlike.
Separation classify(const SpacetimeEvent& a, const SpacetimeEvent& b);

/// Strictly spacelike: |dx| > c |dt|.
bool is_spacelike(const SpacetimeEvent& a, const SpacetimeEvent& b);

/// Setting-choice and measurement events for the two remote stations: Bob
/// 9 m and Charlie 15 m from the source, 20 m apart, each with a 22.6 ns
/// interval between setting choice and measurement.
std::vector<SpacetimeEvent> reference_geometry();

std::vector<SpacetimeEvent> events_from_json(const nlohmann::json& j);
nlohmann::json classify_all(const std::vector<SpacetimeEvent>& events);

}  // namespace qswitch
