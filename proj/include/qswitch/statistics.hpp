// statistics.hpp: shot-level emulation of the experiment and the estimators
// used to turn event counts into the three-term functional with errors.

#pragma once

#include "qswitch/correlation.hpp"

#include "json.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qswitch {

using SettingWeights = std::array<double, kNumSettings>;

SettingWeights uniform_weights();
void validate_weights(const SettingWeights& weights);

struct CountsTable {
  std::array<std::array<std::uint64_t, kNumOutcomes>, kNumSettings> counts{};
  std::uint64_t n_trials = 0;
  std::uint64_t seed = 0;
  SettingWeights setting_weights = uniform_weights();

  std::uint64_t setting_total(int setting_index) const;

  friend bool operator==(const CountsTable&, const CountsTable&) = default;
};

/// Trials per independently seeded block.
inline constexpr std::uint64_t kSampleBlock = 1u << 16;

/// Per trial: draw a setting by weight, then an outcome from the table row.
/// Trials are split into blocks of kSampleBlock, block k drawing from
/// CounterRng(seed, k); the result does not depend on `threads`.
CountsTable sample_counts(const CorrelationTable& table, std::uint64_t n_trials, std::uint64_t seed,
                          const SettingWeights& weights = uniform_weights(), unsigned threads = 1);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct VbcEstimate {
  Estimate term1;
  Estimate term2;
  Estimate term3;
  Estimate total;
  double cov12 = 0.0;  // covariance of the term1/term2 estimators
};

/// Raised when a conditioning setting has no events.
class EstimationError : public std::runtime_error {
 public:
  EstimationError(const std::string& term, const std::string& setting_key)
      : std::runtime_error("cannot estimate " + term + ": no events for setting " + setting_key),
        term_(term) {}
  const std::string& term() const { return term_; }

 private:
  std::string term_;
};

/// Ratio estimators per setting with binomial errors; the total's error
/// includes the multinomial covariances between terms sharing settings.
VbcEstimate estimate_vbc(const CountsTable& counts);

/// (value - bound) / std_error; throws std::invalid_argument for zero error.
double significance(const Estimate& estimate, double bound);

/// sqrt(sum of squares).
double combine_in_quadrature(std::initializer_list<double> errors);

/// Header "x1,x2,y,z,a1,a2,b,c,count" followed by 256 rows.
std::string counts_to_csv(const CountsTable& counts);
/// {"n_trials", "seed", "weights"}.
nlohmann::json counts_header(const CountsTable& counts);
CountsTable counts_from_csv(const std::string& csv, const nlohmann::json& header);

}  // namespace qswitch
