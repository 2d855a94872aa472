// correlation.hpp: settings, outcomes, the 16x16 conditional probability
// table p(a1 a2 b c | x1 x2 y z) and the three-term causal functional.

#pragma once

#include "json.hpp"

#include <array>
#include <cstdint>
#include <string>

namespace qswitch {

/// Party inputs. Flat index is the big-endian bit string "x1 x2 y z".
struct Setting {
  int x1 = 0;
  int x2 = 0;
  int y = 0;
  int z = 0;

  static Setting from_index(int index);
  int index() const { return (x1 << 3) | (x2 << 2) | (y << 1) | z; }
  std::string key() const;  // e.g. "0010"
  void validate() const;

  friend bool operator==(const Setting&, const Setting&) = default;
};

/// Party outputs. Flat index is the big-endian bit string "a1 a2 b c".
struct Outcome {
  int a1 = 0;
  int a2 = 0;
  int b = 0;
  int c = 0;

  static Outcome from_index(int index);
  int index() const { return (a1 << 3) | (a2 << 2) | (b << 1) | c; }
  void validate() const;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

inline constexpr int kNumSettings = 16;
inline constexpr int kNumOutcomes = 16;

using OutcomeRow = std::array<double, kNumOutcomes>;

class CorrelationTable {
 public:
  CorrelationTable() { for (auto& row : probs_) row.fill(0.0); }

  double at(const Setting& s, const Outcome& o) const { return probs_[s.index()][o.index()]; }
  double& at(const Setting& s, const Outcome& o) { return probs_[s.index()][o.index()]; }

  const OutcomeRow& row(const Setting& s) const { return probs_[s.index()]; }
  const OutcomeRow& row(int setting_index) const { return probs_.at(setting_index); }
  void set_row(const Setting& s, const OutcomeRow& row) { probs_[s.index()] = row; }

  /// Every entry equal to 1/16.
  static CorrelationTable uniform();

  friend bool operator==(const CorrelationTable&, const CorrelationTable&) = default;

 private:
  std::array<OutcomeRow, kNumSettings> probs_;
};

struct VbcBreakdown {
  double term1 = 0.0;  // p(b=0, a2=x1 | y=0)
  double term2 = 0.0;  // p(b=1, a1=x2 | y=0)
  double term3 = 0.0;  // p(b xor c = yz | x1=x2=0)
  double total = 0.0;
};

VbcBreakdown vbc_terms(const CorrelationTable& table);

/// Largest absolute violation of a table invariant, with a short label of
/// which check produced it.
struct InvariantReport {
  double max_violation = 0.0;
  std::string worst;

  bool ok(double tol) const { return max_violation <= tol; }
};

/// Nonnegativity and per-setting normalization.
InvariantReport check_normalization(const CorrelationTable& table);

/// The three marginal-independence conditions:
///   p(b|y) independent of (x1, x2, z),
///   p(a1 a2 | x1 x2) independent of (y, z),
///   p(a1 a2 c | x1 x2 z) independent of y.
InvariantReport check_no_signaling(const CorrelationTable& table);

/// Largest |a - b| over all 256 entries.
double max_abs_difference(const CorrelationTable& a, const CorrelationTable& b);

/// Rounds to 12 significant digits so that shortest-round-trip printing
/// (as nlohmann::json does) emits at most 12 digits.
double round_sig12(double value);
/// "%.12g" formatting.
std::string format_sig12(double value);

/// {"x1x2yz": [16 probabilities ordered by a1a2bc]}
nlohmann::json table_to_json(const CorrelationTable& table);
CorrelationTable table_from_json(const nlohmann::json& j);

/// Header x1,x2,y,z,a1,a2,b,c,p followed by 256 rows.
std::string table_to_csv(const CorrelationTable& table);
CorrelationTable table_from_csv(const std::string& csv);

nlohmann::json breakdown_to_json(const VbcBreakdown& terms);

}  // namespace qswitch
