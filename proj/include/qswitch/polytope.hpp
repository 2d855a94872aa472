// polytope.hpp: deterministic definite-causal-order strategies and the
// exhaustive maximum of the three-term functional over them.
//
// A strategy fixes the order of the two Alices and deterministic response
// functions for every party:
//   first Alice:   a_first  = f1[x_first]
//   second Alice:  a_second = f2[x_second + 2 x_first + 4 a_first]
//   Bob:           b        = h[y]                (spacelike to everyone)
//   Charlie:       c        = k[z + 2 x1 + 4 x2]  (in the common future)
// Packed into 21 bits from the least significant end: order (1), f1 (2),
// f2 (8), h (2), k (8).

#pragma once

#include "qswitch/correlation.hpp"

#include <boost/rational.hpp>

#include <cstdint>
#include <vector>

namespace qswitch {

using Rational = boost::rational<std::int64_t>;

enum class CausalOrder : std::uint8_t { kAlice1First = 0, kAlice2First = 1 };

class DeterministicStrategy {
 public:
  static constexpr std::uint32_t kNumStrategies = 1u << 21;

  /// Throws std::out_of_range for index >= 2^21.
  explicit DeterministicStrategy(std::uint32_t index);
  /// Component form; truth tables are bit masks (bit i = value at index i).
  DeterministicStrategy(CausalOrder order, std::uint32_t f1, std::uint32_t f2, std::uint32_t h,
                        std::uint32_t k);

  std::uint32_t index() const { return index_; }

  CausalOrder order() const { return static_cast<CausalOrder>(index_ & 1u); }
  std::uint32_t f1() const { return (index_ >> 1) & 0x3u; }
  std::uint32_t f2() const { return (index_ >> 3) & 0xffu; }
  std::uint32_t h() const { return (index_ >> 11) & 0x3u; }
  std::uint32_t k() const { return (index_ >> 13) & 0xffu; }

  int first_outcome(int x_first) const { return static_cast<int>((f1() >> x_first) & 1u); }
  int second_outcome(int x_second, int x_first, int a_first) const {
    return static_cast<int>((f2() >> (x_second + 2 * x_first + 4 * a_first)) & 1u);
  }
  int bob(int y) const { return static_cast<int>((h() >> y) & 1u); }
  int charlie(int z, int x1, int x2) const {
    return static_cast<int>((k() >> (z + 2 * x1 + 4 * x2)) & 1u);
  }

  friend bool operator==(const DeterministicStrategy&, const DeterministicStrategy&) = default;

 private:
  std::uint32_t index_;
};

Outcome strategy_outcomes(const DeterministicStrategy& s, const Setting& setting);

/// 0/1 table of a deterministic strategy.
CorrelationTable strategy_table(const DeterministicStrategy& s);

/// 8 * (term1 + term2 + term3) counted exactly: one point per satisfied
/// term-1/term-2 setting and two per satisfied term-3 setting.
int vbc_score(const DeterministicStrategy& s);

/// Exact value of each term for a deterministic strategy.
struct ExactBreakdown {
  Rational term1;
  Rational term2;
  Rational term3;
  Rational total;
};
ExactBreakdown exact_terms(const DeterministicStrategy& s);

enum class StrategyClass {
  kFull,
  /// Constant Bob response and a second Alice that ignores the first
  /// Alice's setting and outcome.
  kRestricted,
};

struct ClassicalMaxResult {
  Rational max;
  std::vector<std::uint32_t> optima;  // ascending strategy indices
  std::uint64_t enumerated = 0;
};

/// Exhaustive maximum over the chosen class. The scan is split into
/// `threads` disjoint index ranges and merged deterministically.
ClassicalMaxResult classical_max(StrategyClass cls = StrategyClass::kFull, unsigned threads = 1);

std::string to_string(const Rational& r);

}  // namespace qswitch
