#include "qswitch/polytope.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace qswitch {

DeterministicStrategy::DeterministicStrategy(std::uint32_t index) : index_(index) {
  if (index >= kNumStrategies) throw std::out_of_range("strategy index must be < 2^21");
}

DeterministicStrategy::DeterministicStrategy(CausalOrder order, std::uint32_t f1, std::uint32_t f2,
                                             std::uint32_t h, std::uint32_t k)
    : index_(0) {
  if (f1 > 0x3u || f2 > 0xffu || h > 0x3u || k > 0xffu) {
    throw std::out_of_range("strategy truth table has too many bits");
  }
  index_ = static_cast<std::uint32_t>(order) | (f1 << 1) | (f2 << 3) | (h << 11) | (k << 13);
}

Outcome strategy_outcomes(const DeterministicStrategy& s, const Setting& setting) {
  Outcome o;
  if (s.order() == CausalOrder::kAlice1First) {
    o.a1 = s.first_outcome(setting.x1);
    o.a2 = s.second_outcome(setting.x2, setting.x1, o.a1);
  } else {
    o.a2 = s.first_outcome(setting.x2);
    o.a1 = s.second_outcome(setting.x1, setting.x2, o.a2);
  }
  o.b = s.bob(setting.y);
  o.c = s.charlie(setting.z, setting.x1, setting.x2);
  return o;
}

CorrelationTable strategy_table(const DeterministicStrategy& s) {
  CorrelationTable t;
  for (int i = 0; i < kNumSettings; ++i) {
    const Setting set = Setting::from_index(i);
    t.at(set, strategy_outcomes(s, set)) = 1.0;
  }
  return t;
}

namespace {

struct Counts {
  int term1 = 0;  // out of 8
  int term2 = 0;  // out of 8
  int term3 = 0;  // out of 4
};

Counts count_events(const DeterministicStrategy& s) {
  Counts n;
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2)
      for (int z = 0; z < 2; ++z) {
        const Outcome o = strategy_outcomes(s, Setting{x1, x2, 0, z});
        n.term1 += (o.b == 0 && o.a2 == x1);
        n.term2 += (o.b == 1 && o.a1 == x2);
      }
  for (int y = 0; y < 2; ++y)
    for (int z = 0; z < 2; ++z) {
      const Outcome o = strategy_outcomes(s, Setting{0, 0, y, z});
      n.term3 += ((o.b ^ o.c) == (y & z));
    }
  return n;
}

struct ScanResult {
  int best = -1;
  std::vector<std::uint32_t> optima;
  std::uint64_t enumerated = 0;
};

template <typename IndexAt>
ScanResult scan(std::uint64_t begin, std::uint64_t end, IndexAt index_at) {
  ScanResult r;
  for (std::uint64_t i = begin; i < end; ++i) {
    const std::uint32_t idx = index_at(i);
    const int score = vbc_score(DeterministicStrategy(idx));
    if (score > r.best) {
      r.best = score;
      r.optima.clear();
    }
    if (score == r.best) r.optima.push_back(idx);
    ++r.enumerated;
  }
  return r;
}

std::vector<std::uint32_t> restricted_indices() {
  std::vector<std::uint32_t> out;
  for (std::uint32_t order = 0; order < 2; ++order)
    for (std::uint32_t f1 = 0; f1 < 4; ++f1)
      for (std::uint32_t g = 0; g < 4; ++g) {
        // f2 depends only on the second party's own setting.
        std::uint32_t f2 = 0;
        for (std::uint32_t i = 0; i < 8; ++i) f2 |= ((g >> (i & 1u)) & 1u) << i;
        for (std::uint32_t hc = 0; hc < 2; ++hc)
          for (std::uint32_t k = 0; k < 256; ++k)
            out.push_back(DeterministicStrategy(static_cast<CausalOrder>(order), f1, f2,
                                                hc ? 0x3u : 0x0u, k)
                              .index());
      }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

int vbc_score(const DeterministicStrategy& s) {
  const Counts n = count_events(s);
  return n.term1 + n.term2 + 2 * n.term3;
}

ExactBreakdown exact_terms(const DeterministicStrategy& s) {
  const Counts n = count_events(s);
  ExactBreakdown e{Rational(n.term1, 8), Rational(n.term2, 8), Rational(n.term3, 4), Rational(0)};
  e.total = e.term1 + e.term2 + e.term3;
  return e;
}

ClassicalMaxResult classical_max(StrategyClass cls, unsigned threads) {
  std::vector<std::uint32_t> subset;
  std::uint64_t size = DeterministicStrategy::kNumStrategies;
  if (cls == StrategyClass::kRestricted) {
    subset = restricted_indices();
    size = subset.size();
  }
  auto index_at = [&](std::uint64_t i) {
    return subset.empty() ? static_cast<std::uint32_t>(i) : subset[i];
  };

  threads = std::max(1u, threads);
  std::vector<ScanResult> parts(threads);
  const std::uint64_t chunk = (size + threads - 1) / threads;
  if (threads == 1) {
    parts[0] = scan(0, size, index_at);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      const std::uint64_t begin = std::min(size, t * chunk);
      const std::uint64_t end = std::min(size, begin + chunk);
      workers.emplace_back([&, t, begin, end] { parts[t] = scan(begin, end, index_at); });
    }
  }

  ClassicalMaxResult result;
  int best = -1;
  for (const auto& p : parts) best = std::max(best, p.best);
  for (auto& p : parts) {
    result.enumerated += p.enumerated;
    if (p.best == best) result.optima.insert(result.optima.end(), p.optima.begin(), p.optima.end());
  }
  result.max = Rational(best, 8);
  return result;
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace qswitch
