#include "qswitch/polytope.hpp"

#include "oracles/oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace qswitch;

TEST(Strategy, IndexLayout) {
  const DeterministicStrategy s(CausalOrder::kAlice2First, 0x2, 0xA5, 0x1, 0x3C);
  EXPECT_EQ(s.index(), 1u | (0x2u << 1) | (0xA5u << 3) | (0x1u << 11) | (0x3Cu << 13));
  EXPECT_EQ(DeterministicStrategy(s.index()), s);
  EXPECT_EQ(s.order(), CausalOrder::kAlice2First);
  EXPECT_EQ(s.f1(), 0x2u);
  EXPECT_EQ(s.f2(), 0xA5u);
  EXPECT_EQ(s.h(), 0x1u);
  EXPECT_EQ(s.k(), 0x3Cu);
  EXPECT_THROW(DeterministicStrategy(DeterministicStrategy::kNumStrategies), std::out_of_range);
  EXPECT_THROW(DeterministicStrategy(CausalOrder::kAlice1First, 4, 0, 0, 0), std::out_of_range);
}

TEST(Strategy, OutcomesFollowCausalOrder) {
  // A2 first: a2 = x2, then a1 = x2 XOR x1 (read from what A2 saw).
  std::uint32_t f2 = 0;
  for (int own = 0; own < 2; ++own)
    for (int xf = 0; xf < 2; ++xf)
      for (int af = 0; af < 2; ++af)
        if (own ^ af) f2 |= 1u << (own + 2 * xf + 4 * af);
  const DeterministicStrategy s(CausalOrder::kAlice2First, 0b10, f2, 0b10, 0);
  for (int i = 0; i < 16; ++i) {
    const Setting set = Setting::from_index(i);
    const Outcome o = strategy_outcomes(s, set);
    EXPECT_EQ(o.a2, set.x2);
    EXPECT_EQ(o.a1, set.x1 ^ set.x2);
    EXPECT_EQ(o.b, set.y);
    EXPECT_EQ(o.c, 0);
  }
}

TEST(Strategy, WitnessScoresSevenQuarters) {
  const DeterministicStrategy w(CausalOrder::kAlice1First, 0x0, 0xCC, 0x0, 0x0);
  const ExactBreakdown e = exact_terms(w);
  EXPECT_EQ(e.term1, Rational(1));
  EXPECT_EQ(e.term2, Rational(0));
  EXPECT_EQ(e.term3, Rational(3, 4));
  EXPECT_EQ(e.total, Rational(7, 4));
  EXPECT_EQ(vbc_score(w), 14);
  EXPECT_EQ(to_string(e.total), "7/4");
  EXPECT_EQ(to_string(e.term1), "1");
}

TEST(Strategy, ExactTermsMatchFloatTerms) {
  for (std::uint32_t idx : {0u, 1u, 96u, 777777u, 2097151u, 1234567u}) {
    const DeterministicStrategy s(idx);
    const CorrelationTable t = strategy_table(s);
    const VbcBreakdown f = vbc_terms(t);
    const ExactBreakdown e = exact_terms(s);
    EXPECT_DOUBLE_EQ(f.term1, boost::rational_cast<double>(e.term1));
    EXPECT_DOUBLE_EQ(f.term2, boost::rational_cast<double>(e.term2));
    EXPECT_DOUBLE_EQ(f.term3, boost::rational_cast<double>(e.term3));
    EXPECT_EQ(Rational(vbc_score(s), 8), e.total);
  }
}

TEST(Strategy, TablesAreDeterministicAndNonSignaling) {
  for (std::uint32_t idx = 0; idx < DeterministicStrategy::kNumStrategies; idx += 4099) {
    const CorrelationTable t = strategy_table(DeterministicStrategy(idx));
    EXPECT_TRUE(check_normalization(t).ok(0.0));
    ASSERT_TRUE(check_no_signaling(t).ok(1e-10)) << idx;
  }
}

TEST(ClassicalMax, FullClassMatchesBruteForce) {
  const ClassicalMaxResult r = classical_max(StrategyClass::kFull, 1);
  const oracle::BruteForce o = oracle::brute_force_max(false);
  EXPECT_EQ(r.enumerated, DeterministicStrategy::kNumStrategies);
  EXPECT_EQ(o.enumerated, DeterministicStrategy::kNumStrategies);
  EXPECT_EQ(r.max, Rational(7, 4));
  EXPECT_NEAR(o.max, 1.75, 1e-12);
  EXPECT_EQ(r.optima.size(), o.optima);
  EXPECT_TRUE(std::is_sorted(r.optima.begin(), r.optima.end()));
  for (std::uint32_t idx : r.optima) ASSERT_EQ(vbc_score(DeterministicStrategy(idx)), 14);
}

TEST(ClassicalMax, RestrictedClassMatchesBruteForce) {
  const ClassicalMaxResult r = classical_max(StrategyClass::kRestricted, 1);
  const oracle::BruteForce o = oracle::brute_force_max(true);
  EXPECT_EQ(r.enumerated, 16384u);
  EXPECT_EQ(o.enumerated, 16384u);
  EXPECT_EQ(r.max, Rational(5, 4));
  EXPECT_NEAR(o.max, 1.25, 1e-12);
  EXPECT_EQ(r.optima.size(), o.optima);
}

TEST(ClassicalMax, ThreadCountDoesNotChangeResult) {
  const ClassicalMaxResult one = classical_max(StrategyClass::kFull, 1);
  const ClassicalMaxResult four = classical_max(StrategyClass::kFull, 4);
  EXPECT_EQ(one.max, four.max);
  EXPECT_EQ(one.optima, four.optima);
  EXPECT_EQ(one.enumerated, four.enumerated);
}

// If Charlie could also read Bob's outcome the functional would no longer be
// bounded by 7/4; the enumeration deliberately excludes that dependence.
TEST(ClassicalMax, CharlieReadingBobBreaksTheBound) {
  EXPECT_NEAR(oracle::charlie_reads_bob_max(), 2.0, 1e-12);
}
