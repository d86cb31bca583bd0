#include <gtest/gtest.h>

#include "mira/fact_metrics.hpp"
#include "support/synth.hpp"

namespace mira {
namespace {

using testing::at_cosine;
using testing::FixtureProvider;

Fact fact(const std::string& text) { return Fact{"d", 0, {0, 1}, {}, text}; }

TEST(FactWeight, MaxOverConstructedCosines) {
  FixtureProvider p(5);
  p.set("s", at_cosine(5, 1.0, 1));
  p.set("x", at_cosine(5, 0.2, 1));
  p.set("y", at_cosine(5, 0.9, 2));
  p.set("z", at_cosine(5, 0.5, 3));
  EXPECT_NEAR(fact_weight(fact("s"), {fact("x"), fact("y"), fact("z")}, p), 0.9, 1e-12);
}

TEST(FactWeight, IdentityAndOrthogonal) {
  HashedBagOfWordsProvider p;
  EXPECT_NEAR(fact_weight(fact("police said"), {fact("police said"), fact("alpha")}, p), 1.0, 1e-12);
  EXPECT_EQ(fact_weight(fact("alpha bravo"), {fact("charlie delta")}, p), 0.0);
  try {
    fact_weight(fact("a"), {}, p);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_STREQ(e.what(), "no source facts");
  }
}

TEST(SfWeights, MeanOfWeights) {
  FixtureProvider p(3);
  p.set("s1", {1, 0, 0});
  p.set("s2", {0, 1, 0});
  p.set("d", {1, 0, 0});
  EXPECT_DOUBLE_EQ(sf_weights({fact("s1"), fact("s2")}, {fact("d")}, p), 0.5);
  EXPECT_THROW(sf_weights({}, {fact("d")}, p), DataError);
  EXPECT_THROW(sf_weights({fact("s1")}, {}, p), DataError);
}

TEST(AsstRate, StrictInequality) {
  FixtureProvider p(6);
  // Four summary facts; only the third is strictly closer to assisting.
  p.set("s0", at_cosine(6, 1.0, 1));
  p.set("m", at_cosine(6, 0.6, 2));
  p.set("a", at_cosine(6, 0.6, 3));  // tie with main for s0
  EXPECT_EQ(asst_rate_fact({fact("s0")}, {fact("m")}, {fact("a")}, p), 0.0);
  p.set("a_better", at_cosine(6, 0.7, 4));
  EXPECT_EQ(asst_rate_fact({fact("s0")}, {fact("m")}, {fact("a_better")}, p), 1.0);
  // 1 of 4 strictly better in assisting.
  p.set("t1", {0, 0, 0, 0, 0, 1});
  p.set("m2", {0, 0, 0, 0, 0, 1});
  p.set("a2", {0, 0, 0, 0, 0, 1});
  EXPECT_DOUBLE_EQ(
      asst_rate_fact({fact("s0"), fact("t1"), fact("t1"), fact("t1")}, {fact("m"), fact("m2")},
                     {fact("a_better"), fact("a2")}, p),
      0.25);
}

TEST(AsstRate, RoundingLevelDifferencesAreTies) {
  FixtureProvider p(6);
  p.set("s0", at_cosine(6, 1.0, 1));
  p.set("m", at_cosine(6, 0.6, 2));
  p.set("a", at_cosine(6, 0.6 + 1e-15, 3));
  EXPECT_EQ(asst_rate_fact({fact("s0")}, {fact("m")}, {fact("a")}, p), 0.0);
  p.set("a2", at_cosine(6, 0.6 + 1e-9, 3));
  EXPECT_EQ(asst_rate_fact({fact("s0")}, {fact("m")}, {fact("a2")}, p), 1.0);
}

TEST(AsstRate, EmptyAssistingIsZero) {
  HashedBagOfWordsProvider p;
  auto r = fact_weight_report(embed_facts({fact("a b")}, p), embed_facts({fact("a c")}, p), EmbeddedFacts{});
  EXPECT_EQ(r.asst_rate_fact, 0.0);
  EXPECT_EQ(r.per_fact[0].w_fa, -1.0);
  EXPECT_EQ(r.per_fact[0].w_fda, r.per_fact[0].w_fc);
  EXPECT_EQ(r.sf_weights_a, -1.0);
}

TEST(AsstRateSummary, Counting) {
  std::vector<double> ties(5, 0.0);
  EXPECT_EQ(asst_rate_summary(ties), 0.0);
  std::vector<double> rates{0.5, 0, 0, 0.1, 0, 0, 1, 0, 0, 0};
  EXPECT_DOUBLE_EQ(asst_rate_summary(rates), 0.3);
  EXPECT_THROW(asst_rate_summary({}), DataError);
}

TEST(FactWeightReport, EvidencePointsAtBestSource) {
  FixtureProvider p(4);
  p.set("s", at_cosine(4, 1.0, 1));
  p.set("m", at_cosine(4, 0.3, 2));
  p.set("a0", at_cosine(4, 0.1, 3));
  p.set("a1", at_cosine(4, 0.8, 3));
  auto r = fact_weight_report(embed_facts({fact("s")}, p), embed_facts({fact("m")}, p),
                              embed_facts({fact("a0"), fact("a1")}, p));
  EXPECT_TRUE(r.per_fact[0].best_in_assisting);
  EXPECT_EQ(r.per_fact[0].best_index, 1u);
  EXPECT_NEAR(r.per_fact[0].w_fda, 0.8, 1e-12);
}

}  // namespace
}  // namespace mira
