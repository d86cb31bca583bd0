#include <gtest/gtest.h>

#include "mira/extractive.hpp"
#include "support/brute_force.hpp"
#include "support/synth.hpp"

namespace mira {
namespace {

Example make(const std::string& main, const std::string& summary, std::vector<std::string> assist) {
  Example ex;
  ex.id = "e";
  ex.main = make_document("m", "", main);
  ex.summary = make_summary(summary);
  for (std::size_t i = 0; i < assist.size(); ++i)
    ex.assisting.push_back(make_document("a" + std::to_string(i), "", assist[i], DocumentRole::kAssisting));
  return ex;
}

TEST(Lead, FirstThreeSentences) {
  auto ex = make("One a. Two b. Three c. Four d.", "One a. Two b. Three c.", {"Zed."});
  auto r = lead(ex, SourceConfig::kD);
  ASSERT_EQ(r.selected.size(), 3u);
  EXPECT_EQ(r.selected[2], (SentenceRef{"m", 2}));
  EXPECT_DOUBLE_EQ(r.score.r1.f1, 1.0);
  EXPECT_THROW(lead(ex, SourceConfig::kDA), ValidationError);
}

TEST(Lead, AssistingDocumentsScoredSeparately) {
  auto ex = make("X y.", "Cat sat.", {"Cat sat.", "Dog ran."});
  auto r = lead(ex, SourceConfig::kA);
  ASSERT_EQ(r.per_document.size(), 2u);
  EXPECT_DOUBLE_EQ(r.per_document[0].r1.f1, 1.0);
  // "dog ran ." vs "cat sat ." share only "."
  EXPECT_DOUBLE_EQ(r.per_document[1].r1.f1, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.score.r1.f1, (1.0 + 1.0 / 3.0) / 2.0);
  EXPECT_EQ(r.selected.size(), 2u);
}

TEST(Oracle, PicksMatchingSentenceAndStops) {
  auto ex = make("Alpha beta gamma. Delta epsilon zeta. Eta theta iota.", "Delta epsilon zeta.", {"Kappa."});
  auto r = ext_oracle(ex, SourceConfig::kD);
  ASSERT_EQ(r.selected.size(), 1u);
  EXPECT_EQ(r.selected[0], (SentenceRef{"m", 1}));
  EXPECT_DOUBLE_EQ(r.objective_trace.back(), 1.0);
}

TEST(Oracle, TiesGoToEarliest) {
  auto ex = make("Same words here. Same words here.", "Same words here.", {"Other."});
  auto r = ext_oracle(ex, SourceConfig::kD);
  ASSERT_EQ(r.selected.size(), 1u);
  EXPECT_EQ(r.selected[0].sentence_index, 0u);
}

TEST(Oracle, MergedPoolForCombinedConfig) {
  auto ex = make("Nothing relevant.", "Cat sat down.", {"Cat sat down."});
  auto r = ext_oracle(ex, SourceConfig::kDA);
  ASSERT_FALSE(r.selected.empty());
  EXPECT_EQ(r.selected[0].doc_id, "a0");
}

TEST(Oracle, TraceAndBruteForce) {
  testing::SynthOptions o;
  o.max_sents = 3;
  o.max_assisting = 2;
  auto xs = testing::synth_corpus(5, 60, o);
  for (const auto& ex : xs)
    for (auto c : {SourceConfig::kD, SourceConfig::kA, SourceConfig::kDA}) {
      if (sentence_pool(ex, c).size() > 12) continue;
      auto r = ext_oracle(ex, c, 3, true);
      for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
        EXPECT_GE(r.objective_trace[i], r.objective_trace[i - 1]);
      const double best = testing::brute_force_optimum(ex, c, 3);
      const double got = r.objective_trace.empty() ? 0.0 : r.objective_trace.back();
      EXPECT_LE(got, best + 1e-12);
      ASSERT_TRUE(r.greedy_gap.has_value());
      EXPECT_NEAR(*r.greedy_gap, best - got, 1e-12);
      // Final objective is at least the best single sentence.
      EXPECT_GE(got + 1e-12, testing::brute_force_optimum(ex, c, 1));
    }
}

TEST(Oracle, NoExhaustiveGapForLargePools) {
  std::string main;
  for (int i = 0; i < 30; ++i) main += "Sentence number " + testing::word(static_cast<std::size_t>(i)) + ". ";
  auto ex = make(main, "Sentence number ba.", {"Other."});
  auto r = ext_oracle(ex, SourceConfig::kD, 3, true);
  EXPECT_FALSE(r.greedy_gap.has_value());
}

}  // namespace
}  // namespace mira
