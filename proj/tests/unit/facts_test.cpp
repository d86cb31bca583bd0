#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "mira/facts.hpp"
#include "mira/text.hpp"

namespace mira {
namespace {

Sentence sent(const std::string& text, std::size_t index = 0) { return {index, text, tokenize(text)}; }

std::string span_text(const Sentence& s, TokenSpan sp) {
  std::string out;
  for (std::size_t i = sp.begin; i < sp.end; ++i) out += (out.empty() ? "" : " ") + s.tokens[i];
  return out;
}

TEST(HeuristicFacts, PredicateWithArguments) {
  auto s = sent("john gave mary a book .");
  auto facts = heuristic_facts("d", s);
  ASSERT_EQ(facts.size(), 1u);
  EXPECT_EQ(span_text(s, facts[0].predicate), "gave");
  ASSERT_EQ(facts[0].arguments.size(), 2u);
  EXPECT_EQ(span_text(s, facts[0].arguments[0]), "john");
  EXPECT_EQ(span_text(s, facts[0].arguments[1]), "mary a book .");
  EXPECT_EQ(facts[0].flat_text, "john gave mary a book .");
}

TEST(HeuristicFacts, VerblessFallback) {
  auto s = sent("a star-studded funeral .");
  auto facts = heuristic_facts("d", s);
  ASSERT_EQ(facts.size(), 1u);
  EXPECT_TRUE(facts[0].predicate.empty());
  EXPECT_EQ(facts[0].arguments, (std::vector<TokenSpan>{{0, 4}}));
  EXPECT_EQ(facts[0].flat_text, "a star-studded funeral .");
}

TEST(HeuristicFacts, TwoFiniteVerbs) {
  auto s = sent("he ran and she laughed .");
  auto facts = heuristic_facts("d", s);
  ASSERT_EQ(facts.size(), 2u);
  EXPECT_EQ(span_text(s, facts[0].predicate), "ran");
  EXPECT_EQ(span_text(s, facts[1].predicate), "laughed");
  EXPECT_EQ(facts[0].flat_text, "he ran");
  EXPECT_EQ(facts[1].flat_text, "she laughed .");
}

TEST(HeuristicFacts, NegatedVerbGroup) {
  auto s = sent("officials did not say why .");
  auto facts = heuristic_facts("d", s);
  ASSERT_EQ(facts.size(), 1u);
  EXPECT_EQ(span_text(s, facts[0].predicate), "did not say");
}

TEST(HeuristicFacts, DeterminerBlocksParticiple) {
  auto s = sent("the injured were taken away .");
  auto facts = heuristic_facts("d", s);
  ASSERT_EQ(facts.size(), 1u);
  EXPECT_EQ(span_text(s, facts[0].predicate), "were taken");
}

TEST(HeuristicFacts, SpansInsideSentence) {
  for (const char* t : {"Police said the man, who fled, was caught.", "It rained.", "Yes!", "\"Go,\" she said."}) {
    auto s = sent(t, 3);
    for (const auto& f : heuristic_facts("d", s)) {
      EXPECT_NO_THROW(check_fact(f, std::vector<Sentence>{sent("x", 0), sent("x", 1), sent("x", 2), s}));
      EXPECT_FALSE(f.flat_text.empty());
      EXPECT_EQ(f.sentence_index, 3u);
    }
  }
}

TEST(FactJson, RoundTrip) {
  auto s = sent("john gave mary a book .");
  auto f = heuristic_facts("doc", s)[0];
  auto j = fact_to_json(f);
  EXPECT_EQ(j.dump(),
            R"({"doc_id":"doc","sentence_index":0,"predicate":[1,2],"arguments":[[0,1],[2,6]],"flat_text":"john gave mary a book ."})");
  EXPECT_EQ(fact_from_json(j), f);
  EXPECT_THROW(fact_from_json(Json::parse(R"({"doc_id":"d","sentence_index":0,"predicate":[2,1],"arguments":[],"flat_text":"x"})")),
               DataError);
  EXPECT_THROW(fact_from_json(Json::parse(R"({"doc_id":"d","sentence_index":0,"predicate":[0,1],"arguments":[],"flat_text":""})")),
               DataError);
}

TEST(TableFacts, FallbackAndValidation) {
  auto path = std::filesystem::temp_directory_path() / "mira_facts_test.jsonl";
  {
    std::ofstream out(path);
    out << R"({"doc_id":"d","sentence_index":1,"predicate":[1,2],"arguments":[[0,1]],"flat_text":"he ran"})" << "\n";
  }
  auto table = TableFactExtractor::from_file(path.string());
  std::vector<Sentence> sents{sent("no frames here ."), sent("he ran .", 1)};
  auto facts = table.extract("d", sents);
  ASSERT_EQ(facts.size(), 2u);
  EXPECT_EQ(facts[0].flat_text, "no frames here .");
  EXPECT_EQ(facts[1].flat_text, "he ran");
  // A fact pointing past the document's sentences is rejected.
  std::vector<Sentence> one{sent("only one .")};
  EXPECT_THROW(table.extract("d", one), DataError);
  // Unknown documents fall back entirely.
  EXPECT_EQ(table.extract("other", sents).size(), 2u);
}

TEST(TableFacts, SpanOutsideSentenceRejected) {
  TableFactExtractor t;
  Fact f{"d", 0, {0, 9}, {}, "x"};
  t.add(f);
  std::vector<Sentence> sents{sent("short .")};
  EXPECT_THROW(t.extract("d", sents), DataError);
}

}  // namespace
}  // namespace mira
