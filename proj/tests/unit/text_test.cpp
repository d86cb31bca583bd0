#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "mira/text.hpp"
#include "mira/util.hpp"
#include "support/synth.hpp"
#include "unit/test_paths.hpp"

namespace mira {
namespace {

std::vector<std::string> toks(std::initializer_list<const char*> xs) { return {xs.begin(), xs.end()}; }

TEST(Tokenize, LowercasesAndSplitsPunctuation) {
  EXPECT_EQ(tokenize("The cat sat."), toks({"the", "cat", "sat", "."}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize("   \t ").empty());
}

TEST(Tokenize, HandFixture) {
  std::ifstream in(fixture("tokens.tsv"));
  ASSERT_TRUE(in);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    auto cols = split_string(line, '\t');
    ASSERT_EQ(cols.size(), 2u) << line;
    EXPECT_EQ(join(tokenize(cols[0]), " "), cols[1]) << "input: " << cols[0];
    ++rows;
  }
  EXPECT_EQ(rows, 13);
}

TEST(Tokenize, TokensAreLowercaseRoundTrip) {
  for (const char* s : {"ÀÉÎ Straße NYC", "MIXED Case TEXT!", "Hello—World"})
    for (const auto& t : tokenize(s)) EXPECT_EQ(text_detail::lowercase(t), t);
}

TEST(SentenceSplit, Basic) {
  auto s = sentence_split("A. B. C.");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].text, "A.");
  EXPECT_EQ(s[1].text, "B.");
  EXPECT_EQ(s[2].text, "C.");
  EXPECT_TRUE(sentence_split("").empty());
  auto m = sentence_split("Mr. Smith left. He ran.");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].text, "Mr. Smith left.");
}

TEST(SentenceSplit, HandFixture) {
  auto input = read_file(fixture("sentences_input.txt"));
  std::ifstream in(fixture("sentences_expected.txt"));
  std::vector<std::string> expected;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) expected.push_back(line);
  ASSERT_EQ(expected.size(), 20u);
  auto got = sentence_split(input);
  ASSERT_EQ(got.size(), expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(got[i].text, expected[i]);
    EXPECT_EQ(got[i].index, i);
    EXPECT_FALSE(got[i].tokens.empty());
  }
}

TEST(SentenceSplit, ConcatenationReproducesText) {
  auto input = read_file(fixture("sentences_input.txt"));
  std::string joined, squeezed;
  for (const auto& s : sentence_split(input)) joined += s.text;
  for (char c : input)
    if (!std::isspace(static_cast<unsigned char>(c))) squeezed += c;
  std::string joined_squeezed;
  for (char c : joined)
    if (!std::isspace(static_cast<unsigned char>(c))) joined_squeezed += c;
  EXPECT_EQ(joined_squeezed, squeezed);
}

TEST(SentenceSplit, Deterministic) {
  auto input = read_file(fixture("sentences_input.txt"));
  auto a = sentence_split(input);
  auto b = sentence_split(input);
  EXPECT_EQ(a, b);
}

TEST(Abbreviations, DataFileMatchesDefaults) {
  auto file = Abbreviations::from_file(std::string(MIRA_DATA_DIR) + "/abbreviations.txt");
  EXPECT_EQ(file.words(), Abbreviations::defaults().words());
}

TEST(Abbreviations, CustomListChangesSplitting) {
  Abbreviations none;
  auto s = sentence_split("Mr. Smith left.", none);
  EXPECT_EQ(s.size(), 2u);
}

TEST(NGramSet, DistinctTypes) {
  auto s = ngram_set(toks({"a", "b", "a", "b"}), 2);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.to_tuples(), (std::vector<std::vector<std::string>>{{"a", "b"}, {"b", "a"}}));
  EXPECT_TRUE(ngram_set(toks({"a"}), 2).empty());
  EXPECT_EQ(ngram_set(toks({"a", "b", "c"}), 1).size(), 3u);
  EXPECT_THROW(ngram_set(toks({"a"}), 0), ValidationError);
}

TEST(NGramSet, TokensContainingSeparatorsStayDistinct) {
  // Keys must not collide when tokens contain spaces or control bytes.
  NGramSet s(2);
  s.insert(toks({"a b", "c"}));
  s.insert(toks({"a", "b c"}));
  EXPECT_EQ(s.size(), 2u);
}

TEST(NGramSet, DoesNotCrossSentences) {
  auto sents = sentence_split("Alpha beta. Gamma delta.");
  auto s = ngram_set(std::span<const Sentence>(sents), 2);
  EXPECT_FALSE(s.contains(toks({".", "gamma"})));
  EXPECT_TRUE(s.contains(toks({"gamma", "delta"})));
}

TEST(NGramSet, DistinctnessBoundAndIdempotence) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> t;
    const auto len = testing::uniform(rng, 0, 15);
    for (std::size_t i = 0; i < len; ++i) t.push_back(testing::word(testing::uniform(rng, 0, 4)));
    const auto unigrams = ngram_set(t, 1).size();
    for (std::size_t n = 1; n <= 4; ++n) {
      auto a = ngram_set(t, n);
      EXPECT_LE(a.size(), len >= n ? len - n + 1 : 0);
      EXPECT_LE(static_cast<double>(a.size()), std::pow(static_cast<double>(unigrams), static_cast<double>(n)));
      EXPECT_EQ(a, ngram_set(t, n));
    }
  }
}

}  // namespace
}  // namespace mira
