#pragma once

// N-gram novelty, coverage and support-from-assisting. All three use sets of
// distinct n-grams; n-grams never cross sentence boundaries.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mira/corpus.hpp"
#include "mira/error.hpp"
#include "mira/text.hpp"

namespace mira {

// Which documents form the source pool: main only, assisting only, or both.
enum class SourceConfig { kD, kA, kDA };

inline std::string_view to_string(SourceConfig c) {
  switch (c) {
    case SourceConfig::kD: return "s-d";
    case SourceConfig::kA: return "s-a";
    case SourceConfig::kDA: return "s-da";
  }
  return "s-d";
}

inline SourceConfig parse_source_config(std::string_view s) {
  if (s == "s-d") return SourceConfig::kD;
  if (s == "s-a") return SourceConfig::kA;
  if (s == "s-da") return SourceConfig::kDA;
  throw ValidationError("unknown source config '" + std::string(s) + "' (expected s-d, s-a or s-da)");
}

inline std::vector<const Document*> source_documents(const Example& ex, SourceConfig config) {
  std::vector<const Document*> docs;
  if (config != SourceConfig::kA) docs.push_back(&ex.main);
  if (config != SourceConfig::kD)
    for (const auto& a : ex.assisting) docs.push_back(&a);
  return docs;
}

inline NGramSet pool_ngrams(std::span<const Document* const> docs, std::size_t n) {
  NGramSet pool(n);
  for (const auto* d : docs) pool.merge(ngram_set(std::span<const Sentence>(d->sentences), n));
  return pool;
}

// A percentage plus a flag for summaries with no n-gram of the requested
// order (the value is then 0 for novelty and support, 100 for coverage).
struct Percentage {
  double value = 0;
  bool degenerate = false;
};

inline Percentage ngram_novelty(std::span<const Sentence> summary, const NGramSet& pool) {
  auto grams = ngram_set(summary, pool.order());
  if (grams.empty()) return {0.0, true};
  const auto novel = grams.size() - grams.count_shared(pool);
  return {100.0 * static_cast<double>(novel) / static_cast<double>(grams.size()), false};
}

inline Percentage ngram_novelty(const Example& ex, SourceConfig config, std::size_t n) {
  auto docs = source_documents(ex, config);
  return ngram_novelty(ex.summary.sentences, pool_ngrams(docs, n));
}

// Exactly 100 - novelty.
inline Percentage ngram_coverage(std::span<const Sentence> summary, const NGramSet& pool) {
  auto nov = ngram_novelty(summary, pool);
  return {100.0 - nov.value, nov.degenerate};
}

inline Percentage ngram_coverage(const Example& ex, SourceConfig config, std::size_t n) {
  auto nov = ngram_novelty(ex, config, n);
  return {100.0 - nov.value, nov.degenerate};
}

// Share of summary n-grams that occur in some assisting document but not in
// the main document.
inline Percentage support_from_assisting(std::span<const Sentence> summary, const Document& main,
                                         std::span<const Document> assisting, std::size_t n) {
  auto grams = ngram_set(summary, n);
  if (grams.empty()) return {0.0, true};
  auto main_set = ngram_set(std::span<const Sentence>(main.sentences), n);
  NGramSet assist(n);
  for (const auto& a : assisting) assist.merge(ngram_set(std::span<const Sentence>(a.sentences), n));
  const auto only_assisting = grams.count_shared_excluding(assist, main_set);
  return {100.0 * static_cast<double>(only_assisting) / static_cast<double>(grams.size()), false};
}

inline Percentage support_from_assisting(const Example& ex, std::size_t n) {
  return support_from_assisting(ex.summary.sentences, ex.main, ex.assisting, n);
}

}  // namespace mira
