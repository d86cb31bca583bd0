#pragma once

#include <array>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mira/error.hpp"
#include "mira/text.hpp"

namespace mira {

enum class DocumentRole { kMain, kAssisting };

enum class Split { kTrain = 0, kValid = 1, kTest = 2 };

inline constexpr std::array<Split, 3> kAllSplits = {Split::kTrain, Split::kValid, Split::kTest};

inline std::string_view to_string(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kValid: return "valid";
    case Split::kTest: return "test";
  }
  return "train";
}

inline Split parse_split(std::string_view s) {
  if (s == "train") return Split::kTrain;
  if (s == "valid") return Split::kValid;
  if (s == "test") return Split::kTest;
  throw DataError("unknown split '" + std::string(s) + "'");
}

struct Document {
  std::string doc_id;
  std::string source_url;
  std::string text;  // raw text as stored; sentences are derived from it
  std::vector<Sentence> sentences;
  DocumentRole role = DocumentRole::kMain;

  std::size_t word_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.tokens.size();
    return n;
  }

  friend bool operator==(const Document&, const Document&) = default;
};

struct Summary {
  std::string text;
  std::vector<Sentence> sentences;

  std::size_t word_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.tokens.size();
    return n;
  }

  friend bool operator==(const Summary&, const Summary&) = default;
};

inline Document make_document(std::string doc_id, std::string url, std::string text,
                              DocumentRole role = DocumentRole::kMain) {
  Document d;
  d.doc_id = std::move(doc_id);
  d.source_url = std::move(url);
  d.sentences = sentence_split(text);
  d.text = std::move(text);
  d.role = role;
  return d;
}

inline Summary make_summary(std::string text) {
  if (text.empty()) throw DataError("summary text is empty");
  Summary s;
  s.sentences = sentence_split(text);
  s.text = std::move(text);
  return s;
}

inline constexpr std::size_t kMaxAssisting = 4;

struct Example {
  std::string id;
  Document main;
  Summary summary;
  std::vector<Document> assisting;
  Split split = Split::kTrain;

  friend bool operator==(const Example&, const Example&) = default;
};

// Throws DataError when an example breaks the dataset invariants.
inline void validate(const Example& ex) {
  if (ex.assisting.empty() || ex.assisting.size() > kMaxAssisting)
    throw DataError("example " + ex.id + ": expected 1.." + std::to_string(kMaxAssisting) +
                    " assisting documents, got " + std::to_string(ex.assisting.size()));
  for (const auto& a : ex.assisting)
    if (a.doc_id == ex.main.doc_id)
      throw DataError("example " + ex.id + ": main document " + ex.main.doc_id + " listed as assisting");
  if (ex.summary.text.empty()) throw DataError("example " + ex.id + ": empty summary");
}

struct CorpusStats {
  std::array<std::size_t, 3> example_counts{};  // indexed by Split
  double avg_doc_words = 0;
  double avg_doc_sents = 0;
  double avg_summ_words = 0;
  double avg_summ_sents = 0;
  std::size_t vocab_size_document = 0;
  std::size_t vocab_size_summary = 0;
};

// Averages are over examples (main document and summary of each); the
// document vocabulary pools main and assisting documents.
inline CorpusStats corpus_stats(const std::vector<Example>& examples) {
  if (examples.empty()) throw DataError("empty corpus");
  CorpusStats st;
  std::set<std::string> doc_vocab, summ_vocab;
  double doc_words = 0, doc_sents = 0, summ_words = 0, summ_sents = 0;
  auto add_vocab = [](std::set<std::string>& vocab, const std::vector<Sentence>& sents) {
    for (const auto& s : sents) vocab.insert(s.tokens.begin(), s.tokens.end());
  };
  for (const auto& ex : examples) {
    ++st.example_counts[static_cast<std::size_t>(ex.split)];
    doc_words += static_cast<double>(ex.main.word_count());
    doc_sents += static_cast<double>(ex.main.sentences.size());
    summ_words += static_cast<double>(ex.summary.word_count());
    summ_sents += static_cast<double>(ex.summary.sentences.size());
    add_vocab(doc_vocab, ex.main.sentences);
    for (const auto& a : ex.assisting) add_vocab(doc_vocab, a.sentences);
    add_vocab(summ_vocab, ex.summary.sentences);
  }
  const auto n = static_cast<double>(examples.size());
  st.avg_doc_words = doc_words / n;
  st.avg_doc_sents = doc_sents / n;
  st.avg_summ_words = summ_words / n;
  st.avg_summ_sents = summ_sents / n;
  st.vocab_size_document = doc_vocab.size();
  st.vocab_size_summary = summ_vocab.size();
  return st;
}

}  // namespace mira
