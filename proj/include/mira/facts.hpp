#pragma once

// Predicate-argument facts.
//
// The built-in heuristic extractor finds verb groups (maximal runs of verb
// tokens, e.g. "was killed") using a closed lexicon of finite and auxiliary
// forms plus a regular past-tense rule. Each verb group yields one fact whose
// left argument runs back to the previous verb group or clause boundary and
// whose right argument runs forward to the next one. Clause boundaries are
// commas, semicolons, colons, brackets, quotes and a small set of
// conjunctions and relativizers. A sentence without a verb yields one
// whole-sentence fact with an empty predicate span.
//
// Facts interchange JSONL, one fact per line, spans are half-open token
// offsets into the sentence:
//   {"doc_id","sentence_index","predicate":[s,e],"arguments":[[s,e],...],"flat_text"}

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "mira/corpus.hpp"
#include "mira/error.hpp"
#include "mira/jsonl.hpp"

namespace mira {

struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive

  bool empty() const { return begin == end; }
  friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

struct Fact {
  std::string source_doc_id;
  std::size_t sentence_index = 0;
  TokenSpan predicate;
  std::vector<TokenSpan> arguments;
  std::string flat_text;

  friend bool operator==(const Fact&, const Fact&) = default;
};

inline std::string summary_doc_id(std::string_view example_id) { return std::string(example_id) + "#summary"; }

namespace facts_detail {

inline const std::unordered_set<std::string_view>& verb_lexicon() {
  static const std::unordered_set<std::string_view> kVerbs = {
      // be / have / do and modals
      "is", "are", "was", "were", "am", "be", "been", "being", "'s", "'re", "'m", "has", "have", "had", "'ve",
      "does", "do", "did", "will", "would", "can", "could", "shall", "should", "may", "might", "must", "'ll",
      "'d", "won't", "can't", "don't", "doesn't", "didn't", "isn't", "aren't", "wasn't", "weren't", "hasn't",
      "haven't", "hadn't", "wouldn't", "couldn't", "shouldn't",
      // frequent irregular and reporting forms
      "said", "says", "say", "told", "tells", "gave", "gives", "give", "given", "ran", "runs", "went", "goes",
      "gone", "came", "comes", "took", "takes", "taken", "made", "makes", "got", "gets", "saw", "sees", "seen",
      "found", "finds", "left", "leaves", "knew", "knows", "known", "thought", "thinks", "brought", "brings",
      "began", "begins", "begun", "kept", "keeps", "held", "holds", "wrote", "writes", "written", "stood",
      "stands", "heard", "hears", "let", "lets", "meant", "means", "met", "meets", "paid", "pays", "sat", "sits",
      "spoke", "speaks", "spoken", "lost", "loses", "fell", "falls", "fallen", "sent", "sends", "built",
      "builds", "won", "wins", "fled", "flees", "hit", "hits", "led", "leads", "rose", "rises", "risen",
      "sold", "sells", "bought", "buys", "caught", "catches", "drove", "drives", "driven", "grew", "grows",
      "grown", "shot", "shoots", "struck", "strikes", "became", "becomes", "become", "felt", "feels", "put",
      "puts", "set", "sets", "hid", "hides", "hidden", "ate", "eats", "eaten", "drank", "drinks", "broke",
      "breaks", "broken", "chose", "chooses", "chosen", "flew", "flies", "flown", "threw", "throws", "thrown",
      "wore", "wears", "worn", "sank", "sinks", "sunk", "woke", "wakes", "announced", "claims", "warns",
      "wants", "needs", "seems", "appears", "remains", "includes", "shows", "plans", "calls", "hopes"};
  return kVerbs;
}

inline bool is_determiner(std::string_view t) {
  static constexpr std::array<std::string_view, 21> kDet = {
      "a", "an", "the", "this", "that", "these", "those", "his", "her", "its", "their",
      "our", "my", "your", "some", "many", "several", "every", "each", "no", "most"};
  return std::find(kDet.begin(), kDet.end(), t) != kDet.end();
}

inline bool is_boundary(std::string_view t) {
  static const std::unordered_set<std::string_view> kBoundary = {
      ",", ";", ":", "(", ")", "[", "]", "\"", "'", "\xE2\x80\x9C", "\xE2\x80\x9D", "\xE2\x80\x98",
      "\xE2\x80\x99", "\xE2\x80\x94", "\xE2\x80\x93", "--", "and", "but", "or", "while", "because", "although",
      "though", "when", "after", "before", "since", "if", "that", "which", "who", "whom", "whose", "where",
      "so"};
  return kBoundary.count(t) > 0;
}

inline bool regular_past(std::string_view t) {
  static const std::unordered_set<std::string_view> kNotVerbs = {"hundred", "speed", "seed", "breed",
                                                                 "creed",   "greed", "indeed", "embed"};
  if (t.size() < 5 || !t.ends_with("ed") || kNotVerbs.count(t)) return false;
  return std::all_of(t.begin(), t.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

inline std::vector<bool> verb_mask(std::span<const std::string> tokens) {
  std::vector<bool> mask(tokens.size(), false);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    if (verb_lexicon().count(t)) {
      mask[i] = true;
    } else if (regular_past(t)) {
      mask[i] = i == 0 || !is_determiner(tokens[i - 1]);
    }
  }
  // "not" / "never" between two verbs joins the group ("did not say").
  for (std::size_t i = 1; i + 1 < tokens.size(); ++i)
    if ((tokens[i] == "not" || tokens[i] == "never" || tokens[i] == "n't") && mask[i - 1] && mask[i + 1])
      mask[i] = true;
  return mask;
}

inline std::string render(std::span<const std::string> tokens, std::initializer_list<TokenSpan> spans) {
  std::string out;
  for (const auto& sp : spans)
    for (std::size_t i = sp.begin; i < sp.end; ++i) {
      if (!out.empty()) out += ' ';
      out += tokens[i];
    }
  return out;
}

}  // namespace facts_detail

inline Fact whole_sentence_fact(std::string_view doc_id, const Sentence& s) {
  Fact f;
  f.source_doc_id = std::string(doc_id);
  f.sentence_index = s.index;
  f.predicate = {0, 0};
  f.arguments = {{0, s.tokens.size()}};
  f.flat_text = facts_detail::render(s.tokens, {{0, s.tokens.size()}});
  return f;
}

inline std::vector<Fact> heuristic_facts(std::string_view doc_id, const Sentence& s) {
  using namespace facts_detail;
  const auto& tok = s.tokens;
  const auto mask = verb_mask(tok);
  std::vector<TokenSpan> groups;
  for (std::size_t i = 0; i < tok.size();) {
    if (!mask[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < tok.size() && mask[j]) ++j;
    groups.push_back({i, j});
    i = j;
  }
  if (groups.empty()) {
    if (tok.empty()) return {};
    return {whole_sentence_fact(doc_id, s)};
  }
  std::vector<Fact> out;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto pred = groups[g];
    std::size_t left = g ? groups[g - 1].end : 0;
    for (std::size_t i = pred.begin; i > left; --i)
      if (is_boundary(tok[i - 1])) {
        left = i;
        break;
      }
    std::size_t right = g + 1 < groups.size() ? groups[g + 1].begin : tok.size();
    for (std::size_t i = pred.end; i < right; ++i)
      if (is_boundary(tok[i])) {
        right = i;
        break;
      }
    Fact f;
    f.source_doc_id = std::string(doc_id);
    f.sentence_index = s.index;
    f.predicate = pred;
    const TokenSpan l{left, pred.begin}, r{pred.end, right};
    if (!l.empty()) f.arguments.push_back(l);
    if (!r.empty()) f.arguments.push_back(r);
    f.flat_text = render(tok, {l, pred, r});
    out.push_back(std::move(f));
  }
  return out;
}

// Source of facts for a document's sentences.
class FactExtractor {
 public:
  virtual ~FactExtractor() = default;
  virtual std::vector<Fact> extract(std::string_view doc_id, std::span<const Sentence> sentences) const = 0;
  virtual std::string id() const = 0;
};

class HeuristicFactExtractor final : public FactExtractor {
 public:
  std::vector<Fact> extract(std::string_view doc_id, std::span<const Sentence> sentences) const override {
    std::vector<Fact> out;
    for (const auto& s : sentences) {
      auto f = heuristic_facts(doc_id, s);
      out.insert(out.end(), std::make_move_iterator(f.begin()), std::make_move_iterator(f.end()));
    }
    return out;
  }
  std::string id() const override { return "heuristic"; }
};

inline Json fact_to_json(const Fact& f) {
  Json args = Json::array();
  for (const auto& a : f.arguments) args.push_back({a.begin, a.end});
  return Json{{"doc_id", f.source_doc_id},
              {"sentence_index", f.sentence_index},
              {"predicate", {f.predicate.begin, f.predicate.end}},
              {"arguments", std::move(args)},
              {"flat_text", f.flat_text}};
}

inline TokenSpan span_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw DataError("span must be a [start,end] pair");
  TokenSpan s{j[0].get<std::size_t>(), j[1].get<std::size_t>()};
  if (s.end < s.begin) throw DataError("span end precedes start");
  return s;
}

inline Fact fact_from_json(const Json& j) {
  Fact f;
  f.source_doc_id = j.at("doc_id").get<std::string>();
  f.sentence_index = j.at("sentence_index").get<std::size_t>();
  f.predicate = span_from_json(j.at("predicate"));
  for (const auto& a : j.at("arguments")) f.arguments.push_back(span_from_json(a));
  f.flat_text = j.at("flat_text").get<std::string>();
  if (f.flat_text.empty()) throw DataError("fact with empty flat_text");
  return f;
}

// Checks an externally supplied fact against the sentence list of its document.
inline void check_fact(const Fact& f, std::span<const Sentence> sentences) {
  if (f.sentence_index >= sentences.size())
    throw DataError("fact for " + f.source_doc_id + " references unknown sentence index " +
                    std::to_string(f.sentence_index) + " (document has " + std::to_string(sentences.size()) +
                    " sentences)");
  const auto n = sentences[f.sentence_index].tokens.size();
  auto inside = [n](const TokenSpan& s) { return s.end <= n; };
  if (!inside(f.predicate) || !std::all_of(f.arguments.begin(), f.arguments.end(), inside))
    throw DataError("fact for " + f.source_doc_id + " sentence " + std::to_string(f.sentence_index) +
                    " has a span outside the sentence");
}

// Facts read from an interchange file. Sentences without any listed fact get
// the whole-sentence fallback.
class TableFactExtractor final : public FactExtractor {
 public:
  TableFactExtractor() = default;

  static TableFactExtractor from_file(const std::string& path) {
    TableFactExtractor t;
    for_each_jsonl(path, [&](const Json& j, std::size_t line_no) {
      try {
        t.add(fact_from_json(j));
      } catch (const DataError& e) {
        throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
      } catch (const Json::exception& e) {
        throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
      }
    });
    t.id_ = "file:" + path;
    return t;
  }

  void add(Fact f) { table_[f.source_doc_id][f.sentence_index].push_back(std::move(f)); }

  std::vector<Fact> extract(std::string_view doc_id, std::span<const Sentence> sentences) const override {
    std::vector<Fact> out;
    auto doc = table_.find(std::string(doc_id));
    if (doc != table_.end())
      for (const auto& [idx, facts] : doc->second)
        for (const auto& f : facts) check_fact(f, sentences);
    for (const auto& s : sentences) {
      const std::vector<Fact>* listed = nullptr;
      if (doc != table_.end())
        if (auto it = doc->second.find(s.index); it != doc->second.end()) listed = &it->second;
      if (listed) {
        out.insert(out.end(), listed->begin(), listed->end());
      } else if (!s.tokens.empty()) {
        out.push_back(whole_sentence_fact(doc_id, s));
      }
    }
    return out;
  }

  std::string id() const override { return id_; }

 private:
  std::map<std::string, std::map<std::size_t, std::vector<Fact>>> table_;
  std::string id_ = "table";
};

}  // namespace mira
