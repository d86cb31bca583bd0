#pragma once

// Sentence segmentation, tokenization and n-gram sets.
//
// The tokenizer splits on whitespace, detaches surrounding punctuation and
// lowercases (ASCII plus Latin-1 letters). No stemming. The sentence splitter
// is rule based: a run of terminators (. ! ?) plus any closing quotes or
// brackets ends a sentence when it is followed by end of text or by
// whitespace and a character that is not a lowercase letter, unless the word
// before a single '.' is a known abbreviation. Newlines are hard boundaries.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <initializer_list>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "mira/error.hpp"

namespace mira {

struct Sentence {
  std::size_t index = 0;
  std::string text;
  std::vector<std::string> tokens;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

// Lowercased abbreviations (without the final period) that do not end a
// sentence. The shipped list lives in data/abbreviations.txt and is mirrored
// by Abbreviations::defaults().
class Abbreviations {
 public:
  Abbreviations() = default;
  Abbreviations(std::initializer_list<std::string_view> words) {
    for (auto w : words) words_.emplace(w);
  }

  static const Abbreviations& defaults() {
    static const Abbreviations kDefaults{
        "mr",   "mrs",  "ms",   "dr",   "prof", "sen",  "rep", "gov",
        "gen",  "col",  "lt",   "sgt",  "capt", "cmdr", "adm", "st",
        "jr",   "sr",   "inc",  "corp", "co",   "ltd",  "bros", "vs",
        "mt",   "ft",   "rev",  "hon",  "pres", "supt", "jan", "feb",
        "mar",  "apr",  "jun",  "jul",  "aug",  "sep",  "sept", "oct",
        "nov",  "dec",  "u.s",  "u.k",  "u.n",  "e.g",  "i.e"};
    return kDefaults;
  }

  // One abbreviation per line; blank lines and '#' comments ignored.
  static Abbreviations from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open abbreviation list: " + path);
    Abbreviations out;
    std::string line;
    while (std::getline(in, line)) {
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      auto last = line.find_last_not_of(" \t\r");
      std::string word = line.substr(first, last - first + 1);
      if (!word.empty() && word.back() == '.') word.pop_back();
      out.words_.insert(std::move(word));
    }
    return out;
  }

  bool contains(std::string_view lowered) const {
    return words_.count(std::string(lowered)) > 0;
  }

  const std::set<std::string>& words() const { return words_; }

 private:
  std::set<std::string> words_;
};

namespace text_detail {

inline bool is_space(unsigned char c) { return c <= 0x20 || c == 0x7f; }

inline bool is_lower_ascii(unsigned char c) { return c >= 'a' && c <= 'z'; }

inline bool is_alpha_ascii(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

inline std::string lowercase(std::string_view s) {
  std::string out(s);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto c = static_cast<unsigned char>(out[i]);
    if (c >= 'A' && c <= 'Z') {
      out[i] = static_cast<char>(c + 32);
    } else if (c == 0xC3 && i + 1 < out.size()) {
      // U+00C0..U+00DE except U+00D7 (multiplication sign).
      auto d = static_cast<unsigned char>(out[i + 1]);
      if (d >= 0x80 && d <= 0x9E && d != 0x97) out[i + 1] = static_cast<char>(d + 0x20);
      ++i;
    }
  }
  return out;
}

// Punctuation that detaches from the front / back of a word. Multi-byte
// entries are UTF-8 curly quotes.
inline constexpr std::string_view kLeading[] = {"\"", "'", "(", "[", "{", "`", "\xE2\x80\x9C", "\xE2\x80\x98"};
inline constexpr std::string_view kTrailing[] = {",", ";", ":", "!", "?", ")", "]", "}", "\"", "'",
                                                 "\xE2\x80\x9D", "\xE2\x80\x99"};
inline constexpr std::string_view kClosers[] = {"\"", "'", ")", "]", "}", "\xE2\x80\x9D", "\xE2\x80\x99"};
// Dashes split words apart wherever they occur.
inline constexpr std::string_view kDashes[] = {"\xE2\x80\x94", "\xE2\x80\x93"};

template <std::size_t N>
inline std::size_t match_prefix(std::string_view s, const std::string_view (&set)[N]) {
  for (auto p : set)
    if (s.starts_with(p)) return p.size();
  return 0;
}

template <std::size_t N>
inline std::size_t match_suffix(std::string_view s, const std::string_view (&set)[N]) {
  for (auto p : set)
    if (s.ends_with(p)) return p.size();
  return 0;
}

inline bool has_alpha(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return is_alpha_ascii(static_cast<unsigned char>(c)); });
}

inline void tokenize_word(std::string_view word, const Abbreviations& abbrev, std::vector<std::string>& out) {
  while (!word.empty()) {
    auto n = match_prefix(word, kLeading);
    if (n == 0) break;
    out.emplace_back(word.substr(0, n));
    word.remove_prefix(n);
  }
  std::vector<std::string> tail;
  while (!word.empty()) {
    if (word.back() == '.') {
      std::size_t run = 0;
      while (run < word.size() && word[word.size() - 1 - run] == '.') ++run;
      if (run >= 2) {
        tail.emplace_back(word.substr(word.size() - run));
        word.remove_suffix(run);
        continue;
      }
      auto stem = word.substr(0, word.size() - 1);
      bool keep = (stem.find('.') != std::string_view::npos && has_alpha(stem)) || abbrev.contains(stem) ||
                  (stem.size() == 1 && is_alpha_ascii(static_cast<unsigned char>(stem[0])));
      if (keep) break;
      tail.emplace_back(".");
      word.remove_suffix(1);
      continue;
    }
    auto n = match_suffix(word, kTrailing);
    if (n == 0) break;
    tail.emplace_back(word.substr(word.size() - n));
    word.remove_suffix(n);
  }
  if (!word.empty()) out.emplace_back(word);
  out.insert(out.end(), tail.rbegin(), tail.rend());
}

}  // namespace text_detail

inline std::vector<std::string> tokenize(std::string_view sentence_text,
                                         const Abbreviations& abbrev = Abbreviations::defaults()) {
  using namespace text_detail;
  std::string lowered = lowercase(sentence_text);
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const std::size_t n = lowered.size();
  while (i < n) {
    while (i < n && is_space(static_cast<unsigned char>(lowered[i]))) ++i;
    std::size_t start = i;
    while (i < n && !is_space(static_cast<unsigned char>(lowered[i]))) ++i;
    std::string_view chunk(lowered.data() + start, i - start);
    // Split the chunk on dashes, emitting each dash as its own token.
    std::size_t piece = 0;
    for (std::size_t j = 0; j < chunk.size();) {
      auto d = match_prefix(chunk.substr(j), kDashes);
      if (d == 0) {
        ++j;
        continue;
      }
      if (j > piece) tokenize_word(chunk.substr(piece, j - piece), abbrev, tokens);
      tokens.emplace_back(chunk.substr(j, d));
      j += d;
      piece = j;
    }
    if (piece < chunk.size()) tokenize_word(chunk.substr(piece), abbrev, tokens);
  }
  return tokens;
}

inline std::vector<Sentence> sentence_split(std::string_view text,
                                            const Abbreviations& abbrev = Abbreviations::defaults()) {
  using namespace text_detail;
  std::vector<Sentence> out;
  auto emit = [&](std::size_t from, std::size_t to) {
    while (from < to && is_space(static_cast<unsigned char>(text[from]))) ++from;
    while (to > from && is_space(static_cast<unsigned char>(text[to - 1]))) --to;
    if (from == to) return;
    Sentence s;
    s.text = std::string(text.substr(from, to - from));
    s.tokens = tokenize(s.text, abbrev);
    if (s.tokens.empty()) return;
    s.index = out.size();
    out.push_back(std::move(s));
  };

  auto word_before = [&](std::size_t dot) {
    std::size_t b = dot;
    while (b > 0 && !is_space(static_cast<unsigned char>(text[b - 1]))) --b;
    std::string_view w = text.substr(b, dot - b);
    while (!w.empty()) {
      auto k = match_prefix(w, kLeading);
      if (k == 0) break;
      w.remove_prefix(k);
    }
    return lowercase(w);
  };

  std::size_t start = 0;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (c == '\n') {
      emit(start, i);
      start = ++i;
      continue;
    }
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    std::size_t term_begin = i;
    while (i < n && (text[i] == '.' || text[i] == '!' || text[i] == '?')) ++i;
    for (std::size_t k; (k = match_prefix(text.substr(i), kClosers)) != 0;) i += k;
    std::size_t end = i;
    if (end < n && !is_space(static_cast<unsigned char>(text[end]))) continue;
    std::size_t next = end;
    while (next < n && text[next] != '\n' && is_space(static_cast<unsigned char>(text[next]))) ++next;
    if (next < n && is_lower_ascii(static_cast<unsigned char>(text[next]))) continue;
    if (end - term_begin >= 1 && text[term_begin] == '.' &&
        (term_begin + 1 == n || text[term_begin + 1] != '.') && abbrev.contains(word_before(term_begin)))
      continue;
    emit(start, end);
    start = end;
  }
  emit(start, n);
  return out;
}

// Set of DISTINCT n-grams of a fixed order. Keys use a length-prefixed
// encoding, so arbitrary token content cannot collide.
class NGramSet {
 public:
  explicit NGramSet(std::size_t order = 1) : order_(order) {}

  std::size_t order() const { return order_; }
  std::size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }

  void insert(std::span<const std::string> gram) { keys_.insert(encode(gram)); }

  void merge(const NGramSet& other) { keys_.insert(other.keys_.begin(), other.keys_.end()); }

  bool contains(std::span<const std::string> gram) const { return keys_.count(encode(gram)) > 0; }

  // Number of elements of *this that are also in other.
  std::size_t count_shared(const NGramSet& other) const {
    const auto& small = keys_.size() <= other.keys_.size() ? keys_ : other.keys_;
    const auto& large = keys_.size() <= other.keys_.size() ? other.keys_ : keys_;
    std::size_t shared = 0;
    for (const auto& k : small) shared += large.count(k);
    return shared;
  }

  // Elements of *this in `in` but not in `out`.
  std::size_t count_shared_excluding(const NGramSet& in, const NGramSet& out) const {
    std::size_t shared = 0;
    for (const auto& k : keys_)
      if (in.keys_.count(k) && !out.keys_.count(k)) ++shared;
    return shared;
  }

  // Decoded n-grams in sorted order.
  std::vector<std::vector<std::string>> to_tuples() const {
    std::vector<std::vector<std::string>> out;
    out.reserve(keys_.size());
    for (const auto& k : keys_) out.push_back(decode(k));
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const NGramSet& a, const NGramSet& b) {
    return a.order_ == b.order_ && a.keys_ == b.keys_;
  }

 private:
  static std::string encode(std::span<const std::string> gram) {
    std::string key;
    for (const auto& t : gram) {
      key += std::to_string(t.size());
      key += ':';
      key += t;
    }
    return key;
  }

  static std::vector<std::string> decode(const std::string& key) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < key.size()) {
      auto colon = key.find(':', pos);
      auto len = std::stoul(key.substr(pos, colon - pos));
      out.push_back(key.substr(colon + 1, len));
      pos = colon + 1 + len;
    }
    return out;
  }

  std::size_t order_;
  std::unordered_set<std::string> keys_;
};

inline void add_ngrams(NGramSet& set, std::span<const std::string> tokens) {
  const std::size_t n = set.order();
  if (n == 0 || tokens.size() < n) return;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) set.insert(tokens.subspan(i, n));
}

inline NGramSet ngram_set(std::span<const std::string> tokens, std::size_t n) {
  if (n < 1) throw ValidationError("n-gram order must be >= 1");
  NGramSet set(n);
  add_ngrams(set, tokens);
  return set;
}

// N-grams never span sentence boundaries.
inline NGramSet ngram_set(std::span<const Sentence> sentences, std::size_t n) {
  if (n < 1) throw ValidationError("n-gram order must be >= 1");
  NGramSet set(n);
  for (const auto& s : sentences) add_ngrams(set, s.tokens);
  return set;
}

}  // namespace mira
