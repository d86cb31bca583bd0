#pragma once

// Model-input assembly under a token capacity.
//
//   S  main document truncated to capacity.
//   C  main truncated to floor(capacity/2); the remaining budget is split
//      evenly (floor) across the assisting documents, appended in order.
//   P  main truncated to floor(capacity/2), then the selected sentences in
//   G  selection order until the capacity is reached.
//
// Truncation happens at token boundaries. Every output token is covered by
// exactly one provenance span.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mira/corpus.hpp"
#include "mira/error.hpp"
#include "mira/jsonl.hpp"
#include "mira/selection.hpp"

namespace mira {

enum class AssemblyMode { kS, kC, kP, kG };

inline std::string_view to_string(AssemblyMode m) {
  switch (m) {
    case AssemblyMode::kS: return "s";
    case AssemblyMode::kC: return "c";
    case AssemblyMode::kP: return "p";
    case AssemblyMode::kG: return "g";
  }
  return "s";
}

inline AssemblyMode parse_assembly_mode(std::string_view s) {
  if (s == "s" || s == "S") return AssemblyMode::kS;
  if (s == "c" || s == "C") return AssemblyMode::kC;
  if (s == "p" || s == "P") return AssemblyMode::kP;
  if (s == "g" || s == "G") return AssemblyMode::kG;
  throw ValidationError("unknown assembly mode '" + std::string(s) + "' (expected s, c, p or g)");
}

struct ProvenanceSpan {
  std::size_t from = 0;
  std::size_t to = 0;  // exclusive
  std::string doc_id;
  std::size_t sentence_index = 0;

  friend bool operator==(const ProvenanceSpan&, const ProvenanceSpan&) = default;
};

struct AssembledInput {
  std::string id;
  AssemblyMode mode = AssemblyMode::kS;
  std::size_t capacity = 0;
  std::vector<std::string> tokens;
  std::vector<ProvenanceSpan> provenance;
};

namespace assemble_detail {

// Appends up to `budget` tokens of the sentence; returns tokens appended.
inline std::size_t append_sentence(AssembledInput& out, const std::string& doc_id, const Sentence& s,
                                   std::size_t budget) {
  const auto take = std::min(budget, s.tokens.size());
  if (take == 0) return 0;
  const auto from = out.tokens.size();
  out.tokens.insert(out.tokens.end(), s.tokens.begin(), s.tokens.begin() + static_cast<std::ptrdiff_t>(take));
  out.provenance.push_back({from, out.tokens.size(), doc_id, s.index});
  return take;
}

// Appends a document prefix of at most `budget` tokens. Returns the number of
// tokens appended and how many sentences were included in full.
inline std::pair<std::size_t, std::size_t> append_prefix(AssembledInput& out, const Document& d, std::size_t budget) {
  std::size_t used = 0, full = 0;
  for (const auto& s : d.sentences) {
    if (used == budget) break;
    const auto n = append_sentence(out, d.doc_id, s, budget - used);
    used += n;
    if (n == s.tokens.size()) ++full;
  }
  return {used, full};
}

}  // namespace assemble_detail

inline AssembledInput assemble_input(const Example& ex, AssemblyMode mode, std::size_t capacity,
                                     const SelectionResult* selection = nullptr) {
  using namespace assemble_detail;
  if (capacity < 2) throw ValidationError("capacity must be >= 2");
  if ((mode == AssemblyMode::kP || mode == AssemblyMode::kG) && !selection)
    throw ValidationError("assembly mode " + std::string(to_string(mode)) + " requires a selection");
  AssembledInput out;
  out.id = ex.id;
  out.mode = mode;
  out.capacity = capacity;

  if (mode == AssemblyMode::kS) {
    append_prefix(out, ex.main, capacity);
    return out;
  }

  const auto [used_main, full_main] = append_prefix(out, ex.main, capacity / 2);
  const std::size_t remaining = capacity - used_main;

  if (mode == AssemblyMode::kC) {
    if (ex.assisting.empty()) return out;
    const std::size_t per_doc = remaining / ex.assisting.size();
    for (const auto& a : ex.assisting) append_prefix(out, a, per_doc);
    return out;
  }

  // Main sentences already present in full are not appended twice.
  std::size_t budget = remaining;
  std::set<std::pair<std::string, std::size_t>> seen;
  for (const auto& item : selection->selected) {
    if (budget == 0) break;
    if (item.ref.doc_id == ex.main.doc_id && item.ref.sentence_index < full_main) continue;
    if (!seen.emplace(item.ref.doc_id, item.ref.sentence_index).second) continue;
    const auto* s = find_sentence(ex, item.ref);
    if (!s)
      throw DataError("example " + ex.id + ": selection references unknown sentence " + item.ref.doc_id + "/" +
                      std::to_string(item.ref.sentence_index));
    budget -= append_sentence(out, item.ref.doc_id, *s, budget);
  }
  return out;
}

// {"id","mode","tokens":[...],"provenance":[{"from","to","doc_id","sentence_index"}]}
inline Json assembled_to_json(const AssembledInput& in) {
  Json prov = Json::array();
  for (const auto& p : in.provenance)
    prov.push_back({{"from", p.from}, {"to", p.to}, {"doc_id", p.doc_id}, {"sentence_index", p.sentence_index}});
  return Json{{"id", in.id}, {"mode", std::string(to_string(in.mode))}, {"tokens", in.tokens}, {"provenance", prov}};
}

}  // namespace mira
