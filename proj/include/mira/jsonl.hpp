#pragma once

// JSON-lines storage for examples:
//   {"id","split","main":{"doc_id","url","text"},"summary":{"text"},
//    "assisting":[{"doc_id","url","text"},...]}
// Raw text is stored; segmentation and tokenization run on load.

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mira/corpus.hpp"
#include "mira/error.hpp"

namespace mira {

using Json = nlohmann::ordered_json;

// Calls fn(record, line_number) for every non-blank line; line numbers are
// 1-based. Parse failures raise DataError naming the file and line.
inline void for_each_jsonl(std::istream& in, const std::string& name,
                           const std::function<void(const Json&, std::size_t)>& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json record;
    try {
      record = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw DataError(name + ":" + std::to_string(line_no) + ": malformed JSON line: " + e.what());
    }
    try {
      fn(record, line_no);
    } catch (const Json::exception& e) {
      throw DataError(name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

inline void for_each_jsonl(const std::string& path, const std::function<void(const Json&, std::size_t)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  for_each_jsonl(in, path, fn);
}

inline Json document_to_json(const Document& d) {
  return Json{{"doc_id", d.doc_id}, {"url", d.source_url}, {"text", d.text}};
}

inline Json example_to_json(const Example& ex) {
  Json assisting = Json::array();
  for (const auto& a : ex.assisting) assisting.push_back(document_to_json(a));
  return Json{{"id", ex.id},
              {"split", std::string(to_string(ex.split))},
              {"main", document_to_json(ex.main)},
              {"summary", Json{{"text", ex.summary.text}}},
              {"assisting", std::move(assisting)}};
}

inline Document document_from_json(const Json& j, DocumentRole role) {
  return make_document(j.at("doc_id").get<std::string>(), j.value("url", std::string()),
                       j.at("text").get<std::string>(), role);
}

inline Example example_from_json(const Json& j) {
  Example ex;
  ex.id = j.at("id").get<std::string>();
  ex.split = parse_split(j.at("split").get<std::string>());
  ex.main = document_from_json(j.at("main"), DocumentRole::kMain);
  ex.summary = make_summary(j.at("summary").at("text").get<std::string>());
  for (const auto& a : j.at("assisting")) ex.assisting.push_back(document_from_json(a, DocumentRole::kAssisting));
  validate(ex);
  return ex;
}

inline void write_jsonl(std::ostream& out, const std::vector<Example>& examples) {
  for (const auto& ex : examples) out << example_to_json(ex).dump() << '\n';
}

inline void write_jsonl(const std::string& path, const std::vector<Example>& examples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  write_jsonl(out, examples);
}

inline std::vector<Example> read_jsonl(std::istream& in, const std::string& name = "<stream>") {
  std::vector<Example> out;
  for_each_jsonl(in, name, [&](const Json& j, std::size_t line_no) {
    try {
      out.push_back(example_from_json(j));
    } catch (const DataError& e) {
      throw DataError(name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  });
  return out;
}

inline std::vector<Example> read_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return read_jsonl(in, path);
}

}  // namespace mira
