#pragma once

// Per-example tables with a "#corpus" aggregate row. Numeric columns are
// averaged over rows in row order; text columns aggregate to "-".

#include <cstddef>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mira/error.hpp"
#include "mira/jsonl.hpp"
#include "mira/util.hpp"

namespace mira {

using Cell = std::variant<double, std::string>;

struct ReportTable {
  std::vector<std::string> columns;  // excluding the leading "id" column
  std::vector<std::string> ids;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::string id, std::vector<Cell> cells) {
    if (cells.size() != columns.size())
      throw ValidationError("row for " + id + " has " + std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(columns.size()));
    ids.push_back(std::move(id));
    rows.push_back(std::move(cells));
  }

  bool numeric(std::size_t col) const {
    for (const auto& r : rows)
      if (!std::holds_alternative<double>(r[col])) return false;
    return !rows.empty();
  }

  std::vector<Cell> aggregate() const {
    std::vector<Cell> out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (!numeric(c)) {
        out.emplace_back(std::string("-"));
        continue;
      }
      double sum = 0;
      for (const auto& r : rows) sum += std::get<double>(r[c]);
      out.emplace_back(sum / static_cast<double>(rows.size()));
    }
    return out;
  }

  Json aggregate_json() const {
    Json j = Json::object();
    const auto agg = aggregate();
    for (std::size_t c = 0; c < columns.size(); ++c)
      if (const auto* d = std::get_if<double>(&agg[c])) j[columns[c]] = *d;
    return j;
  }
};

inline std::string format_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  return std::get<std::string>(c);
}

inline std::string metadata_line(const Json& metadata) {
  std::string out = "#";
  for (const auto& [k, v] : metadata.items()) out += " " + k + "=" + (v.is_string() ? v.get<std::string>() : v.dump());
  return out;
}

inline void write_tsv(std::ostream& out, const ReportTable& t, const Json& metadata) {
  out << metadata_line(metadata) << '\n';
  out << "id";
  for (const auto& c : t.columns) out << '\t' << c;
  out << '\n';
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    out << t.ids[i];
    for (const auto& c : t.rows[i]) out << '\t' << format_cell(c);
    out << '\n';
  }
  if (!t.rows.empty()) {
    out << "#corpus";
    for (const auto& c : t.aggregate()) out << '\t' << format_cell(c);
    out << '\n';
  }
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

inline void write_tsv(const std::string& path, const ReportTable& t, const Json& metadata) {
  auto out = open_output(path);
  write_tsv(out, t, metadata);
}

inline void write_json(const std::string& path, const Json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

// Header and "#corpus" row of a TSV written by write_tsv, as a JSON object.
inline Json read_tsv_aggregate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  std::vector<std::string> header;
  Json meta = Json::object();
  Json agg = Json::object();
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      for (const auto& kv : split_string(line.substr(2), ' ')) {
        auto eq = kv.find('=');
        if (eq != std::string::npos) meta[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
    } else if (line.rfind("id\t", 0) == 0) {
      header = split_string(line, '\t');
    } else if (line.rfind("#corpus\t", 0) == 0) {
      auto cells = split_string(line, '\t');
      if (cells.size() != header.size()) throw DataError(path + ": aggregate row does not match header");
      for (std::size_t i = 1; i < cells.size(); ++i) {
        if (cells[i] == "-") continue;
        try {
          agg[header[i]] = std::stod(cells[i]);
        } catch (const std::exception&) {
          agg[header[i]] = cells[i];
        }
      }
    } else if (!line.empty()) {
      ++rows;
    }
  }
  if (header.empty()) throw DataError(path + ": not a report table");
  return Json{{"metadata", meta}, {"rows", rows}, {"aggregate", agg}};
}

}  // namespace mira
