#pragma once

// Corpus construction from fetched aggregator pages.
//
// Pages are partitioned into train/valid/test BEFORE clustering. Each hub page
// forms a cluster with the pages it cites that landed in the same split;
// citations that cross a split boundary are dropped. Every cluster member with
// at least one other member becomes the main document of one example whose
// assisting set is the other members (first four in cluster order).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mira/corpus.hpp"
#include "mira/error.hpp"
#include "mira/html.hpp"
#include "mira/parallel.hpp"
#include "mira/util.hpp"

namespace mira {

struct RawPage {
  std::string url;
  std::string html;
  std::vector<std::string> cited_urls;  // empty for cited pages
};

struct ClusterMember {
  Document document;
  Summary summary;
};

struct Cluster {
  std::string cluster_id;
  std::vector<ClusterMember> members;
};

struct SkippedPage {
  std::string url;
  std::string reason;
};

using BuildLog = std::vector<SkippedPage>;

inline std::string doc_id_for_url(std::string_view url) { return "d" + hex64(fnv1a64(url)); }

// Extraction result for one page: either a member or a skip reason.
struct ExtractionResult {
  std::string url;
  std::optional<ClusterMember> member;
  std::string skip_reason;
};

inline ExtractionResult extract_page(const RawPage& page) {
  ExtractionResult r{page.url, std::nullopt, {}};
  if (page.url.empty()) {
    r.skip_reason = "empty url";
    return r;
  }
  if (page.html.empty()) {
    r.skip_reason = "empty html";
    return r;
  }
  try {
    auto art = extract_article(page.html);
    ClusterMember m;
    m.document = make_document(doc_id_for_url(page.url), page.url, std::move(art.body_text));
    m.summary = make_summary(std::move(art.summary_text));
    if (m.document.sentences.empty()) {
      r.skip_reason = "empty body after cleaning";
      return r;
    }
    r.member = std::move(m);
  } catch (const PageSkipped& e) {
    r.skip_reason = e.what();
  }
  return r;
}

namespace dataset_detail {

inline Cluster assemble_cluster(std::string cluster_id, std::span<const ExtractionResult* const> results,
                                BuildLog* log) {
  Cluster c;
  c.cluster_id = std::move(cluster_id);
  std::set<std::string> seen;
  for (const auto* r : results) {
    if (!r->member) {
      if (log) log->push_back({r->url, r->skip_reason});
      continue;
    }
    if (!seen.insert(r->member->document.doc_id).second) continue;
    c.members.push_back(*r->member);
  }
  if (c.members.empty()) throw ClusterEmpty("cluster " + c.cluster_id + ": every page was skipped");
  return c;
}

}  // namespace dataset_detail

inline std::string cluster_id_for_hub(std::string_view hub_url) { return "c" + hex64(fnv1a64(hub_url)); }

// Cluster from a hub page and its cited pages. Skipped pages go to `log`; a
// failed hub does not prevent the cited pages from forming the cluster.
inline Cluster build_cluster(const RawPage& hub, std::span<const RawPage> cited, BuildLog* log = nullptr) {
  std::vector<ExtractionResult> results;
  results.reserve(cited.size() + 1);
  results.push_back(extract_page(hub));
  for (const auto& p : cited) results.push_back(extract_page(p));
  std::vector<const ExtractionResult*> ptrs;
  for (const auto& r : results) ptrs.push_back(&r);
  return dataset_detail::assemble_cluster(cluster_id_for_hub(hub.url), ptrs, log);
}

inline std::vector<Example> make_examples(const Cluster& cluster, Split split = Split::kTrain) {
  std::vector<Example> out;
  const auto& m = cluster.members;
  if (m.size() < 2) return out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    Example ex;
    ex.id = cluster.cluster_id + "-" + std::to_string(i);
    ex.split = split;
    ex.main = m[i].document;
    ex.main.role = DocumentRole::kMain;
    ex.summary = m[i].summary;
    for (std::size_t j = 0; j < m.size() && ex.assisting.size() < kMaxAssisting; ++j) {
      if (j == i) continue;
      ex.assisting.push_back(m[j].document);
      ex.assisting.back().role = DocumentRole::kAssisting;
    }
    out.push_back(std::move(ex));
  }
  return out;
}

struct SplitRatios {
  double train = 0.8;
  double valid = 0.1;
  double test = 0.1;
};

inline SplitRatios parse_ratios(std::string_view s) {
  auto parts = split_string(s, ',');
  if (parts.size() != 3) throw ValidationError("ratios must be three comma-separated numbers");
  std::array<double, 3> v{};
  for (std::size_t i = 0; i < 3; ++i) {
    try {
      std::size_t used = 0;
      v[i] = std::stod(parts[i], &used);
      if (used != parts[i].size()) throw std::invalid_argument(parts[i]);
    } catch (const std::exception&) {
      throw ValidationError("bad ratio '" + parts[i] + "'");
    }
  }
  return {v[0], v[1], v[2]};
}

// Deterministic page -> split assignment. Pages are ordered by url, shuffled
// with a seeded mt19937_64 (own Fisher-Yates, so the permutation does not
// depend on the standard library), then cut at floor(train*n) and
// floor((train+valid)*n).
inline std::map<std::string, Split> split_corpus(std::span<const RawPage> pages, SplitRatios ratios,
                                                 std::uint64_t seed) {
  if (ratios.train < 0 || ratios.valid < 0 || ratios.test < 0 ||
      std::abs(ratios.train + ratios.valid + ratios.test - 1.0) > 1e-9)
    throw ValidationError("split ratios must be non-negative and sum to 1");
  std::vector<std::string> urls;
  for (const auto& p : pages) urls.push_back(p.url);
  std::sort(urls.begin(), urls.end());
  urls.erase(std::unique(urls.begin(), urls.end()), urls.end());
  if (urls.size() < 3) throw ValidationError("need at least 3 pages to split, got " + std::to_string(urls.size()));

  std::mt19937_64 rng(seed);
  for (std::size_t i = urls.size() - 1; i > 0; --i) {
    // Rejection sampling for an unbiased index in [0, i].
    const std::uint64_t bound = i + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do r = rng();
    while (r >= limit);
    std::swap(urls[i], urls[static_cast<std::size_t>(r % bound)]);
  }

  const auto n = static_cast<double>(urls.size());
  const auto n_train = static_cast<std::size_t>(std::floor(ratios.train * n + 1e-9));
  const auto n_valid = static_cast<std::size_t>(std::floor((ratios.train + ratios.valid) * n + 1e-9)) - n_train;
  std::map<std::string, Split> out;
  for (std::size_t i = 0; i < urls.size(); ++i)
    out[urls[i]] = i < n_train ? Split::kTrain : (i < n_train + n_valid ? Split::kValid : Split::kTest);
  return out;
}

struct BuiltCorpus {
  std::vector<Example> examples;  // grouped by split, then hub url order
  std::vector<Cluster> clusters;
  std::vector<Split> cluster_splits;
  BuildLog log;
};

// pages: every fetched page, hubs carry cited_urls. A page is a hub iff
// is_hub(page) is true.
inline BuiltCorpus build_corpus(const std::vector<RawPage>& pages, const std::vector<bool>& is_hub,
                                SplitRatios ratios, std::uint64_t seed, std::size_t workers = 1) {
  if (pages.size() != is_hub.size()) throw ValidationError("hub flags do not match pages");
  auto assignment = split_corpus(pages, ratios, seed);
  auto results = parallel_map(pages, [](const RawPage& p) { return extract_page(p); }, workers);

  std::map<std::string, std::size_t> by_url;
  for (std::size_t i = 0; i < pages.size(); ++i) by_url.emplace(pages[i].url, i);

  std::vector<std::size_t> hubs;
  for (std::size_t i = 0; i < pages.size(); ++i)
    if (is_hub[i]) hubs.push_back(i);
  std::sort(hubs.begin(), hubs.end(), [&](std::size_t a, std::size_t b) {
    auto sa = assignment.at(pages[a].url), sb = assignment.at(pages[b].url);
    if (sa != sb) return sa < sb;
    return pages[a].url < pages[b].url;
  });

  BuiltCorpus out;
  std::set<std::string> logged;
  auto log_once = [&](const std::string& url, const std::string& reason) {
    if (logged.insert(url + "\t" + reason).second) out.log.push_back({url, reason});
  };
  for (std::size_t h : hubs) {
    const auto& hub = pages[h];
    const Split split = assignment.at(hub.url);
    std::vector<const ExtractionResult*> members{&results[h]};
    for (const auto& url : hub.cited_urls) {
      auto it = by_url.find(url);
      if (it == by_url.end()) {
        log_once(url, "cited page not fetched");
        continue;
      }
      if (assignment.at(url) != split) {
        log_once(url, "citation from " + hub.url + " crosses split boundary; dropped");
        continue;
      }
      members.push_back(&results[it->second]);
    }
    BuildLog local;
    try {
      auto cluster = dataset_detail::assemble_cluster(cluster_id_for_hub(hub.url), members, &local);
      auto examples = make_examples(cluster, split);
      out.examples.insert(out.examples.end(), std::make_move_iterator(examples.begin()),
                          std::make_move_iterator(examples.end()));
      out.clusters.push_back(std::move(cluster));
      out.cluster_splits.push_back(split);
    } catch (const ClusterEmpty& e) {
      log_once(hub.url, e.what());
    }
    for (const auto& s : local) log_once(s.url, s.reason);
  }
  return out;
}

// doc_ids (main and assisting pooled) that occur in more than one split.
inline std::vector<std::string> audit_leakage(const std::vector<Example>& examples) {
  std::map<std::string, std::set<Split>> seen;
  for (const auto& ex : examples) {
    seen[ex.main.doc_id].insert(ex.split);
    for (const auto& a : ex.assisting) seen[a.doc_id].insert(ex.split);
  }
  std::vector<std::string> leaked;
  for (const auto& [id, splits] : seen)
    if (splits.size() > 1) leaked.push_back(id);
  return leaked;
}

struct ManifestEntry {
  std::string url;
  std::string html_path;
  bool hub = false;
  std::vector<std::string> cited_urls;
};

// url<TAB>html_path<TAB>hub_flag<TAB>cited_urls_semicolon_separated
inline std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path);
  const auto base = std::filesystem::path(path).parent_path();
  std::vector<ManifestEntry> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto cols = split_string(line, '\t');
    if (cols.size() < 3 || cols.size() > 4)
      throw DataError(path + ":" + std::to_string(line_no) + ": expected 3 or 4 tab-separated columns");
    ManifestEntry e;
    e.url = cols[0];
    auto p = std::filesystem::path(cols[1]);
    e.html_path = (p.is_relative() ? base / p : p).string();
    const auto& flag = cols[2];
    if (flag == "1" || flag == "true" || flag == "hub") {
      e.hub = true;
    } else if (flag == "0" || flag == "false" || flag == "cited" || flag.empty()) {
      e.hub = false;
    } else {
      throw DataError(path + ":" + std::to_string(line_no) + ": bad hub flag '" + flag + "'");
    }
    if (cols.size() == 4 && !cols[3].empty())
      for (auto& u : split_string(cols[3], ';'))
        if (!u.empty()) e.cited_urls.push_back(std::move(u));
    if (e.url.empty()) throw DataError(path + ":" + std::to_string(line_no) + ": empty url");
    out.push_back(std::move(e));
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace mira
