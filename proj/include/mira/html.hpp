#pragma once

// Article extraction from fetched news pages.
//
// The body is the text of <p> elements outside boilerplate subtrees. A subtree
// is boilerplate when its tag is structural chrome or media (nav, header,
// footer, aside, figure, figcaption, video, ...) or when any token of its
// class/id attribute (split on whitespace, '-' and '_') names an ad, caption,
// share widget and the like. Paragraphs are whitespace-collapsed and joined
// with '\n'. The summary is the first nonempty of og:description,
// twitter:description, description.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mira/error.hpp"

namespace mira {

struct ExtractedArticle {
  std::string body_text;
  std::string summary_text;
};

namespace html_detail {

inline char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; }

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = lower(c);
  return out;
}

inline bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

inline void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x110000) {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

inline std::string decode_entities(std::string_view s) {
  static const std::map<std::string, std::uint32_t, std::less<>> kNamed = {
      {"amp", '&'},      {"lt", '<'},       {"gt", '>'},       {"quot", '"'},    {"apos", '\''},
      {"nbsp", ' '},     {"mdash", 0x2014}, {"ndash", 0x2013}, {"lsquo", 0x2018}, {"rsquo", 0x2019},
      {"ldquo", 0x201C}, {"rdquo", 0x201D}, {"hellip", 0x2026}, {"copy", 0xA9},
      {"aacute", 0xE1}, {"Aacute", 0xC1}, {"agrave", 0xE0}, {"Agrave", 0xC0}, {"acirc", 0xE2}, {"Acirc", 0xC2},
      {"auml", 0xE4}, {"Auml", 0xC4}, {"atilde", 0xE3}, {"Atilde", 0xC3}, {"aring", 0xE5}, {"Aring", 0xC5},
      {"eacute", 0xE9}, {"Eacute", 0xC9}, {"egrave", 0xE8}, {"Egrave", 0xC8}, {"ecirc", 0xEA}, {"Ecirc", 0xCA},
      {"euml", 0xEB}, {"Euml", 0xCB}, {"iacute", 0xED}, {"Iacute", 0xCD}, {"igrave", 0xEC}, {"Igrave", 0xCC},
      {"icirc", 0xEE}, {"Icirc", 0xCE}, {"iuml", 0xEF}, {"Iuml", 0xCF}, {"oacute", 0xF3}, {"Oacute", 0xD3},
      {"ograve", 0xF2}, {"Ograve", 0xD2}, {"ocirc", 0xF4}, {"Ocirc", 0xD4}, {"ouml", 0xF6}, {"Ouml", 0xD6},
      {"otilde", 0xF5}, {"Otilde", 0xD5}, {"uacute", 0xFA}, {"Uacute", 0xDA}, {"ugrave", 0xF9}, {"Ugrave", 0xD9},
      {"ucirc", 0xFB}, {"Ucirc", 0xDB}, {"uuml", 0xFC}, {"Uuml", 0xDC}, {"yacute", 0xFD}, {"Yacute", 0xDD},
      {"yuml", 0xFF}, {"Yuml", 0x178}, {"ccedil", 0xE7}, {"Ccedil", 0xC7}, {"ntilde", 0xF1}, {"Ntilde", 0xD1},
      {"oslash", 0xF8}, {"Oslash", 0xD8}, {"szlig", 0xDF}, {"aelig", 0xE6}, {"AElig", 0xC6}, {"euro", 0x20AC},
      {"pound", 0xA3}, {"yen", 0xA5}, {"laquo", 0xAB}, {"raquo", 0xBB}, {"deg", 0xB0}, {"middot", 0xB7},
      {"bull", 0x2022}, {"trade", 0x2122}, {"reg", 0xAE}, {"thinsp", 0x20}, {"ensp", 0x20},
      {"emsp", 0x20}, {"sbquo", 0x201A}, {"bdquo", 0x201E}, {"prime", 0x2032}, {"Prime", 0x2033},
      {"times", 0xD7}, {"frac12", 0xBD}};
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out += s[i];
      continue;
    }
    auto semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out += '&';
      continue;
    }
    std::string_view name = s.substr(i + 1, semi - i - 1);
    std::uint32_t cp = 0;
    bool ok = false;
    if (name.size() > 1 && name[0] == '#') {
      bool hex = name[1] == 'x' || name[1] == 'X';
      std::string digits(name.substr(hex ? 2 : 1));
      if (!digits.empty()) {
        try {
          std::size_t used = 0;
          cp = static_cast<std::uint32_t>(std::stoul(digits, &used, hex ? 16 : 10));
          ok = used == digits.size();
        } catch (...) {
          ok = false;
        }
      }
    } else if (auto it = kNamed.find(name); it != kNamed.end()) {
      cp = it->second;
      ok = true;
    }
    if (!ok) {
      out += '&';
      continue;
    }
    append_utf8(out, cp);
    i = semi;
  }
  return out;
}

// Collapses whitespace runs (including U+00A0) to one space and trims.
inline std::string collapse_ws(std::string_view s) {
  std::string out;
  bool pending = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    bool space = is_ws(s[i]);
    if (!space && static_cast<unsigned char>(s[i]) == 0xC2 && i + 1 < s.size() &&
        static_cast<unsigned char>(s[i + 1]) == 0xA0) {
      space = true;
      ++i;
    }
    if (space) {
      pending = !out.empty();
      continue;
    }
    if (pending) out += ' ';
    pending = false;
    out += s[i];
  }
  return out;
}

struct Tag {
  std::string name;  // lowercase
  std::map<std::string, std::string> attrs;  // lowercase keys, decoded values
  bool closing = false;
  bool self_closing = false;
};

// Parses a tag starting at html[pos] == '<'. Returns the position after '>'.
inline std::size_t parse_tag(std::string_view html, std::size_t pos, Tag& tag) {
  std::size_t i = pos + 1;
  const std::size_t n = html.size();
  if (i < n && html[i] == '/') {
    tag.closing = true;
    ++i;
  }
  std::size_t name_start = i;
  while (i < n && !is_ws(html[i]) && html[i] != '>' && html[i] != '/') ++i;
  tag.name = lower(html.substr(name_start, i - name_start));
  while (i < n && html[i] != '>') {
    if (is_ws(html[i])) {
      ++i;
      continue;
    }
    if (html[i] == '/') {
      tag.self_closing = true;
      ++i;
      continue;
    }
    std::size_t key_start = i;
    while (i < n && !is_ws(html[i]) && html[i] != '=' && html[i] != '>' && html[i] != '/') ++i;
    std::string key = lower(html.substr(key_start, i - key_start));
    while (i < n && is_ws(html[i])) ++i;
    std::string value;
    if (i < n && html[i] == '=') {
      ++i;
      while (i < n && is_ws(html[i])) ++i;
      if (i < n && (html[i] == '"' || html[i] == '\'')) {
        char q = html[i++];
        std::size_t v = i;
        while (i < n && html[i] != q) ++i;
        value = std::string(html.substr(v, i - v));
        if (i < n) ++i;
      } else {
        std::size_t v = i;
        while (i < n && !is_ws(html[i]) && html[i] != '>') ++i;
        value = std::string(html.substr(v, i - v));
      }
    }
    if (!key.empty()) tag.attrs.emplace(std::move(key), decode_entities(value));
  }
  return i < n ? i + 1 : n;
}

inline bool contains(std::initializer_list<std::string_view> set, std::string_view v) {
  return std::find(set.begin(), set.end(), v) != set.end();
}

inline bool is_void(std::string_view t) {
  return contains({"br", "img", "meta", "link", "input", "hr", "source", "wbr", "area", "base", "col", "embed",
                   "param", "track", "!doctype"},
                  t);
}

inline bool is_raw_text(std::string_view t) {
  return contains({"script", "style", "textarea", "title", "noscript", "template", "svg"}, t);
}

inline bool is_boilerplate_tag(std::string_view t) {
  return contains({"nav", "header", "footer", "aside", "figure", "figcaption", "video", "audio", "picture",
                   "iframe", "form", "button", "select", "object", "canvas", "menu"},
                  t);
}

inline bool closes_paragraph(std::string_view t) {
  return contains({"p", "div", "section", "article", "ul", "ol", "li", "table", "h1", "h2", "h3", "h4", "h5",
                   "h6", "blockquote", "header", "footer", "nav", "aside", "figure", "form", "pre", "main"},
                  t);
}

inline bool blacklisted_attr(std::string_view value) {
  static constexpr std::array<std::string_view, 18> kWords = {
      "ad",      "ads",     "advert",     "advertisement", "sponsored", "sponsor",
      "promo",   "caption", "video",      "gallery",       "social",    "share",
      "related", "newsletter", "comments", "sidebar",      "breadcrumb", "outbrain"};
  std::string v = lower(value);
  std::size_t i = 0;
  while (i < v.size()) {
    while (i < v.size() && (is_ws(v[i]) || v[i] == '-' || v[i] == '_')) ++i;
    std::size_t s = i;
    while (i < v.size() && !(is_ws(v[i]) || v[i] == '-' || v[i] == '_')) ++i;
    std::string_view word(v.data() + s, i - s);
    if (!word.empty() && std::find(kWords.begin(), kWords.end(), word) != kWords.end()) return true;
  }
  return false;
}

}  // namespace html_detail

// Throws PageSkipped when no description field is present or the cleaned
// body is empty.
inline ExtractedArticle extract_article(std::string_view html) {
  using namespace html_detail;
  struct Open {
    std::string name;
    bool excluded;
  };
  std::vector<Open> stack;
  std::map<std::string, std::string> meta;
  std::vector<std::string> paragraphs;
  std::string para;
  bool in_para = false;

  auto excluded = [&] { return !stack.empty() && stack.back().excluded; };
  auto flush = [&] {
    if (in_para) {
      auto text = collapse_ws(decode_entities(para));
      if (!text.empty()) paragraphs.push_back(std::move(text));
    }
    para.clear();
    in_para = false;
  };
  auto pop_through = [&](std::string_view name) {
    auto it = std::find_if(stack.rbegin(), stack.rend(), [&](const Open& o) { return o.name == name; });
    if (it == stack.rend()) return false;
    stack.erase(std::next(it).base(), stack.end());
    return true;
  };

  const std::size_t n = html.size();
  std::size_t i = 0;
  while (i < n) {
    if (html[i] != '<') {
      auto next = html.find('<', i);
      if (next == std::string_view::npos) next = n;
      if (in_para && !excluded()) para.append(html.substr(i, next - i));
      i = next;
      continue;
    }
    if (html.substr(i, 4) == "<!--") {
      auto end = html.find("-->", i + 4);
      i = end == std::string_view::npos ? n : end + 3;
      continue;
    }
    if (i + 1 < n && (html[i + 1] == '!' || html[i + 1] == '?')) {
      auto end = html.find('>', i);
      i = end == std::string_view::npos ? n : end + 1;
      continue;
    }
    if (i + 1 >= n || !(std::isalpha(static_cast<unsigned char>(html[i + 1])) || html[i + 1] == '/')) {
      if (in_para && !excluded()) para += '<';
      ++i;
      continue;
    }
    Tag tag;
    i = parse_tag(html, i, tag);

    if (tag.closing) {
      if (tag.name == "p") {
        if (pop_through("p")) flush();
      } else if (pop_through(tag.name) && in_para &&
                 std::none_of(stack.begin(), stack.end(), [](const Open& o) { return o.name == "p"; })) {
        flush();
      }
      continue;
    }

    if (tag.name == "meta") {
      auto key_it = tag.attrs.find("property");
      if (key_it == tag.attrs.end()) key_it = tag.attrs.find("name");
      auto content = tag.attrs.find("content");
      if (key_it != tag.attrs.end() && content != tag.attrs.end())
        meta.emplace(lower(key_it->second), content->second);
      continue;
    }
    if (tag.name == "br") {
      if (in_para) para += ' ';
      continue;
    }
    if (is_void(tag.name)) continue;

    if (is_raw_text(tag.name)) {
      if (tag.self_closing) continue;
      std::string close = "</" + tag.name;
      std::size_t j = i;
      for (;;) {
        j = html.find('<', j);
        if (j == std::string_view::npos || lower(html.substr(j, close.size())) == close) break;
        ++j;
      }
      if (j == std::string_view::npos) {
        i = n;
      } else {
        auto end = html.find('>', j);
        i = end == std::string_view::npos ? n : end + 1;
      }
      continue;
    }

    if (closes_paragraph(tag.name) && in_para) {
      pop_through("p");
      flush();
    }
    bool ex = excluded() || is_boilerplate_tag(tag.name);
    for (const char* attr : {"class", "id"}) {
      auto it = tag.attrs.find(attr);
      if (it != tag.attrs.end() && blacklisted_attr(it->second)) ex = true;
    }
    if (tag.self_closing) continue;
    stack.push_back({tag.name, ex});
    if (tag.name == "p" && !ex) {
      para.clear();
      in_para = true;
    }
  }
  flush();

  ExtractedArticle out;
  for (const char* field : {"og:description", "twitter:description", "description"}) {
    auto it = meta.find(field);
    if (it == meta.end()) continue;
    auto text = collapse_ws(it->second);
    if (!text.empty()) {
      out.summary_text = std::move(text);
      break;
    }
  }
  if (out.summary_text.empty()) throw PageSkipped("no description metadata");
  for (std::size_t k = 0; k < paragraphs.size(); ++k) {
    if (k) out.body_text += '\n';
    out.body_text += paragraphs[k];
  }
  if (out.body_text.empty()) throw PageSkipped("empty body after cleaning");
  return out;
}

}  // namespace mira
