#include "logdoc/text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "logdoc/term.hpp"

namespace logdoc {

std::string trim(std::string_view s) {
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return std::string(hash == std::string_view::npos ? line : line.substr(0, hash));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (cur.size() >= 2 && cur.compare(cur.size() - 2, 2, "'s") == 0) cur.resize(cur.size() - 2);
    cur.erase(std::remove(cur.begin(), cur.end(), '\''), cur.end());
    if (!cur.empty()) tokens.push_back(cur);
    cur.clear();
  };
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '\'') {
      cur += static_cast<char>(std::tolower(u));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

namespace {

bool is_abbreviation(std::string_view word) {
  static const std::string_view list[] = {"e.g", "i.e", "etc", "cf", "fig", "vs", "dr",
                                          "mr",  "mrs", "ms",  "al", "no", "sec", "approx"};
  std::string lower = to_lower(word);
  return std::find(std::begin(list), std::end(list), lower) != std::end(list);
}

bool ends_sentence(char c) { return c == '.' || c == '!' || c == '?'; }

}  // namespace

std::vector<FragmentText> segment_fragments(std::string_view doc_text) {
  std::string all = trim(doc_text);
  if (all.empty()) throw Error("empty document");
  std::vector<std::string> pieces;
  std::string_view rest = all;

  auto newline = rest.find('\n');
  if (newline != std::string_view::npos) {
    std::string first = trim(rest.substr(0, newline));
    if (!first.empty() && !ends_sentence(first.back())) {
      pieces.push_back(first);
      rest.remove_prefix(newline + 1);
    }
  }

  std::string cur;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    char c = rest[i];
    cur += c;
    if (!ends_sentence(c)) continue;
    bool at_boundary = i + 1 == rest.size() || std::isspace(static_cast<unsigned char>(rest[i + 1]));
    if (!at_boundary) continue;
    if (c == '.') {
      // Word immediately before the period.
      std::size_t end = cur.size() - 1;
      std::size_t start = end;
      while (start > 0 && !std::isspace(static_cast<unsigned char>(cur[start - 1]))) --start;
      if (is_abbreviation(std::string_view(cur).substr(start, end - start))) continue;
    }
    std::string piece = trim(cur);
    if (!piece.empty()) pieces.push_back(piece);
    cur.clear();
  }
  std::string tail = trim(cur);
  if (!tail.empty()) pieces.push_back(tail);

  std::vector<FragmentText> out;
  for (auto& p : pieces) {
    // Collapse internal line breaks and runs of whitespace.
    std::string norm;
    bool space = false;
    for (char c : p) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        space = true;
        continue;
      }
      if (space && !norm.empty()) norm += ' ';
      space = false;
      norm += c;
    }
    out.push_back({static_cast<std::uint32_t>(out.size() + 1), std::move(norm)});
  }
  return out;
}

std::string escape_text(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_text(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out += s[i];
      continue;
    }
    char n = s[++i];
    switch (n) {
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'r': out += '\r'; break;
      default: out += n;
    }
  }
  return out;
}

}  // namespace logdoc
