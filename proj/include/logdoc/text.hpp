#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace logdoc {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
// Drops everything from the first '#' on.
std::string strip_comment(std::string_view line);
std::string read_file(const std::string& path);

/// Lowercased word tokens; punctuation and hyphens separate words, apostrophes
/// and a trailing possessive "'s" are dropped.
std::vector<std::string> tokenize(std::string_view text);

struct FragmentText {
  std::uint32_t id = 0;  // 1-based
  std::string text;
};

/// Splits a document into passages: an unpunctuated leading line is a title
/// fragment, the rest is split after '.', '!' or '?' unless the word before
/// the period is a known abbreviation. Throws Error on an empty document.
std::vector<FragmentText> segment_fragments(std::string_view doc_text);

// Line-safe escaping for the KB file (backslash, newline, tab, CR).
std::string escape_text(std::string_view s);
std::string unescape_text(std::string_view s);

}  // namespace logdoc
