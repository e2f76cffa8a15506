#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logdoc/term.hpp"

namespace logdoc {

enum class Category : std::uint8_t { Det, Adj, N, RelN, V, P, Adv, PName, Poss };

std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view text);

/// Where a preposition (or adverb) sends its argument.
///   Core  -> <modifier>(host, value)          level 2 (time, location, manner, ...)
///   Circ  -> circumstance(<const>, host, value)  level 3
///   Rel   -> <pred>(value, host)              relation named by the lexicon
struct PrepTarget {
  enum class Kind : std::uint8_t { Core, Circ, Rel };
  Kind kind = Kind::Circ;
  std::string symbol;

  friend bool operator==(const PrepTarget&, const PrepTarget&) = default;
};

struct VerbFrame {
  std::string evtype;
  std::vector<std::string> roles;     // obligatory; roles[0] is the subject
  std::vector<std::string> optional;  // may stay unfilled
  std::string object;                 // role of a single object
  std::vector<std::string> double_object;  // roles of "V NP NP", in order
};

struct Deverbal {
  std::string verb;
  std::string evtype;
};

struct LexEntry {
  std::vector<std::string> surface;  // one or more lowercase tokens
  std::string lemma;
  Category category = Category::N;
  std::map<std::string, std::string> features;

  std::optional<VerbFrame> frame;     // V
  std::optional<PrepTarget> target;   // P, Adv
  std::optional<Deverbal> deverbal;   // N
  std::string relation;               // RelN: 2-place relation predicate
  std::string property;               // N collocations: adjective folded into the entry
  bool relational_argument = false;   // P: introduces a relational noun's argument
  double weight = 0.0;                // lexical preference bonus

  bool is_closed_class() const;
};

/// Word list with longest-first multiword matching and a small suffix-stripping
/// morphology (-s, -es, -ies, -ed, -ing).
class Lexicon {
 public:
  // Parses `word | category | lemma | key=value;...` lines; '#' starts a comment.
  static Lexicon parse(std::string_view text, const std::string& origin = "<lexicon>");
  static Lexicon load(const std::string& path);

  void add(LexEntry entry);
  std::size_t size() const { return entries_.size(); }
  const std::vector<LexEntry>& entries() const { return entries_; }

  // Entries whose surface matches tokens[start...], longest match only.
  // Returns the match length (0 when nothing matches) and the entries.
  std::pair<std::size_t, std::vector<const LexEntry*>> match(const std::vector<std::string>& tokens,
                                                            std::size_t start) const;
  // Single-word lookup through the morphology.
  std::vector<const LexEntry*> lookup(const std::string& word) const;

 private:
  std::vector<LexEntry> entries_;
  std::map<std::string, std::vector<std::size_t>> by_first_;  // first surface token -> entries
  std::size_t max_len_ = 0;
};

/// Inflection variants tried for a token, most specific first (the token itself).
std::vector<std::string> morphological_variants(const std::string& word);

}  // namespace logdoc
