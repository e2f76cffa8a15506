#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logdoc/grammar.hpp"
#include "logdoc/lexicon.hpp"
#include "logdoc/term.hpp"

namespace logdoc {

/// Argument layout of each eventuality-type predicate, e.g.
///   evtype locative = verb,event,agent,aff_ent,goal
/// A scheme without a `verb` slot is lexicalized: its predicate is the verb
/// lemma itself (share(agent, aff_ent)).
struct Scheme {
  std::string evtype;
  std::vector<std::string> slots;

  bool lexicalized() const;
  bool has_event() const;
};

class SchemeTable {
 public:
  static SchemeTable parse(std::string_view text, const std::string& origin = "<schemes>");
  static SchemeTable load(const std::string& path);

  void add(Scheme scheme);
  const Scheme& at(const std::string& evtype) const;
  bool contains(const std::string& evtype) const { return schemes_.count(evtype) != 0; }
  const std::map<std::string, Scheme>& schemes() const { return schemes_; }

 private:
  std::map<std::string, Scheme> schemes_;
};

/// predicate/arity -> level. Lines `object/2 = L1`.
class LevelTable {
 public:
  static LevelTable parse(std::string_view text, const std::string& origin = "<levels>");
  static LevelTable load(const std::string& path);

  void set(const std::string& key, Level level);
  std::optional<Level> find(const std::string& key) const;
  // Throws Error for predicates the table does not cover.
  Level classify(const Atom& atom) const;
  const std::map<std::string, Level>& entries() const { return levels_; }

 private:
  std::map<std::string, Level> levels_;
};

/// Open conjunction produced by composition; discourse referents stay variables.
struct OpenFormula {
  std::vector<Atom> atoms;
  std::map<std::uint32_t, Term> referents;  // NP edge id -> referent
};

class CompositionFailure : public Error {
 public:
  using Error::Error;
};

/// Replaces each distinct variable by a fresh skolem in first-occurrence order.
/// `next_skolem` is the next index to hand out and is advanced.
std::vector<Atom> existential_closure(const std::vector<Atom>& atoms, std::uint32_t& next_skolem);

/// True when the formulas are equal as multisets of atoms under a bijective
/// variable renaming.
bool formulas_equivalent(const std::vector<Atom>& a, const std::vector<Atom>& b);

struct ScoredFormula {
  std::vector<Atom> atoms;
  double score = 0.0;
};
/// One representative (highest score, earliest on ties) per equivalence class,
/// in order of first appearance.
std::vector<ScoredFormula> collapse_equivalent(std::vector<ScoredFormula> formulas);

struct TranslatorOptions {
  PreferenceWeights weights;
  double theta = 0.8;
  std::size_t max_edges = 50000;
};

/// Result of parsing and composing one fragment, before existential closure.
/// Pieces beyond the first exist only when the fragment had no full parse.
struct FragmentAnalysis {
  struct Piece {
    std::vector<std::vector<Atom>> readings;  // >1 means a surviving ambiguity
    std::vector<std::string> keywords;        // word-level piece
  };
  std::vector<Piece> pieces;
  bool parsed = false;  // a full reading survived
  std::size_t spanning_readings = 0;
};

/// Document/query translation pipeline: tokenize, chart parse, score, prune,
/// compose, collapse; maximal-fragment fallback when no full parse exists.
class Translator {
 public:
  Translator(Lexicon lexicon, Grammar grammar, SchemeTable schemes, LevelTable levels,
             TranslatorOptions options = {});

  const Lexicon& lexicon() const { return lexicon_; }
  const Grammar& grammar() const { return grammar_; }
  const SchemeTable& schemes() const { return schemes_; }
  const LevelTable& levels() const { return levels_; }
  const TranslatorOptions& options() const { return options_; }
  void set_options(const TranslatorOptions& options) { options_ = options; }

  Chart parse(const std::vector<std::string>& tokens) const;

  /// Builds the open formula of a parse tree. Throws CompositionFailure when a
  /// verb's obligatory role stays unfilled or a builder id is unknown.
  OpenFormula compose(const Chart& chart, std::uint32_t edge) const;

  /// Pure: no counters touched, safe to run concurrently.
  FragmentAnalysis analyze(std::string_view fragment_text) const;

 private:
  std::vector<std::vector<Atom>> compose_readings(const Chart& chart,
                                                  const std::vector<std::uint32_t>& edges) const;
  void analyze_span(const Chart& chart, std::uint32_t start, std::uint32_t end,
                    std::uint32_t max_length, FragmentAnalysis& out) const;
  void register_lexical_levels();

  Lexicon lexicon_;
  Grammar grammar_;
  SchemeTable schemes_;
  LevelTable levels_;
  TranslatorOptions options_;
};

/// Facts of one fragment after closure; groups hold alternative readings.
struct FragmentFacts {
  std::vector<Fact> facts;
  std::size_t groups = 0;
  bool parse_failure = false;
};

/// Closes an analysis into annotated facts. Each surviving alternative reading
/// gets its own group id taken from `next_group`.
FragmentFacts close_fragment(const FragmentAnalysis& analysis, std::uint32_t doc, std::uint32_t frag,
                             std::uint32_t& next_skolem, std::uint32_t& next_group);

/// analyze + close_fragment.
FragmentFacts translate_fragment(const Translator& translator, std::string_view fragment_text,
                                 std::uint32_t doc, std::uint32_t frag, std::uint32_t& next_skolem,
                                 std::uint32_t& next_group);

}  // namespace logdoc
