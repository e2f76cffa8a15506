#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "logdoc/lexicon.hpp"

namespace logdoc {

struct GrammarRule {
  std::string lhs;
  std::vector<std::string> rhs;
  std::string builder;  // semantic composition schema
};

/// Context-free rules, one per line: `S -> NP VP @clause`.
class Grammar {
 public:
  static Grammar parse(std::string_view text, const std::string& origin = "<grammar>");
  static Grammar load(const std::string& path);

  void add(GrammarRule rule);
  const std::vector<GrammarRule>& rules() const { return rules_; }

  // Categories that can take `adjunct` (PP, Adv) as a non-initial daughter.
  bool hosts(const std::string& category, const std::string& adjunct) const;
  // True when `category` absorbs `adjunct` as an extra daughter of a flat rule
  // (no new node); false when it needs an adjunction rule X -> X adjunct.
  bool hosts_flat(const std::string& category, const std::string& adjunct) const;

 private:
  std::vector<GrammarRule> rules_;
};

struct ChartEdge {
  std::uint32_t start = 0;
  std::uint32_t end = 0;  // exclusive
  std::string category;
  std::vector<std::uint32_t> children;
  std::uint32_t ordinal = 0;          // creation order
  int rule = -1;                      // index into Grammar::rules(); -1 for lexical edges
  const LexEntry* entry = nullptr;    // lexical edges only

  bool lexical() const { return entry != nullptr; }
  std::uint32_t length() const { return end - start; }
};

class Chart {
 public:
  explicit Chart(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {}

  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<ChartEdge>& edges() const { return edges_; }
  const ChartEdge& edge(std::uint32_t id) const { return edges_.at(id); }
  bool truncated() const { return truncated_; }

  // Edge ids spanning all tokens with the given category, in creation order.
  std::vector<std::uint32_t> spanning(const std::string& category) const;
  // Root readings: spanning S edges, or spanning NP edges when there is no S.
  std::vector<std::uint32_t> roots() const;

  // Concatenated leaf tokens of an edge.
  std::vector<std::string> yield(std::uint32_t id) const;

 private:
  friend Chart chart_parse(const std::vector<std::string>&, const Grammar&, const Lexicon&,
                           std::size_t);
  friend std::size_t close_chart(Chart&, const Grammar&, const Lexicon&);

  bool add(ChartEdge e);

  std::vector<std::string> tokens_;
  std::vector<ChartEdge> edges_;
  std::vector<std::vector<std::uint32_t>> by_start_;
  std::set<std::string> signatures_;
  std::size_t max_edges_ = 50000;
  bool truncated_ = false;
};

/// Breadth-first bottom-up chart parsing: all edges of span length k are built
/// before any edge of length k+1. Unknown tokens yield no lexical edge.
Chart chart_parse(const std::vector<std::string>& tokens, const Grammar& grammar,
                  const Lexicon& lexicon, std::size_t max_edges = 50000);

/// Runs the closure step again over an existing chart; returns the number of
/// edges added (0 once the chart is closed).
std::size_t close_chart(Chart& chart, const Grammar& grammar, const Lexicon& lexicon);

struct PreferenceWeights {
  double right_association = 2.0;
  double minimal_attachment = 1.0;
};

struct AttachmentDecision {
  std::uint32_t adjunct = 0;  // edge id of the PP / Adv
  std::uint32_t site = 0;     // edge id of the chosen host
  std::size_t alternatives = 0;
  bool lowest = false;
  bool minimal = false;
  double lexical = 0.0;
};

struct Reading {
  std::uint32_t root = 0;
  double score = 0.0;
  std::vector<AttachmentDecision> trace;
};

Reading score_reading(const Chart& chart, std::uint32_t root, const Grammar& grammar,
                      const PreferenceWeights& weights = {});

/// Keeps readings with score >= theta * max; keeps all when max <= 0.
std::vector<Reading> prune_by_proportional_distance(std::vector<Reading> readings, double theta);

struct ChartPiece {
  std::uint32_t start = 0;
  std::uint32_t end = 0;
  bool word = false;        // uncovered single token
  std::uint32_t edge = 0;   // valid when !word
};

/// Greedy left-to-right cover by the longest constituent (S, VP, NP, PP) at
/// each uncovered position. Throws Error if the chart has a spanning root.
std::vector<ChartPiece> maximal_fragments(const Chart& chart);

/// Same selection restricted to [start, end) and to constituents shorter than
/// max_length; no precondition.
std::vector<ChartPiece> cover_span(const Chart& chart, std::uint32_t start, std::uint32_t end,
                                   std::uint32_t max_length);

}  // namespace logdoc
