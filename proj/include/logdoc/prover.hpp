#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "logdoc/knowledge_base.hpp"
#include "logdoc/semantics.hpp"
#include "logdoc/term.hpp"

namespace logdoc {

enum class Stage : std::uint8_t {
  DirectFragment,
  DirectDocument,
  PostulatesL2,
  PostulatesL3,
  Inheritance,
  Decomposition,
  KeywordFallback,
};
inline constexpr std::size_t kStageCount = 7;
inline constexpr std::array<Stage, kStageCount> kAllStages{
    Stage::DirectFragment, Stage::DirectDocument, Stage::PostulatesL2, Stage::PostulatesL3,
    Stage::Inheritance,    Stage::Decomposition,  Stage::KeywordFallback};

std::string_view to_string(Stage stage);
std::optional<Stage> parse_stage(std::string_view text);

/// Conjunctive query. Every atom implicitly carries the shared scope
/// variables _S (fragment) and _D (document); the prover enforces them natively.
struct Query {
  std::vector<Atom> atoms;
  std::string text;
  bool keyword_only = false;  // nothing parsed; atoms are keyword atoms

  // Content variables in first-occurrence order.
  std::vector<std::string> variables() const;
  // "representation(R,L)/_S/_D, ..."
  std::string str() const;
};

inline constexpr const char* kFragmentScopeVar = "_S";
inline constexpr const char* kDocumentScopeVar = "_D";

/// Throws Error if the atoms use the scope variable names.
Query make_query(std::vector<Atom> atoms, std::string text = {});

/// Same pipeline as documents minus existential closure. Untranslatable words
/// become keyword atoms object(word, K); never throws on content.
Query translate_query(std::string_view text, const Translator& translator);

struct SearchConfig {
  std::size_t M = 15;
  std::size_t N = 10;
  std::size_t O = 5;
  std::size_t budget = 10000;  // rule applications per stage
  std::size_t depth = 4;       // postulate applications along one goal's ancestry
  double theta = 0.8;          // forwarded to query translation
  std::array<bool, kStageCount> enabled{true, true, true, true, true, true, true};
  Stage stage_max = Stage::KeywordFallback;

  // Throws Error unless 0 < O < N < M and theta in (0, 1].
  void validate() const;
  bool runs(Stage stage) const;
  void enable(Stage stage, bool on) { enabled[static_cast<std::size_t>(stage)] = on; }
};

/// One resolved goal: by a fact, or by a postulate whose body goals are the children.
struct ProofNode {
  enum class Kind : std::uint8_t { Fact, Postulate };
  Kind kind = Kind::Fact;
  std::string goal;  // goal as bound at the end of the proof
  std::size_t fact = 0;
  std::size_t postulate = 0;
  int isa_hops = 0;
  std::vector<ProofNode> children;
};

struct MatchResult {
  std::uint32_t doc = 0;
  std::optional<std::uint32_t> frag;  // empty: document scope
  Stage stage = Stage::DirectFragment;
  double coverage = 1.0;
  double cost = 0.0;
  bool ambiguous = false;
  std::vector<std::pair<std::string, std::string>> bindings;  // query variable -> term ("_" for witnesses)
  std::size_t postulate_applications = 0;
  std::size_t isa_hops = 0;
  std::size_t inferences = 0;
  std::vector<ProofNode> trace;
  std::vector<std::size_t> support;   // fact ids, ascending
  std::vector<std::size_t> retained;  // query atom indices this match covers
  std::vector<std::string> overlap;   // keyword fallback only

  std::pair<std::uint32_t, std::uint32_t> passage() const { return {doc, frag.value_or(0)}; }
};

enum class Scope : std::uint8_t { Fragment, Document };

struct ProveOptions {
  Scope scope = Scope::Fragment;
  std::optional<Level> max_level;  // postulates up to this level; none = facts only
  bool isa = false;
  std::size_t budget = 0;
  std::size_t depth = 4;
  std::size_t max_inferences = 2000000;  // hard stop against runaway joins
};

struct ProveOutcome {
  std::vector<MatchResult> matches;
  std::size_t applications = 0;
  bool budget_exhausted = false;
};

/// Depth-first resolution of the conjunction under one scope. Results are
/// deduplicated per (passage, canonical bindings), keeping the cheapest proof.
/// Document-scope results need support from at least two fragments; single
/// fragment proofs belong to fragment scope.
ProveOutcome prove(const std::vector<Atom>& goals, const ProveOptions& options, const KnowledgeBase& kb);

std::vector<MatchResult> prove_direct(const Query& q, Scope scope, const KnowledgeBase& kb);
ProveOutcome prove_with_postulates(const Query& q, Level max_level, std::size_t budget, const KnowledgeBase& kb,
                                   Scope scope = Scope::Fragment, std::size_t depth = 4);

double level_weight(Level level);
double coverage_of(const Query& q, const std::vector<std::size_t>& retained);

/// One relaxation step. Each part is proved as a separate sub-query.
struct Rung {
  enum class Kind : std::uint8_t { Full, DropL3, DropL2, Components, Singletons };
  Kind kind = Kind::Full;
  std::vector<std::vector<std::size_t>> parts;  // query atom indices
  std::vector<std::size_t> retained() const;
};
std::string_view to_string(Rung::Kind kind);

/// Full query, without L3, without L2, L1 variable-connected components, single
/// atoms. The two dropping rungs are skipped when empty or unchanged; a single
/// atom query has one rung.
std::vector<Rung> decompose(const Query& q);

/// Content constants of atoms: constant arguments other than the structural
/// by_with_for / of markers, plus the predicate of an atom with no constants.
std::vector<std::string> content_constants(const std::vector<Atom>& atoms);

/// Passages sharing at least one content constant with the query.
std::vector<MatchResult> keyword_fallback(const Query& q, const KnowledgeBase& kb);

struct StageReport {
  Stage stage = Stage::DirectFragment;
  bool ran = false;
  std::string note;  // why it was skipped, or rung details
  std::size_t new_passages = 0;
  std::size_t passages_after = 0;
  std::size_t applications = 0;
  bool budget_exhausted = false;
};

struct SearchResult {
  std::vector<MatchResult> matches;  // one per passage, in discovery order
  std::vector<StageReport> stages;
};

/// Staged controller: direct proofs, then postulates (L2, L3) while results are
/// scarcer than N, then inheritance and decomposition while scarcer than O,
/// then keywords when nothing was found.
SearchResult variable_depth_search(const Query& q, const SearchConfig& config, const KnowledgeBase& kb);

/// Runs many queries; the parallel path distributes queries over threads,
/// the serial path is the reference.
std::vector<SearchResult> search_batch(const std::vector<Query>& queries, const SearchConfig& config,
                                       const KnowledgeBase& kb, bool parallel = true);

}  // namespace logdoc
