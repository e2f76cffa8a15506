#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "logdoc/knowledge_base.hpp"
#include "logdoc/prover.hpp"

namespace logdoc {

struct RankedResult {
  std::size_t rank = 0;  // 1-based
  MatchResult match;
  std::string text;                  // passage text; for document scope, the matched fragments
  std::vector<std::uint32_t> fragments;  // fragments the result points at
};

/// Strict weak order used by rank(): stage, fragment before document scope,
/// categorical before ambiguous, coverage descending, cost ascending, (doc, frag).
bool ranks_before(const MatchResult& a, const MatchResult& b);

/// Sorts, truncates to `limit` and resolves passage texts.
std::vector<RankedResult> rank(std::vector<MatchResult> matches, const KnowledgeBase& kb, std::size_t limit);

struct PassageSpan {
  std::string text;
  std::size_t offset = 0;  // into Document::text
  std::size_t length = 0;
};

/// Throws Error for an unknown passage.
PassageSpan resolve_passage(std::uint32_t doc, std::uint32_t frag, const KnowledgeBase& kb);

/// `rank <n> doc=<d> frag=<f|*> stage=<s> coverage=<c> cost=<k> ambiguous=<0|1>`
std::string format_structured(const RankedResult& r);
/// Multi-line human rendering of one result.
std::string format_human(const RankedResult& r);
/// Proof tree with facts, postulates (name and weight), bindings and provenance.
std::string explain(const RankedResult& r, const KnowledgeBase& kb);
/// One line per controller stage.
std::string format_stages(const SearchResult& result);

}  // namespace logdoc
