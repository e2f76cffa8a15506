#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "logdoc/semantics.hpp"
#include "logdoc/term.hpp"
#include "logdoc/unify.hpp"

namespace logdoc {

/// Horn rule `head <- body` used backwards by the prover.
///   X != Y       inequality between two variables, checked once both are bound
///   prec(i,j)    body atom i is supported textually before body atom j (1-based)
///   ex(V,...)    head variables that receive a fresh witness on application
struct MeaningPostulate {
  Atom head;
  std::vector<Atom> body;
  Level level = Level::L2;
  double weight = 1.0;
  std::vector<std::pair<std::string, std::string>> not_equal;
  std::vector<std::pair<std::size_t, std::size_t>> precedes;
  std::vector<std::string> existential;

  // "circumstance/3#1": head key plus 1-based position in the library.
  std::string name;

  std::string str() const;  // `post` line
};

/// Parses one `post ...` line. Throws SyntaxError.
MeaningPostulate parse_postulate(std::string_view line);
std::vector<MeaningPostulate> parse_postulates(std::string_view text, const std::string& origin = "<postulates>");

struct IngestReport {
  std::uint32_t doc = 0;
  std::size_t fragments = 0;
  std::size_t facts = 0;
  std::size_t groups = 0;
  std::size_t parse_failures = 0;
};

struct Document {
  std::uint32_t id = 0;
  std::vector<std::string> fragments;  // frag k is fragments[k-1]
  std::string text;                    // fragments joined by '\n'
};

/// Fact store with back-pointers. Mutable during the ingest phase only;
/// seal() turns it into a read-only snapshot.
class KnowledgeBase {
 public:
  // --- ingest phase ---
  IngestReport ingest_document(const Translator& translator, std::string_view text, std::uint32_t doc);
  // Translates documents concurrently when `parallel`; skolems and group ids
  // are still handed out in document order, so the result equals the serial run.
  std::vector<IngestReport> ingest_documents(const Translator& translator,
                                             const std::vector<std::pair<std::uint32_t, std::string>>& docs,
                                             bool parallel = true);

  // Low-level population (tests, loaders). Fragment texts are stored verbatim.
  void add_document(std::uint32_t doc, std::vector<std::string> fragments);
  std::size_t add_fact(Fact fact);
  void add_postulate(MeaningPostulate postulate);
  std::size_t load_postulates(const std::string& path);
  std::size_t add_postulates(std::string_view text, const std::string& origin = "<postulates>");
  void add_isa(const std::string& sub, const std::string& super);
  std::size_t load_isa(const std::string& path);
  void set_skolem_counter(std::uint32_t next);

  void seal() { sealed_ = true; }
  // Unsealed copy to grow into the next snapshot.
  KnowledgeBase reopened() const {
    KnowledgeBase next = *this;
    next.sealed_ = false;
    return next;
  }
  bool sealed() const { return sealed_; }

  // --- read side ---
  const std::vector<Fact>& facts() const { return facts_; }
  const Fact& fact(std::size_t id) const { return facts_.at(id); }
  // Fact ids with the given predicate and arity, in insertion order.
  const std::vector<std::size_t>& candidates(const std::string& predicate, std::size_t arity) const;
  const std::vector<std::size_t>& candidates(const std::string& key) const;
  // Same, restricted to one passage or one document.
  const std::vector<std::size_t>& candidates_in(const std::string& key, std::uint32_t doc,
                                                std::uint32_t frag) const;
  const std::vector<std::size_t>& candidates_in(const std::string& key, std::uint32_t doc) const;
  // All fact ids of one passage.
  const std::vector<std::size_t>& passage_facts(std::uint32_t doc, std::uint32_t frag) const;

  const std::map<std::uint32_t, Document>& documents() const { return docs_; }
  const Document* document(std::uint32_t doc) const;
  // Throws Error when (doc, frag) is unknown.
  const std::string& fragment_text(std::uint32_t doc, std::uint32_t frag) const;

  const std::vector<MeaningPostulate>& postulates() const { return postulates_; }
  const IsaHierarchy& isa() const { return isa_; }
  std::uint32_t skolem_counter() const { return next_skolem_; }
  std::uint32_t group_counter() const { return next_group_; }

  // --- persistence ---
  std::string serialize() const;
  void save(const std::string& path) const;
  static KnowledgeBase deserialize(std::string_view text);
  static KnowledgeBase load(const std::string& path);

 private:
  void require_open() const;
  void require_fresh(std::uint32_t doc) const;
  IngestReport store(std::uint32_t doc, const std::vector<std::string>& fragments,
                     const std::vector<FragmentAnalysis>& analyses);

  std::vector<Fact> facts_;
  std::map<std::string, std::vector<std::size_t>> by_key_;
  std::map<std::tuple<std::string, std::uint32_t, std::uint32_t>, std::vector<std::size_t>> by_passage_key_;
  std::map<std::pair<std::string, std::uint32_t>, std::vector<std::size_t>> by_doc_key_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::size_t>> by_passage_;
  std::map<std::uint32_t, Document> docs_;
  std::vector<MeaningPostulate> postulates_;
  IsaHierarchy isa_;
  std::vector<std::pair<std::string, std::string>> isa_order_;
  std::uint32_t next_skolem_ = 1;
  std::uint32_t next_group_ = 1;
  bool sealed_ = false;
};

}  // namespace logdoc
