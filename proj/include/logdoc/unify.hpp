#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "logdoc/term.hpp"

namespace logdoc {

/// Acyclic sub -> super links between constants with a reflexive-transitive
/// closure. The closure is rebuilt on every insertion; hierarchies are small.
class IsaHierarchy {
 public:
  // Throws Error naming the link if it would close a cycle.
  void add(const std::string& sub, const std::string& super);

  // Number of hops from `sub` up to `super` (0 when equal), or nullopt.
  std::optional<int> distance(const std::string& sub, const std::string& super) const;

  const std::set<std::pair<std::string, std::string>>& links() const { return links_; }
  bool empty() const { return links_.empty(); }

  friend bool operator==(const IsaHierarchy& a, const IsaHierarchy& b) { return a.links_ == b.links_; }

 private:
  void rebuild();

  std::set<std::pair<std::string, std::string>> links_;
  // sub -> (ancestor -> shortest hop count)
  std::map<std::string, std::map<std::string, int>> ancestors_;
};

/// Read handle onto an isa hierarchy. Disabled views behave as the empty hierarchy.
struct IsaView {
  const IsaHierarchy* hierarchy = nullptr;
  bool enabled = false;

  static IsaView off() { return {}; }
  static IsaView on(const IsaHierarchy& h) { return {&h, true}; }

  // Does query constant `general` match fact constant `specific`?
  std::optional<int> descent(const std::string& general, const std::string& specific) const;
};

struct Unifier {
  Substitution sigma;
  int isa_hops = 0;
};

/// Most general unifier of two flat atoms. `a` is the query side: with isa
/// enabled, a constant in `a` also matches any descendant constant in `b`.
std::optional<Unifier> unify_atoms(const Atom& a, const Atom& b, const IsaView& isa = {});

/// apply(result, t) == apply(s2, apply(s1, t)).
Substitution compose_substitutions(const Substitution& s1, const Substitution& s2);

/// Incremental binding store used by the prover: triangular bindings with an
/// undo trail, so backtracking is O(bindings undone).
class BindingStore {
 public:
  Term resolve(const Term& t) const;
  Atom resolve(const Atom& a) const;

  std::size_t mark() const { return trail_.size(); }
  void undo(std::size_t mark);

  // Unifies a (query side) with b under the current bindings. On failure the
  // store is left unchanged. Adds isa hops to *hops when non-null.
  bool unify(const Atom& a, const Atom& b, const IsaView& isa, int* hops = nullptr);
  bool unify_terms(const Term& a, const Term& b, const IsaView& isa, int* hops);
  void bind(const std::string& var, Term value);

  Substitution snapshot(const std::vector<std::string>& vars) const;

 private:
  std::map<std::string, Term> bound_;
  std::vector<std::string> trail_;
};

}  // namespace logdoc
