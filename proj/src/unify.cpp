#include "logdoc/unify.hpp"

#include <deque>

namespace logdoc {

void IsaHierarchy::add(const std::string& sub, const std::string& super) {
  if (!is_constant_symbol(sub) || !is_constant_symbol(super))
    throw Error("isa link needs two constants: " + sub + " " + super);
  if (sub == super || distance(super, sub))
    throw Error("isa link " + sub + " -> " + super + " would create a cycle");
  links_.emplace(sub, super);
  rebuild();
}

std::optional<int> IsaHierarchy::distance(const std::string& sub, const std::string& super) const {
  if (sub == super) return 0;
  auto it = ancestors_.find(sub);
  if (it == ancestors_.end()) return std::nullopt;
  auto jt = it->second.find(super);
  if (jt == it->second.end()) return std::nullopt;
  return jt->second;
}

void IsaHierarchy::rebuild() {
  std::map<std::string, std::vector<std::string>> parents;
  for (const auto& [sub, super] : links_) parents[sub].push_back(super);
  ancestors_.clear();
  for (const auto& [start, _] : parents) {
    auto& seen = ancestors_[start];
    std::deque<std::pair<std::string, int>> queue{{start, 0}};
    while (!queue.empty()) {
      auto [node, hops] = queue.front();
      queue.pop_front();
      auto pt = parents.find(node);
      if (pt == parents.end()) continue;
      for (const auto& up : pt->second) {
        if (seen.emplace(up, hops + 1).second) queue.emplace_back(up, hops + 1);
      }
    }
  }
}

std::optional<int> IsaView::descent(const std::string& general, const std::string& specific) const {
  if (general == specific) return 0;
  if (!enabled || hierarchy == nullptr) return std::nullopt;
  return hierarchy->distance(specific, general);
}

namespace {

// Follows variable chains in a triangular substitution.
Term walk(const Substitution::Map& bound, Term t) {
  while (t.is_variable()) {
    auto it = bound.find(t.name());
    if (it == bound.end()) break;
    t = it->second;
  }
  return t;
}

}  // namespace

std::optional<Unifier> unify_atoms(const Atom& a, const Atom& b, const IsaView& isa) {
  if (a.predicate != b.predicate || a.args.size() != b.args.size()) return std::nullopt;
  Substitution::Map bound;
  int hops = 0;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    Term x = walk(bound, a.args[i]);
    Term y = walk(bound, b.args[i]);
    if (x == y) continue;
    if (x.is_variable()) {
      bound.insert_or_assign(x.name(), y);
    } else if (y.is_variable()) {
      bound.insert_or_assign(y.name(), x);
    } else if (x.is_constant() && y.is_constant()) {
      auto d = isa.descent(x.name(), y.name());
      if (!d) return std::nullopt;
      hops += *d;
    } else {
      return std::nullopt;
    }
  }
  // Resolve chains so the result is idempotent.
  Substitution sigma;
  for (const auto& [var, _] : bound) sigma.bind(var, walk(bound, Term::variable(var)));
  return Unifier{std::move(sigma), hops};
}

Substitution compose_substitutions(const Substitution& s1, const Substitution& s2) {
  Substitution out;
  for (const auto& [var, term] : s1) out.bind(var, s2.apply(term));
  for (const auto& [var, term] : s2)
    if (!s1.find(var)) out.bind(var, term);
  return out;
}

Term BindingStore::resolve(const Term& t) const { return walk(bound_, t); }

Atom BindingStore::resolve(const Atom& a) const {
  Atom out{a.predicate, {}, a.level};
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(resolve(t));
  return out;
}

void BindingStore::undo(std::size_t mark) {
  while (trail_.size() > mark) {
    bound_.erase(trail_.back());
    trail_.pop_back();
  }
}

void BindingStore::bind(const std::string& var, Term value) {
  bound_.insert_or_assign(var, std::move(value));
  trail_.push_back(var);
}

bool BindingStore::unify_terms(const Term& a, const Term& b, const IsaView& isa, int* hops) {
  Term x = resolve(a);
  Term y = resolve(b);
  if (x == y) return true;
  if (x.is_variable()) {
    bind(x.name(), y);
    return true;
  }
  if (y.is_variable()) {
    bind(y.name(), x);
    return true;
  }
  if (x.is_constant() && y.is_constant()) {
    auto d = isa.descent(x.name(), y.name());
    if (!d) return false;
    if (hops) *hops += *d;
    return true;
  }
  return false;
}

bool BindingStore::unify(const Atom& a, const Atom& b, const IsaView& isa, int* hops) {
  if (a.predicate != b.predicate || a.args.size() != b.args.size()) return false;
  std::size_t m = mark();
  int local = 0;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!unify_terms(a.args[i], b.args[i], isa, &local)) {
      undo(m);
      return false;
    }
  }
  if (hops) *hops += local;
  return true;
}

Substitution BindingStore::snapshot(const std::vector<std::string>& vars) const {
  Substitution s;
  for (const auto& v : vars) {
    Term t = resolve(Term::variable(v));
    if (!(t.is_variable() && t.name() == v)) s.bind(v, t);
  }
  return s;
}

}  // namespace logdoc
