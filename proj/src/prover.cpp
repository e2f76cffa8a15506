#include "logdoc/prover.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "logdoc/text.hpp"
#include "logdoc/unify.hpp"

namespace logdoc {

namespace {
constexpr std::array<std::string_view, kStageCount> kStageNames{
    "DirectFragment", "DirectDocument", "PostulatesL2", "PostulatesL3",
    "Inheritance",    "Decomposition",  "KeywordFallback"};
}

std::string_view to_string(Stage stage) { return kStageNames[static_cast<std::size_t>(stage)]; }

std::optional<Stage> parse_stage(std::string_view text) {
  for (std::size_t i = 0; i < kStageCount; ++i)
    if (kStageNames[i] == text) return kAllStages[i];
  return std::nullopt;
}

std::vector<std::string> Query::variables() const {
  std::vector<std::string> out;
  for (const auto& a : atoms)
    for (const auto& t : a.args)
      if (t.is_variable() && std::find(out.begin(), out.end(), t.name()) == out.end())
        out.push_back(t.name());
  return out;
}

std::string Query::str() const {
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    out += (i ? ", " : "") + atoms[i].str() + "/" + kFragmentScopeVar + "/" + kDocumentScopeVar;
  return out;
}

Query make_query(std::vector<Atom> atoms, std::string text) {
  for (const auto& a : atoms)
    for (const auto& t : a.args)
      if (t.is_variable() && (t.name() == kFragmentScopeVar || t.name() == kDocumentScopeVar))
        throw Error("query variable " + t.name() + " is reserved for scope");
  Query q;
  q.atoms = std::move(atoms);
  q.text = std::move(text);
  return q;
}

Query translate_query(std::string_view text, const Translator& translator) {
  Query q;
  q.text = std::string(text);
  auto tokens = tokenize(text);
  std::size_t keyword_var = 0;
  auto keyword = [&](const std::string& word) {
    if (!is_constant_symbol(word)) return;
    q.atoms.push_back(
        Atom{"object", {Term::constant(word), Term::variable("K" + std::to_string(++keyword_var))}, Level::L3});
  };
  if (tokens.empty()) {
    q.keyword_only = true;
    return q;
  }
  FragmentAnalysis analysis;
  try {
    analysis = translator.analyze(text);
  } catch (const Error&) {
    for (const auto& t : tokens) keyword(t);
    q.keyword_only = true;
    return q;
  }
  bool any_reading = false;
  const bool rename = analysis.pieces.size() > 1;
  for (std::size_t p = 0; p < analysis.pieces.size(); ++p) {
    const auto& piece = analysis.pieces[p];
    for (const auto& kw : piece.keywords) keyword(kw);
    if (piece.readings.empty()) continue;
    any_reading = true;
    for (auto atom : piece.readings.front()) {
      if (rename)
        for (auto& t : atom.args)
          if (t.is_variable()) t = Term::variable(t.name() + "_" + std::to_string(p + 1));
      q.atoms.push_back(std::move(atom));
    }
  }
  q.keyword_only = !any_reading;
  return q;
}

void SearchConfig::validate() const {
  if (!(O > 0 && O < N && N < M))
    throw Error("search thresholds must satisfy 0 < O < N < M (got M=" + std::to_string(M) +
                ", N=" + std::to_string(N) + ", O=" + std::to_string(O) + ")");
  if (!(theta > 0.0 && theta <= 1.0)) throw Error("theta must lie in (0, 1]");
  if (depth == 0) throw Error("postulate depth must be positive");
}

bool SearchConfig::runs(Stage stage) const {
  return enabled[static_cast<std::size_t>(stage)] && stage <= stage_max;
}

// ---------------------------------------------------------------------------
// Resolution engine

namespace {

struct Pending {
  bool check = false;  // side-condition check of application `app`
  Atom atom;
  int depth = 0;
  int parent = -1;  // trace node of the postulate application that introduced this goal
  int app = -1;
  std::vector<std::pair<int, std::size_t>> owners;  // (application, body index) ancestry
};

struct TraceEntry {
  ProofNode::Kind kind;
  Atom goal;
  std::size_t fact = 0;
  std::size_t postulate = 0;
  int hops = 0;
  int parent = -1;
};

struct Application {
  std::size_t postulate;
  std::map<std::string, std::string> renamed;  // original var -> renamed var
  std::vector<std::size_t> first_support;      // per body atom, smallest fact id; npos if none
};

constexpr std::size_t kNoSupport = static_cast<std::size_t>(-1);

class Engine {
 public:
  Engine(const KnowledgeBase& kb, const ProveOptions& opt) : kb_(kb), opt_(opt) {
    if (opt_.isa) isa_ = IsaView::on(kb.isa());
  }

  ProveOutcome run(const std::vector<Atom>& goals) {
    query_vars_.clear();
    for (const auto& a : goals)
      for (const auto& t : a.args)
        if (t.is_variable() && std::find(query_vars_.begin(), query_vars_.end(), t.name()) == query_vars_.end())
          query_vars_.push_back(t.name());
    std::vector<Pending> pending;
    for (const auto& g : goals) pending.push_back(Pending{false, g, 0, -1, -1, {}});
    if (!goals.empty()) solve(std::move(pending));
    ProveOutcome out;
    for (auto& [key, m] : results_) out.matches.push_back(std::move(m));
    std::sort(out.matches.begin(), out.matches.end(), [](const MatchResult& a, const MatchResult& b) {
      return a.passage() < b.passage();
    });
    out.applications = applications_;
    out.budget_exhausted = exhausted_;
    return out;
  }

 private:
  const std::vector<std::size_t>& candidates(const std::string& key) const {
    if (!doc_) return kb_.candidates(key);
    if (opt_.scope == Scope::Fragment) return kb_.candidates_in(key, *doc_, *frag_);
    return kb_.candidates_in(key, *doc_);
  }

  bool postulates_allowed(const Pending& g) const {
    return opt_.max_level && g.depth < static_cast<int>(opt_.depth);
  }

  std::size_t estimate(const Pending& g) const {
    std::size_t n = candidates(g.atom.key()).size();
    if (postulates_allowed(g))
      for (const auto& p : kb_.postulates())
        if (p.level <= *opt_.max_level && p.head.predicate == g.atom.predicate &&
            p.head.args.size() == g.atom.args.size())
          n += 1;
    return n;
  }

  bool check_ready(const Pending& c, const std::vector<Pending>& pending) const {
    for (const auto& g : pending) {
      if (g.check) continue;
      for (const auto& [app, idx] : g.owners)
        if (app == c.app) return false;
    }
    return true;
  }

  bool conditions_hold(const Application& a) const {
    const auto& p = kb_.postulates()[a.postulate];
    auto var = [&](const std::string& v) { return store_.resolve(Term::variable(a.renamed.at(v))); };
    for (const auto& [x, y] : p.not_equal)
      if (var(x) == var(y)) return false;
    for (const auto& [i, j] : p.precedes) {
      auto si = a.first_support[i - 1], sj = a.first_support[j - 1];
      if (si == kNoSupport || sj == kNoSupport) return false;
      const auto& fi = kb_.fact(si);
      const auto& fj = kb_.fact(sj);
      if (std::pair(fi.prov.frag, si) >= std::pair(fj.prov.frag, sj)) return false;
    }
    return true;
  }

  void solve(std::vector<Pending> pending) {
    if (inferences_ >= opt_.max_inferences) {
      exhausted_ = true;
      return;
    }
    if (pending.empty()) {
      record();
      return;
    }
    // Side-condition checks run as soon as their body is proved.
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (!pending[i].check || !check_ready(pending[i], pending)) continue;
      if (!conditions_hold(apps_[pending[i].app])) return;
      pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(i));
      solve(std::move(pending));
      return;
    }
    // Cheapest goal first.
    std::size_t best = pending.size();
    std::size_t best_cost = 0;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (pending[i].check) continue;
      auto c = estimate(pending[i]);
      if (best == pending.size() || c < best_cost) {
        best = i;
        best_cost = c;
      }
    }
    Pending goal = pending[best];
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));
    resolve_with_facts(goal, pending);
    resolve_with_postulates(goal, pending);
  }

  void resolve_with_facts(const Pending& goal, const std::vector<Pending>& rest) {
    const auto ids = candidates(goal.atom.key());  // copy: the scope may change below
    for (auto id : ids) {
      const Fact& f = kb_.fact(id);
      std::pair<std::uint32_t, std::uint32_t> passage{f.prov.doc, f.prov.frag};
      if (f.group) {
        auto it = groups_.find(passage);
        if (it != groups_.end() && it->second != *f.group) continue;
      }
      auto mark = store_.mark();
      int hops = 0;
      if (!store_.unify(goal.atom, f.atom, isa_, &hops)) continue;

      const bool fixes_scope = !doc_;
      if (fixes_scope) {
        doc_ = f.prov.doc;
        frag_ = f.prov.frag;
      }
      const bool adds_group = f.group && !groups_.count(passage);
      if (adds_group) groups_[passage] = *f.group;
      std::vector<std::tuple<int, std::size_t, std::size_t>> saved;
      for (const auto& [app, idx] : goal.owners) {
        auto& slot = apps_[app].first_support[idx];
        saved.emplace_back(app, idx, slot);
        if (slot == kNoSupport || id < slot) slot = id;
      }
      trace_.push_back(TraceEntry{ProofNode::Kind::Fact, goal.atom, id, 0, hops, goal.parent});
      ++inferences_;

      solve(rest);

      --inferences_;
      trace_.pop_back();
      for (auto it = saved.rbegin(); it != saved.rend(); ++it)
        apps_[std::get<0>(*it)].first_support[std::get<1>(*it)] = std::get<2>(*it);
      if (adds_group) groups_.erase(passage);
      if (fixes_scope) {
        doc_.reset();
        frag_.reset();
      }
      store_.undo(mark);
    }
  }

  void resolve_with_postulates(const Pending& goal, const std::vector<Pending>& rest) {
    if (!postulates_allowed(goal)) return;
    const auto& library = kb_.postulates();
    for (std::size_t pi = 0; pi < library.size(); ++pi) {
      const auto& p = library[pi];
      if (p.level > *opt_.max_level || p.head.predicate != goal.atom.predicate ||
          p.head.args.size() != goal.atom.args.size())
        continue;
      if (applications_ >= opt_.budget) {
        exhausted_ = true;
        return;
      }
      Application app{pi, {}, std::vector<std::size_t>(p.body.size(), kNoSupport)};
      const auto tag = "_" + std::to_string(++rename_counter_) + "_";
      auto rename = [&](const Atom& a) {
        Atom out = a;
        for (auto& t : out.args)
          if (t.is_variable()) {
            auto fresh = tag + t.name();
            app.renamed.emplace(t.name(), fresh);
            t = Term::variable(fresh);
          }
        return out;
      };
      Atom head = rename(p.head);
      std::vector<Atom> body;
      for (const auto& b : p.body) body.push_back(rename(b));

      auto mark = store_.mark();
      int hops = 0;
      if (!store_.unify(goal.atom, head, isa_, &hops)) continue;
      bool ok = true;
      for (const auto& v : p.existential) {
        Term t = store_.resolve(Term::variable(app.renamed.at(v)));
        if (!t.is_variable()) {
          ok = false;
          break;
        }
        store_.bind(t.name(), Term::witness(++witness_counter_));
      }
      if (!ok) {
        store_.undo(mark);
        continue;
      }
      ++applications_;
      const int app_id = static_cast<int>(apps_.size());
      apps_.push_back(std::move(app));
      const int node = static_cast<int>(trace_.size());
      trace_.push_back(TraceEntry{ProofNode::Kind::Postulate, goal.atom, 0, pi, hops, goal.parent});
      ++inferences_;

      std::vector<Pending> next = rest;
      for (std::size_t i = 0; i < body.size(); ++i) {
        Pending g{false, body[i], goal.depth + 1, node, -1, goal.owners};
        g.owners.emplace_back(app_id, i);
        next.push_back(std::move(g));
      }
      if (!p.not_equal.empty() || !p.precedes.empty()) {
        Pending c;
        c.check = true;
        c.app = app_id;
        next.push_back(std::move(c));
      }
      solve(std::move(next));

      --inferences_;
      trace_.pop_back();
      apps_.pop_back();
      store_.undo(mark);
    }
  }

  std::string render(const Term& t) const {
    Term r = store_.resolve(t);
    if (r.is_witness() || r.is_variable()) return "_";
    return r.str();
  }

  void record() {
    if (!doc_) return;
    std::vector<std::size_t> support;
    std::set<std::uint32_t> frags;
    for (const auto& e : trace_)
      if (e.kind == ProofNode::Kind::Fact) {
        support.push_back(e.fact);
        frags.insert(kb_.fact(e.fact).prov.frag);
      }
    if (opt_.scope == Scope::Document && frags.size() < 2) return;

    MatchResult m;
    m.doc = *doc_;
    if (opt_.scope == Scope::Fragment) m.frag = *frag_;
    std::string key = std::to_string(m.doc) + "/" + std::to_string(m.frag.value_or(0));
    for (const auto& v : query_vars_) {
      m.bindings.emplace_back(v, render(Term::variable(v)));
      key += "|" + v + "=" + m.bindings.back().second;
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    m.support = std::move(support);
    double weights = 0;
    for (const auto& e : trace_) {
      if (e.kind == ProofNode::Kind::Postulate) {
        ++m.postulate_applications;
        weights += kb_.postulates()[e.postulate].weight;
      }
      m.isa_hops += static_cast<std::size_t>(e.hops);
    }
    m.inferences = trace_.size();
    for (auto id : m.support)
      if (kb_.fact(id).group) m.ambiguous = true;
    m.cost = static_cast<double>(m.inferences) + weights + static_cast<double>(m.isa_hops);
    m.trace = build_trace();

    auto it = results_.find(key);
    if (it == results_.end()) {
      results_.emplace(std::move(key), std::move(m));
    } else if (m.cost < it->second.cost) {
      it->second = std::move(m);
    }
  }

  std::vector<ProofNode> build_trace() const {
    std::vector<ProofNode> nodes(trace_.size());
    for (std::size_t i = 0; i < trace_.size(); ++i) {
      const auto& e = trace_[i];
      nodes[i].kind = e.kind;
      nodes[i].goal = store_.resolve(e.goal).str();
      nodes[i].fact = e.fact;
      nodes[i].postulate = e.postulate;
      nodes[i].isa_hops = e.hops;
    }
    // Children always come after their parent; assemble back to front.
    std::vector<ProofNode> roots;
    for (std::size_t i = trace_.size(); i-- > 0;) {
      const int parent = trace_[i].parent;
      auto& bucket = parent < 0 ? roots : nodes[static_cast<std::size_t>(parent)].children;
      bucket.insert(bucket.begin(), std::move(nodes[i]));
    }
    return roots;
  }

  const KnowledgeBase& kb_;
  ProveOptions opt_;
  IsaView isa_;
  BindingStore store_;
  std::vector<std::string> query_vars_;
  std::optional<std::uint32_t> doc_, frag_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> groups_;
  std::vector<TraceEntry> trace_;
  std::vector<Application> apps_;
  std::map<std::string, MatchResult> results_;
  std::size_t applications_ = 0;
  std::size_t inferences_ = 0;
  std::size_t rename_counter_ = 0;
  std::uint32_t witness_counter_ = 0;
  bool exhausted_ = false;
};

}  // namespace

ProveOutcome prove(const std::vector<Atom>& goals, const ProveOptions& options, const KnowledgeBase& kb) {
  return Engine(kb, options).run(goals);
}

std::vector<MatchResult> prove_direct(const Query& q, Scope scope, const KnowledgeBase& kb) {
  ProveOptions opt;
  opt.scope = scope;
  auto out = prove(q.atoms, opt, kb).matches;
  for (auto& m : out) m.stage = scope == Scope::Fragment ? Stage::DirectFragment : Stage::DirectDocument;
  return out;
}

ProveOutcome prove_with_postulates(const Query& q, Level max_level, std::size_t budget, const KnowledgeBase& kb,
                                   Scope scope, std::size_t depth) {
  ProveOptions opt;
  opt.scope = scope;
  opt.max_level = max_level;
  opt.budget = budget;
  opt.depth = depth;
  auto out = prove(q.atoms, opt, kb);
  for (auto& m : out.matches) m.stage = max_level == Level::L2 ? Stage::PostulatesL2 : Stage::PostulatesL3;
  return out;
}

// ---------------------------------------------------------------------------
// Decomposition

double level_weight(Level level) {
  switch (level) {
    case Level::L1: return 3.0;
    case Level::L2: return 2.0;
    case Level::L3: return 1.0;
    case Level::Aux: return 0.0;
  }
  return 0.0;
}

double coverage_of(const Query& q, const std::vector<std::size_t>& retained) {
  double total = 0, kept = 0;
  for (const auto& a : q.atoms) total += level_weight(a.level);
  for (auto i : retained) kept += level_weight(q.atoms.at(i).level);
  return total > 0 ? kept / total : 0.0;
}

std::vector<std::size_t> Rung::retained() const {
  std::vector<std::size_t> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string_view to_string(Rung::Kind kind) {
  switch (kind) {
    case Rung::Kind::Full: return "full";
    case Rung::Kind::DropL3: return "drop-L3";
    case Rung::Kind::DropL2: return "drop-L2";
    case Rung::Kind::Components: return "L1-components";
    case Rung::Kind::Singletons: return "singletons";
  }
  return "?";
}

std::vector<Rung> decompose(const Query& q) {
  const std::size_t n = q.atoms.size();
  std::vector<Rung> ladder;
  if (n == 0) return ladder;
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  ladder.push_back({Rung::Kind::Full, {all}});
  if (n == 1) return ladder;

  auto keep_upto = [&](Level max) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
      if (q.atoms[i].level <= max) out.push_back(i);
    return out;
  };
  auto push = [&](Rung::Kind kind, std::vector<std::vector<std::size_t>> parts) {
    Rung r{kind, std::move(parts)};
    if (r.retained().empty()) return;
    if (r.parts == ladder.back().parts) return;
    ladder.push_back(std::move(r));
  };
  auto l2 = keep_upto(Level::L2);
  auto l1 = keep_upto(Level::L1);
  push(Rung::Kind::DropL3, {l2});
  push(Rung::Kind::DropL2, {l1});

  // Variable-connected components of the L1 atoms (union-find over shared variables).
  std::vector<std::size_t> parent(l1.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  std::map<std::string, std::size_t> owner;
  for (std::size_t i = 0; i < l1.size(); ++i)
    for (const auto& t : q.atoms[l1[i]].args) {
      if (!t.is_variable()) continue;
      auto [it, fresh] = owner.emplace(t.name(), i);
      if (!fresh) parent[find(i)] = find(it->second);
    }
  std::map<std::size_t, std::vector<std::size_t>> comps;
  for (std::size_t i = 0; i < l1.size(); ++i) comps[find(i)].push_back(l1[i]);
  std::vector<std::vector<std::size_t>> components;
  for (auto& [root, members] : comps) components.push_back(std::move(members));
  std::sort(components.begin(), components.end());
  if (!components.empty()) ladder.push_back({Rung::Kind::Components, components});

  std::vector<std::vector<std::size_t>> singles;
  for (std::size_t i = 0; i < n; ++i) singles.push_back({i});
  ladder.push_back({Rung::Kind::Singletons, singles});
  return ladder;
}

// ---------------------------------------------------------------------------
// Keyword fallback

std::vector<std::string> content_constants(const std::vector<Atom>& atoms) {
  std::set<std::string> out;
  for (const auto& a : atoms) {
    bool has_constant = false;
    for (const auto& t : a.args) {
      if (!t.is_constant()) continue;
      has_constant = true;
      if (t.name() != "by_with_for" && t.name() != "of") out.insert(t.name());
    }
    if (!has_constant) out.insert(a.predicate);
  }
  return {out.begin(), out.end()};
}

std::vector<MatchResult> keyword_fallback(const Query& q, const KnowledgeBase& kb) {
  std::vector<MatchResult> out;
  const auto wanted = content_constants(q.atoms);
  if (wanted.empty()) return out;
  for (const auto& [id, doc] : kb.documents()) {
    for (std::uint32_t k = 1; k <= doc.fragments.size(); ++k) {
      std::vector<Atom> atoms;
      for (auto fid : kb.passage_facts(id, k)) atoms.push_back(kb.fact(fid).atom);
      const auto have = content_constants(atoms);
      std::vector<std::string> common;
      std::set_intersection(wanted.begin(), wanted.end(), have.begin(), have.end(), std::back_inserter(common));
      if (common.empty()) continue;
      MatchResult m;
      m.doc = id;
      m.frag = k;
      m.stage = Stage::KeywordFallback;
      m.coverage = static_cast<double>(common.size()) / static_cast<double>(wanted.size());
      m.cost = 0;
      m.overlap = std::move(common);
      out.push_back(std::move(m));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Controller

namespace {

class Controller {
 public:
  Controller(const Query& q, const SearchConfig& cfg, const KnowledgeBase& kb) : q_(q), cfg_(cfg), kb_(kb) {
    all_.resize(q.atoms.size());
    for (std::size_t i = 0; i < all_.size(); ++i) all_[i] = i;
  }

  SearchResult run() {
    stage(Stage::DirectFragment, true, "", [&](StageReport& r) { direct(r, Scope::Fragment); });
    stage(Stage::DirectDocument, true, "", [&](StageReport& r) { direct(r, Scope::Document); });
    // Enough direct results end the search: no relaxation of any kind.
    const bool scarce = count() < cfg_.N;
    const char* enough = "at least N direct results";
    stage(Stage::PostulatesL2, scarce, enough, [&](StageReport& r) {
      deductive(r, q_.atoms, all_, level_for(Stage::PostulatesL2), false);
    });
    stage(Stage::PostulatesL3, scarce, enough, [&](StageReport& r) {
      deductive(r, q_.atoms, all_, level_for(Stage::PostulatesL3), false);
    });
    stage(Stage::Inheritance, scarce && count() < cfg_.O, scarce ? "at least O results" : enough,
          [&](StageReport& r) { deductive(r, q_.atoms, all_, strongest_level(), true); });
    stage(Stage::Decomposition, scarce && count() < cfg_.O, scarce ? "at least O results" : enough,
          [&](StageReport& r) { decomposition(r); });
    stage(Stage::KeywordFallback, count() == 0, "deductive results exist", [&](StageReport& r) {
      absorb(r, keyword_fallback(q_, kb_));
    });
    return std::move(out_);
  }

 private:
  std::size_t count() const { return found_.size(); }

  std::optional<Level> level_for(Stage s) const {
    return s == Stage::PostulatesL2 ? std::optional(Level::L2) : std::optional(Level::L3);
  }

  // Postulate machinery enabled so far, for the inheritance and decomposition stages.
  std::optional<Level> strongest_level() const {
    if (cfg_.runs(Stage::PostulatesL3)) return Level::L3;
    if (cfg_.runs(Stage::PostulatesL2)) return Level::L2;
    return std::nullopt;
  }

  template <class F>
  void stage(Stage s, bool needed, const char* why_not, F&& body) {
    StageReport r;
    r.stage = s;
    current_ = s;
    if (!cfg_.runs(s)) {
      r.note = s > cfg_.stage_max ? "beyond stage cap" : "disabled";
    } else if (!needed) {
      r.note = why_not;
    } else {
      r.ran = true;
      body(r);
    }
    r.passages_after = count();
    out_.stages.push_back(std::move(r));
  }

  void absorb(StageReport& r, std::vector<MatchResult> matches) {
    // Best match per new passage: higher coverage, then lower cost, then discovery order.
    std::map<std::pair<std::uint32_t, std::uint32_t>, MatchResult> fresh;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> order;
    for (auto& m : matches) {
      m.stage = current_;
      if (m.retained.empty() && current_ != Stage::KeywordFallback) m.retained = all_;
      auto key = m.passage();
      if (found_.count(key)) continue;
      auto it = fresh.find(key);
      if (it == fresh.end()) {
        order.push_back(key);
        fresh.emplace(key, std::move(m));
      } else if (m.coverage > it->second.coverage ||
                 (m.coverage == it->second.coverage && m.cost < it->second.cost)) {
        it->second = std::move(m);
      }
    }
    for (const auto& key : order) {
      found_.insert(key);
      out_.matches.push_back(std::move(fresh.at(key)));
      ++r.new_passages;
    }
  }

  void direct(StageReport& r, Scope scope) {
    ProveOptions opt;
    opt.scope = scope;
    absorb(r, prove(q_.atoms, opt, kb_).matches);
  }

  // Proves `atoms` at fragment then document scope with the given machinery,
  // drawing on the stage budget.
  std::vector<MatchResult> run_scopes(StageReport& r, const std::vector<Atom>& atoms, std::optional<Level> level,
                                      bool isa) {
    std::vector<MatchResult> all;
    for (auto scope : {Scope::Fragment, Scope::Document}) {
      ProveOptions opt;
      opt.scope = scope;
      opt.max_level = level;
      opt.isa = isa;
      opt.depth = cfg_.depth;
      opt.budget = cfg_.budget > r.applications ? cfg_.budget - r.applications : 0;
      auto outcome = prove(atoms, opt, kb_);
      r.applications += outcome.applications;
      r.budget_exhausted = r.budget_exhausted || outcome.budget_exhausted;
      for (auto& m : outcome.matches) all.push_back(std::move(m));
    }
    return all;
  }

  void deductive(StageReport& r, const std::vector<Atom>& atoms, const std::vector<std::size_t>& retained,
                 std::optional<Level> level, bool isa) {
    auto matches = run_scopes(r, atoms, level, isa);
    for (auto& m : matches) {
      m.retained = retained;
      m.coverage = coverage_of(q_, retained);
    }
    absorb(r, std::move(matches));
  }

  void decomposition(StageReport& r) {
    const bool isa = cfg_.runs(Stage::Inheritance);
    const auto level = strongest_level();
    auto ladder = decompose(q_);
    std::string note;
    for (std::size_t i = 1; i < ladder.size(); ++i) {
      const auto& rung = ladder[i];
      note += (note.empty() ? "" : " ") + std::string(to_string(rung.kind));
      for (const auto& part : rung.parts) {
        std::vector<Atom> atoms;
        for (auto k : part) atoms.push_back(q_.atoms[k]);
        deductive(r, atoms, part, level, isa);
      }
      if (count() >= cfg_.O) break;
    }
    r.note = note.empty() ? "nothing to relax" : "rungs: " + note;
  }

  const Query& q_;
  const SearchConfig& cfg_;
  const KnowledgeBase& kb_;
  std::vector<std::size_t> all_;
  Stage current_ = Stage::DirectFragment;
  std::set<std::pair<std::uint32_t, std::uint32_t>> found_;
  SearchResult out_;
};

}  // namespace

SearchResult variable_depth_search(const Query& q, const SearchConfig& config, const KnowledgeBase& kb) {
  if (config.M == 0) throw Error("M must be positive");
  return Controller(q, config, kb).run();
}

std::vector<SearchResult> search_batch(const std::vector<Query>& queries, const SearchConfig& config,
                                       const KnowledgeBase& kb, bool parallel) {
  if (config.M == 0) throw Error("M must be positive");
  std::vector<SearchResult> out(queries.size());
  const auto n = static_cast<std::int64_t>(queries.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::int64_t i = 0; i < n; ++i) out[i] = Controller(queries[i], config, kb).run();
  return out;
}

}  // namespace logdoc
