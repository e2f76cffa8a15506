#include "logdoc/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

#include "logdoc/text.hpp"

namespace logdoc {

bool Scheme::lexicalized() const {
  return std::find(slots.begin(), slots.end(), "verb") == slots.end();
}

bool Scheme::has_event() const {
  return std::find(slots.begin(), slots.end(), "event") != slots.end();
}

SchemeTable SchemeTable::parse(std::string_view text, const std::string& origin) {
  SchemeTable table;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    auto where = origin + ":" + std::to_string(lineno) + ": ";
    if (line.rfind("evtype ", 0) != 0) throw SyntaxError(where + "expected 'evtype'", line, 0);
    auto eq = line.find('=');
    if (eq == std::string::npos) throw SyntaxError(where + "expected '='", line, 0);
    Scheme s;
    s.evtype = trim(line.substr(7, eq - 7));
    if (!is_constant_symbol(s.evtype)) throw SyntaxError(where + "invalid evtype name", line, 7);
    std::istringstream slots(line.substr(eq + 1));
    for (std::string slot; std::getline(slots, slot, ',');) {
      slot = trim(slot);
      if (slot.empty()) throw SyntaxError(where + "empty slot", line, eq + 1);
      s.slots.push_back(slot);
    }
    if (s.slots.empty()) throw SyntaxError(where + "scheme without slots", line, eq + 1);
    table.add(std::move(s));
  }
  return table;
}

SchemeTable SchemeTable::load(const std::string& path) { return parse(read_file(path), path); }

void SchemeTable::add(Scheme scheme) {
  auto name = scheme.evtype;
  schemes_.insert_or_assign(std::move(name), std::move(scheme));
}

const Scheme& SchemeTable::at(const std::string& evtype) const {
  auto it = schemes_.find(evtype);
  if (it == schemes_.end()) throw Error("no scheme for eventuality type '" + evtype + "'");
  return it->second;
}

LevelTable LevelTable::parse(std::string_view text, const std::string& origin) {
  LevelTable table;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    auto where = origin + ":" + std::to_string(lineno) + ": ";
    auto eq = line.find('=');
    if (eq == std::string::npos) throw SyntaxError(where + "expected '='", line, 0);
    std::string key = trim(line.substr(0, eq));
    if (key.find('/') == std::string::npos) throw SyntaxError(where + "expected predicate/arity", line, 0);
    auto level = parse_level(trim(line.substr(eq + 1)));
    if (!level) throw SyntaxError(where + "unknown level", line, eq + 1);
    table.set(key, *level);
  }
  return table;
}

LevelTable LevelTable::load(const std::string& path) { return parse(read_file(path), path); }

void LevelTable::set(const std::string& key, Level level) { levels_.insert_or_assign(key, level); }

std::optional<Level> LevelTable::find(const std::string& key) const {
  auto it = levels_.find(key);
  if (it == levels_.end()) return std::nullopt;
  return it->second;
}

Level LevelTable::classify(const Atom& atom) const {
  auto level = find(atom.key());
  if (!level) throw Error("level table has no entry for " + atom.key());
  return *level;
}

std::vector<Atom> existential_closure(const std::vector<Atom>& atoms, std::uint32_t& next_skolem) {
  std::map<std::string, Term> assigned;
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (const auto& atom : atoms) {
    Atom ground{atom.predicate, {}, atom.level};
    for (const auto& t : atom.args) {
      if (!t.is_variable()) {
        ground.args.push_back(t);
        continue;
      }
      auto it = assigned.find(t.name());
      if (it == assigned.end()) it = assigned.emplace(t.name(), Term::skolem(next_skolem++)).first;
      ground.args.push_back(it->second);
    }
    out.push_back(std::move(ground));
  }
  return out;
}

bool formulas_equivalent(const std::vector<Atom>& a, const std::vector<Atom>& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  std::map<std::string, std::string> fwd, bwd;

  std::function<bool(std::size_t)> match = [&](std::size_t i) -> bool {
    if (i == a.size()) return true;
    const Atom& x = a[i];
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const Atom& y = b[j];
      if (x.predicate != y.predicate || x.args.size() != y.args.size() || x.level != y.level) continue;
      std::vector<std::string> added;
      bool ok = true;
      for (std::size_t k = 0; k < x.args.size() && ok; ++k) {
        const Term& s = x.args[k];
        const Term& t = y.args[k];
        if (s.is_variable() != t.is_variable()) {
          ok = false;
        } else if (!s.is_variable()) {
          ok = s == t;
        } else {
          auto f = fwd.find(s.name());
          auto g = bwd.find(t.name());
          if (f == fwd.end() && g == bwd.end()) {
            fwd[s.name()] = t.name();
            bwd[t.name()] = s.name();
            added.push_back(s.name());
          } else {
            ok = f != fwd.end() && g != bwd.end() && f->second == t.name();
          }
        }
      }
      if (ok) {
        used[j] = true;
        if (match(i + 1)) return true;
        used[j] = false;
      }
      for (const auto& v : added) {
        bwd.erase(fwd[v]);
        fwd.erase(v);
      }
    }
    return false;
  };
  return match(0);
}

std::vector<ScoredFormula> collapse_equivalent(std::vector<ScoredFormula> formulas) {
  std::vector<ScoredFormula> out;
  for (auto& f : formulas) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const ScoredFormula& r) { return formulas_equivalent(r.atoms, f.atoms); });
    if (it == out.end()) {
      out.push_back(std::move(f));
    } else if (f.score > it->score) {
      *it = std::move(f);
    }
  }
  return out;
}

namespace {

struct NounItem {
  const LexEntry* entry;
  std::uint32_t pos;
};

struct Sem {
  const LexEntry* entry = nullptr;  // lexical daughters
  std::uint32_t pos = 0;
  std::vector<NounItem> nouns;      // Ns
  std::optional<Term> ref;          // NP referent, or event of VP / S
  std::vector<Atom> atoms;
  std::string rel_pred;             // relational head waiting for its argument
  bool rel_open = false;
  const LexEntry* verb = nullptr;   // VP
  std::vector<Term> objects;
  std::vector<Atom> mods;
};

class Composer {
 public:
  Composer(const Translator& t, const Chart& chart) : t_(t), chart_(chart) {
    collect_leaves();
  }

  OpenFormula run(std::uint32_t root) {
    Sem sem = build(root);
    const auto& cat = chart_.edge(root).category;
    std::vector<Atom> atoms;
    if (cat == "VP") {
      atoms = finish_clause(Term::variable(fresh("x")), {}, std::move(sem));
    } else {
      atoms = std::move(sem.atoms);
      if (cat == "Nom" && sem.rel_open) atoms.push_back(rel_atom(sem, Term::variable(fresh("y"))));
    }
    OpenFormula out;
    for (auto& a : atoms) {
      a.level = t_.levels().classify(a);
      out.atoms.push_back(std::move(a));
    }
    out.referents = std::move(referents_);
    return out;
  }

 private:
  void collect_leaves() {
    for (const auto& e : chart_.edges())
      if (e.lexical() && e.entry->category == Category::PName) pnames_[e.start] = e.entry;
  }

  std::string fresh(const std::string& hint) {
    char letter = 'X';
    if (!hint.empty() && std::isalpha(static_cast<unsigned char>(hint[0])))
      letter = static_cast<char>(std::toupper(static_cast<unsigned char>(hint[0])));
    int n = ++counts_[letter];
    return n == 1 ? std::string(1, letter) : std::string(1, letter) + std::to_string(n);
  }

  static Atom atom(std::string pred, std::vector<Term> args) {
    return Atom{std::move(pred), std::move(args), Level::L1};
  }

  Atom rel_atom(const Sem& sem, Term arg) const { return atom(sem.rel_pred, {*sem.ref, std::move(arg)}); }

  Atom modifier(const PrepTarget& target, const Term& host, const Term& value) const {
    switch (target.kind) {
      case PrepTarget::Kind::Core: return atom(target.symbol, {host, value});
      case PrepTarget::Kind::Circ:
        return atom("circumstance", {Term::constant(target.symbol), host, value});
      case PrepTarget::Kind::Rel: return atom(target.symbol, {value, host});
    }
    throw CompositionFailure("unknown preposition target");
  }

  // Builds the eventuality atom of `scheme` from filled role slots.
  Atom scheme_atom(const Scheme& scheme, const std::string& verb, const Term& event,
                   const std::map<std::string, Term>& roles) {
    std::vector<Term> args;
    for (const auto& slot : scheme.slots) {
      if (slot == "verb") {
        args.push_back(Term::constant(verb));
      } else if (slot == "event") {
        args.push_back(event);
      } else if (auto it = roles.find(slot); it != roles.end()) {
        args.push_back(it->second);
      } else {
        args.push_back(Term::variable(fresh(slot)));
      }
    }
    return atom(scheme.lexicalized() ? verb : scheme.evtype, std::move(args));
  }

  Sem build(std::uint32_t id) {
    const auto& e = chart_.edge(id);
    if (e.lexical()) {
      Sem s;
      s.entry = e.entry;
      s.pos = e.start;
      if (e.entry->category == Category::PName) s.ref = Term::constant(e.entry->lemma);
      return s;
    }
    std::vector<Sem> kids;
    for (auto c : e.children) kids.push_back(build(c));
    const auto& builder = t_.grammar().rules().at(static_cast<std::size_t>(e.rule)).builder;
    Sem out;
    if (builder == "noun") {
      out.nouns = {{kids[0].entry, kids[0].pos}};
    } else if (builder == "compound") {
      out.nouns = {{kids[0].entry, kids[0].pos}};
      out.nouns.insert(out.nouns.end(), kids[1].nouns.begin(), kids[1].nouns.end());
    } else if (builder == "nominal") {
      out = nominal(kids[0].nouns);
    } else if (builder == "adjective") {
      out = std::move(kids[1]);
      out.atoms.push_back(atom("property", {Term::constant(kids[0].entry->lemma), *out.ref}));
    } else if (builder == "np") {
      out = noun_phrase(std::move(kids));
      referents_.insert_or_assign(id, *out.ref);
    } else if (builder == "np_name") {
      out.ref = kids[0].ref;
      referents_.insert_or_assign(id, *out.ref);
    } else if (builder == "pp") {
      out = std::move(kids[1]);
      out.entry = kids[0].entry;
    } else if (builder == "vp") {
      out.verb = kids[0].entry;
      out.ref = Term::variable(fresh("event"));
      for (std::size_t k = 1; k < kids.size(); ++k) {
        out.objects.push_back(*kids[k].ref);
        out.atoms.insert(out.atoms.end(), kids[k].atoms.begin(), kids[k].atoms.end());
      }
    } else if (builder == "vp_adjunct") {
      out = std::move(kids[0]);
      attach_to_event(out.mods, *out.ref, kids[1]);
    } else if (builder == "clause") {
      Term event = *kids[1].ref;
      out.atoms = finish_clause(*kids[0].ref, std::move(kids[0].atoms), std::move(kids[1]));
      out.ref = event;
    } else if (builder == "s_adjunct") {
      out = std::move(kids[1]);
      attach_to_event(out.atoms, *out.ref, kids[0]);
    } else if (builder == "pass") {
      out = std::move(kids[0]);
    } else {
      throw CompositionFailure("unknown semantic builder '" + builder + "'");
    }
    return out;
  }

  void attach_to_event(std::vector<Atom>& sink, const Term& event, Sem& adjunct) {
    const LexEntry* head = adjunct.entry;
    if (head == nullptr || !head->target) throw CompositionFailure("adjunct without a target");
    if (head->category == Category::Adv) {
      sink.push_back(modifier(*head->target, event, Term::constant(head->lemma)));
      return;
    }
    sink.push_back(modifier(*head->target, event, *adjunct.ref));
    sink.insert(sink.end(), adjunct.atoms.begin(), adjunct.atoms.end());
  }

  // Flat noun-noun compound, right-headed.
  Sem nominal(const std::vector<NounItem>& nouns) {
    const std::size_t k = nouns.size();
    const std::size_t head = k - 1;
    std::vector<Term> refs;
    std::vector<bool> consumed(k, false);
    auto deverbal = [&](std::size_t i) { return nouns[i].entry->deverbal.has_value(); };

    for (std::size_t i = 0; i < k; ++i) {
      const auto* e = nouns[i].entry;
      if (deverbal(i)) {
        const auto& scheme = t_.schemes().at(e->deverbal->evtype);
        refs.push_back(Term::variable(fresh(scheme.has_event() ? "event" : "x")));
      } else {
        refs.push_back(Term::variable(fresh(e->lemma)));
      }
    }

    Sem out;
    out.ref = refs[head];
    for (std::size_t i = 0; i < k; ++i) {
      if (deverbal(i)) continue;
      const auto* e = nouns[i].entry;
      out.atoms.push_back(atom("object", {Term::constant(e->lemma), refs[i]}));
      if (!e->property.empty())
        out.atoms.push_back(atom("property", {Term::constant(e->property), refs[i]}));
      if (e->category == Category::RelN && i != head)
        out.atoms.push_back(atom(e->relation, {refs[i], Term::variable(fresh("y"))}));
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (!deverbal(i)) continue;
      const auto& dv = *nouns[i].entry->deverbal;
      const auto& scheme = t_.schemes().at(dv.evtype);
      std::map<std::string, Term> roles;
      if (i > 0 && !deverbal(i - 1) && !consumed[i - 1]) {
        roles.emplace("aff_ent", refs[i - 1]);
        consumed[i - 1] = true;
      }
      if (i != head) roles.emplace("agent", refs[head]);
      out.atoms.push_back(scheme_atom(scheme, dv.verb, refs[i], roles));
    }
    const auto* head_entry = nouns[head].entry;
    if (head_entry->category == Category::RelN && !deverbal(head)) {
      out.rel_pred = head_entry->relation;
      out.rel_open = true;
      for (std::size_t j = head; j-- > 0;) {
        if (deverbal(j) || consumed[j]) continue;
        out.atoms.push_back(rel_atom(out, refs[j]));
        consumed[j] = true;
        out.rel_open = false;
        break;
      }
    }
    for (std::size_t j = 0; j < head; ++j) {
      if (deverbal(j) || consumed[j]) continue;
      out.atoms.push_back(
          atom("circumstance", {Term::constant("by_with_for"), refs[head], refs[j]}));
    }
    return out;
  }

  Sem noun_phrase(std::vector<Sem> kids) {
    Sem out;
    const LexEntry* poss = nullptr;
    std::uint32_t poss_pos = 0;
    std::vector<Atom> tail;
    for (auto& kid : kids) {
      if (kid.entry && kid.entry->category == Category::Det) continue;
      if (kid.entry && kid.entry->category == Category::Poss) {
        poss = kid.entry;
        poss_pos = kid.pos;
        continue;
      }
      if (!out.ref) {
        out = std::move(kid);
        out.entry = nullptr;
        continue;
      }
      // Trailing PP.
      const LexEntry* prep = kid.entry;
      if (prep == nullptr || !prep->target) throw CompositionFailure("PP without preposition");
      if (prep->relational_argument && out.rel_open) {
        tail.push_back(rel_atom(out, *kid.ref));
        out.rel_open = false;
      } else {
        tail.push_back(modifier(*prep->target, *out.ref, *kid.ref));
      }
      tail.insert(tail.end(), kid.atoms.begin(), kid.atoms.end());
    }
    if (!out.ref) throw CompositionFailure("noun phrase without a head");
    if (out.rel_open) {
      out.atoms.push_back(rel_atom(out, Term::variable(fresh("y"))));
      out.rel_open = false;
    }
    if (poss) {
      // Possessive pronoun: nearest preceding proper name in the fragment.
      std::optional<Term> owner;
      for (const auto& [pos, entry] : pnames_)
        if (pos < poss_pos) owner = Term::constant(entry->lemma);
      if (!owner) owner = Term::variable(fresh("z"));
      out.atoms.push_back(atom("circumstance", {Term::constant("of"), *out.ref, *owner}));
    }
    out.atoms.insert(out.atoms.end(), tail.begin(), tail.end());
    return out;
  }

  std::vector<Atom> finish_clause(Term subject, std::vector<Atom> subject_atoms, Sem vp) {
    const auto& frame = *vp.verb->frame;
    std::map<std::string, Term> roles;
    roles.emplace(frame.roles[0], subject);
    if (vp.objects.size() == 1) {
      roles.emplace(frame.object, vp.objects[0]);
    } else if (vp.objects.size() == 2) {
      if (frame.double_object.size() != 2)
        throw CompositionFailure("verb '" + vp.verb->lemma + "' takes no double object");
      roles.emplace(frame.double_object[0], vp.objects[0]);
      roles.emplace(frame.double_object[1], vp.objects[1]);
    } else if (vp.objects.size() > 2) {
      throw CompositionFailure("too many objects");
    }
    for (const auto& role : frame.roles)
      if (!roles.count(role))
        throw CompositionFailure("verb '" + vp.verb->lemma + "' leaves obligatory role '" + role +
                                 "' unfilled");
    const auto& scheme = t_.schemes().at(frame.evtype);
    std::vector<Atom> atoms{scheme_atom(scheme, vp.verb->lemma, *vp.ref, roles)};
    atoms.insert(atoms.end(), subject_atoms.begin(), subject_atoms.end());
    atoms.insert(atoms.end(), vp.atoms.begin(), vp.atoms.end());
    atoms.insert(atoms.end(), vp.mods.begin(), vp.mods.end());
    return atoms;
  }

  const Translator& t_;
  const Chart& chart_;
  std::map<std::uint32_t, const LexEntry*> pnames_;
  std::map<char, int> counts_;
  std::map<std::uint32_t, Term> referents_;
};

}  // namespace

Translator::Translator(Lexicon lexicon, Grammar grammar, SchemeTable schemes, LevelTable levels,
                       TranslatorOptions options)
    : lexicon_(std::move(lexicon)),
      grammar_(std::move(grammar)),
      schemes_(std::move(schemes)),
      levels_(std::move(levels)),
      options_(options) {
  for (const auto& e : lexicon_.entries()) {
    if (e.frame && !schemes_.contains(e.frame->evtype))
      throw Error("verb '" + e.lemma + "' uses unknown eventuality type '" + e.frame->evtype + "'");
    if (e.deverbal && !schemes_.contains(e.deverbal->evtype))
      throw Error("noun '" + e.lemma + "' uses unknown eventuality type '" + e.deverbal->evtype + "'");
  }
  register_lexical_levels();
}

void Translator::register_lexical_levels() {
  auto ensure = [&](const std::string& key, Level level) {
    if (!levels_.find(key)) levels_.set(key, level);
  };
  for (const auto& e : lexicon_.entries()) {
    if (e.category == Category::RelN) ensure(e.relation + "/2", Level::L1);
    if (e.target && e.target->kind == PrepTarget::Kind::Rel) ensure(e.target->symbol + "/2", Level::L1);
    auto lexicalized = [&](const std::string& evtype, const std::string& verb) {
      const auto& s = schemes_.at(evtype);
      if (s.lexicalized()) ensure(verb + "/" + std::to_string(s.slots.size()), Level::L1);
    };
    if (e.frame) lexicalized(e.frame->evtype, e.lemma);
    if (e.deverbal) lexicalized(e.deverbal->evtype, e.deverbal->verb);
  }
  for (const auto& [name, s] : schemes_.schemes())
    if (!s.lexicalized()) ensure(name + "/" + std::to_string(s.slots.size()), Level::L1);
}

Chart Translator::parse(const std::vector<std::string>& tokens) const {
  return chart_parse(tokens, grammar_, lexicon_, options_.max_edges);
}

OpenFormula Translator::compose(const Chart& chart, std::uint32_t edge) const {
  return Composer(*this, chart).run(edge);
}

std::vector<std::vector<Atom>> Translator::compose_readings(
    const Chart& chart, const std::vector<std::uint32_t>& edges) const {
  struct Candidate {
    Reading reading;
    std::vector<Atom> atoms;
  };
  std::vector<Candidate> ok;
  for (auto id : edges) {
    try {
      auto formula = compose(chart, id);
      ok.push_back({score_reading(chart, id, grammar_, options_.weights), std::move(formula.atoms)});
    } catch (const CompositionFailure&) {
    }
  }
  if (ok.empty()) return {};
  std::vector<Reading> readings;
  for (const auto& c : ok) readings.push_back(c.reading);
  auto kept = prune_by_proportional_distance(std::move(readings), options_.theta);

  std::vector<ScoredFormula> scored;
  for (const auto& r : kept)
    for (auto& c : ok)
      if (c.reading.root == r.root) scored.push_back({c.atoms, r.score});
  std::stable_sort(scored.begin(), scored.end(),
                   [](const ScoredFormula& a, const ScoredFormula& b) { return a.score > b.score; });
  std::vector<std::vector<Atom>> out;
  for (auto& f : collapse_equivalent(std::move(scored))) out.push_back(std::move(f.atoms));
  return out;
}

void Translator::analyze_span(const Chart& chart, std::uint32_t start, std::uint32_t end,
                              std::uint32_t max_length, FragmentAnalysis& out) const {
  const auto& tokens = chart.tokens();
  for (const auto& piece : cover_span(chart, start, end, max_length)) {
    if (piece.word) {
      const auto& token = tokens[piece.start];
      auto entries = lexicon_.lookup(token);
      FragmentAnalysis::Piece p;
      if (entries.empty()) {
        p.keywords.push_back(token);
      } else if (!entries.front()->is_closed_class()) {
        p.keywords.push_back(entries.front()->lemma);
      }
      if (!p.keywords.empty() && is_constant_symbol(p.keywords.front())) out.pieces.push_back(std::move(p));
      continue;
    }
    const auto& chosen = chart.edge(piece.edge);
    std::vector<std::uint32_t> same;
    for (const auto& e : chart.edges())
      if (e.start == chosen.start && e.end == chosen.end && e.category == chosen.category)
        same.push_back(e.ordinal);
    auto readings = compose_readings(chart, same);
    if (readings.empty()) {
      analyze_span(chart, piece.start, piece.end, piece.end - piece.start - 1, out);
    } else {
      out.pieces.push_back({std::move(readings), {}});
    }
  }
}

FragmentAnalysis Translator::analyze(std::string_view fragment_text) const {
  auto tokens = tokenize(fragment_text);
  if (tokens.empty()) throw Error("empty fragment");
  Chart chart = parse(tokens);
  FragmentAnalysis out;
  auto roots = chart.roots();
  out.spanning_readings = roots.size();
  if (!roots.empty()) {
    auto readings = compose_readings(chart, roots);
    if (!readings.empty()) {
      out.parsed = true;
      out.pieces.push_back({std::move(readings), {}});
      return out;
    }
  }
  const auto n = static_cast<std::uint32_t>(tokens.size());
  analyze_span(chart, 0, n, roots.empty() ? n : n - 1, out);
  return out;
}

FragmentFacts close_fragment(const FragmentAnalysis& analysis, std::uint32_t doc, std::uint32_t frag,
                             std::uint32_t& next_skolem, std::uint32_t& next_group) {
  FragmentFacts out;
  out.parse_failure = !analysis.parsed;
  auto emit = [&](const std::vector<Atom>& atoms, std::optional<std::uint32_t> group) {
    for (auto& a : existential_closure(atoms, next_skolem)) {
      Fact f{std::move(a), {doc, frag}, group};
      check_fact(f);
      out.facts.push_back(std::move(f));
    }
  };
  for (const auto& piece : analysis.pieces) {
    for (const auto& kw : piece.keywords)
      emit({Atom{"object", {Term::constant(kw), Term::variable("K")}, Level::L3}}, std::nullopt);
    if (piece.readings.size() == 1) {
      emit(piece.readings.front(), std::nullopt);
    } else {
      for (const auto& reading : piece.readings) emit(reading, next_group++);
      out.groups += piece.readings.size();
    }
  }
  return out;
}

FragmentFacts translate_fragment(const Translator& translator, std::string_view fragment_text,
                                 std::uint32_t doc, std::uint32_t frag, std::uint32_t& next_skolem,
                                 std::uint32_t& next_group) {
  return close_fragment(translator.analyze(fragment_text), doc, frag, next_skolem, next_group);
}

}  // namespace logdoc
