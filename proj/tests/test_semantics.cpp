#include <doctest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "logdoc/semantics.hpp"

using namespace logdoc;

namespace {

// Parsed atoms leveled by the shipped table when it knows the predicate.
std::vector<Atom> atoms(std::initializer_list<const char*> texts) {
  const auto& levels = fixtures::shared_translator().levels();
  std::vector<Atom> out;
  for (const char* t : texts) {
    auto a = parse_atom(t);
    if (auto l = levels.find(a.key())) a.level = *l;
    out.push_back(a);
  }
  return out;
}

std::vector<Atom> only(const std::vector<Atom>& in, std::set<std::string> predicates) {
  std::vector<Atom> out;
  for (const auto& a : in)
    if (predicates.count(a.predicate)) out.push_back(a);
  return out;
}

// Atoms with variables blanked out. Equal shapes are necessary for two
// formulas to be variants.
std::multiset<std::string> shape(const std::vector<Atom>& in) {
  std::multiset<std::string> out;
  for (const auto& a : in) {
    std::string s = a.predicate + "(";
    for (const auto& t : a.args) s += (t.is_variable() ? std::string("_") : t.str()) + ",";
    out.insert(s);
  }
  return out;
}

const std::vector<Atom> kExample11 = atoms({"property(natural,L)", "object(language,L)", "object(question,Q)",
                                            "object(system,S)", "eventuality(answer,E,S,Q)",
                                            "circumstance(by_with_for,S,L)"});

}  // namespace

TEST_SUITE("semantics") {
  TEST_CASE("scheme and level tables") {
    auto s = SchemeTable::parse("evtype locative = verb,event,agent,aff_ent,goal\nevtype relational = agent,aff_ent\n");
    CHECK(s.at("locative").slots.size() == 5);
    CHECK(s.at("relational").lexicalized());
    CHECK_FALSE(s.at("relational").has_event());
    CHECK_THROWS_AS(s.at("parameter"), Error);
    CHECK_THROWS_AS(SchemeTable::parse("evtype x ="), SyntaxError);

    auto l = LevelTable::parse("object/2 = L1\ntime/2 = L2\ncircumstance/3 = L3\n");
    CHECK(l.classify(parse_atom("time(sk-1,tuesday)")) == Level::L2);
    CHECK_THROWS_AS(l.classify(parse_atom("time(a)")), Error);
    CHECK_THROWS_AS(LevelTable::parse("object/2 = L7"), SyntaxError);
  }

  TEST_CASE("compound title composes to example 11") {
    const auto& t = fixtures::shared_translator();
    auto a = t.analyze("Natural language question answering systems");
    REQUIRE(a.parsed);
    REQUIRE(a.pieces.size() == 1);
    REQUIRE(a.pieces[0].readings.size() == 1);
    const auto& r = a.pieces[0].readings[0];
    CHECK(formulas_equivalent(r, kExample11));
    std::map<std::string, Level> want{{"property", Level::L2},  {"object", Level::L1},
                                      {"eventuality", Level::L1}, {"circumstance", Level::L3}};
    for (const auto& x : r) CHECK(x.level == want.at(x.predicate));
  }

  TEST_CASE("sentence 10 composes to example 10a on the verb attachment tree") {
    const auto& t = fixtures::shared_translator();
    auto chart = t.parse(tokenize("On Tuesday John gave Mary a nice computer table against her will"));
    const auto want = atoms({"locative(give,E,john,T,mary)", "object(table,T)", "object(computer,C)", "object(will,W)",
                             "property(nice,T)", "time(E,tuesday)", "circumstance(by_with_for,T,C)",
                             "circumstance(against,E,W)", "circumstance(of,W,mary)"});
    int found = 0;
    for (auto root : chart.roots()) {
      auto f = t.compose(chart, root).atoms;
      if (formulas_equivalent(f, want)) ++found;
    }
    CHECK(found == 1);
    CHECK(chart.roots().size() == 2);
  }

  TEST_CASE("simple ditransitive") {
    const auto& t = fixtures::shared_translator();
    auto a = t.analyze("John gave Mary an apple");
    REQUIRE(a.parsed);
    CHECK(formulas_equivalent(a.pieces[0].readings.at(0), atoms({"locative(give,E,john,A,mary)", "object(apple,A)"})));
  }

  TEST_CASE("title of document 3 carries the relational facts of 3c") {
    const auto& t = fixtures::shared_translator();
    auto a = t.analyze("Structure sharing representations of languages for unification based grammar formalisms");
    REQUIRE(a.parsed);
    const auto& r = a.pieces[0].readings.at(0);
    auto rel = only(r, {"representation", "share", "structure", "goal", "formalism", "grammar", "base"});
    CHECK(formulas_equivalent(rel, atoms({"representation(R,L)", "share(R,S)", "structure(S,Y)", "goal(F,R)",
                                          "formalism(F,G)", "grammar(G,Z)", "base(F,U)"})));
    // canonical object facts for the bare-noun atoms of 3c
    bool language_linked = false;
    for (const auto& x : r)
      if (x.predicate == "representation")
        for (const auto& y : r)
          if (y.predicate == "object" && y.args[0].name() == "language" && y.args[1] == x.args[1])
            language_linked = true;
    CHECK(language_linked);
    CHECK(std::any_of(r.begin(), r.end(), [](const Atom& x) {
      return x.predicate == "object" && x.args[0].name() == "unification";
    }));
  }

  TEST_CASE("existential closure") {
    auto f3b = atoms({"representation(R,L)", "language(L)", "share(R,S)", "structure(S,Y)", "goal(F,R)",
                      "formalism(F,G)", "grammar(G,Z)", "unification(U)", "base(F,U)"});
    std::uint32_t counter = 1;
    auto closed = existential_closure(f3b, counter);
    CHECK(counter == 9);
    std::vector<std::string> got;
    for (const auto& a : closed) got.push_back(a.str());
    CHECK(got == std::vector<std::string>{"representation(sk-1,sk-2)", "language(sk-2)", "share(sk-1,sk-3)",
                                          "structure(sk-3,sk-4)", "goal(sk-5,sk-1)", "formalism(sk-5,sk-6)",
                                          "grammar(sk-6,sk-7)", "unification(sk-8)", "base(sk-5,sk-8)"});

    auto ground = atoms({"time(sk-1,tuesday)"});
    counter = 5;
    CHECK(existential_closure(ground, counter) == ground);
    CHECK(counter == 5);

    counter = 41;
    auto p = existential_closure(atoms({"p(X)"}), counter);
    CHECK(p[0].str() == "p(sk-41)");
    CHECK(counter == 42);
  }

  TEST_CASE("equivalence and collapse") {
    CHECK(formulas_equivalent(atoms({"p(X)", "q(X)"}), atoms({"q(Y)", "p(Y)"})));
    CHECK_FALSE(formulas_equivalent(atoms({"p(X)", "q(X)"}), atoms({"p(X)", "q(Y)"})));
    CHECK_FALSE(formulas_equivalent(atoms({"p(X,Y)"}), atoms({"p(X,X)"})));
    CHECK_FALSE(formulas_equivalent(atoms({"p(X)", "p(X)"}), atoms({"p(X)"})));

    auto one = collapse_equivalent({{atoms({"p(X)", "q(X)"}), 1.0}, {atoms({"q(Y)", "p(Y)"}), 2.0}});
    REQUIRE(one.size() == 1);
    CHECK(one[0].score == 2.0);
    CHECK(collapse_equivalent({{atoms({"p(X)", "q(X)"}), 1.0}, {atoms({"p(X)", "q(Y)"}), 1.0}}).size() == 2);
    CHECK(collapse_equivalent({{atoms({"p(X)"}), 0.0}}).size() == 1);
  }

  TEST_CASE("collapsed readings are pairwise non-variants") {
    const auto& t = fixtures::shared_translator();
    for (const auto& [doc, text] : fixtures::corpus()) {
      for (const auto& frag : segment_fragments(text)) {
        auto a = t.analyze(frag.text);
        for (const auto& p : a.pieces)
          for (std::size_t i = 0; i < p.readings.size(); ++i)
            for (std::size_t j = i + 1; j < p.readings.size(); ++j)
              if (shape(p.readings[i]) == shape(p.readings[j]))
                CHECK_FALSE(formulas_equivalent(p.readings[i], p.readings[j]));
      }
    }
  }

  TEST_CASE("example 11 as annotated facts") {
    const auto& t = fixtures::shared_translator();
    std::uint32_t sk = 28, group = 1;
    auto out = translate_fragment(t, "Natural language question answering systems", 11, 1, sk, group);
    CHECK(out.facts.size() == 6);
    CHECK(out.groups == 0);
    CHECK_FALSE(out.parse_failure);
    CHECK(sk == 32);
    std::vector<std::string> lines;
    for (const auto& f : out.facts) lines.push_back(format_annotated(f));
    CHECK(std::find(lines.begin(), lines.end(), "eventuality(answer,sk-31,sk-30,sk-29)/1/11") != lines.end());
    for (const auto& f : out.facts) {
      CHECK(f.atom.is_ground());
      CHECK(f.prov == Provenance{11, 1});
      CHECK_FALSE(f.group);
    }
  }

  TEST_CASE("tied attachments become disjunct groups") {
    TranslatorOptions opts;
    opts.theta = 1.0;
    opts.weights = {0.0, 0.0};
    auto t = fixtures::translator(opts);
    std::uint32_t sk = 1, group = 1;
    auto out = translate_fragment(t, "john saw the man with the telescope", 20, 1, sk, group);
    CHECK(out.groups == 2);
    CHECK(group == 3);
    std::set<std::uint32_t> ids;
    for (const auto& f : out.facts) {
      REQUIRE(f.group);
      ids.insert(*f.group);
    }
    CHECK(ids == std::set<std::uint32_t>{1, 2});

    // default weights prefer the noun attachment outright
    sk = 1;
    group = 1;
    auto plain = translate_fragment(fixtures::shared_translator(), "john saw the man with the telescope", 20, 1, sk, group);
    CHECK(plain.groups == 0);
  }

  TEST_CASE("fallback pieces and keyword facts") {
    const auto& t = fixtures::shared_translator();
    std::uint32_t sk = 1, group = 1;
    auto out = translate_fragment(t, "the red table qqq the green table", 2, 1, sk, group);
    CHECK(out.parse_failure);
    int keyword = 0;
    for (const auto& f : out.facts)
      if (f.atom.predicate == "object" && f.atom.args[0].name() == "qqq") {
        ++keyword;
        CHECK(f.atom.level == Level::L3);
        CHECK(f.atom.args[1].is_skolem());
      }
    CHECK(keyword == 1);
    CHECK_THROWS_AS(translate_fragment(t, "  ", 2, 2, sk, group), Error);
  }

  TEST_CASE("translation is total over levels and deterministic") {
    const auto& t = fixtures::shared_translator();
    for (const auto& [doc, text] : fixtures::corpus()) {
      for (const auto& frag : segment_fragments(text)) {
        std::uint32_t sk1 = 1, g1 = 1, sk2 = 1, g2 = 1;
        auto a = translate_fragment(t, frag.text, doc, frag.id, sk1, g1);
        auto b = translate_fragment(t, frag.text, doc, frag.id, sk2, g2);
        CHECK(a.facts == b.facts);
        CHECK(sk1 == sk2);
        std::set<std::uint32_t> skolems;
        for (const auto& f : a.facts) {
          CHECK(f.atom.is_ground());
          CHECK(f.prov == Provenance{doc, frag.id});
          if (f.atom.level != Level::L3 || f.atom.predicate != "object")
            CHECK(t.levels().classify(f.atom) == f.atom.level);
          for (const auto& x : f.atom.args)
            if (x.is_skolem()) skolems.insert(x.index());
        }
        for (auto s : skolems) CHECK((s >= 1 && s < sk1));
      }
    }
  }
}
