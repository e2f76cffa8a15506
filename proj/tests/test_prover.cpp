#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "logdoc/prover.hpp"
#include "oracles.hpp"

using namespace logdoc;

namespace {

Atom leveled(const char* text, Level level = Level::L1) {
  auto a = parse_atom(text);
  a.level = level;
  return a;
}

std::set<std::pair<std::uint32_t, std::uint32_t>> passages(const std::vector<MatchResult>& ms) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> out;
  for (const auto& m : ms) out.insert(m.passage());
  return out;
}

std::string binding(const MatchResult& m, const std::string& var) {
  for (const auto& [v, t] : m.bindings)
    if (v == var) return t;
  return "";
}

// Passage 11 under the numbering of example 11.
KnowledgeBase passage11(std::uint32_t skolem_start = 28) {
  KnowledgeBase kb;
  kb.set_skolem_counter(skolem_start);
  kb.ingest_document(fixtures::shared_translator(), "Natural language question answering systems", 11);
  kb.load_postulates(fixtures::data("postulates.txt"));
  kb.seal();
  return kb;
}

std::size_t applications(const std::vector<ProofNode>& nodes) {
  std::size_t n = 0;
  for (const auto& p : nodes) n += (p.kind == ProofNode::Kind::Postulate) + applications(p.children);
  return n;
}

}  // namespace

TEST_SUITE("prover") {
  TEST_CASE("query translation keeps referents open") {
    const auto& t = fixtures::shared_translator();
    auto q = translate_query("Natural language questions", t);
    CHECK_FALSE(q.keyword_only);
    CHECK(formulas_equivalent(q.atoms, {leveled("object(question,Q)"), leveled("object(language,L)"),
                                        leveled("property(natural,L)", Level::L2),
                                        leveled("circumstance(by_with_for,Q,L)", Level::L3)}));
    CHECK(q.str().find("/_S/_D") != std::string::npos);

    auto q4 = translate_query("Structure sharing representations of languages for unification based grammar formalisms", t);
    std::set<std::string> preds;
    for (const auto& a : q4.atoms) {
      preds.insert(a.predicate);
      for (const auto& x : a.args) CHECK_FALSE(x.is_skolem());
    }
    for (const char* p : {"representation", "share", "structure", "object"}) CHECK(preds.count(p));

    auto kw = translate_query("qqq zzz", t);
    CHECK(kw.keyword_only);
    CHECK(content_constants(kw.atoms) == std::vector<std::string>{"qqq", "zzz"});
    for (const auto& a : kw.atoms) CHECK(a.level == Level::L3);

    CHECK_THROWS_AS(make_query({parse_atom("p(_S)")}), Error);
  }

  TEST_CASE("query 4a proves directly over document 3") {
    KnowledgeBase kb;
    const auto& t = fixtures::shared_translator();
    kb.ingest_document(t, fixtures::corpus().at(2).second, 3);
    kb.seal();
    auto q = make_query({leveled("representation(R,L)"), leveled("object(language,L)"), leveled("share(R,S)"),
                         leveled("structure(S,Y)")});
    auto ms = prove_direct(q, Scope::Fragment, kb);
    REQUIRE(ms.size() == 1);
    CHECK(ms[0].doc == 3);
    CHECK(ms[0].frag == 1u);
    CHECK(ms[0].postulate_applications == 0);
    CHECK(applications(ms[0].trace) == 0);
    CHECK(ms[0].coverage == 1.0);
  }

  TEST_CASE("fragment scope versus document scope") {
    KnowledgeBase kb;
    fixtures::add_passages(kb, 1, 2);
    kb.add_fact(fixtures::fact("representation(sk-1,sk-2)/1/1"));
    kb.add_fact(fixtures::fact("share(sk-1,sk-3)/2/1"));
    kb.seal();
    auto q = make_query({leveled("representation(R,L)"), leveled("share(R,S)")});
    CHECK(prove_direct(q, Scope::Fragment, kb).empty());
    auto doc = prove_direct(q, Scope::Document, kb);
    REQUIRE(doc.size() == 1);
    CHECK_FALSE(doc[0].frag);
    CHECK(doc[0].doc == 1);

    CHECK(prove_direct(make_query({leveled("absent(X)")}), Scope::Fragment, kb).empty());
  }

  TEST_CASE("query 12 reaches passage 11 through the by_with_for postulate") {
    auto kb = passage11();
    auto q = translate_query("Natural language questions", fixtures::shared_translator());
    CHECK(prove_direct(q, Scope::Fragment, kb).empty());

    auto out = prove_with_postulates(q, Level::L2, 10000, kb);
    REQUIRE(out.matches.size() == 1);
    const auto& m = out.matches[0];
    CHECK(m.passage() == std::pair<std::uint32_t, std::uint32_t>{11, 1});
    CHECK(m.postulate_applications == 1);
    CHECK(applications(m.trace) == 1);
    // question is sk-29, language sk-28 under example 11's numbering
    std::string q_var, l_var;
    for (const auto& a : q.atoms)
      if (a.predicate == "object") (a.args[0].name() == "question" ? q_var : l_var) = a.args[1].name();
    CHECK(binding(m, q_var) == "sk-29");
    CHECK(binding(m, l_var) == "sk-28");
    CHECK(m.cost == doctest::Approx(static_cast<double>(m.inferences) + 1.0));

    auto none = prove_with_postulates(q, Level::L2, 0, kb);
    CHECK(none.matches.empty());
    CHECK(none.applications == 0);
  }

  TEST_CASE("locative chaining") {
    KnowledgeBase kb;
    fixtures::add_passages(kb, 1, 2);
    kb.add_fact(fixtures::fact("locative(i1,roll,center1,p1,edge1,ball1)/1/1"));
    kb.add_fact(fixtures::fact("locative(i2,fall,edge1,p2,floor1,ball1)/2/1"));
    kb.load_postulates(fixtures::data("postulates.txt"));
    kb.seal();
    auto q = make_query({leveled("locative(I,move,center1,P,floor1,ball1)")});
    auto out = prove_with_postulates(q, Level::L2, 100, kb, Scope::Document);
    REQUIRE(out.matches.size() == 1);
    CHECK(out.matches[0].postulate_applications == 1);
    CHECK(binding(out.matches[0], "I") == "_");

    // reversed text order violates the precedence condition
    KnowledgeBase rev;
    fixtures::add_passages(rev, 1, 2);
    rev.add_fact(fixtures::fact("locative(i2,fall,edge1,p2,floor1,ball1)/1/1"));
    rev.add_fact(fixtures::fact("locative(i1,roll,center1,p1,edge1,ball1)/2/1"));
    rev.load_postulates(fixtures::data("postulates.txt"));
    rev.seal();
    CHECK(prove_with_postulates(q, Level::L2, 100, rev, Scope::Document).matches.empty());
  }

  TEST_CASE("action delegation needs level 3") {
    KnowledgeBase kb;
    fixtures::add_passages(kb, 1, 1);
    kb.add_fact(fixtures::fact("action(i1,order,king,carpenter,palace)/1/1"));
    kb.add_fact(fixtures::fact("action(i2,build,carpenter,house,palace)/1/1"));
    kb.load_postulates(fixtures::data("postulates.txt"));
    kb.seal();
    auto q = make_query({leveled("action(I,build,king,house,G)")});
    CHECK(prove_with_postulates(q, Level::L2, 100, kb).matches.empty());
    auto out = prove_with_postulates(q, Level::L3, 100, kb);
    REQUIRE(out.matches.size() == 1);
    CHECK(out.matches[0].cost == doctest::Approx(out.matches[0].inferences + 2.0));
    CHECK(binding(out.matches[0], "G") == "palace");
  }

  TEST_CASE("budget zero equals direct proving") {
    auto kb = fixtures::demo_kb();
    for (const auto& text : fixtures::queries()) {
      auto q = translate_query(text, fixtures::shared_translator());
      auto direct = prove_direct(q, Scope::Fragment, kb);
      auto gated = prove_with_postulates(q, Level::L3, 0, kb);
      CHECK(oracle::answers(gated.matches) == oracle::answers(direct));
      CHECK(gated.applications == 0);
    }
  }

  TEST_CASE("budget is respected") {
    auto kb = passage11();
    auto q = translate_query("Natural language questions", fixtures::shared_translator());
    for (std::size_t budget : {1u, 2u, 5u, 50u}) {
      auto out = prove_with_postulates(q, Level::L3, budget, kb);
      CHECK(out.applications <= budget);
      for (const auto& m : out.matches) CHECK(m.postulate_applications <= budget);
    }
  }

  TEST_CASE("isa hops relax constants") {
    KnowledgeBase kb;
    fixtures::add_passages(kb, 1, 1);
    kb.add_fact(fixtures::fact("object(oo_programming_language,sk-1)/1/1"));
    kb.add_isa("oo_programming_language", "programming_language");
    kb.add_isa("programming_language", "language");
    kb.seal();
    auto goals = std::vector<Atom>{leveled("object(language,X)")};
    ProveOptions off;
    CHECK(prove(goals, off, kb).matches.empty());
    ProveOptions on;
    on.isa = true;
    auto out = prove(goals, on, kb);
    REQUIRE(out.matches.size() == 1);
    CHECK(out.matches[0].isa_hops == 2);
    CHECK(out.matches[0].cost == doctest::Approx(out.matches[0].inferences + 2.0));
  }

  TEST_CASE("decomposition ladder") {
    auto mixed = make_query({leveled("locative(give,E,john,T,mary)"), leveled("time(E,tuesday)", Level::L2),
                             leveled("circumstance(against,E,W)", Level::L3)});
    auto rungs = decompose(mixed);
    REQUIRE(rungs.size() == 5);
    CHECK(rungs[0].kind == Rung::Kind::Full);
    CHECK(rungs[0].retained() == std::vector<std::size_t>{0, 1, 2});
    CHECK(rungs[1].kind == Rung::Kind::DropL3);
    CHECK(rungs[1].retained() == std::vector<std::size_t>{0, 1});
    CHECK(rungs[2].kind == Rung::Kind::DropL2);
    CHECK(rungs[2].retained() == std::vector<std::size_t>{0});
    CHECK(rungs[3].kind == Rung::Kind::Components);
    CHECK(rungs[3].parts.size() == 1);
    CHECK(rungs[4].kind == Rung::Kind::Singletons);
    CHECK(rungs[4].parts.size() == 3);
    CHECK(coverage_of(mixed, {0, 1}) == doctest::Approx(5.0 / 6.0));

    auto l1 = make_query({leveled("representation(R,L)"), leveled("share(R,S)"), leveled("structure(S,Y)")});
    auto r1 = decompose(l1);
    REQUIRE(r1.size() == 3);
    CHECK(r1[0].kind == Rung::Kind::Full);
    CHECK(r1[1].kind == Rung::Kind::Components);
    CHECK(r1[1].parts.size() == 1);
    CHECK(r1[2].kind == Rung::Kind::Singletons);

    auto two = make_query({leveled("object(a,X)"), leveled("object(b,Y)")});
    auto r2 = decompose(two);
    REQUIRE(r2.size() == 3);
    CHECK(r2[1].kind == Rung::Kind::Components);
    CHECK(r2[1].parts.size() == 2);

    CHECK(decompose(make_query({leveled("object(a,X)")})).size() == 1);
  }

  TEST_CASE("decomposition drops L3 before L2 on generated queries") {
    std::mt19937 rng(11);
    const Level levels[] = {Level::L1, Level::L2, Level::L3};
    for (int n = 0; n < 300; ++n) {
      std::vector<Atom> atoms;
      const std::size_t k = 2 + rng() % 4;
      for (std::size_t i = 0; i < k; ++i) {
        Atom a = parse_atom("p" + std::to_string(i) + "(X" + std::to_string(rng() % 3) + ",c)");
        a.level = levels[rng() % 3];
        atoms.push_back(a);
      }
      auto q = make_query(atoms);
      bool dropped_l2 = false;
      for (const auto& r : decompose(q)) {
        auto kept = r.retained();
        bool has_l3 = false, missing_l2 = false;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
          bool in = std::find(kept.begin(), kept.end(), i) != kept.end();
          if (in && atoms[i].level == Level::L3) has_l3 = true;
          if (!in && atoms[i].level == Level::L2) missing_l2 = true;
        }
        if (missing_l2) {
          dropped_l2 = true;
          CHECK_FALSE(has_l3);
        }
        if (dropped_l2 && r.kind != Rung::Kind::Singletons) CHECK_FALSE(has_l3);
      }
    }
  }

  TEST_CASE("direct proving equals a brute-force join") {
    std::mt19937 rng(3);
    const std::vector<std::string> preds{"p", "q", "r"};
    const std::vector<std::string> consts{"a", "b", "c"};
    for (int round = 0; round < 200; ++round) {
      KnowledgeBase kb;
      for (std::uint32_t d = 1; d <= 3; ++d) fixtures::add_passages(kb, d, 2);
      const std::size_t nfacts = 5 + rng() % 46;
      for (std::size_t i = 0; i < nfacts; ++i) {
        Atom a;
        a.predicate = preds[rng() % preds.size()];
        for (int k = 0; k < 2; ++k)
          a.args.push_back(rng() % 2 ? Term::skolem(1 + rng() % 6) : Term::constant(consts[rng() % consts.size()]));
        kb.add_fact(Fact{a, {1 + static_cast<std::uint32_t>(rng() % 3), 1 + static_cast<std::uint32_t>(rng() % 2)}, {}});
      }
      kb.seal();
      std::vector<Atom> goals;
      const std::size_t ngoals = 1 + rng() % 4;
      for (std::size_t i = 0; i < ngoals; ++i) {
        Atom a;
        a.predicate = preds[rng() % preds.size()];
        for (int k = 0; k < 2; ++k)
          a.args.push_back(rng() % 3 ? Term::variable(std::string(1, static_cast<char>('X' + rng() % 3)))
                                     : Term::constant(consts[rng() % consts.size()]));
        goals.push_back(a);
      }
      auto q = make_query(goals);
      auto got = prove_direct(q, Scope::Fragment, kb);
      CHECK(oracle::answers(got) == oracle::join_fragment(goals, kb));

      // replay: every bound atom is a fact of the same passage
      for (const auto& m : got) {
        std::map<std::string, Term> g;
        for (const auto& [v, t] : m.bindings) g.emplace(v, parse_term(t));
        for (const auto& a : goals) {
          auto bound = oracle::ground(a, g);
          bool found = false;
          for (auto id : kb.passage_facts(m.doc, *m.frag)) found |= kb.fact(id).atom == bound;
          CHECK(found);
        }
      }
    }
  }

  TEST_CASE("keyword fallback counts shared constants") {
    auto kb = passage11();
    auto q = make_query({leveled("object(natural,X)", Level::L3), leveled("object(language,Y)", Level::L3),
                         leveled("object(question,Z)", Level::L3)});
    auto ms = keyword_fallback(q, kb);
    REQUIRE(ms.size() == 1);
    CHECK(ms[0].coverage == doctest::Approx(1.0));
    CHECK(ms[0].stage == Stage::KeywordFallback);
    CHECK(keyword_fallback(make_query({leveled("object(zebra,X)")}), kb).empty());

    KnowledgeBase two;
    fixtures::add_passages(two, 1, 2);
    two.add_fact(fixtures::fact("object(apple,sk-1)/1/1"));
    two.add_fact(fixtures::fact("object(pear,sk-2)/1/1"));
    two.add_fact(fixtures::fact("object(apple,sk-3)/2/1"));
    two.seal();
    auto fruit = make_query({leveled("object(apple,X)"), leveled("object(pear,Y)"), leveled("object(plum,Z)")});
    auto fm = keyword_fallback(fruit, two);
    REQUIRE(fm.size() == 2);
    std::map<std::uint32_t, double> cov;
    for (const auto& m : fm) cov[*m.frag] = m.coverage;
    CHECK(cov[1] == doctest::Approx(2.0 / 3.0));
    CHECK(cov[2] == doctest::Approx(1.0 / 3.0));
  }

  TEST_CASE("keyword fallback equals a linear scan on the demo corpus") {
    auto kb = fixtures::demo_kb();
    for (const auto& text : fixtures::queries()) {
      auto q = translate_query(text, fixtures::shared_translator());
      auto want = oracle::keyword_scan(q.atoms, kb);
      std::map<std::pair<std::uint32_t, std::uint32_t>, double> got;
      for (const auto& m : keyword_fallback(q, kb)) got[m.passage()] = m.coverage;
      CAPTURE(text);
      REQUIRE(got.size() == want.size());
      for (const auto& [p, c] : want) CHECK(got[p] == doctest::Approx(c));
    }
  }

  TEST_CASE("controller: query 12 is answered by the level 2 stage") {
    auto kb = fixtures::demo_kb();
    auto q = translate_query("Natural language questions", fixtures::shared_translator());
    auto r = variable_depth_search(q, SearchConfig{}, kb);
    auto it = std::find_if(r.matches.begin(), r.matches.end(),
                           [](const MatchResult& m) { return m.doc == 11 && m.frag == 1u; });
    REQUIRE(it != r.matches.end());
    CHECK(it->stage == Stage::PostulatesL2);
    CHECK(it->postulate_applications == 1);
  }

  TEST_CASE("controller: enough direct results stop relaxation") {
    KnowledgeBase kb;
    fixtures::add_passages(kb, 1, 20);
    for (std::uint32_t f = 1; f <= 20; ++f) {
      kb.add_fact(Fact{parse_atom("object(apple,sk-" + std::to_string(2 * f) + ")"), {1, f}, {}});
      kb.add_fact(Fact{parse_atom("property(red,sk-" + std::to_string(2 * f) + ")"), {1, f}, {}});
    }
    kb.load_postulates(fixtures::data("postulates.txt"));
    kb.seal();
    auto q = make_query({leveled("object(apple,X)"), leveled("property(red,X)", Level::L2)});
    auto r = variable_depth_search(q, SearchConfig{}, kb);
    CHECK(r.matches.size() == 20);
    CHECK(passages(r.matches) == [&] {
      std::set<std::pair<std::uint32_t, std::uint32_t>> s;
      for (const auto& [d, f, b] : oracle::join_fragment(q.atoms, kb)) s.insert({d, f});
      return s;
    }());
    for (const auto& m : r.matches) {
      CHECK(m.postulate_applications == 0);
      CHECK(m.isa_hops == 0);
      CHECK(m.stage == Stage::DirectFragment);
    }
    for (const auto& s : r.stages)
      if (s.stage != Stage::DirectFragment && s.stage != Stage::DirectDocument) CHECK_FALSE(s.ran);
  }

  TEST_CASE("controller: empty knowledge base") {
    KnowledgeBase kb;
    kb.seal();
    auto q = translate_query("Natural language questions", fixtures::shared_translator());
    auto r = variable_depth_search(q, SearchConfig{}, kb);
    CHECK(r.matches.empty());
    REQUIRE(r.stages.size() == kStageCount);
    for (std::size_t i = 0; i < kStageCount; ++i) {
      CHECK(r.stages[i].stage == kAllStages[i]);
      CHECK(r.stages[i].ran);
    }
  }

  TEST_CASE("controller properties over the demo queries") {
    auto kb = fixtures::demo_kb();
    SearchConfig cfg;
    for (const auto& text : fixtures::queries()) {
      CAPTURE(text);
      auto q = translate_query(text, fixtures::shared_translator());
      std::set<std::pair<std::uint32_t, std::uint32_t>> previous;
      for (std::size_t k = 0; k < kStageCount; ++k) {
        SearchConfig c = cfg;
        c.stage_max = kAllStages[k];
        auto r = variable_depth_search(q, c, kb);
        auto now = passages(r.matches);
        CHECK(std::includes(now.begin(), now.end(), previous.begin(), previous.end()));
        previous = now;
        for (const auto& m : r.matches) {
          CHECK(m.coverage > 0.0);
          CHECK(m.coverage <= 1.0);
          CHECK(m.postulate_applications <= cfg.budget);
          CHECK(static_cast<std::size_t>(m.stage) <= k);
          if (m.stage == Stage::DirectFragment || m.stage == Stage::DirectDocument)
            CHECK(m.postulate_applications == 0);
        }
        // stages never run out of order
        for (std::size_t i = 1; i < r.stages.size(); ++i)
          CHECK(static_cast<int>(r.stages[i - 1].stage) < static_cast<int>(r.stages[i].stage));
      }
      auto full = variable_depth_search(q, cfg, kb);
      std::size_t direct = 0;
      for (const auto& m : full.matches)
        direct += m.stage == Stage::DirectFragment || m.stage == Stage::DirectDocument;
      if (direct >= cfg.N)
        for (const auto& m : full.matches) {
          CHECK(m.postulate_applications == 0);
          CHECK(m.isa_hops == 0);
        }
    }
  }

  TEST_CASE("config ordering") {
    SearchConfig c;
    CHECK_NOTHROW(c.validate());
    c.O = 10;
    CHECK_THROWS_AS(c.validate(), Error);
    c = SearchConfig{};
    c.theta = 0.0;
    CHECK_THROWS_AS(c.validate(), Error);
    CHECK(parse_stage("PostulatesL2") == Stage::PostulatesL2);
    CHECK_FALSE(parse_stage("Nope"));
  }

  TEST_CASE("batch search: parallel equals serial") {
    auto kb = fixtures::demo_kb();
    std::vector<Query> qs;
    for (const auto& text : fixtures::queries()) qs.push_back(translate_query(text, fixtures::shared_translator()));
    auto serial = search_batch(qs, SearchConfig{}, kb, false);
    auto parallel = search_batch(qs, SearchConfig{}, kb, true);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
      REQUIRE(serial[i].matches.size() == parallel[i].matches.size());
      for (std::size_t j = 0; j < serial[i].matches.size(); ++j) {
        const auto& a = serial[i].matches[j];
        const auto& b = parallel[i].matches[j];
        CHECK(a.passage() == b.passage());
        CHECK(a.stage == b.stage);
        CHECK(a.cost == b.cost);
        CHECK(a.bindings == b.bindings);
      }
    }
  }
}
