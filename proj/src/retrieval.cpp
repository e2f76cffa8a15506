#include "logdoc/retrieval.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

namespace logdoc {

namespace {

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string frag_label(const MatchResult& m) { return m.frag ? std::to_string(*m.frag) : "*"; }

}  // namespace

bool ranks_before(const MatchResult& a, const MatchResult& b) {
  if (a.stage != b.stage) return a.stage < b.stage;
  const bool da = !a.frag, db = !b.frag;
  if (da != db) return db;
  if (a.ambiguous != b.ambiguous) return b.ambiguous;
  if (a.coverage != b.coverage) return a.coverage > b.coverage;
  if (a.cost != b.cost) return a.cost < b.cost;
  return a.passage() < b.passage();
}

std::vector<RankedResult> rank(std::vector<MatchResult> matches, const KnowledgeBase& kb, std::size_t limit) {
  std::stable_sort(matches.begin(), matches.end(), ranks_before);
  if (matches.size() > limit) matches.resize(limit);
  std::vector<RankedResult> out;
  for (auto& m : matches) {
    RankedResult r;
    r.rank = out.size() + 1;
    if (m.frag) {
      r.fragments = {*m.frag};
      r.text = kb.fragment_text(m.doc, *m.frag);
    } else {
      std::set<std::uint32_t> frags;
      for (auto id : m.support) frags.insert(kb.fact(id).prov.frag);
      r.fragments.assign(frags.begin(), frags.end());
      for (auto f : r.fragments) r.text += (r.text.empty() ? "" : "\n") + kb.fragment_text(m.doc, f);
    }
    r.match = std::move(m);
    out.push_back(std::move(r));
  }
  return out;
}

PassageSpan resolve_passage(std::uint32_t doc, std::uint32_t frag, const KnowledgeBase& kb) {
  const auto& text = kb.fragment_text(doc, frag);
  const auto* d = kb.document(doc);
  std::size_t offset = 0;
  for (std::uint32_t k = 1; k < frag; ++k) offset += d->fragments[k - 1].size() + 1;
  return {text, offset, text.size()};
}

std::string format_structured(const RankedResult& r) {
  const auto& m = r.match;
  return "rank " + std::to_string(r.rank) + " doc=" + std::to_string(m.doc) + " frag=" + frag_label(m) +
         " stage=" + std::string(to_string(m.stage)) + " coverage=" + fixed4(m.coverage) +
         " cost=" + number(m.cost) + " ambiguous=" + (m.ambiguous ? "1" : "0");
}

std::string format_human(const RankedResult& r) {
  const auto& m = r.match;
  std::ostringstream out;
  out << "[" << r.rank << "] document " << m.doc;
  if (m.frag) {
    out << ", passage " << *m.frag;
  } else {
    out << ", passages";
    for (auto f : r.fragments) out << " " << f;
  }
  out << " (" << to_string(m.stage);
  if (m.ambiguous) out << ", ambiguous";
  out << ")\n";
  std::istringstream lines(r.text);
  for (std::string line; std::getline(lines, line);) out << "    " << line << "\n";
  return out.str();
}

namespace {

void render_node(std::ostringstream& out, const ProofNode& n, const KnowledgeBase& kb, int indent) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  out << pad << "goal " << n.goal << "\n";
  if (n.kind == ProofNode::Kind::Fact) {
    const auto& f = kb.fact(n.fact);
    out << pad << "  fact " << format_annotated(f) << " level=" << to_string(f.atom.level);
    if (f.group) out << " group=" << *f.group;
    if (n.isa_hops) out << " isa-hops=" << n.isa_hops;
    out << "\n";
    return;
  }
  const auto& p = kb.postulates().at(n.postulate);
  out << pad << "  postulate " << p.name << " (" << to_string(p.level) << ", w=" << number(p.weight) << ")";
  if (n.isa_hops) out << " isa-hops=" << n.isa_hops;
  out << "\n" << pad << "    " << p.str() << "\n";
  for (const auto& c : n.children) render_node(out, c, kb, indent + 2);
}

}  // namespace

std::string explain(const RankedResult& r, const KnowledgeBase& kb) {
  const auto& m = r.match;
  std::ostringstream out;
  out << "== " << to_string(m.stage) << ": doc " << m.doc << " frag " << frag_label(m)
      << " coverage=" << fixed4(m.coverage) << " cost=" << number(m.cost) << " ==\n";
  if (m.stage == Stage::KeywordFallback) {
    out << "overlapping constants:";
    for (const auto& c : m.overlap) out << " " << c;
    out << "\n";
    return out.str();
  }
  out << "inferences=" << m.inferences << " postulates=" << m.postulate_applications
      << " isa-hops=" << m.isa_hops << (m.ambiguous ? " ambiguous" : "") << "\n";
  if (!m.bindings.empty()) {
    out << "bindings:";
    for (const auto& [v, t] : m.bindings) out << " " << v << "=" << t;
    out << "\n";
  }
  for (const auto& n : m.trace) render_node(out, n, kb, 0);
  return out.str();
}

std::string format_stages(const SearchResult& result) {
  std::ostringstream out;
  for (const auto& s : result.stages) {
    out << "stage " << to_string(s.stage) << ": " << (s.ran ? "ran" : "skipped");
    if (s.ran) out << " new=" << s.new_passages << " total=" << s.passages_after << " rules=" << s.applications;
    if (s.budget_exhausted) out << " budget-exhausted";
    if (!s.note.empty()) out << " (" << s.note << ")";
    out << "\n";
  }
  return out.str();
}

}  // namespace logdoc
