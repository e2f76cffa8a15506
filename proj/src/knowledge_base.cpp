#include "logdoc/knowledge_base.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>

#include "logdoc/text.hpp"

namespace logdoc {

namespace {

const std::vector<std::size_t> kNone;

std::string format_weight(double w) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, w);
  return std::string(buf, end);
}

void skip_ws(std::string_view s, std::size_t& pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
}

bool take(std::string_view s, std::size_t& pos, std::string_view token) {
  skip_ws(s, pos);
  if (s.substr(pos, token.size()) != token) return false;
  pos += token.size();
  return true;
}

std::string read_word(std::string_view s, std::size_t& pos) {
  skip_ws(s, pos);
  std::size_t start = pos;
  while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
  return std::string(s.substr(start, pos - start));
}

std::size_t read_index(std::string_view s, std::size_t& pos) {
  skip_ws(s, pos);
  std::size_t start = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data() + start, s.data() + pos, value);
  if (ec != std::errc() || start == pos || value == 0)
    throw SyntaxError("expected a positive body index", std::string(s), start);
  return value;
}

void collect_vars(const Atom& a, std::set<std::string>& out) {
  for (const auto& t : a.args)
    if (t.is_variable()) out.insert(t.name());
}

std::uint32_t parse_u32(std::string_view text, std::string_view line, std::size_t pos) {
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw SyntaxError("expected a number", std::string(line), pos);
  return v;
}

}  // namespace

std::string MeaningPostulate::str() const {
  std::string out = "post " + std::string(to_string(level)) + " w=" + format_weight(weight) + " " +
                    head.str() + " <-";
  for (std::size_t i = 0; i < body.size(); ++i) out += (i ? ", " : " ") + body[i].str();
  std::vector<std::string> conds;
  for (const auto& [a, b] : not_equal) conds.push_back(a + " != " + b);
  for (const auto& [i, j] : precedes) conds.push_back("prec(" + std::to_string(i) + "," + std::to_string(j) + ")");
  if (!existential.empty()) {
    std::string ex = "ex(";
    for (std::size_t i = 0; i < existential.size(); ++i) ex += (i ? "," : "") + existential[i];
    conds.push_back(ex + ")");
  }
  for (std::size_t i = 0; i < conds.size(); ++i) out += (i ? ", " : " ; ") + conds[i];
  return out;
}

MeaningPostulate parse_postulate(std::string_view line) {
  const std::string text(line);
  std::size_t pos = 0;
  if (!take(line, pos, "post ")) throw SyntaxError("expected 'post'", text, pos);
  MeaningPostulate p;
  auto level_word = read_word(line, pos);
  auto level = parse_level(level_word);
  if (!level || (*level != Level::L2 && *level != Level::L3))
    throw SyntaxError("postulate level must be L2 or L3", text, pos);
  p.level = *level;
  if (!take(line, pos, "w=")) throw SyntaxError("expected w=<weight>", text, pos);
  std::size_t wstart = pos;
  while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
  auto [ptr, ec] = std::from_chars(line.data() + wstart, line.data() + pos, p.weight);
  if (ec != std::errc() || ptr != line.data() + pos || !(p.weight > 0))
    throw SyntaxError("weight must be a positive number", text, wstart);

  skip_ws(line, pos);
  p.head = parse_atom_at(line, pos);
  if (!take(line, pos, "<-")) throw SyntaxError("expected '<-'", text, pos);
  do {
    skip_ws(line, pos);
    p.body.push_back(parse_atom_at(line, pos));
  } while (take(line, pos, ","));
  if (take(line, pos, ";")) {
    do {
      skip_ws(line, pos);
      if (take(line, pos, "prec(")) {
        auto i = read_index(line, pos);
        if (!take(line, pos, ",")) throw SyntaxError("expected ','", text, pos);
        auto j = read_index(line, pos);
        if (!take(line, pos, ")")) throw SyntaxError("expected ')'", text, pos);
        if (i > p.body.size() || j > p.body.size() || i == j)
          throw SyntaxError("prec() indices must name two body atoms", text, pos);
        p.precedes.emplace_back(i, j);
      } else if (take(line, pos, "ex(")) {
        do {
          auto v = read_word(line, pos);
          if (!is_variable_name(v)) throw SyntaxError("ex() expects variables", text, pos);
          p.existential.push_back(v);
        } while (take(line, pos, ","));
        if (!take(line, pos, ")")) throw SyntaxError("expected ')'", text, pos);
      } else {
        auto a = read_word(line, pos);
        if (!take(line, pos, "!=")) throw SyntaxError("expected '!='", text, pos);
        auto b = read_word(line, pos);
        if (!is_variable_name(a) || !is_variable_name(b))
          throw SyntaxError("'!=' relates two variables", text, pos);
        p.not_equal.emplace_back(a, b);
      }
    } while (take(line, pos, ","));
  }
  skip_ws(line, pos);
  if (pos != line.size()) throw SyntaxError("trailing characters", text, pos);

  std::set<std::string> body_vars, head_vars;
  for (const auto& b : p.body) collect_vars(b, body_vars);
  collect_vars(p.head, head_vars);
  for (const auto& v : p.existential) {
    if (!head_vars.count(v) || body_vars.count(v))
      throw SyntaxError("existential '" + v + "' must occur in the head only", text, 0);
  }
  for (const auto& v : head_vars) {
    if (!body_vars.count(v) &&
        std::find(p.existential.begin(), p.existential.end(), v) == p.existential.end())
      throw SyntaxError("head variable '" + v + "' is not bound by the body", text, 0);
  }
  for (const auto& [a, b] : p.not_equal) {
    if (!body_vars.count(a) && !head_vars.count(a)) throw SyntaxError("unknown variable '" + a + "'", text, 0);
    if (!body_vars.count(b) && !head_vars.count(b)) throw SyntaxError("unknown variable '" + b + "'", text, 0);
  }
  return p;
}

std::vector<MeaningPostulate> parse_postulates(std::string_view text, const std::string& origin) {
  std::vector<MeaningPostulate> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto line = trim(strip_comment(raw));
    if (line.empty()) continue;
    try {
      out.push_back(parse_postulate(line));
    } catch (const SyntaxError& e) {
      throw SyntaxError(origin + ":" + std::to_string(lineno) + ": " + e.what(), e.line(), e.position());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

void KnowledgeBase::require_open() const {
  if (sealed_) throw Error("knowledge base is sealed; build a new snapshot to add content");
}

void KnowledgeBase::require_fresh(std::uint32_t doc) const {
  if (doc == 0) throw Error("document ids start at 1");
  if (docs_.count(doc)) throw Error("duplicate document id " + std::to_string(doc));
}

namespace {

FragmentAnalysis analyze_fragment(const Translator& translator, const std::string& text) {
  if (tokenize(text).empty()) return {};
  return translator.analyze(text);
}

struct Prepared {
  std::vector<std::string> fragments;
  std::vector<FragmentAnalysis> analyses;
};

Prepared prepare(const Translator& translator, std::string_view text) {
  Prepared p;
  for (auto& f : segment_fragments(text)) p.fragments.push_back(std::move(f.text));
  for (const auto& f : p.fragments) p.analyses.push_back(analyze_fragment(translator, f));
  return p;
}

}  // namespace

IngestReport KnowledgeBase::store(std::uint32_t doc, const std::vector<std::string>& fragments,
                                  const std::vector<FragmentAnalysis>& analyses) {
  add_document(doc, fragments);
  IngestReport report;
  report.doc = doc;
  report.fragments = fragments.size();
  for (std::size_t k = 0; k < analyses.size(); ++k) {
    auto out = close_fragment(analyses[k], doc, static_cast<std::uint32_t>(k + 1), next_skolem_, next_group_);
    report.facts += out.facts.size();
    report.groups += out.groups;
    report.parse_failures += out.parse_failure ? 1 : 0;
    for (auto& f : out.facts) add_fact(std::move(f));
  }
  return report;
}

IngestReport KnowledgeBase::ingest_document(const Translator& translator, std::string_view text,
                                            std::uint32_t doc) {
  require_open();
  require_fresh(doc);
  auto p = prepare(translator, text);
  return store(doc, p.fragments, p.analyses);
}

std::vector<IngestReport> KnowledgeBase::ingest_documents(
    const Translator& translator, const std::vector<std::pair<std::uint32_t, std::string>>& docs,
    bool parallel) {
  require_open();
  const auto n = static_cast<std::int64_t>(docs.size());
  std::vector<Prepared> prepared(docs.size());
  std::vector<std::exception_ptr> errors(docs.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      prepared[i] = prepare(translator, docs[i].second);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  // Counters are handed out here, in document order.
  std::vector<IngestReport> reports;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    require_fresh(docs[i].first);
    if (errors[i]) std::rethrow_exception(errors[i]);
    reports.push_back(store(docs[i].first, prepared[i].fragments, prepared[i].analyses));
  }
  return reports;
}

void KnowledgeBase::add_document(std::uint32_t doc, std::vector<std::string> fragments) {
  require_open();
  require_fresh(doc);
  if (fragments.empty()) throw Error("document " + std::to_string(doc) + " has no fragments");
  Document d;
  d.id = doc;
  for (std::size_t i = 0; i < fragments.size(); ++i) d.text += (i ? "\n" : "") + fragments[i];
  d.fragments = std::move(fragments);
  docs_.emplace(doc, std::move(d));
}

std::size_t KnowledgeBase::add_fact(Fact fact) {
  require_open();
  check_fact(fact);
  const auto* d = document(fact.prov.doc);
  if (d == nullptr || fact.prov.frag > d->fragments.size())
    throw Error("fact " + format_annotated(fact) + " points at an unknown passage");
  for (const auto& t : fact.atom.args) {
    if (t.is_witness()) throw Error("proof witnesses cannot be stored: " + fact.atom.str());
    if (t.is_skolem()) next_skolem_ = std::max(next_skolem_, t.index() + 1);
  }
  if (fact.group) next_group_ = std::max(next_group_, *fact.group + 1);
  const std::size_t id = facts_.size();
  const auto key = fact.atom.key();
  by_key_[key].push_back(id);
  by_passage_key_[{key, fact.prov.doc, fact.prov.frag}].push_back(id);
  by_doc_key_[{key, fact.prov.doc}].push_back(id);
  by_passage_[{fact.prov.doc, fact.prov.frag}].push_back(id);
  facts_.push_back(std::move(fact));
  return id;
}

void KnowledgeBase::add_postulate(MeaningPostulate postulate) {
  require_open();
  postulate.name = postulate.head.key() + "#" + std::to_string(postulates_.size() + 1);
  postulates_.push_back(std::move(postulate));
}

std::size_t KnowledgeBase::add_postulates(std::string_view text, const std::string& origin) {
  auto parsed = parse_postulates(text, origin);
  for (auto& p : parsed) add_postulate(std::move(p));
  return parsed.size();
}

std::size_t KnowledgeBase::load_postulates(const std::string& path) {
  return add_postulates(read_file(path), path);
}

void KnowledgeBase::add_isa(const std::string& sub, const std::string& super) {
  require_open();
  isa_.add(sub, super);
  isa_order_.emplace_back(sub, super);
}

std::size_t KnowledgeBase::load_isa(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string raw;
  std::size_t lineno = 0, count = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto line = trim(strip_comment(raw));
    if (line.empty()) continue;
    std::istringstream words(line);
    std::string tag, sub, super, extra;
    words >> tag >> sub >> super;
    if (tag != "isa" || super.empty() || (words >> extra))
      throw SyntaxError(path + ":" + std::to_string(lineno) + ": expected 'isa <sub> <super>'", line, 0);
    add_isa(sub, super);
    ++count;
  }
  return count;
}

void KnowledgeBase::set_skolem_counter(std::uint32_t next) {
  require_open();
  if (next == 0) throw Error("skolem numbering starts at 1");
  if (next < next_skolem_ && !facts_.empty())
    throw Error("skolem counter cannot move below " + std::to_string(next_skolem_));
  next_skolem_ = next;
}

const std::vector<std::size_t>& KnowledgeBase::candidates(const std::string& predicate,
                                                          std::size_t arity) const {
  return candidates(predicate + "/" + std::to_string(arity));
}

const std::vector<std::size_t>& KnowledgeBase::candidates(const std::string& key) const {
  auto it = by_key_.find(key);
  return it == by_key_.end() ? kNone : it->second;
}

const std::vector<std::size_t>& KnowledgeBase::candidates_in(const std::string& key, std::uint32_t doc,
                                                             std::uint32_t frag) const {
  auto it = by_passage_key_.find({key, doc, frag});
  return it == by_passage_key_.end() ? kNone : it->second;
}

const std::vector<std::size_t>& KnowledgeBase::candidates_in(const std::string& key,
                                                             std::uint32_t doc) const {
  auto it = by_doc_key_.find({key, doc});
  return it == by_doc_key_.end() ? kNone : it->second;
}

const std::vector<std::size_t>& KnowledgeBase::passage_facts(std::uint32_t doc, std::uint32_t frag) const {
  auto it = by_passage_.find({doc, frag});
  return it == by_passage_.end() ? kNone : it->second;
}

const Document* KnowledgeBase::document(std::uint32_t doc) const {
  auto it = docs_.find(doc);
  return it == docs_.end() ? nullptr : &it->second;
}

const std::string& KnowledgeBase::fragment_text(std::uint32_t doc, std::uint32_t frag) const {
  const auto* d = document(doc);
  if (d == nullptr || frag == 0 || frag > d->fragments.size())
    throw Error("no passage " + std::to_string(doc) + "/" + std::to_string(frag));
  return d->fragments[frag - 1];
}

// ---------------------------------------------------------------------------

std::string KnowledgeBase::serialize() const {
  std::ostringstream out;
  out << "#LOGDOC-KB v1\n";
  out << "counter sk " << next_skolem_ << "\n";
  std::map<std::uint32_t, std::vector<std::size_t>> by_doc;
  for (std::size_t i = 0; i < facts_.size(); ++i) by_doc[facts_[i].prov.doc].push_back(i);
  for (const auto& [id, d] : docs_) {
    out << "doc " << id << "\n";
    for (std::size_t k = 0; k < d.fragments.size(); ++k)
      out << "frag " << id << " " << (k + 1) << " " << escape_text(d.fragments[k]) << "\n";
    for (auto fid : by_doc[id]) {
      const auto& f = facts_[fid];
      out << "fact " << format_annotated(f) << " level=" << to_string(f.atom.level);
      if (f.group) out << " group=" << *f.group;
      out << "\n";
    }
  }
  for (const auto& p : postulates_) out << p.str() << "\n";
  for (const auto& [sub, super] : isa_order_) out << "isa " << sub << " " << super << "\n";
  return out.str();
}

void KnowledgeBase::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << serialize();
  if (!out.flush()) throw Error("write failed: " + path);
}

KnowledgeBase KnowledgeBase::deserialize(std::string_view text) {
  KnowledgeBase kb;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what, std::size_t pos) -> SyntaxError {
    return SyntaxError("line " + std::to_string(lineno) + ", column " + std::to_string(pos + 1) + ": " + what,
                       line, pos);
  };
  if (!std::getline(in, line)) throw Error("empty knowledge base file");
  lineno = 1;
  if (line != "#LOGDOC-KB v1") {
    if (line.rfind("#LOGDOC-KB ", 0) == 0)
      throw Error("unsupported knowledge base version '" + line.substr(11) + "' (expected v1)");
    throw fail("missing '#LOGDOC-KB v1' header", 0);
  }
  std::uint32_t counter = 0;
  bool have_counter = false;
  std::map<std::uint32_t, std::vector<std::string>> frags;
  std::vector<std::uint32_t> doc_order;
  std::vector<Fact> facts;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto space = line.find(' ');
    std::string tag = line.substr(0, space);
    std::string rest = space == std::string::npos ? "" : line.substr(space + 1);
    const std::size_t off = tag.size() + 1;
    try {
      if (tag == "counter") {
        if (rest.rfind("sk ", 0) != 0) throw fail("expected 'counter sk <n>'", off);
        counter = parse_u32(rest.substr(3), line, off + 3);
        have_counter = true;
      } else if (tag == "doc") {
        auto id = parse_u32(rest, line, off);
        if (id == 0 || frags.count(id)) throw fail("duplicate or zero document id", off);
        frags[id];
        doc_order.push_back(id);
      } else if (tag == "frag") {
        auto s1 = rest.find(' ');
        auto s2 = s1 == std::string::npos ? s1 : rest.find(' ', s1 + 1);
        if (s2 == std::string::npos) throw fail("expected 'frag <doc> <frag> <text>'", off);
        auto doc = parse_u32(std::string_view(rest).substr(0, s1), line, off);
        auto k = parse_u32(std::string_view(rest).substr(s1 + 1, s2 - s1 - 1), line, off + s1 + 1);
        auto it = frags.find(doc);
        if (it == frags.end()) throw fail("fragment of undeclared document", off);
        if (k != it->second.size() + 1) throw fail("fragments must be numbered consecutively", off + s1 + 1);
        it->second.push_back(unescape_text(rest.substr(s2 + 1)));
      } else if (tag == "fact") {
        std::optional<std::uint32_t> group;
        auto g = rest.rfind(" group=");
        if (g != std::string::npos) {
          group = parse_u32(std::string_view(rest).substr(g + 7), line, off + g + 7);
          rest.resize(g);
        }
        if (rest.find(" level=") == std::string::npos) throw fail("fact without level", off);
        Fact f;
        try {
          f = parse_annotated(rest);
        } catch (const SyntaxError& e) {
          throw fail(e.what(), off + e.position());
        }
        f.group = group;
        facts.push_back(std::move(f));
      } else if (tag == "post") {
        try {
          kb.postulates_.push_back(parse_postulate(line));
        } catch (const SyntaxError& e) {
          throw fail(e.what(), e.position());
        }
        kb.postulates_.back().name =
            kb.postulates_.back().head.key() + "#" + std::to_string(kb.postulates_.size());
      } else if (tag == "isa") {
        std::istringstream words(rest);
        std::string sub, super, extra;
        words >> sub >> super;
        if (super.empty() || (words >> extra)) throw fail("expected 'isa <sub> <super>'", off);
        kb.add_isa(sub, super);
      } else {
        throw fail("unknown record '" + tag + "'", 0);
      }
    } catch (const SyntaxError&) {
      throw;
    } catch (const Error& e) {
      throw fail(e.what(), 0);
    }
  }
  if (!have_counter) throw Error("knowledge base file lacks 'counter sk'");
  for (auto id : doc_order) {
    if (frags[id].empty()) throw Error("document " + std::to_string(id) + " has no fragments");
    kb.add_document(id, std::move(frags[id]));
  }
  for (auto& f : facts) kb.add_fact(std::move(f));
  if (counter < kb.next_skolem_) throw Error("counter sk is below a stored skolem");
  kb.next_skolem_ = counter;
  kb.seal();
  return kb;
}

KnowledgeBase KnowledgeBase::load(const std::string& path) { return deserialize(read_file(path)); }

}  // namespace logdoc
