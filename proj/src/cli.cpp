#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "logdoc/engine.hpp"
#include "logdoc/knowledge_base.hpp"
#include "logdoc/retrieval.hpp"
#include "logdoc/text.hpp"

namespace logdoc {

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kEnvError = 1;
constexpr int kStrictFailure = 2;
constexpr int kNoResults = 3;

struct Options {
  std::string config, kb, lexicon, grammar, postulates, isa, stage_max;
  bool strict = false, explain = false;
  std::vector<std::string> files;
  std::vector<std::uint32_t> doc_ids;
  std::vector<std::string> words;
  std::string kb_file;
  std::size_t rank = 0;
};

EngineConfig resolve_config(const Options& o) {
  EngineConfig c = o.config.empty() ? EngineConfig::defaults() : EngineConfig::load(o.config);
  if (!o.kb.empty()) c.kb = o.kb;
  if (!o.lexicon.empty()) c.lexicon = o.lexicon;
  if (!o.grammar.empty()) c.grammar = o.grammar;
  if (!o.postulates.empty()) c.postulates = o.postulates;
  if (!o.isa.empty()) c.isa = o.isa;
  if (!o.stage_max.empty()) {
    auto s = parse_stage(o.stage_max);
    if (!s) throw Error("unknown stage '" + o.stage_max + "'");
    c.search.stage_max = *s;
  }
  c.validate();
  return c;
}

KnowledgeBase open_kb(const std::string& path) {
  if (!fs::is_regular_file(path)) throw Error("knowledge base not found: " + path);
  return KnowledgeBase::load(path);
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) out += (out.empty() ? "" : " ") + w;
  return out;
}

int cmd_ingest(const Options& o, std::ostream& out, std::ostream& err) {
  EngineConfig cfg = resolve_config(o);
  if (!o.doc_ids.empty() && o.doc_ids.size() != o.files.size())
    throw Error("--doc-id must be given once per input file");

  std::vector<std::pair<std::uint32_t, std::string>> docs;
  for (std::size_t i = 0; i < o.files.size(); ++i) {
    std::string text = read_file(o.files[i]);
    if (trim(text).empty()) throw Error("empty document: " + o.files[i]);
    docs.emplace_back(o.doc_ids.empty() ? static_cast<std::uint32_t>(i + 1) : o.doc_ids[i], std::move(text));
  }

  KnowledgeBase kb;
  if (fs::exists(cfg.kb)) {
    kb = KnowledgeBase::load(cfg.kb).reopened();
  } else {
    kb.set_skolem_counter(cfg.skolem_start);
    if (!cfg.postulates.empty()) kb.load_postulates(cfg.postulates);
    if (!cfg.isa.empty()) kb.load_isa(cfg.isa);
  }
  const Translator translator = cfg.make_translator();
  auto reports = kb.ingest_documents(translator, docs);

  std::size_t failures = 0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    out << "doc " << r.doc << " (" << o.files[i] << "): fragments=" << r.fragments << " facts=" << r.facts
        << " groups=" << r.groups << " parse_failures=" << r.parse_failures << "\n";
    failures += r.parse_failures;
  }
  if (failures > 0) {
    if (o.strict) {
      err << "error: " << failures << " fragment(s) had no full parse; knowledge base not written\n";
      return kStrictFailure;
    }
    err << "warning: " << failures << " fragment(s) translated from maximal fragments\n";
  }
  kb.seal();
  kb.save(cfg.kb);
  out << "wrote " << cfg.kb << ": " << kb.documents().size() << " documents, " << kb.facts().size()
      << " facts, " << kb.postulates().size() << " postulates\n";
  return kOk;
}

struct Session {
  EngineConfig cfg;
  KnowledgeBase kb;
  Translator translator;
  std::vector<RankedResult> last;
};

int run_query(Session& s, const std::string& text, bool with_explain, std::ostream& out, std::ostream& err) {
  auto q = translate_query(text, s.translator);
  auto result = variable_depth_search(q, s.cfg.search, s.kb);
  s.last = rank(std::move(result.matches), s.kb, s.cfg.search.M);
  if (s.last.empty()) {
    err << "no results\n";
    return kNoResults;
  }
  for (const auto& r : s.last) out << format_structured(r) << "\n";
  out << "\n";
  for (const auto& r : s.last) out << format_human(r);
  if (with_explain)
    for (const auto& r : s.last) out << "\n" << explain(r, s.kb);
  return kOk;
}

Session open_session(const Options& o) {
  EngineConfig cfg = resolve_config(o);
  KnowledgeBase kb = open_kb(cfg.kb);
  Translator t = cfg.make_translator();
  return Session{std::move(cfg), std::move(kb), std::move(t), {}};
}

int cmd_query(const Options& o, std::ostream& out, std::ostream& err) {
  Session s = open_session(o);
  return run_query(s, join(o.words), o.explain, out, err);
}

int cmd_explain(const Options& o, std::ostream& out, std::ostream& err) {
  Session s = open_session(o);
  auto q = translate_query(join(o.words), s.translator);
  out << "query: " << q.str() << (q.keyword_only ? "  (keywords only)" : "") << "\n";
  auto result = variable_depth_search(q, s.cfg.search, s.kb);
  out << format_stages(result);
  auto ranked = rank(std::move(result.matches), s.kb, s.cfg.search.M);
  if (ranked.empty()) {
    err << "no results\n";
    return kNoResults;
  }
  if (o.rank > ranked.size()) throw Error("no result with rank " + std::to_string(o.rank));
  for (const auto& r : ranked)
    if (o.rank == 0 || r.rank == o.rank) out << "\n" << format_structured(r) << "\n" << explain(r, s.kb);
  return kOk;
}

int cmd_repl(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  Session s = open_session(o);
  std::string line;
  err << "logdoc> " << std::flush;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) {
    } else if (line == ":quit" || line == ":q") {
      return kOk;
    } else if (line.rfind(":explain", 0) == 0) {
      std::istringstream args(line.substr(8));
      std::size_t n = 0;
      if (!(args >> n) || n == 0 || n > s.last.size())
        err << "no result with that rank\n";
      else
        out << explain(s.last[n - 1], s.kb);
    } else if (line.rfind(":set", 0) == 0) {
      std::istringstream args(line.substr(4));
      std::string key, value;
      args >> key >> value;
      if (key != "M" && key != "N" && key != "O" && key != "theta") {
        err << "usage: :set M|N|O|theta <value>\n";
      } else {
        EngineConfig next = s.cfg;
        try {
          next.set(key, value);
          if (next.search.M == 0 || next.search.N == 0 || next.search.O == 0 || next.search.theta <= 0 ||
              next.search.theta > 1)
            throw Error("value out of range");
          s.cfg = next;
          s.translator.set_options(s.cfg.translator_options());
          if (!(s.cfg.search.O < s.cfg.search.N && s.cfg.search.N < s.cfg.search.M))
            err << "note: O < N < M no longer holds\n";
        } catch (const Error& e) {
          err << "error: " << e.what() << "\n";
        }
      }
    } else if (line[0] == ':') {
      err << "unknown directive " << line << "\n";
    } else {
      run_query(s, line, false, out, err);
    }
    err << "logdoc> " << std::flush;
  }
  return kOk;
}

int cmd_dump(const Options& o, std::ostream& out) {
  EngineConfig cfg = o.config.empty() ? EngineConfig::defaults() : EngineConfig::load(o.config);
  if (!o.kb.empty()) cfg.kb = o.kb;
  out << open_kb(cfg.kb).serialize();
  return kOk;
}

int cmd_load(const Options& o, std::ostream& out) {
  KnowledgeBase kb = open_kb(o.kb_file);
  out << "loaded " << o.kb_file << ": " << kb.documents().size() << " documents, " << kb.facts().size()
      << " facts, " << kb.postulates().size() << " postulates, " << kb.isa().links().size()
      << " isa links, next skolem sk-" << kb.skolem_counter() << "\n";
  if (!o.kb.empty() && fs::path(o.kb) != fs::path(o.kb_file)) {
    kb.save(o.kb);
    out << "wrote " << o.kb << "\n";
  }
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"logdoc: passage retrieval by proving queries against document axioms", "logdoc"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config, "flat key = value configuration file");
  app.add_option("--kb", o.kb, "knowledge base file");
  app.add_option("--lexicon", o.lexicon, "lexicon file");
  app.add_option("--grammar", o.grammar, "grammar file");
  app.add_option("--postulates", o.postulates, "meaning postulate library");
  app.add_option("--isa", o.isa, "isa link file");

  auto* ingest = app.add_subcommand("ingest", "translate documents and write the knowledge base");
  ingest->add_option("files", o.files, "one document per file")->required();
  ingest->add_flag("--strict", o.strict, "fail (exit 2) when a fragment has no full parse");
  ingest->add_option("--doc-id", o.doc_ids, "document id per file, in order");

  auto* query = app.add_subcommand("query", "rank passages for a question");
  query->add_option("text", o.words, "query text")->required();
  query->add_flag("--explain", o.explain, "append proof traces");
  query->add_option("--stage-max", o.stage_max, "last controller stage to run");

  auto* repl = app.add_subcommand("repl", "read queries from standard input");
  repl->add_option("--stage-max", o.stage_max, "last controller stage to run");

  auto* expl = app.add_subcommand("explain", "show the query translation, stage trace and proofs");
  expl->add_option("text", o.words, "query text")->required();
  expl->add_option("--rank", o.rank, "only this result");
  expl->add_option("--stage-max", o.stage_max, "last controller stage to run");

  auto* dump = app.add_subcommand("dump", "print the knowledge base file");
  auto* load = app.add_subcommand("load", "check a knowledge base file; copy it to --kb if given");
  load->add_option("file", o.kb_file, "knowledge base file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kEnvError;
  }

  try {
    if (*ingest) return cmd_ingest(o, out, err);
    if (*query) return cmd_query(o, out, err);
    if (*repl) return cmd_repl(o, in, out, err);
    if (*expl) return cmd_explain(o, out, err);
    if (*dump) return cmd_dump(o, out);
    if (*load) return cmd_load(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kEnvError;
  }
  return kEnvError;
}

}  // namespace logdoc
