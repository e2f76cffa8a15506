#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "logdoc/engine.hpp"

using namespace logdoc;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "logdoc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Scratch directory removed at scope exit.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("logdoc_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (std::uint32_t i = 1; i <= 30; ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "corpus/doc%02u.txt", i);
    out.push_back(fixtures::data(name));
  }
  return out;
}

std::string ingest_demo(const TempDir& dir) {
  auto kb = dir / "demo.kb";
  std::vector<std::string> args{"--kb", kb, "ingest"};
  for (const auto& f : corpus_files()) args.push_back(f);
  auto r = run(args);
  REQUIRE(r.code == 0);
  return kb;
}

std::vector<std::string> rank_lines(const std::string& out) {
  std::vector<std::string> lines;
  std::istringstream in(out);
  for (std::string line; std::getline(in, line);)
    if (line.rfind("rank ", 0) == 0) lines.push_back(line);
  return lines;
}

// From the first proof banner on.
std::string first_trace(const std::string& out) {
  auto at = out.find("== ");
  REQUIRE(at != std::string::npos);
  auto next = out.find("\n== ", at);
  return trim(out.substr(at, next == std::string::npos ? std::string::npos : next - at));
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("ingest writes the example 11 facts") {
    TempDir dir("ingest");
    auto kb = ingest_demo(dir);
    auto text = read_file(kb);
    CHECK(text.find("fact eventuality(answer,sk-") != std::string::npos);
    CHECK(text.find("/1/11 level=L1") != std::string::npos);

    auto dump = run({"--kb", kb, "dump"});
    CHECK(dump.code == 0);
    CHECK(dump.out == text);
  }

  TEST_CASE("ingest errors") {
    TempDir dir("ingest_errors");
    std::ofstream(dir / "empty.txt").close();
    auto r = run({"--kb", dir / "a.kb", "ingest", dir / "empty.txt"});
    CHECK(r.code == 1);
    CHECK(r.err.find("empty.txt") != std::string::npos);

    auto missing = run({"--kb", dir / "a.kb", "ingest", dir / "nope.txt"});
    CHECK(missing.code == 1);

    auto doc = fixtures::data("corpus/doc11.txt");
    CHECK(run({"--kb", dir / "b.kb", "ingest", doc}).code == 0);
    auto again = run({"--kb", dir / "b.kb", "ingest", "--doc-id", "1", doc});
    CHECK(again.code == 1);
    CHECK(run({"--kb", dir / "b.kb", "ingest", "--doc-id", "2", doc}).code == 0);
  }

  TEST_CASE("strict ingest reports parse failures") {
    TempDir dir("strict");
    {
      std::ofstream f(dir / "odd.txt");
      f << "Qqq zzz vvv.\n";
    }
    CHECK(run({"--kb", dir / "a.kb", "ingest", "--strict", dir / "odd.txt"}).code == 2);
    auto lax = run({"--kb", dir / "b.kb", "ingest", dir / "odd.txt"});
    CHECK(lax.code == 0);
    CHECK(lax.err.find("warning") != std::string::npos);
  }

  TEST_CASE("queries over the demo corpus") {
    TempDir dir("query");
    auto kb = ingest_demo(dir);

    auto q12 = run({"--kb", kb, "query", "Natural language questions"});
    CHECK(q12.code == 0);
    auto lines = rank_lines(q12.out);
    REQUIRE_FALSE(lines.empty());
    CHECK(lines[0].rfind("rank 1 doc=11 frag=1 stage=PostulatesL2 ", 0) == 0);
    CHECK(lines.size() <= 15);

    auto q4 = run({"--kb", kb, "query", "Structure sharing representations of languages for unification based grammar formalisms"});
    CHECK(q4.code == 0);
    CHECK(rank_lines(q4.out).at(0).rfind("rank 1 doc=3 frag=1 stage=DirectFragment ", 0) == 0);

    auto none = run({"--kb", kb, "query", "zzzz qqqq"});
    CHECK(none.code == 3);
    CHECK(rank_lines(none.out).empty());

    // capped relaxation
    auto capped = run({"--kb", kb, "query", "--stage-max", "DirectDocument", "Natural language questions"});
    CHECK(capped.code == 3);

    CHECK(run({"--kb", dir / "missing.kb", "query", "anything"}).code == 1);

    // byte-identical output on repeat
    CHECK(run({"--kb", kb, "query", "--explain", "Natural language questions"}).out ==
          run({"--kb", kb, "query", "--explain", "Natural language questions"}).out);
  }

  TEST_CASE("explain subcommand matches the query trace") {
    TempDir dir("explain");
    auto kb = ingest_demo(dir);
    auto e = run({"--kb", kb, "explain", "--rank", "1", "Natural language questions"});
    CHECK(e.code == 0);
    CHECK(e.out.find("query: ") != std::string::npos);
    CHECK(e.out.find("stage PostulatesL2: ran") != std::string::npos);
    CHECK(e.out.find("postulate circumstance/3#1") != std::string::npos);
    auto full = run({"--kb", kb, "query", "--explain", "Natural language questions"});
    CHECK(first_trace(full.out) == first_trace(e.out));
  }

  TEST_CASE("repl session") {
    TempDir dir("repl");
    auto kb = ingest_demo(dir);
    auto session = run({"--kb", kb, "repl"}, "Natural language questions\n:explain 1\n:bogus\n:quit\n");
    CHECK(session.code == 0);
    auto full = run({"--kb", kb, "query", "--explain", "Natural language questions"});
    CHECK(session.out.find(first_trace(full.out)) != std::string::npos);
    CHECK((session.out + session.err).find(":bogus") != std::string::npos);

    // with N lowered to 1, a query with a direct match never relaxes
    auto gated = run({"--kb", kb, "repl"}, ":set N 1\nthematic roles\n:quit\n");
    auto lines = rank_lines(gated.out);
    REQUIRE_FALSE(lines.empty());
    for (const auto& l : lines) CHECK((l.find("stage=Direct") != std::string::npos));

    auto eof = run({"--kb", kb, "repl"}, "");
    CHECK(eof.code == 0);
  }

  TEST_CASE("load copies a saved knowledge base") {
    TempDir dir("load");
    auto kb = ingest_demo(dir);
    auto r = run({"--kb", dir / "copy.kb", "load", kb});
    CHECK(r.code == 0);
    CHECK(read_file(dir / "copy.kb") == read_file(kb));
    {
      std::ofstream f(dir / "old.kb");
      f << "#LOGDOC-KB v0\n";
    }
    CHECK(run({"--kb", dir / "x.kb", "load", dir / "old.kb"}).code == 1);
  }

  TEST_CASE("configuration") {
    TempDir dir("config");
    {
      std::ofstream f(dir / "bad.conf");
      f << "M = 5\nN = 10\nO = 2\n";
    }
    CHECK_THROWS_AS(EngineConfig::load(dir / "bad.conf").validate(), Error);
    CHECK(run({"--config", dir / "bad.conf", "--kb", dir / "a.kb", "query", "x"}).code == 1);
    {
      std::ofstream f(dir / "unknown.conf");
      f << "colour = blue\n";
    }
    CHECK_THROWS_AS(EngineConfig::load(dir / "unknown.conf"), Error);
    {
      std::ofstream f(dir / "paths.conf");
      f << "lexicon = nowhere.txt\n";
    }
    auto cfg = EngineConfig::load(dir / "paths.conf");
    CHECK(cfg.lexicon == dir / "nowhere.txt");
    CHECK_THROWS_AS(cfg.validate(), Error);

    auto shipped = EngineConfig::load(fixtures::data("logdoc.conf"));
    CHECK_NOTHROW(shipped.validate());
    CHECK(shipped.search.M == 15);
    CHECK(shipped.search.N == 10);
    CHECK(shipped.search.O == 5);
  }
}
