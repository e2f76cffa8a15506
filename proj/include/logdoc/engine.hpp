#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "logdoc/grammar.hpp"
#include "logdoc/prover.hpp"
#include "logdoc/semantics.hpp"

namespace logdoc {

/// Everything the command line needs: data file paths plus search and parse
/// settings. Read from a flat `key = value` file; flags override afterwards.
struct EngineConfig {
  std::string grammar;
  std::string lexicon;
  std::string schemes;
  std::string levels;
  std::string postulates;
  std::string isa;
  std::string kb = "logdoc.kb";

  SearchConfig search;
  PreferenceWeights weights;
  std::size_t max_edges = 50000;
  std::uint32_t skolem_start = 1;

  /// Paths point at the shipped data directory.
  static EngineConfig defaults();
  /// defaults() overlaid with the file; relative paths resolve against its directory.
  static EngineConfig load(const std::string& path);

  /// Throws Error on an unknown key or a malformed value.
  void set(const std::string& key, const std::string& value, const std::string& base_dir = "");
  /// Thresholds and every referenced file; throws Error naming the problem.
  void validate() const;

  TranslatorOptions translator_options() const;
  Translator make_translator() const;
};

/// Directory holding the shipped grammar, lexicon, corpus and config.
std::string data_dir();

/// Entry point of the `logdoc` tool. Returns the process exit code:
/// 0 success, 1 environment or configuration error, 2 strict ingest failure,
/// 3 query without results.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace logdoc
