#pragma once

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "logdoc/engine.hpp"
#include "logdoc/knowledge_base.hpp"
#include "logdoc/prover.hpp"
#include "logdoc/semantics.hpp"
#include "logdoc/text.hpp"

namespace fixtures {

inline std::string data(const std::string& name) { return logdoc::data_dir() + "/" + name; }

inline logdoc::Translator translator(logdoc::TranslatorOptions options = {}) {
  return logdoc::Translator(logdoc::Lexicon::load(data("lexicon.txt")), logdoc::Grammar::load(data("grammar.txt")),
                            logdoc::SchemeTable::load(data("schemes.txt")),
                            logdoc::LevelTable::load(data("levels.txt")), options);
}

inline const logdoc::Translator& shared_translator() {
  static const logdoc::Translator t = translator();
  return t;
}

inline std::vector<std::pair<std::uint32_t, std::string>> corpus() {
  std::vector<std::pair<std::uint32_t, std::string>> docs;
  for (std::uint32_t i = 1;; ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "corpus/doc%02u.txt", i);
    if (!std::filesystem::exists(data(name))) break;
    docs.emplace_back(i, logdoc::read_file(data(name)));
  }
  return docs;
}

inline std::vector<std::string> queries() {
  std::vector<std::string> out;
  std::istringstream in(logdoc::read_file(data("queries.txt")));
  for (std::string line; std::getline(in, line);) {
    line = logdoc::trim(logdoc::strip_comment(line));
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

/// Demo corpus with the shipped postulates and isa links, sealed.
inline logdoc::KnowledgeBase demo_kb(bool parallel = true) {
  logdoc::KnowledgeBase kb;
  kb.ingest_documents(shared_translator(), corpus(), parallel);
  kb.load_postulates(data("postulates.txt"));
  kb.load_isa(data("isa.txt"));
  kb.seal();
  return kb;
}

/// Declares a document of `frags` placeholder fragments.
inline void add_passages(logdoc::KnowledgeBase& kb, std::uint32_t doc, std::size_t frags) {
  std::vector<std::string> texts;
  for (std::size_t i = 0; i < frags; ++i) texts.push_back("passage " + std::to_string(i + 1));
  kb.add_document(doc, texts);
}

inline logdoc::Fact fact(const std::string& annotated) {
  auto f = logdoc::parse_annotated(annotated);
  return f;
}

}  // namespace fixtures
