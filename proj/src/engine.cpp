#include "logdoc/engine.hpp"

#include <charconv>
#include <filesystem>
#include <sstream>

#include "logdoc/text.hpp"

#ifndef LOGDOC_DATA_DIR
#define LOGDOC_DATA_DIR "data"
#endif

namespace logdoc {

namespace fs = std::filesystem;

std::string data_dir() { return LOGDOC_DATA_DIR; }

EngineConfig EngineConfig::defaults() {
  EngineConfig c;
  const fs::path d = data_dir();
  c.grammar = (d / "grammar.txt").string();
  c.lexicon = (d / "lexicon.txt").string();
  c.schemes = (d / "schemes.txt").string();
  c.levels = (d / "levels.txt").string();
  c.postulates = (d / "postulates.txt").string();
  c.isa = (d / "isa.txt").string();
  return c;
}

EngineConfig EngineConfig::load(const std::string& path) {
  EngineConfig c = defaults();
  const std::string base = fs::path(path).parent_path().string();
  std::istringstream in(read_file(path));
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto line = trim(strip_comment(raw));
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    try {
      c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), base);
    } catch (const Error& e) {
      throw Error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return c;
}

namespace {

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw Error("invalid value '" + value + "' for " + key);
  return out;
}

}  // namespace

void EngineConfig::set(const std::string& key, const std::string& value, const std::string& base_dir) {
  auto path = [&] {
    fs::path p(value);
    if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
    return p.string();
  };
  if (key == "grammar") grammar = path();
  else if (key == "lexicon") lexicon = path();
  else if (key == "schemes") schemes = path();
  else if (key == "levels") levels = path();
  else if (key == "postulates") postulates = path();
  else if (key == "isa") isa = path();
  else if (key == "kb") kb = path();
  else if (key == "M") search.M = parse_number<std::size_t>(key, value);
  else if (key == "N") search.N = parse_number<std::size_t>(key, value);
  else if (key == "O") search.O = parse_number<std::size_t>(key, value);
  else if (key == "budget") search.budget = parse_number<std::size_t>(key, value);
  else if (key == "depth") search.depth = parse_number<std::size_t>(key, value);
  else if (key == "theta") search.theta = parse_number<double>(key, value);
  else if (key == "w_ra") weights.right_association = parse_number<double>(key, value);
  else if (key == "w_ma") weights.minimal_attachment = parse_number<double>(key, value);
  else if (key == "max_edges") max_edges = parse_number<std::size_t>(key, value);
  else if (key == "skolem_start") {
    skolem_start = parse_number<std::uint32_t>(key, value);
    if (skolem_start == 0) throw Error("skolem_start must be positive");
  } else {
    throw Error("unknown configuration key '" + key + "'");
  }
}

void EngineConfig::validate() const {
  search.validate();
  auto need = [](const std::string& what, const std::string& p, bool optional) {
    if (p.empty()) {
      if (optional) return;
      throw Error("no " + what + " file configured");
    }
    if (!fs::is_regular_file(p)) throw Error(what + " file not found: " + p);
  };
  need("grammar", grammar, false);
  need("lexicon", lexicon, false);
  need("schemes", schemes, false);
  need("levels", levels, false);
  need("postulates", postulates, true);
  need("isa", isa, true);
}

TranslatorOptions EngineConfig::translator_options() const {
  TranslatorOptions o;
  o.weights = weights;
  o.theta = search.theta;
  o.max_edges = max_edges;
  return o;
}

Translator EngineConfig::make_translator() const {
  return Translator(Lexicon::load(lexicon), Grammar::load(grammar), SchemeTable::load(schemes),
                    LevelTable::load(levels), translator_options());
}

}  // namespace logdoc
