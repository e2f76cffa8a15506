#include "logdoc/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "logdoc/text.hpp"

namespace logdoc {

std::string_view to_string(Category c) {
  switch (c) {
    case Category::Det: return "Det";
    case Category::Adj: return "Adj";
    case Category::N: return "N";
    case Category::RelN: return "RelN";
    case Category::V: return "V";
    case Category::P: return "P";
    case Category::Adv: return "Adv";
    case Category::PName: return "PName";
    case Category::Poss: return "Poss";
  }
  return "?";
}

std::optional<Category> parse_category(std::string_view text) {
  static const std::pair<std::string_view, Category> table[] = {
      {"Det", Category::Det}, {"Adj", Category::Adj},     {"N", Category::N},
      {"RelN", Category::RelN}, {"V", Category::V},       {"P", Category::P},
      {"Adv", Category::Adv}, {"PName", Category::PName}, {"Poss", Category::Poss}};
  for (const auto& [name, cat] : table)
    if (name == text) return cat;
  return std::nullopt;
}

bool LexEntry::is_closed_class() const {
  return category == Category::Det || category == Category::P || category == Category::Poss;
}

std::vector<std::string> morphological_variants(const std::string& word) {
  std::vector<std::string> out{word};
  auto ends = [&](std::string_view suffix) {
    return word.size() > suffix.size() + 1 &&
           std::string_view(word).substr(word.size() - suffix.size()) == suffix;
  };
  auto stem = [&](std::size_t cut) { return word.substr(0, word.size() - cut); };
  if (ends("ies")) out.push_back(stem(3) + "y");
  if (ends("es")) out.push_back(stem(2));
  if (ends("s") && !ends("ss")) out.push_back(stem(1));
  if (ends("ed")) {
    out.push_back(stem(2));
    out.push_back(stem(1));  // "based" -> "base"
  }
  if (ends("ing")) {
    out.push_back(stem(3));
    out.push_back(stem(3) + "e");
  }
  return out;
}

namespace {

std::vector<std::string> split_list(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

PrepTarget parse_target(const std::string& value, const std::string& line) {
  auto colon = value.find(':');
  if (colon == std::string::npos) {
    if (!is_constant_symbol(value)) throw SyntaxError("invalid modifier '" + value + "'", line, 0);
    return {PrepTarget::Kind::Core, value};
  }
  std::string kind = value.substr(0, colon);
  std::string symbol = value.substr(colon + 1);
  if (!is_constant_symbol(symbol)) throw SyntaxError("invalid target '" + symbol + "'", line, 0);
  if (kind == "circ") return {PrepTarget::Kind::Circ, symbol};
  if (kind == "rel") return {PrepTarget::Kind::Rel, symbol};
  throw SyntaxError("unknown target kind '" + kind + "'", line, 0);
}

void validate(LexEntry& e, const std::string& line) {
  auto feature = [&](const char* key) -> const std::string* {
    auto it = e.features.find(key);
    return it == e.features.end() ? nullptr : &it->second;
  };
  if (const auto* w = feature("w")) {
    auto [ptr, ec] = std::from_chars(w->data(), w->data() + w->size(), e.weight);
    if (ec != std::errc() || ptr != w->data() + w->size())
      throw SyntaxError("invalid weight '" + *w + "'", line, 0);
  }
  switch (e.category) {
    case Category::V: {
      const auto* evtype = feature("evtype");
      const auto* roles = feature("roles");
      if (!evtype || !roles) throw SyntaxError("verb entry needs evtype= and roles=", line, 0);
      VerbFrame f;
      f.evtype = *evtype;
      f.roles = split_list(*roles, ',');
      if (f.roles.size() < 2)
        throw SyntaxError("verb entry needs an obligatory role beyond the subject", line, 0);
      if (const auto* opt = feature("opt")) f.optional = split_list(*opt, ',');
      f.object = feature("obj") ? *feature("obj") : f.roles[1];
      if (const auto* d = feature("dobj")) {
        f.double_object = split_list(*d, ',');
      } else if (f.roles.size() >= 3) {
        f.double_object = {f.roles[2], f.roles[1]};
      }
      e.frame = std::move(f);
      break;
    }
    case Category::P: {
      const auto* prep = feature("prep");
      if (!prep) throw SyntaxError("preposition entry needs prep=", line, 0);
      e.target = parse_target(*prep, line);
      e.relational_argument = feature("relarg") && *feature("relarg") == "1";
      break;
    }
    case Category::Adv: {
      const auto* prep = feature("prep");
      if (!prep) throw SyntaxError("adverb entry needs prep=", line, 0);
      e.target = parse_target(*prep, line);
      break;
    }
    case Category::RelN:
      e.relation = feature("rel") ? *feature("rel") : e.lemma;
      if (!is_constant_symbol(e.relation))
        throw SyntaxError("invalid relation '" + e.relation + "'", line, 0);
      break;
    case Category::N:
      if (const auto* d = feature("deverbal")) {
        auto colon = d->find(':');
        if (colon == std::string::npos) throw SyntaxError("deverbal=verb:evtype expected", line, 0);
        e.deverbal = Deverbal{d->substr(0, colon), d->substr(colon + 1)};
      }
      if (const auto* p = feature("prop")) e.property = *p;
      break;
    default:
      break;
  }
}

}  // namespace

Lexicon Lexicon::parse(std::string_view text, const std::string& origin) {
  Lexicon lex;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    auto fields = split_list(line, '|');
    // split_list drops empty trailing feature fields; require at least 3.
    if (fields.size() < 3 || fields.size() > 4)
      throw SyntaxError(origin + ":" + std::to_string(lineno) + ": expected 3 or 4 '|' fields",
                        line, 0);
    LexEntry e;
    for (auto& tok : split_list(fields[0], ' ')) e.surface.push_back(to_lower(tok));
    auto cat = parse_category(fields[1]);
    if (!cat)
      throw SyntaxError(origin + ":" + std::to_string(lineno) + ": unknown category '" +
                            fields[1] + "'",
                        line, 0);
    e.category = *cat;
    e.lemma = fields[2];
    if (!is_constant_symbol(e.lemma))
      throw SyntaxError(origin + ":" + std::to_string(lineno) + ": invalid lemma", line, 0);
    if (fields.size() == 4) {
      for (const auto& kv : split_list(fields[3], ';')) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw SyntaxError(origin + ":" + std::to_string(lineno) + ": expected key=value", line, 0);
        e.features[trim(kv.substr(0, eq))] = trim(kv.substr(eq + 1));
      }
    }
    try {
      validate(e, line);
    } catch (const SyntaxError& err) {
      throw SyntaxError(origin + ":" + std::to_string(lineno) + ": " + err.what(), line, 0);
    }
    lex.add(std::move(e));
  }
  return lex;
}

Lexicon Lexicon::load(const std::string& path) { return parse(read_file(path), path); }

void Lexicon::add(LexEntry entry) {
  if (entry.surface.empty()) throw Error("lexicon entry without surface form");
  max_len_ = std::max(max_len_, entry.surface.size());
  by_first_[entry.surface.front()].push_back(entries_.size());
  entries_.push_back(std::move(entry));
}

std::pair<std::size_t, std::vector<const LexEntry*>> Lexicon::match(
    const std::vector<std::string>& tokens, std::size_t start) const {
  std::size_t best = 0;
  std::vector<const LexEntry*> found;
  auto consider = [&](const LexEntry& e) {
    std::size_t len = e.surface.size();
    if (start + len > tokens.size() || len < best) return;
    for (std::size_t k = 0; k + 1 < len; ++k)
      if (tokens[start + k] != e.surface[k]) return;
    // Only the last token of an entry may be inflected.
    auto variants = morphological_variants(tokens[start + len - 1]);
    if (std::find(variants.begin(), variants.end(), e.surface.back()) == variants.end()) return;
    if (len > best) {
      best = len;
      found.clear();
    }
    found.push_back(&e);
  };
  if (start < tokens.size()) {
    if (auto it = by_first_.find(tokens[start]); it != by_first_.end())
      for (auto idx : it->second) consider(entries_[idx]);
    // Single-token entries reached only through morphology.
    for (const auto& variant : morphological_variants(tokens[start])) {
      if (variant == tokens[start]) continue;
      if (auto it = by_first_.find(variant); it != by_first_.end())
        for (auto idx : it->second)
          if (entries_[idx].surface.size() == 1) consider(entries_[idx]);
    }
  }
  // Exact surface matches win over morphological ones of the same length.
  if (best == 1 && found.size() > 1) {
    std::vector<const LexEntry*> exact;
    for (const auto* e : found)
      if (e->surface.front() == tokens[start]) exact.push_back(e);
    if (!exact.empty()) found = std::move(exact);
  }
  std::vector<const LexEntry*> unique;
  for (const auto* e : found)
    if (std::find(unique.begin(), unique.end(), e) == unique.end()) unique.push_back(e);
  return {best, std::move(unique)};
}

std::vector<const LexEntry*> Lexicon::lookup(const std::string& word) const {
  return match({word}, 0).second;
}

}  // namespace logdoc
