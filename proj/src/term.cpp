#include "logdoc/term.hpp"

#include <cctype>
#include <charconv>

namespace logdoc {

SyntaxError::SyntaxError(const std::string& what, std::string line, std::size_t pos)
    : Error(what + " at position " + std::to_string(pos) + " in '" + line + "'"),
      line_(std::move(line)),
      pos_(pos) {}

std::string_view to_string(Level level) {
  switch (level) {
    case Level::L1: return "L1";
    case Level::L2: return "L2";
    case Level::L3: return "L3";
    case Level::Aux: return "AUX";
  }
  return "?";
}

std::optional<Level> parse_level(std::string_view text) {
  if (text == "L1") return Level::L1;
  if (text == "L2") return Level::L2;
  if (text == "L3") return Level::L3;
  if (text == "AUX") return Level::Aux;
  return std::nullopt;
}

bool is_constant_symbol(std::string_view text) {
  if (text.empty() || !(std::islower(static_cast<unsigned char>(text[0])) ||
                        std::isdigit(static_cast<unsigned char>(text[0]))))
    return false;
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (!(std::islower(u) || std::isdigit(u) || c == '_')) return false;
  }
  // sk-<n> is reserved for skolems and never reaches here (contains '-').
  return true;
}

bool is_variable_name(std::string_view text) {
  if (text.empty()) return false;
  auto first = static_cast<unsigned char>(text[0]);
  if (!(std::isupper(first) || text[0] == '_')) return false;
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || c == '_')) return false;
  }
  return true;
}

Term Term::variable(std::string name) {
  if (!is_variable_name(name)) throw Error("invalid variable name '" + name + "'");
  return Term(Kind::Variable, std::move(name), 0);
}

Term Term::constant(std::string symbol) {
  if (!is_constant_symbol(symbol)) throw Error("invalid constant symbol '" + symbol + "'");
  return Term(Kind::Constant, std::move(symbol), 0);
}

Term Term::skolem(std::uint32_t index) {
  if (index == 0) throw Error("skolem index must be positive");
  return Term(Kind::Skolem, {}, index);
}

Term Term::witness(std::uint32_t index) { return Term(Kind::Witness, {}, index); }

std::string Term::str() const {
  switch (kind_) {
    case Kind::Variable:
    case Kind::Constant: return name_;
    case Kind::Skolem: return "sk-" + std::to_string(index_);
    case Kind::Witness: return "w-" + std::to_string(index_);
  }
  return {};
}

bool Atom::is_ground() const {
  for (const auto& t : args)
    if (!t.is_ground()) return false;
  return true;
}

std::string Atom::key() const { return predicate + "/" + std::to_string(args.size()); }

std::string Atom::str() const {
  std::string out = predicate;
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += args[i].str();
  }
  out += ')';
  return out;
}

Atom make_atom(std::string predicate, std::vector<Term> args, Level level) {
  if (!is_constant_symbol(predicate)) throw Error("invalid predicate symbol '" + predicate + "'");
  if (args.empty()) throw Error("atom '" + predicate + "' must have at least one argument");
  return Atom{std::move(predicate), std::move(args), level};
}

void check_fact(const Fact& fact) {
  if (!fact.atom.is_ground()) throw Error("fact is not ground: " + fact.atom.str());
  for (const auto& t : fact.atom.args)
    if (t.is_witness()) throw Error("fact contains a proof witness: " + fact.atom.str());
  if (fact.prov.doc == 0 || fact.prov.frag == 0)
    throw Error("fact provenance must be positive: " + fact.atom.str());
}

Substitution::Substitution(Map bindings) {
  for (auto& [var, term] : bindings) bind(var, std::move(term));
}

const Term* Substitution::find(const std::string& var) const {
  auto it = map_.find(var);
  return it == map_.end() ? nullptr : &it->second;
}

void Substitution::bind(const std::string& var, Term term) {
  if (term.is_variable() && term.name() == var) return;
  map_.insert_or_assign(var, std::move(term));
}

Term Substitution::apply(const Term& term) const {
  if (!term.is_variable()) return term;
  const Term* bound = find(term.name());
  return bound ? *bound : term;
}

Atom Substitution::apply(const Atom& atom) const {
  Atom out{atom.predicate, {}, atom.level};
  out.args.reserve(atom.args.size());
  for (const auto& t : atom.args) out.args.push_back(apply(t));
  return out;
}

std::vector<Atom> Substitution::apply(const std::vector<Atom>& atoms) const {
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (const auto& a : atoms) out.push_back(apply(a));
  return out;
}

std::string Substitution::str() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [var, term] : map_) {
    if (!first) out += ", ";
    first = false;
    out += var + "->" + term.str();
  }
  return out + "}";
}

namespace {

bool is_symbol_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '-';
}

std::uint32_t parse_positive(std::string_view digits, std::string_view line, std::size_t pos,
                             const char* what) {
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty())
    throw SyntaxError(std::string("expected ") + what, std::string(line), pos);
  if (value == 0) throw SyntaxError(std::string(what) + " must be positive", std::string(line), pos);
  return value;
}

}  // namespace

Term parse_term(std::string_view text) {
  if (text.size() > 3 && text.substr(0, 3) == "sk-") {
    return Term::skolem(parse_positive(text.substr(3), text, 3, "skolem index"));
  }
  if (is_variable_name(text)) return Term::variable(std::string(text));
  if (is_constant_symbol(text)) return Term::constant(std::string(text));
  throw SyntaxError("invalid term '" + std::string(text) + "'", std::string(text), 0);
}

Atom parse_atom_at(std::string_view text, std::size_t& pos) {
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  skip_ws();
  std::size_t start = pos;
  while (pos < text.size() && is_symbol_char(text[pos])) ++pos;
  std::string pred(text.substr(start, pos - start));
  if (!is_constant_symbol(pred))
    throw SyntaxError("expected predicate symbol", std::string(text), start);
  if (pos >= text.size() || text[pos] != '(')
    throw SyntaxError("expected '('", std::string(text), pos);
  ++pos;
  std::vector<Term> args;
  for (;;) {
    skip_ws();
    std::size_t arg_start = pos;
    while (pos < text.size() && is_symbol_char(text[pos])) ++pos;
    std::string_view arg = text.substr(arg_start, pos - arg_start);
    if (arg.empty()) throw SyntaxError("expected argument", std::string(text), arg_start);
    try {
      args.push_back(parse_term(arg));
    } catch (const SyntaxError& e) {
      throw SyntaxError("invalid argument '" + std::string(arg) + "'", std::string(text),
                        arg_start + e.position());
    } catch (const Error&) {
      throw SyntaxError("invalid argument '" + std::string(arg) + "'", std::string(text), arg_start);
    }
    skip_ws();
    if (pos >= text.size()) throw SyntaxError("unterminated atom", std::string(text), pos);
    if (text[pos] == ',') {
      ++pos;
      continue;
    }
    if (text[pos] == ')') {
      ++pos;
      break;
    }
    throw SyntaxError("expected ',' or ')'", std::string(text), pos);
  }
  return Atom{std::move(pred), std::move(args), Level::L1};
}

Atom parse_atom(std::string_view text) {
  std::size_t pos = 0;
  Atom atom = parse_atom_at(text, pos);
  while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  if (pos != text.size()) throw SyntaxError("trailing characters", std::string(text), pos);
  return atom;
}

std::string format_annotated(const Fact& fact) {
  return fact.atom.str() + "/" + std::to_string(fact.prov.frag) + "/" +
         std::to_string(fact.prov.doc);
}

Fact parse_annotated(std::string_view line) {
  std::size_t pos = 0;
  Fact fact;
  fact.atom = parse_atom_at(line, pos);
  auto read_number = [&](const char* what) {
    if (pos >= line.size() || line[pos] != '/')
      throw SyntaxError("expected '/'", std::string(line), pos);
    ++pos;
    std::size_t start = pos;
    while (pos < line.size() && std::isdigit(static_cast<unsigned char>(line[pos]))) ++pos;
    return parse_positive(line.substr(start, pos - start), line, start, what);
  };
  fact.prov.frag = read_number("frag");
  fact.prov.doc = read_number("doc");
  if (pos < line.size()) {
    constexpr std::string_view tag = " level=";
    if (line.substr(pos, tag.size()) != tag)
      throw SyntaxError("trailing characters", std::string(line), pos);
    pos += tag.size();
    auto level = parse_level(line.substr(pos));
    if (!level) throw SyntaxError("unknown level tag", std::string(line), pos);
    fact.atom.level = *level;
  }
  if (!fact.atom.is_ground())
    throw SyntaxError("annotated fact must be ground", std::string(line), 0);
  return fact;
}

}  // namespace logdoc
