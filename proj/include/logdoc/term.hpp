#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace logdoc {

/// Base class for every error the library reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (clause lines, data files). Carries the offending
/// line and a character position within it.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::string line, std::size_t pos);
  const std::string& line() const { return line_; }
  std::size_t position() const { return pos_; }

 private:
  std::string line_;
  std::size_t pos_;
};

/// Representation level of an atom. Aux is reserved for machinery atoms
/// (isa links) that never describe document content.
enum class Level : std::uint8_t { L1 = 1, L2 = 2, L3 = 3, Aux = 4 };

std::string_view to_string(Level level);
std::optional<Level> parse_level(std::string_view text);

class Term {
 public:
  enum class Kind : std::uint8_t { Variable, Constant, Skolem, Witness };

  static Term variable(std::string name);
  static Term constant(std::string symbol);
  static Term skolem(std::uint32_t index);
  // Proof-local existential witness; never stored in a knowledge base.
  static Term witness(std::uint32_t index);

  Kind kind() const { return kind_; }
  bool is_variable() const { return kind_ == Kind::Variable; }
  bool is_constant() const { return kind_ == Kind::Constant; }
  bool is_skolem() const { return kind_ == Kind::Skolem; }
  bool is_witness() const { return kind_ == Kind::Witness; }
  bool is_ground() const { return kind_ != Kind::Variable; }

  // Variable name or constant symbol; empty for skolems and witnesses.
  const std::string& name() const { return name_; }
  std::uint32_t index() const { return index_; }

  std::string str() const;

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;

 private:
  Term(Kind kind, std::string name, std::uint32_t index)
      : kind_(kind), name_(std::move(name)), index_(index) {}

  Kind kind_;
  std::string name_;
  std::uint32_t index_;
};

/// A flat atom: predicate over constants, variables and skolems.
struct Atom {
  std::string predicate;
  std::vector<Term> args;
  Level level = Level::L1;

  std::size_t arity() const { return args.size(); }
  bool is_ground() const;
  // "pred/arity", the index key.
  std::string key() const;
  std::string str() const;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

Atom make_atom(std::string predicate, std::vector<Term> args, Level level = Level::L1);

struct Provenance {
  std::uint32_t doc = 0;
  std::uint32_t frag = 0;

  friend bool operator==(const Provenance&, const Provenance&) = default;
  friend auto operator<=>(const Provenance&, const Provenance&) = default;
};

/// A ground atom annotated with the passage it was derived from.
struct Fact {
  Atom atom;
  Provenance prov;
  std::optional<std::uint32_t> group;

  friend bool operator==(const Fact&, const Fact&) = default;
};

/// Throws Error if the fact is not ground or its provenance is not positive.
void check_fact(const Fact& fact);

/// Finite map from variable names to terms. Identity bindings are never stored.
class Substitution {
 public:
  using Map = std::map<std::string, Term>;

  Substitution() = default;
  explicit Substitution(Map bindings);

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const Map& bindings() const { return map_; }
  auto begin() const { return map_.begin(); }
  auto end() const { return map_.end(); }

  const Term* find(const std::string& var) const;
  // Adds var -> term; a binding of a variable to itself is dropped.
  void bind(const std::string& var, Term term);

  Term apply(const Term& term) const;
  Atom apply(const Atom& atom) const;
  std::vector<Atom> apply(const std::vector<Atom>& atoms) const;

  std::string str() const;

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  Map map_;
};

inline Term apply_substitution(const Term& t, const Substitution& s) { return s.apply(t); }
inline Atom apply_substitution(const Atom& a, const Substitution& s) { return s.apply(a); }

// Textual clause syntax.
//   constants:  lowercase identifiers with digits and underscores
//   variables:  identifiers starting with an uppercase letter or '_'
//   skolems:    sk-<n>
Term parse_term(std::string_view text);
Atom parse_atom(std::string_view text);
// Parses "pred(a,b)" starting at pos; advances pos past the closing parenthesis.
Atom parse_atom_at(std::string_view text, std::size_t& pos);

/// Renders `pred(arg1,...,argk)/frag/doc`.
std::string format_annotated(const Fact& fact);
/// Inverse of format_annotated; accepts an optional trailing ` level=Lx`.
Fact parse_annotated(std::string_view line);

bool is_constant_symbol(std::string_view text);
bool is_variable_name(std::string_view text);

}  // namespace logdoc
