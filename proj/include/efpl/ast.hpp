#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "efpl/diagnostics.hpp"

namespace efpl {

// Built-in equality predicate. Negatable, binary, computed as identity;
// it never appears in vocabularies or structures explicitly.
inline const std::string kEq = "=";

// ---------------------------------------------------------------------------
// Terms

struct Term {
  bool is_var = false;
  std::string name;        // variable name or function symbol
  std::vector<Term> args;  // empty for variables and constants

  static Term var(std::string n) { return Term{true, std::move(n), {}}; }
  static Term app(std::string fn, std::vector<Term> as = {}) {
    return Term{false, std::move(fn), std::move(as)};
  }

  bool operator==(const Term&) const = default;
  bool operator<(const Term& o) const;
};

// ---------------------------------------------------------------------------
// Formulas

struct Formula;
struct Clause;

// Immutable shared box for recursive formula children. Equality is structural.
class FormulaBox {
 public:
  FormulaBox(Formula f);
  const Formula& get() const { return *ptr_; }
  const Formula& operator*() const { return *ptr_; }
  const Formula* operator->() const { return ptr_.get(); }
  friend bool operator==(const FormulaBox& a, const FormulaBox& b);

 private:
  std::shared_ptr<const Formula> ptr_;
};

struct Atom {
  std::string pred;
  std::vector<Term> args;
  bool operator==(const Atom&) const = default;
};

struct NegAtom {
  std::string pred;
  std::vector<Term> args;
  bool operator==(const NegAtom&) const = default;
};

struct And {
  std::vector<Formula> parts;  // empty = true
  bool operator==(const And&) const;
};

struct Or {
  std::vector<Formula> parts;  // empty = false
  bool operator==(const Or&) const;
};

struct Exists {
  std::string var;
  FormulaBox body;
  bool operator==(const Exists&) const;
};

struct Let {
  std::vector<Clause> clauses;
  FormulaBox body;
  // clause order is irrelevant: compared as a set
  bool operator==(const Let&) const;
};

struct Formula {
  std::variant<Atom, NegAtom, And, Or, Exists, Let> node;

  bool operator==(const Formula&) const;

  static Formula atom(std::string pred, std::vector<Term> args = {});
  static Formula neg(std::string pred, std::vector<Term> args = {});
  static Formula eq(Term a, Term b);
  static Formula neq(Term a, Term b);
  static Formula truth() { return Formula{And{{}}}; }
  static Formula falsity() { return Formula{Or{{}}}; }
  // conj/disj collapse a singleton to its sole element; empty stays And([])/Or([])
  static Formula conj(std::vector<Formula> parts);
  static Formula disj(std::vector<Formula> parts);
  static Formula exists(std::string var, Formula body);
  static Formula exists_many(const std::vector<std::string>& vars, Formula body);
  // let with no clauses collapses to the body
  static Formula let(std::vector<Clause> clauses, Formula body);
};

// One recursion equation P(x1,...,xk) <- body inside a Let.
struct Clause {
  std::string pred;
  std::vector<std::string> params;
  Formula body;
  bool operator==(const Clause&) const = default;
};

// ---------------------------------------------------------------------------
// Vocabularies

enum class PredClass { negatable, positive };

struct PredSig {
  int arity = 0;
  PredClass cls = PredClass::negatable;
  bool superstrate = false;
  bool operator==(const PredSig&) const = default;
};

struct Vocabulary {
  std::map<std::string, int> functions;      // name -> arity
  std::map<std::string, PredSig> predicates; // includes "="

  // Vocabulary with just the built-in equality predicate.
  static Vocabulary base();

  Vocabulary& fn(std::string name, int arity);
  Vocabulary& pred(std::string name, int arity, PredClass cls = PredClass::negatable);
  Vocabulary& sup(std::string name, int arity);  // superstrate (always positive)

  bool has_fn(const std::string& n) const { return functions.count(n) != 0; }
  bool has_pred(const std::string& n) const { return predicates.count(n) != 0; }

  ValidationReport validate() const;
  bool operator==(const Vocabulary&) const = default;
};

// ---------------------------------------------------------------------------
// Programs

// Rule body: positive superstrate atoms plus a quantifier-free substrate part.
// An empty substrate part is represented by And([]) (true).
struct Rule {
  Atom head;
  std::vector<Atom> superstrate_atoms;
  Formula substrate = Formula::truth();
  bool operator==(const Rule&) const = default;
};

struct Program {
  Vocabulary vocab;
  std::vector<Rule> rules;
  bool operator==(const Program&) const = default;
};

// ---------------------------------------------------------------------------
// Core operations

// Smallest k >= 0 with base + "_g" + k not in avoid.
std::string fresh_symbol(const std::string& base, const std::set<std::string>& avoid);

// True iff name is shaped like generator output: base (no "_g") followed by
// one or more "_g<digits>" groups with no leading zeros.
bool generated_name_shape(std::string_view name);

std::set<std::string> term_vars(const Term& t);
std::set<std::string> free_vars(const Formula& f);

// Every identifier occurring anywhere: variables (free and bound), predicate
// and function symbols, Let-bound predicates. Used to build avoid-sets.
void collect_names(const Term& t, std::set<std::string>& out);
void collect_names(const Formula& f, std::set<std::string>& out);
std::set<std::string> all_names(const Formula& f);
std::set<std::string> all_names(const Program& p);

Term substitute(const Term& t, const std::map<std::string, Term>& binding);
// Simultaneous capture-avoiding substitution of variables.
Formula substitute(const Formula& f, const std::map<std::string, Term>& binding);

// Renames Let-bound predicates. Mapping must be injective and targets fresh
// with respect to the vocabulary and to names occurring in f (a source name
// mapped to itself is permitted). Throws Error(ClashWithExistingName).
Formula rename_let_predicates(const Formula& f, const std::map<std::string, std::string>& mapping,
                              const Vocabulary& vocab);

ValidationReport check_formula(const Formula& f, const Vocabulary& vocab);
ValidationReport check_program(const Program& p);

// Traversal assert: every Let-bound predicate occurs only positively.
bool let_predicates_positive(const Formula& f);

}  // namespace efpl
