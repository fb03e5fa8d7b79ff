#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "efpl/ast.hpp"

namespace efpl {

// Deliberate translator defects for checking that the test harness has teeth.
enum class Mutation {
  none,
  drop_disjunct,        // merge_rules forgets one rule body
  skip_head_equality,   // flatten_heads omits one equality conjunct
  skip_param_widening,  // eliminate_parameters leaves one clause unwidened
  swap_and_or,          // one emitted rule body turns conjunction into disjunction
};

// Rewrites every head to the canonical fresh variable tuple, moving the
// original head terms into equality conjuncts of the substrate part.
Program flatten_heads(const Program& p, Mutation m = Mutation::none);

struct MergedRule {
  std::vector<std::string> head_vars;
  Formula body = Formula::falsity();
  bool operator==(const MergedRule&) const = default;
};

struct MergedProgram {
  Vocabulary vocab;
  std::map<std::string, MergedRule> preds;  // one entry per superstrate predicate
};

// Combines all rules of each predicate into one disjunctive body; predicates
// heading no rule get body false. Requires flattened heads.
MergedProgram merge_rules(const Program& p, Mutation m = Mutation::none);

// Existentially closes each body over its non-head variables.
MergedProgram quantify_bodies(MergedProgram mp);

// LET merged-and-quantified clauses THEN target(canonical tuple).
Formula program_to_formula(const Program& p, const std::string& target,
                           Mutation m = Mutation::none);

// A single flat Let: clause bodies and the THEN-body are existential
// first-order, clause body free variables contained in the clause params.
struct NormalFormFormula {
  std::vector<Clause> clauses;
  Formula body = Formula::truth();
};

Formula as_formula(const NormalFormFormula& nf);
bool is_existential_fo(const Formula& f);
bool is_normal_form(const NormalFormFormula& nf);

NormalFormFormula normalize(const Formula& f, Mutation m = Mutation::none);

// Widens each clause whose body has free variables beyond its params,
// appending those variables (sorted) to the predicate's argument tuple at
// every occurrence. Iterates until every clause body is closed.
NormalFormFormula eliminate_parameters(std::vector<Clause> clauses, Formula body,
                                       std::set<std::string> avoid = {},
                                       Mutation m = Mutation::none);

// Hoists one level of Lets out of clause bodies and the THEN-body into a
// single flat clause list, renaming hoisted predicates apart where needed.
NormalFormFormula flatten_let(const std::vector<Clause>& clauses, const Formula& body,
                              std::set<std::string> avoid = {});

// Adds a fresh clause Q(u1,...,un) <- body and replaces the body by Q(ū).
NormalFormFormula alias_then(NormalFormFormula nf, const std::vector<std::string>& free_order,
                             std::set<std::string> avoid = {});

struct PrenexDNF {
  std::vector<std::string> vars;                 // existential prefix, outermost first
  std::vector<std::vector<Formula>> disjuncts;   // each a conjunction of literals
};

// Prenex form with capture-free renaming, matrix in disjunctive normal form.
PrenexDNF prenex_dnf(const Formula& f, const std::set<std::string>& avoid = {});

struct TranslationResult {
  Program program;
  std::string distinguished;
  std::vector<std::string> free_vars;
};

// normalize, alias the THEN-body, then emit one rule per clause and disjunct.
// vocab must be all-negatable substrate.
TranslationResult formula_to_program(const Formula& f, const Vocabulary& vocab,
                                     Mutation m = Mutation::none);

}  // namespace efpl
