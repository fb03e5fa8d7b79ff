#pragma once

#include <map>
#include <string>
#include <vector>

#include "efpl/ast.hpp"
#include "efpl/structure.hpp"

namespace efpl {

// Superstrate (or Let-bound) predicate name -> current tuple set.
using Interpretation = std::map<std::string, RelationData>;

// Stages of the inflationary iteration: stages[0] is bottom, the last entry
// is the fixed point. bound = 1 + sum over superstrate P of n^arity(P).
struct IterationTrace {
  std::vector<Interpretation> stages;
  std::size_t bound = 0;
};

bool subseteq(const Interpretation& a, const Interpretation& b);

// Truth of f in s under val. env supplies interpretations for ambient
// Let-bound predicates referenced free in f. Let nodes compute the least
// fixed point of their clause system, recomputed per evaluation context.
bool eval_formula(const Formula& f, const Structure& s, const Valuation& val,
                  const Interpretation& env = {});

// Least fixed point of a simultaneous clause system. Outer free variables of
// clause bodies are read from val. Result keyed by clause predicate.
Interpretation lfp_clauses(const std::vector<Clause>& clauses, const Structure& s,
                           const Valuation& val = {}, const Interpretation& env = {});

// Same fixed point via staged simultaneous (Jacobi) iteration from bottom;
// stage t+1 is the one-step image of stage t. If stages is non-null the whole
// chain from bottom to the fixed point is stored there.
Interpretation lfp_clauses_stages(const std::vector<Clause>& clauses, const Structure& s,
                                  const Valuation& val = {}, const Interpretation& env = {},
                                  std::vector<Interpretation>* stages = nullptr);

// One application of the plain rule operator: all head tuples witnessed by
// some valuation satisfying a rule body under a.
Interpretation delta_step(const Program& p, const Structure& s, const Interpretation& a);

// Inflationary step: delta_step union a.
Interpretation gamma_step(const Program& p, const Structure& s, const Interpretation& a);

struct ProgramResult {
  Interpretation fixpoint;
  IterationTrace trace;
};

// Iterate gamma_step from bottom to the fixed point. Checks the trace
// invariants (monotone, length within bound) on every call.
ProgramResult eval_program(const Program& p, const Structure& s);

// Iterate the plain (non-inflationary) delta_step from bottom.
Interpretation eval_plain_delta(const Program& p, const Structure& s);

// Exhaustive least closed point: enumerate all interpretations over the
// superstrate tuple space (at most 16 tuples) and intersect the closed ones.
// Throws Error(TupleSpaceTooLarge) above that.
Interpretation least_closed_point_oracle(const Program& p, const Structure& s);

// Tuple-space size of p's superstrate over a universe of size n, clamped.
std::size_t superstrate_space(const Program& p, int n);

}  // namespace efpl
