#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "efpl/ast.hpp"
#include "efpl/diagnostics.hpp"

namespace efpl {

// Finite structure over universe {0, ..., universe-1}. Function tables are
// total, stored row-major (index a1*n^(k-1) + ... + ak). Equality is computed,
// never stored.
struct FunctionTable {
  int arity = 0;
  std::vector<int> entries;
  bool operator==(const FunctionTable&) const = default;
};

struct RelationData {
  int arity = 0;
  std::set<std::vector<int>> tuples;
  bool operator==(const RelationData&) const = default;
};

struct Structure {
  int universe = 0;
  std::map<std::string, FunctionTable> functions;
  std::map<std::string, RelationData> relations;
  bool operator==(const Structure&) const = default;

  // Chain structure: universe n, constant 0, clamped successor s.
  static Structure succ(int n);
  // Universe n with constants 0 and 1, clamped plus and times, and the
  // strict order relation "less".
  static Structure clamp_arith(int n);
  // Vocabulary describing exactly the symbols this structure interprets
  // (all relations negatable substrate predicates).
  Vocabulary implied_vocabulary() const;
};

using Valuation = std::map<std::string, int>;

// Checks that s interprets every substrate symbol of v: total in-range tables
// of the right size, relations of the right arity with in-range tuples.
// Relations absent from s count as empty.
ValidationReport validate_structure(const Structure& s, const Vocabulary& v);

// Throws Error(UnboundVariable / UndeclaredSymbol / ArityMismatch).
int eval_term(const Term& t, const Structure& s, const Valuation& val);

struct Homomorphism {
  Structure source;
  Structure target;
  std::vector<int> map;  // size = source.universe, entries in target
  bool operator==(const Homomorphism&) const = default;
};

// Strong homomorphism check: commutes with functions, preserves relations
// forward, and for negatable predicates (equality included) also preserves
// complements. The vocabulary decides which predicates are negatable.
ValidationReport check_homomorphism(const Homomorphism& h, const Vocabulary& v);

// Same check with every complement condition dropped (deliberately weaker;
// exists so the suite can demonstrate the strong condition is load-bearing).
ValidationReport check_homomorphism_weak(const Homomorphism& h, const Vocabulary& v);

}  // namespace efpl
