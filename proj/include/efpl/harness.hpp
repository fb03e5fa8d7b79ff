#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "efpl/ast.hpp"
#include "efpl/structure.hpp"
#include "efpl/translate.hpp"

namespace efpl {

struct GenConfig {
  std::uint64_t seed = 1;
  int min_universe = 1;
  int max_universe = 4;
  int max_depth = 4;
  int max_clauses = 2;
  int max_arity = 2;
  int max_rules = 6;
  int trials = 500;
};

// A reproducible counterexample: artifact and structure are printed in the
// concrete syntax, seed is the per-trial seed that regenerates the inputs.
struct Discrepancy {
  std::string kind;
  std::uint64_t seed = 0;
  std::string artifact;
  std::string structure;
  std::string detail;
};

using CheckResult = std::optional<Discrepancy>;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t trial);

Vocabulary gen_vocabulary(const GenConfig& cfg, bool with_superstrate);
Structure gen_structure(const Vocabulary& v, const GenConfig& cfg);
Formula gen_formula(const Vocabulary& v, const GenConfig& cfg);
Program gen_program(const Vocabulary& v, const GenConfig& cfg);

bool contains_nested_let(const Formula& f);

// Compares eval_program(p)[target] with program_to_formula(p, target) tuple
// by tuple over cfg.trials random structures; shrinks any counterexample.
CheckResult check_equivalence_program(const Program& p, const std::string& target,
                                      const GenConfig& cfg, Mutation m = Mutation::none);

// Compares eval_formula(f) with the distinguished relation of
// formula_to_program(f) over cfg.trials random structures.
CheckResult check_equivalence_formula(const Formula& f, const Vocabulary& v,
                                      const GenConfig& cfg, Mutation m = Mutation::none);

// Generates embeddings (weakened: arbitrary surjections checked only for
// forward preservation) plus random formulas; asserts truth transports.
CheckResult check_homomorphism_preservation(const GenConfig& cfg, bool weakened = false);

// Trial loops that also generate the vocabularies, programs, and formulas.
CheckResult fuzz_theorem2_forward(const GenConfig& cfg, Mutation m = Mutation::none);
CheckResult fuzz_theorem2_converse(const GenConfig& cfg, Mutation m = Mutation::none);
CheckResult fuzz_operator_lemma(const GenConfig& cfg);
CheckResult fuzz_star_infinity(const GenConfig& cfg);
CheckResult fuzz_sectioning(const GenConfig& cfg);

}  // namespace efpl
