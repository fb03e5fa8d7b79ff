#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace efpl {

enum class DiagCode {
  // formula checking
  NegationOfPositive,
  ArityMismatch,
  UndeclaredSymbol,
  DuplicateLetPredicate,
  NonDistinctHeadVariables,
  LetPredicateShadowsVocabulary,
  // program checking
  SuperstrateInSubstratePart,
  QuantifierInRuleBody,
  NegatedSuperstrateAtom,
  // structures
  MissingFunctionTable,
  TableEntryOutOfRange,
  TupleArityMismatch,
  EmptyUniverse,
  // homomorphisms
  FunctionNotPreserved,
  RelationNotPreserved,
  NegatableComplementNotPreserved,
  // concrete syntax
  SyntaxError,
  ReservedPrefixUsed,
  ClashWithExistingName,
  // evaluation and translation
  UnboundVariable,
  IllFormed,
  UnknownTarget,
  TupleSpaceTooLarge,
  PositiveSubstratePredicate,
  // cli
  UsageError,
  IoError,
};

std::string_view to_string(DiagCode c);

struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
};

struct Diagnostic {
  DiagCode code;
  std::string path;  // AST path, or "offset a..b" for syntax errors
  std::string message;
};

std::string to_string(const Diagnostic& d);

struct ValidationReport {
  std::vector<Diagnostic> errors;

  bool ok() const { return errors.empty(); }
  bool has(DiagCode c) const;
  void add(DiagCode c, std::string path, std::string message);
  std::string to_string() const;
};

class Error : public std::runtime_error {
 public:
  explicit Error(Diagnostic d);
  const Diagnostic& diagnostic() const { return diag_; }

 private:
  Diagnostic diag_;
};

class ParseError : public Error {
 public:
  ParseError(SourceSpan span, std::string message, DiagCode code = DiagCode::SyntaxError);
  SourceSpan span() const { return span_; }

 private:
  SourceSpan span_;
};

}  // namespace efpl
