#include "efpl/diagnostics.hpp"

#include <sstream>

namespace efpl {

std::string_view to_string(DiagCode c) {
  switch (c) {
    case DiagCode::NegationOfPositive: return "NegationOfPositive";
    case DiagCode::ArityMismatch: return "ArityMismatch";
    case DiagCode::UndeclaredSymbol: return "UndeclaredSymbol";
    case DiagCode::DuplicateLetPredicate: return "DuplicateLetPredicate";
    case DiagCode::NonDistinctHeadVariables: return "NonDistinctHeadVariables";
    case DiagCode::LetPredicateShadowsVocabulary: return "LetPredicateShadowsVocabulary";
    case DiagCode::SuperstrateInSubstratePart: return "SuperstrateInSubstratePart";
    case DiagCode::QuantifierInRuleBody: return "QuantifierInRuleBody";
    case DiagCode::NegatedSuperstrateAtom: return "NegatedSuperstrateAtom";
    case DiagCode::MissingFunctionTable: return "MissingFunctionTable";
    case DiagCode::TableEntryOutOfRange: return "TableEntryOutOfRange";
    case DiagCode::TupleArityMismatch: return "TupleArityMismatch";
    case DiagCode::EmptyUniverse: return "EmptyUniverse";
    case DiagCode::FunctionNotPreserved: return "FunctionNotPreserved";
    case DiagCode::RelationNotPreserved: return "RelationNotPreserved";
    case DiagCode::NegatableComplementNotPreserved: return "NegatableComplementNotPreserved";
    case DiagCode::SyntaxError: return "SyntaxError";
    case DiagCode::ReservedPrefixUsed: return "ReservedPrefixUsed";
    case DiagCode::ClashWithExistingName: return "ClashWithExistingName";
    case DiagCode::UnboundVariable: return "UnboundVariable";
    case DiagCode::IllFormed: return "IllFormed";
    case DiagCode::UnknownTarget: return "UnknownTarget";
    case DiagCode::TupleSpaceTooLarge: return "TupleSpaceTooLarge";
    case DiagCode::PositiveSubstratePredicate: return "PositiveSubstratePredicate";
    case DiagCode::UsageError: return "UsageError";
    case DiagCode::IoError: return "IoError";
  }
  return "UnknownDiag";
}

std::string to_string(const Diagnostic& d) {
  std::ostringstream os;
  os << to_string(d.code);
  if (!d.path.empty()) os << " at " << d.path;
  if (!d.message.empty()) os << ": " << d.message;
  return os.str();
}

bool ValidationReport::has(DiagCode c) const {
  for (const auto& e : errors)
    if (e.code == c) return true;
  return false;
}

void ValidationReport::add(DiagCode c, std::string path, std::string message) {
  errors.push_back(Diagnostic{c, std::move(path), std::move(message)});
}

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (const auto& e : errors) os << efpl::to_string(e) << "\n";
  return os.str();
}

Error::Error(Diagnostic d) : std::runtime_error(efpl::to_string(d)), diag_(std::move(d)) {}

ParseError::ParseError(SourceSpan span, std::string message, DiagCode code)
    : Error(Diagnostic{code,
                       "offset " + std::to_string(span.start) + ".." + std::to_string(span.end),
                       std::move(message)}),
      span_(span) {}

}  // namespace efpl
