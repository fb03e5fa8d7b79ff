#pragma once

#include <map>
#include <string>
#include <string_view>

#include "efpl/ast.hpp"
#include "efpl/structure.hpp"

namespace efpl {

// Thrown when parsed input fails semantic validation; carries the full report.
class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport r);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// AST path -> source span, for diagnostics. Paths use the same scheme as
// check_formula / check_program reports.
using SpanMap = std::map<std::string, SourceSpan>;

struct ParsedFormula {
  Formula formula;
  // Inferred from usage: every free predicate negatable substrate, arities
  // from occurrences. Always contains built-in equality.
  Vocabulary vocab;
  SpanMap spans;
};

struct ParsedProgram {
  Program program;
  SpanMap spans;
};

struct ParsedStructure {
  Structure structure;
  Vocabulary vocab;  // implied by the structure's tables and relations
  SpanMap spans;
};

// All parsers throw ParseError (syntax, reserved names) or ValidationError
// (parsed but ill-formed). A returned value always passes its checker.
ParsedFormula parse_formula(std::string_view text);
ParsedProgram parse_program(std::string_view text);
ParsedStructure parse_structure(std::string_view text);

std::string print_term(const Term& t);
std::string print_formula(const Formula& f);
std::string print_program(const Program& p);
std::string print_structure(const Structure& s);

}  // namespace efpl
