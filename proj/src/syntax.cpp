#include "efpl/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <utility>

namespace efpl {

ValidationError::ValidationError(ValidationReport r)
    : Error(r.errors.empty() ? Diagnostic{DiagCode::IllFormed, "", "invalid input"}
                             : r.errors.front()),
      report_(std::move(r)) {}

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tk {
  Ident,
  Number,
  LParen,
  RParen,
  LBrack,
  RBrack,
  LBrace,
  RBrace,
  Comma,
  Semi,
  Dot,
  Eq,
  Neq,
  Amp,
  Pipe,
  Bang,
  Arrow,
  Colon,
  Slash,
  End,
};

struct Tok {
  Tk kind;
  std::string text;
  SourceSpan span;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<Tok> tokenize(std::string_view text) {
  std::vector<Tok> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto push = [&](Tk k, std::size_t a, std::size_t b) {
    out.push_back(Tok{k, std::string(text.substr(a, b - a)), SourceSpan{a, b}});
  };
  while (i < n) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < n && text[i] != '\n') ++i;
      continue;
    }
    std::size_t a = i;
    if (ident_start(c)) {
      ++i;
      while (i < n && ident_char(text[i])) ++i;
      std::string name(text.substr(a, i - a));
      if (name.find("_g") != std::string::npos && !generated_name_shape(name))
        throw ParseError(SourceSpan{a, i}, "identifier " + name + " uses the reserved _g form",
                         DiagCode::ReservedPrefixUsed);
      push(Tk::Ident, a, i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      ++i;
      while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      push(Tk::Number, a, i);
      continue;
    }
    switch (c) {
      case '(': push(Tk::LParen, a, ++i); continue;
      case ')': push(Tk::RParen, a, ++i); continue;
      case '[': push(Tk::LBrack, a, ++i); continue;
      case ']': push(Tk::RBrack, a, ++i); continue;
      case '{': push(Tk::LBrace, a, ++i); continue;
      case '}': push(Tk::RBrace, a, ++i); continue;
      case ',': push(Tk::Comma, a, ++i); continue;
      case ';': push(Tk::Semi, a, ++i); continue;
      case '.': push(Tk::Dot, a, ++i); continue;
      case ':': push(Tk::Colon, a, ++i); continue;
      case '/': push(Tk::Slash, a, ++i); continue;
      case '=': push(Tk::Eq, a, ++i); continue;
      case '&': push(Tk::Amp, a, ++i); continue;
      case '|': push(Tk::Pipe, a, ++i); continue;
      case '!':
        ++i;
        if (i < n && text[i] == '=') {
          ++i;
          push(Tk::Neq, a, i);
        } else {
          push(Tk::Bang, a, i);
        }
        continue;
      case '<':
        ++i;
        if (i < n && text[i] == '-') {
          ++i;
          push(Tk::Arrow, a, i);
          continue;
        }
        throw ParseError(SourceSpan{a, i}, "stray '<' (did you mean '<-')");
      default:
        throw ParseError(SourceSpan{a, a + 1},
                         std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back(Tok{Tk::End, "", SourceSpan{n, n}});
  return out;
}

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words = {
      "exists", "let",  "then", "true",      "false",       "universe",
      "fun",    "rel",  "elem", "substrate", "superstrate",
  };
  return words;
}

// ---------------------------------------------------------------------------
// Span bookkeeping: a tree mirroring the formula, flattened to AST paths.

struct SpanTree {
  SourceSpan span{0, 0};
  std::vector<std::pair<std::string, SpanTree>> kids;
};

void flatten_spans(const SpanTree& st, const std::string& prefix, SpanMap& out) {
  out[prefix] = st.span;
  for (const auto& [label, kid] : st.kids) flatten_spans(kid, prefix + "/" + label, out);
}

struct PF {
  Formula f;
  SpanTree st;
};

struct PC {
  Clause c;
  SpanTree st;
};

// ---------------------------------------------------------------------------
// Parser

struct Parser {
  std::vector<Tok> toks;
  std::size_t pos = 0;

  const Tok& cur() const { return toks[pos]; }
  bool at(Tk k) const { return cur().kind == k; }
  bool at_word(const char* w) const { return at(Tk::Ident) && cur().text == w; }
  Tok take() { return toks[pos++]; }
  std::size_t prev_end() const { return pos == 0 ? 0 : toks[pos - 1].span.end; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(cur().span, msg);
  }

  Tok expect(Tk k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what);
    return take();
  }

  std::string ident(const char* what) {
    Tok t = expect(Tk::Ident, what);
    if (reserved_words().count(t.text))
      throw ParseError(t.span, t.text + " is a reserved word");
    return t.text;
  }

  // ---- terms ----

  Term term() {
    if (at(Tk::Number)) return Term::app(take().text);
    Tok t = cur();
    std::string name = ident("a term");
    if (at(Tk::LParen)) {
      take();
      std::vector<Term> args;
      args.push_back(term());
      while (at(Tk::Comma)) {
        take();
        args.push_back(term());
      }
      expect(Tk::RParen, "')'");
      return Term::app(name, std::move(args));
    }
    if (std::isupper(static_cast<unsigned char>(name[0]))) return Term::var(name);
    return Term::app(name);
  }

  std::string variable() {
    Tok t = cur();
    std::string name = ident("a variable");
    if (!std::isupper(static_cast<unsigned char>(name[0])))
      throw ParseError(t.span, "variables start with an uppercase letter: " + name);
    return name;
  }

  // ---- formulas ----

  PF formula() { return or_expr(); }

  PF or_expr() {
    std::size_t a = cur().span.start;
    std::vector<PF> parts;
    parts.push_back(and_expr());
    while (at(Tk::Pipe)) {
      take();
      parts.push_back(and_expr());
    }
    if (parts.size() == 1) return std::move(parts.front());
    return combine(Tk::Pipe, std::move(parts), a);
  }

  PF and_expr() {
    std::size_t a = cur().span.start;
    std::vector<PF> parts;
    parts.push_back(unary());
    while (at(Tk::Amp)) {
      take();
      parts.push_back(unary());
    }
    if (parts.size() == 1) return std::move(parts.front());
    return combine(Tk::Amp, std::move(parts), a);
  }

  PF combine(Tk op, std::vector<PF> parts, std::size_t a) {
    SpanTree st{SourceSpan{a, prev_end()}, {}};
    std::vector<Formula> fs;
    const char* label = op == Tk::Amp ? "and[" : "or[";
    for (std::size_t i = 0; i < parts.size(); ++i) {
      st.kids.emplace_back(label + std::to_string(i) + "]", std::move(parts[i].st));
      fs.push_back(std::move(parts[i].f));
    }
    Formula f = op == Tk::Amp ? Formula::conj(std::move(fs)) : Formula::disj(std::move(fs));
    return PF{std::move(f), std::move(st)};
  }

  PF unary() {
    std::size_t a = cur().span.start;
    if (at(Tk::Bang)) {
      take();
      if (!at(Tk::Ident) || reserved_words().count(cur().text))
        fail("expected an atom after '!'");
      std::string pred = take().text;
      std::vector<Term> args = maybe_args();
      return PF{Formula::neg(pred, std::move(args)), SpanTree{SourceSpan{a, prev_end()}, {}}};
    }
    if (at_word("true")) {
      take();
      return PF{Formula::truth(), SpanTree{SourceSpan{a, prev_end()}, {}}};
    }
    if (at_word("false")) {
      take();
      return PF{Formula::falsity(), SpanTree{SourceSpan{a, prev_end()}, {}}};
    }
    if (at_word("exists")) {
      take();
      std::string v = variable();
      expect(Tk::LParen, "'(' after the quantified variable");
      PF body = formula();
      expect(Tk::RParen, "')'");
      SpanTree st{SourceSpan{a, prev_end()}, {}};
      st.kids.emplace_back("exists", std::move(body.st));
      return PF{Formula::exists(std::move(v), std::move(body.f)), std::move(st)};
    }
    if (at_word("let")) {
      take();
      std::vector<PC> clauses;
      clauses.push_back(clause());
      while (at(Tk::Comma)) {
        take();
        clauses.push_back(clause());
      }
      if (!at_word("then")) fail("expected 'then'");
      take();
      PF body = formula();
      SpanTree st{SourceSpan{a, prev_end()}, {}};
      std::vector<Clause> cs;
      for (std::size_t i = 0; i < clauses.size(); ++i) {
        st.kids.emplace_back("clause[" + std::to_string(i) + "]", std::move(clauses[i].st));
        cs.push_back(std::move(clauses[i].c));
      }
      st.kids.emplace_back("body", std::move(body.st));
      return PF{Formula::let(std::move(cs), std::move(body.f)), std::move(st)};
    }
    return atomish();
  }

  PF atomish() {
    std::size_t a = cur().span.start;
    if (at(Tk::LParen)) {
      take();
      PF inner = formula();
      expect(Tk::RParen, "')'");
      inner.st.span = SourceSpan{a, prev_end()};
      return inner;
    }
    if (at(Tk::End)) fail("expected a formula");
    Term t = term();
    if (at(Tk::Eq)) {
      take();
      Term u = term();
      return PF{Formula::eq(std::move(t), std::move(u)),
                SpanTree{SourceSpan{a, prev_end()}, {}}};
    }
    if (at(Tk::Neq)) {
      take();
      Term u = term();
      return PF{Formula::neq(std::move(t), std::move(u)),
                SpanTree{SourceSpan{a, prev_end()}, {}}};
    }
    // Bare term in formula position: it is an atom.
    if (std::isdigit(static_cast<unsigned char>(t.name[0])))
      throw ParseError(SourceSpan{a, prev_end()}, "a numeral is not a formula");
    if (t.is_var) return PF{Formula::atom(t.name), SpanTree{SourceSpan{a, prev_end()}, {}}};
    return PF{Formula::atom(t.name, std::move(t.args)),
              SpanTree{SourceSpan{a, prev_end()}, {}}};
  }

  std::vector<Term> maybe_args() {
    std::vector<Term> args;
    if (!at(Tk::LParen)) return args;
    take();
    args.push_back(term());
    while (at(Tk::Comma)) {
      take();
      args.push_back(term());
    }
    expect(Tk::RParen, "')'");
    return args;
  }

  PC clause() {
    std::size_t a = cur().span.start;
    std::string pred = ident("a clause predicate");
    std::vector<std::string> params;
    if (at(Tk::LParen)) {
      take();
      params.push_back(variable());
      while (at(Tk::Comma)) {
        take();
        params.push_back(variable());
      }
      expect(Tk::RParen, "')'");
    }
    expect(Tk::Arrow, "'<-'");
    PF body = formula();
    SpanTree st{SourceSpan{a, prev_end()}, {}};
    st.kids.emplace_back("body", std::move(body.st));
    return PC{Clause{std::move(pred), std::move(params), std::move(body.f)}, std::move(st)};
  }
};

// ---------------------------------------------------------------------------
// Vocabulary inference for bare formulas

struct Inference {
  std::map<std::string, int> fns;
  std::map<std::string, int> preds;
  ValidationReport rep;

  void term(const Term& t) {
    if (t.is_var) return;
    if (std::isupper(static_cast<unsigned char>(t.name[0])) && !generated_name_shape(t.name)) {
      rep.add(DiagCode::UndeclaredSymbol, "", t.name + " cannot name a function");
    } else {
      fns.emplace(t.name, static_cast<int>(t.args.size()));
    }
    for (const Term& a : t.args) term(a);
  }

  void atom(const std::string& pred, const std::vector<Term>& args,
            const std::set<std::string>& bound) {
    if (pred != kEq && !bound.count(pred)) {
      if (std::isupper(static_cast<unsigned char>(pred[0])) && !generated_name_shape(pred))
        rep.add(DiagCode::UndeclaredSymbol, "",
                pred + " looks like a variable but stands where a predicate belongs");
      else
        preds.emplace(pred, static_cast<int>(args.size()));
    }
    for (const Term& a : args) term(a);
  }

  void formula(const Formula& f, std::set<std::string> bound) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Atom> || std::is_same_v<T, NegAtom>) {
            atom(n.pred, n.args, bound);
          } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
            for (const Formula& p : n.parts) formula(p, bound);
          } else if constexpr (std::is_same_v<T, Exists>) {
            formula(*n.body, bound);
          } else {
            std::set<std::string> inner = bound;
            for (const Clause& c : n.clauses) inner.insert(c.pred);
            for (const Clause& c : n.clauses) formula(c.body, inner);
            formula(*n.body, inner);
          }
        },
        f.node);
  }
};

int to_int(const Tok& t) {
  try {
    return std::stoi(t.text);
  } catch (...) {
    throw ParseError(t.span, "number out of range: " + t.text);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// parse_formula

ParsedFormula parse_formula(std::string_view text) {
  Parser p{tokenize(text)};
  PF pf = p.formula();
  if (!p.at(Tk::End)) p.fail("unexpected trailing input");

  Inference inf;
  inf.formula(pf.f, {});
  Vocabulary vocab = Vocabulary::base();
  for (const auto& [name, ar] : inf.fns) vocab.functions.emplace(name, ar);
  for (const auto& [name, ar] : inf.preds)
    vocab.predicates.emplace(name, PredSig{ar, PredClass::negatable, false});

  ValidationReport rep = std::move(inf.rep);
  ValidationReport chk = check_formula(pf.f, vocab);
  rep.errors.insert(rep.errors.end(), chk.errors.begin(), chk.errors.end());
  if (!rep.ok()) throw ValidationError(std::move(rep));

  ParsedFormula out{std::move(pf.f), std::move(vocab), {}};
  flatten_spans(pf.st, "", out.spans);
  return out;
}

// ---------------------------------------------------------------------------
// parse_program

namespace {

// Conjuncts of a body disjunct, nested conjunctions flattened.
void collect_conjuncts(Formula f, std::vector<Formula>& out) {
  if (auto* a = std::get_if<And>(&f.node)) {
    for (Formula& p : a->parts) collect_conjuncts(std::move(p), out);
    return;
  }
  out.push_back(std::move(f));
}

}  // namespace

ParsedProgram parse_program(std::string_view text) {
  Parser p{tokenize(text)};
  ParsedProgram out;
  Vocabulary& vocab = out.program.vocab;
  vocab = Vocabulary::base();

  auto section = [&](const char* name) {
    if (!p.at_word(name)) p.fail(std::string("expected '") + name + ":'");
    p.take();
    p.expect(Tk::Colon, "':'");
  };

  auto declare = [&](bool superstrate) {
    while (p.at_word("fun") || p.at_word("rel")) {
      std::size_t a = p.cur().span.start;
      bool is_fun = p.cur().text == "fun";
      Tok kw = p.take();
      if (is_fun && superstrate)
        throw ParseError(kw.span, "functions cannot be superstrate");
      std::string name;
      if (is_fun && p.at(Tk::Number)) {
        name = p.take().text;
      } else {
        Tok t = p.cur();
        name = p.ident(is_fun ? "a function name" : "a relation name");
        bool upper = std::isupper(static_cast<unsigned char>(name[0]));
        if (upper && (is_fun || !generated_name_shape(name)))
          throw ParseError(t.span, "vocabulary names start with a lowercase letter: " + name);
      }
      p.expect(Tk::Slash, "'/'");
      int arity = to_int(p.expect(Tk::Number, "an arity"));
      Tok semi = p.expect(Tk::Semi, "';'");
      if (vocab.has_fn(name) || vocab.has_pred(name))
        throw ParseError(SourceSpan{a, semi.span.end}, "duplicate declaration of " + name);
      if (is_fun)
        vocab.functions.emplace(name, arity);
      else
        vocab.predicates.emplace(
            name, PredSig{arity, superstrate ? PredClass::positive : PredClass::negatable,
                          superstrate});
      out.spans[(is_fun ? "fun " : "rel ") + name] = SourceSpan{a, semi.span.end};
    }
  };

  section("substrate");
  declare(false);
  section("superstrate");
  declare(true);

  while (!p.at(Tk::End)) {
    std::size_t a = p.cur().span.start;
    std::string head_pred = p.ident("a rule head");
    std::vector<Term> head_args = p.maybe_args();
    p.expect(Tk::Arrow, "'<-'");
    std::vector<PF> disjuncts;
    disjuncts.push_back(p.and_expr());
    while (p.at(Tk::Pipe)) {
      p.take();
      disjuncts.push_back(p.and_expr());
    }
    Tok dot = p.expect(Tk::Dot, "'.'");
    for (PF& d : disjuncts) {
      std::vector<Formula> conjuncts;
      collect_conjuncts(std::move(d.f), conjuncts);
      Rule rule;
      rule.head = Atom{head_pred, head_args};
      std::vector<Formula> substrate;
      for (Formula& c : conjuncts) {
        const Atom* at = std::get_if<Atom>(&c.node);
        if (at != nullptr) {
          auto it = vocab.predicates.find(at->pred);
          if (it != vocab.predicates.end() && it->second.superstrate) {
            rule.superstrate_atoms.push_back(*at);
            continue;
          }
        }
        substrate.push_back(std::move(c));
      }
      rule.substrate = Formula::conj(std::move(substrate));
      out.spans["rule[" + std::to_string(out.program.rules.size()) + "]"] =
          SourceSpan{a, dot.span.end};
      out.program.rules.push_back(std::move(rule));
    }
  }

  ValidationReport rep = check_program(out.program);
  if (!rep.ok()) throw ValidationError(std::move(rep));
  return out;
}

// ---------------------------------------------------------------------------
// parse_structure

ParsedStructure parse_structure(std::string_view text) {
  Parser p{tokenize(text)};
  ParsedStructure out;
  Structure& s = out.structure;

  if (!p.at_word("universe")) p.fail("expected 'universe'");
  std::size_t ua = p.take().span.start;
  int n = to_int(p.expect(Tk::Number, "the universe size"));
  Tok usemi = p.expect(Tk::Semi, "';'");
  s.universe = n;
  out.spans["universe"] = SourceSpan{ua, usemi.span.end};

  std::map<std::string, int> aliases;
  auto entry = [&]() -> int {
    if (p.at(Tk::Number)) return to_int(p.take());
    Tok t = p.cur();
    std::string name = p.ident("an element");
    auto it = aliases.find(name);
    if (it == aliases.end()) throw ParseError(t.span, "unknown element alias " + name);
    return it->second;
  };
  auto lower_name = [&](const char* what) {
    Tok t = p.cur();
    std::string name = p.ident(what);
    if (std::isupper(static_cast<unsigned char>(name[0])))
      throw ParseError(t.span, "structure symbols start with a lowercase letter: " + name);
    return name;
  };
  auto dup_check = [&](const std::string& name, SourceSpan sp) {
    if (s.functions.count(name) || s.relations.count(name))
      throw ParseError(sp, "duplicate block for " + name);
  };
  // Table or tuple sizes must match n^k for some unique k when the arity is
  // not annotated.
  auto infer_arity = [&](std::size_t count, SourceSpan sp) -> int {
    if (n <= 1)
      throw ParseError(sp, "arity annotation required on a one-element universe");
    long long pow = 1;
    int k = 0;
    while (pow < static_cast<long long>(count)) {
      pow *= n;
      ++k;
    }
    if (pow != static_cast<long long>(count))
      throw ParseError(sp, "table size is not a power of the universe size");
    return k;
  };

  while (!p.at(Tk::End)) {
    if (p.at_word("elem")) {
      p.take();
      Tok nt = p.cur();
      std::string name = lower_name("an element alias");
      if (aliases.count(name)) throw ParseError(nt.span, "duplicate element alias " + name);
      p.expect(Tk::Eq, "'='");
      int v = entry();
      p.expect(Tk::Semi, "';'");
      if (v < 0 || v >= n)
        throw ParseError(nt.span, "element " + name + " is outside the universe");
      aliases.emplace(name, v);
      continue;
    }
    if (p.at_word("fun")) {
      std::size_t a = p.take().span.start;
      std::string name;
      SourceSpan nsp = p.cur().span;
      if (p.at(Tk::Number))
        name = p.take().text;
      else
        name = lower_name("a function name");
      int arity = -1;
      if (p.at(Tk::Slash)) {
        p.take();
        arity = to_int(p.expect(Tk::Number, "an arity"));
      }
      dup_check(name, nsp);
      p.expect(Tk::Eq, "'='");
      Tok lb = p.expect(Tk::LBrack, "'['");
      FunctionTable table;
      if (!p.at(Tk::RBrack)) {
        table.entries.push_back(entry());
        while (p.at(Tk::Comma)) {
          p.take();
          table.entries.push_back(entry());
        }
      }
      p.expect(Tk::RBrack, "']'");
      Tok semi = p.expect(Tk::Semi, "';'");
      table.arity =
          arity >= 0 ? arity : infer_arity(table.entries.size(), SourceSpan{a, semi.span.end});
      s.functions.emplace(name, std::move(table));
      out.spans["fun " + name] = SourceSpan{a, semi.span.end};
      continue;
    }
    if (p.at_word("rel")) {
      std::size_t a = p.take().span.start;
      SourceSpan nsp = p.cur().span;
      std::string name = lower_name("a relation name");
      int arity = -1;
      if (p.at(Tk::Slash)) {
        p.take();
        arity = to_int(p.expect(Tk::Number, "an arity"));
      }
      dup_check(name, nsp);
      p.expect(Tk::Eq, "'='");
      p.expect(Tk::LBrace, "'{'");
      RelationData rel;
      while (!p.at(Tk::RBrace)) {
        p.expect(Tk::LParen, "'('");
        std::vector<int> tuple;
        if (!p.at(Tk::RParen)) {
          tuple.push_back(entry());
          while (p.at(Tk::Comma)) {
            p.take();
            tuple.push_back(entry());
          }
        }
        p.expect(Tk::RParen, "')'");
        if (arity < 0 && rel.tuples.empty()) arity = static_cast<int>(tuple.size());
        rel.tuples.insert(std::move(tuple));
        if (!p.at(Tk::Comma)) break;
        p.take();
      }
      p.expect(Tk::RBrace, "'}'");
      Tok semi = p.expect(Tk::Semi, "';'");
      if (arity < 0)
        throw ParseError(SourceSpan{a, semi.span.end},
                         "arity annotation required for an empty relation");
      rel.arity = arity;
      s.relations.emplace(name, std::move(rel));
      out.spans["rel " + name] = SourceSpan{a, semi.span.end};
      continue;
    }
    p.fail("expected 'fun', 'rel', or 'elem'");
  }

  out.vocab = s.implied_vocabulary();
  ValidationReport rep = validate_structure(s, out.vocab);
  if (!rep.ok()) throw ValidationError(std::move(rep));
  return out;
}

// ---------------------------------------------------------------------------
// Printers

std::string print_term(const Term& t) {
  if (t.is_var || t.args.empty()) return t.name;
  std::string out = t.name + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ",";
    out += print_term(t.args[i]);
  }
  out += ")";
  return out;
}

namespace {

std::string atom_text(const std::string& pred, const std::vector<Term>& args, bool negated) {
  if (pred == kEq && args.size() == 2)
    return print_term(args[0]) + (negated ? "!=" : "=") + print_term(args[1]);
  std::string out = negated ? "!" : "";
  out += pred;
  if (!args.empty()) {
    out += "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ",";
      out += print_term(args[i]);
    }
    out += ")";
  }
  return out;
}

enum class Ctx { top, or_child, and_child };

void pr(const Formula& f, Ctx ctx, std::string& out);

void pr_parts(const std::vector<Formula>& parts, const char* sep, Ctx child_ctx,
              std::string& out) {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    pr(parts[i], child_ctx, out);
  }
}

void pr_clause(const Clause& c, std::string& out) {
  out += c.pred;
  if (!c.params.empty()) {
    out += "(";
    for (std::size_t i = 0; i < c.params.size(); ++i) {
      if (i) out += ",";
      out += c.params[i];
    }
    out += ")";
  }
  out += " <- ";
  if (std::holds_alternative<Let>(c.body.node)) {
    out += "(";
    pr(c.body, Ctx::top, out);
    out += ")";
  } else {
    pr(c.body, Ctx::top, out);
  }
}

void pr(const Formula& f, Ctx ctx, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atom>) {
          out += n.args.empty() && n.pred != kEq ? n.pred : atom_text(n.pred, n.args, false);
        } else if constexpr (std::is_same_v<T, NegAtom>) {
          out += atom_text(n.pred, n.args, true);
        } else if constexpr (std::is_same_v<T, And>) {
          if (n.parts.empty()) {
            out += "true";
            return;
          }
          bool parens = ctx == Ctx::and_child;
          if (parens) out += "(";
          pr_parts(n.parts, " & ", Ctx::and_child, out);
          if (parens) out += ")";
        } else if constexpr (std::is_same_v<T, Or>) {
          if (n.parts.empty()) {
            out += "false";
            return;
          }
          bool parens = ctx != Ctx::top;
          if (parens) out += "(";
          pr_parts(n.parts, " | ", Ctx::or_child, out);
          if (parens) out += ")";
        } else if constexpr (std::is_same_v<T, Exists>) {
          out += "exists " + n.var + " (";
          pr(*n.body, Ctx::top, out);
          out += ")";
        } else {
          bool parens = ctx != Ctx::top;
          if (parens) out += "(";
          out += "let ";
          for (std::size_t i = 0; i < n.clauses.size(); ++i) {
            if (i) out += ", ";
            pr_clause(n.clauses[i], out);
          }
          out += " then ";
          pr(*n.body, Ctx::top, out);
          if (parens) out += ")";
        }
      },
      f.node);
}

}  // namespace

std::string print_formula(const Formula& f) {
  std::string out;
  pr(f, Ctx::top, out);
  return out;
}

std::string print_program(const Program& p) {
  std::ostringstream out;
  out << "substrate:\n";
  for (const auto& [name, ar] : p.vocab.functions) out << "  fun " << name << "/" << ar << ";\n";
  for (const auto& [name, sig] : p.vocab.predicates) {
    if (name == kEq || sig.superstrate) continue;
    out << "  rel " << name << "/" << sig.arity << ";\n";
  }
  out << "superstrate:\n";
  for (const auto& [name, sig] : p.vocab.predicates) {
    if (!sig.superstrate) continue;
    out << "  rel " << name << "/" << sig.arity << ";\n";
  }
  out << "\n";
  for (const Rule& r : p.rules) {
    out << atom_text(r.head.pred, r.head.args, false) << " <- ";
    std::vector<std::string> parts;
    for (const Atom& a : r.superstrate_atoms) parts.push_back(atom_text(a.pred, a.args, false));
    if (const And* conj = std::get_if<And>(&r.substrate.node)) {
      for (const Formula& c : conj->parts) {
        std::string s;
        pr(c, Ctx::and_child, s);
        parts.push_back(std::move(s));
      }
    } else {
      std::string s;
      pr(r.substrate, Ctx::and_child, s);
      parts.push_back(std::move(s));
    }
    if (parts.empty()) {
      out << "true";
    } else {
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out << " & ";
        out << parts[i];
      }
    }
    out << ".\n";
  }
  return out.str();
}

std::string print_structure(const Structure& s) {
  std::ostringstream out;
  out << "universe " << s.universe << ";\n";
  for (const auto& [name, table] : s.functions) {
    out << "fun " << name << "/" << table.arity << " = [";
    for (std::size_t i = 0; i < table.entries.size(); ++i) {
      if (i) out << ",";
      out << table.entries[i];
    }
    out << "];\n";
  }
  for (const auto& [name, rel] : s.relations) {
    out << "rel " << name << "/" << rel.arity << " = {";
    bool first = true;
    for (const std::vector<int>& tuple : rel.tuples) {
      if (!first) out << ",";
      first = false;
      out << "(";
      for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (i) out << ",";
        out << tuple[i];
      }
      out << ")";
    }
    out << "};\n";
  }
  return out.str();
}

}  // namespace efpl
