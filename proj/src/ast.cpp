#include "efpl/ast.hpp"

#include <algorithm>
#include <cctype>

namespace efpl {

bool Term::operator<(const Term& o) const {
  if (is_var != o.is_var) return is_var < o.is_var;
  if (name != o.name) return name < o.name;
  return args < o.args;
}

FormulaBox::FormulaBox(Formula f) : ptr_(std::make_shared<const Formula>(std::move(f))) {}

bool operator==(const FormulaBox& a, const FormulaBox& b) { return *a.ptr_ == *b.ptr_; }

bool And::operator==(const And& o) const { return parts == o.parts; }
bool Or::operator==(const Or& o) const { return parts == o.parts; }
bool Exists::operator==(const Exists& o) const { return var == o.var && body == o.body; }

bool Let::operator==(const Let& o) const {
  if (!(body == o.body) || clauses.size() != o.clauses.size()) return false;
  std::vector<bool> used(o.clauses.size(), false);
  for (const auto& c : clauses) {
    bool found = false;
    for (std::size_t j = 0; j < o.clauses.size(); ++j) {
      if (!used[j] && c == o.clauses[j]) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool Formula::operator==(const Formula& o) const { return node == o.node; }

Formula Formula::atom(std::string pred, std::vector<Term> args) {
  return Formula{Atom{std::move(pred), std::move(args)}};
}
Formula Formula::neg(std::string pred, std::vector<Term> args) {
  return Formula{NegAtom{std::move(pred), std::move(args)}};
}
Formula Formula::eq(Term a, Term b) { return atom(kEq, {std::move(a), std::move(b)}); }
Formula Formula::neq(Term a, Term b) { return neg(kEq, {std::move(a), std::move(b)}); }

Formula Formula::conj(std::vector<Formula> parts) {
  if (parts.size() == 1) return std::move(parts.front());
  return Formula{And{std::move(parts)}};
}
Formula Formula::disj(std::vector<Formula> parts) {
  if (parts.size() == 1) return std::move(parts.front());
  return Formula{Or{std::move(parts)}};
}
Formula Formula::exists(std::string var, Formula body) {
  return Formula{Exists{std::move(var), FormulaBox(std::move(body))}};
}
Formula Formula::exists_many(const std::vector<std::string>& vars, Formula body) {
  Formula f = std::move(body);
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) f = exists(*it, std::move(f));
  return f;
}
Formula Formula::let(std::vector<Clause> clauses, Formula body) {
  if (clauses.empty()) return body;
  return Formula{Let{std::move(clauses), FormulaBox(std::move(body))}};
}

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary Vocabulary::base() {
  Vocabulary v;
  v.predicates[kEq] = PredSig{2, PredClass::negatable, false};
  return v;
}

Vocabulary& Vocabulary::fn(std::string name, int arity) {
  functions[std::move(name)] = arity;
  return *this;
}
Vocabulary& Vocabulary::pred(std::string name, int arity, PredClass cls) {
  predicates[std::move(name)] = PredSig{arity, cls, false};
  return *this;
}
Vocabulary& Vocabulary::sup(std::string name, int arity) {
  predicates[std::move(name)] = PredSig{arity, PredClass::positive, true};
  return *this;
}

ValidationReport Vocabulary::validate() const {
  ValidationReport r;
  for (const auto& [n, a] : functions) {
    if (a < 0) r.add(DiagCode::IllFormed, "fn " + n, "negative arity");
    if (predicates.count(n))
      r.add(DiagCode::ClashWithExistingName, n, "declared both as function and predicate");
  }
  auto eq = predicates.find(kEq);
  if (eq == predicates.end())
    r.add(DiagCode::IllFormed, kEq, "built-in equality missing from vocabulary");
  else if (eq->second.arity != 2 || eq->second.cls != PredClass::negatable ||
           eq->second.superstrate)
    r.add(DiagCode::IllFormed, kEq, "built-in equality must be a binary negatable substrate predicate");
  for (const auto& [n, sig] : predicates) {
    if (sig.arity < 0) r.add(DiagCode::IllFormed, "pred " + n, "negative arity");
    if (sig.superstrate && sig.cls != PredClass::positive)
      r.add(DiagCode::IllFormed, "pred " + n, "superstrate predicates must be positive");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Names

std::string fresh_symbol(const std::string& base, const std::set<std::string>& avoid) {
  for (int k = 0;; ++k) {
    std::string cand = base + "_g" + std::to_string(k);
    if (!avoid.count(cand)) return cand;
  }
}

bool generated_name_shape(std::string_view name) {
  std::size_t pos = name.find("_g");
  if (pos == 0 || pos == std::string_view::npos) return false;
  while (pos < name.size()) {
    pos += 2;
    std::size_t d = pos;
    while (d < name.size() && std::isdigit(static_cast<unsigned char>(name[d]))) ++d;
    if (d == pos) return false;
    if (name[pos] == '0' && d - pos > 1) return false;
    if (d == name.size()) return true;
    if (name.compare(d, 2, "_g") != 0) return false;
    pos = d;
  }
  return false;
}

std::set<std::string> term_vars(const Term& t) {
  std::set<std::string> out;
  if (t.is_var) {
    out.insert(t.name);
    return out;
  }
  for (const auto& a : t.args) {
    auto sub = term_vars(a);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  auto add_terms = [&out](const std::vector<Term>& ts) {
    for (const auto& t : ts) {
      auto vs = term_vars(t);
      out.insert(vs.begin(), vs.end());
    }
  };
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atom> || std::is_same_v<T, NegAtom>) {
          add_terms(n.args);
        } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
          for (const auto& p : n.parts) {
            auto vs = free_vars(p);
            out.insert(vs.begin(), vs.end());
          }
        } else if constexpr (std::is_same_v<T, Exists>) {
          auto vs = free_vars(*n.body);
          vs.erase(n.var);
          out.insert(vs.begin(), vs.end());
        } else {  // Let
          for (const auto& c : n.clauses) {
            auto vs = free_vars(c.body);
            for (const auto& p : c.params) vs.erase(p);
            out.insert(vs.begin(), vs.end());
          }
          auto vs = free_vars(*n.body);
          out.insert(vs.begin(), vs.end());
        }
      },
      f.node);
  return out;
}

void collect_names(const Term& t, std::set<std::string>& out) {
  out.insert(t.name);
  for (const auto& a : t.args) collect_names(a, out);
}

void collect_names(const Formula& f, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atom> || std::is_same_v<T, NegAtom>) {
          out.insert(n.pred);
          for (const auto& t : n.args) collect_names(t, out);
        } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
          for (const auto& p : n.parts) collect_names(p, out);
        } else if constexpr (std::is_same_v<T, Exists>) {
          out.insert(n.var);
          collect_names(*n.body, out);
        } else {
          for (const auto& c : n.clauses) {
            out.insert(c.pred);
            for (const auto& p : c.params) out.insert(p);
            collect_names(c.body, out);
          }
          collect_names(*n.body, out);
        }
      },
      f.node);
}

std::set<std::string> all_names(const Formula& f) {
  std::set<std::string> out;
  collect_names(f, out);
  return out;
}

std::set<std::string> all_names(const Program& p) {
  std::set<std::string> out;
  for (const auto& [n, a] : p.vocab.functions) out.insert(n);
  for (const auto& [n, s] : p.vocab.predicates) out.insert(n);
  for (const auto& r : p.rules) {
    out.insert(r.head.pred);
    for (const auto& t : r.head.args) collect_names(t, out);
    for (const auto& a : r.superstrate_atoms) {
      out.insert(a.pred);
      for (const auto& t : a.args) collect_names(t, out);
    }
    collect_names(r.substrate, out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Substitution

Term substitute(const Term& t, const std::map<std::string, Term>& binding) {
  if (t.is_var) {
    auto it = binding.find(t.name);
    return it == binding.end() ? t : it->second;
  }
  Term out = t;
  for (auto& a : out.args) a = substitute(a, binding);
  return out;
}

namespace {

// Restrict binding to variables free in f; drop identity entries.
std::map<std::string, Term> active_binding(const std::map<std::string, Term>& binding,
                                           const std::set<std::string>& free) {
  std::map<std::string, Term> out;
  for (const auto& [v, t] : binding) {
    if (!free.count(v)) continue;
    if (t.is_var && t.name == v) continue;
    out.emplace(v, t);
  }
  return out;
}

std::set<std::string> range_vars(const std::map<std::string, Term>& binding) {
  std::set<std::string> out;
  for (const auto& [v, t] : binding) {
    auto vs = term_vars(t);
    out.insert(vs.begin(), vs.end());
  }
  return out;
}

}  // namespace

Formula substitute(const Formula& f, const std::map<std::string, Term>& binding) {
  return std::visit(
      [&](const auto& n) -> Formula {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atom>) {
          Atom a = n;
          for (auto& t : a.args) t = substitute(t, binding);
          return Formula{std::move(a)};
        } else if constexpr (std::is_same_v<T, NegAtom>) {
          NegAtom a = n;
          for (auto& t : a.args) t = substitute(t, binding);
          return Formula{std::move(a)};
        } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
          T out = n;
          for (auto& p : out.parts) p = substitute(p, binding);
          return Formula{std::move(out)};
        } else if constexpr (std::is_same_v<T, Exists>) {
          auto body_free = free_vars(*n.body);
          auto active = binding;
          active.erase(n.var);
          active = active_binding(active, body_free);
          if (active.empty()) return f;
          auto rng = range_vars(active);
          if (rng.count(n.var)) {
            std::set<std::string> avoid = all_names(*n.body);
            avoid.insert(rng.begin(), rng.end());
            for (const auto& [v, t] : active) avoid.insert(v);
            std::string fresh = fresh_symbol(n.var, avoid);
            Formula renamed = substitute(*n.body, {{n.var, Term::var(fresh)}});
            return Formula::exists(fresh, substitute(renamed, active));
          }
          return Formula::exists(n.var, substitute(*n.body, active));
        } else {  // Let
          std::vector<Clause> clauses;
          clauses.reserve(n.clauses.size());
          for (const auto& c : n.clauses) {
            auto body_free = free_vars(c.body);
            auto active = binding;
            for (const auto& p : c.params) active.erase(p);
            active = active_binding(active, body_free);
            if (active.empty()) {
              clauses.push_back(c);
              continue;
            }
            Clause nc = c;
            auto rng = range_vars(active);
            std::map<std::string, Term> param_rename;
            std::set<std::string> avoid = all_names(c.body);
            avoid.insert(rng.begin(), rng.end());
            for (const auto& [v, t] : active) avoid.insert(v);
            for (const auto& p : nc.params) avoid.insert(p);
            for (auto& p : nc.params) {
              if (rng.count(p)) {
                std::string fresh = fresh_symbol(p, avoid);
                avoid.insert(fresh);
                param_rename.emplace(p, Term::var(fresh));
                p = fresh;
              }
            }
            if (!param_rename.empty()) nc.body = substitute(nc.body, param_rename);
            nc.body = substitute(nc.body, active);
            clauses.push_back(std::move(nc));
          }
          Formula body = substitute(*n.body, binding);
          return Formula::let(std::move(clauses), std::move(body));
        }
      },
      f.node);
}

// ---------------------------------------------------------------------------
// Let-predicate renaming

namespace {

std::set<std::string> symbol_names(const Formula& f) {
  std::set<std::string> out;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atom> || std::is_same_v<T, NegAtom>) {
          out.insert(n.pred);
          // function symbols inside terms share the namespace
          for (const auto& t : n.args) {
            std::set<std::string> names;
            collect_names(t, names);
            out.insert(names.begin(), names.end());
          }
        } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
          for (const auto& p : n.parts) {
            auto sub = symbol_names(p);
            out.insert(sub.begin(), sub.end());
          }
        } else if constexpr (std::is_same_v<T, Exists>) {
          auto sub = symbol_names(*n.body);
          out.insert(sub.begin(), sub.end());
        } else {
          for (const auto& c : n.clauses) {
            out.insert(c.pred);
            auto sub = symbol_names(c.body);
            out.insert(sub.begin(), sub.end());
          }
          auto sub = symbol_names(*n.body);
          out.insert(sub.begin(), sub.end());
        }
      },
      f.node);
  return out;
}

Formula rename_preds_rec(const Formula& f, const std::map<std::string, std::string>& active) {
  return std::visit(
      [&](const auto& n) -> Formula {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atom> || std::is_same_v<T, NegAtom>) {
          T a = n;
          auto it = active.find(a.pred);
          if (it != active.end()) a.pred = it->second;
          return Formula{std::move(a)};
        } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
          T out = n;
          for (auto& p : out.parts) p = rename_preds_rec(p, active);
          return Formula{std::move(out)};
        } else if constexpr (std::is_same_v<T, Exists>) {
          return Formula::exists(n.var, rename_preds_rec(*n.body, active));
        } else {
          std::vector<Clause> clauses;
          for (const auto& c : n.clauses) {
            Clause nc = c;
            auto it = active.find(nc.pred);
            if (it != active.end()) nc.pred = it->second;
            nc.body = rename_preds_rec(nc.body, active);
            clauses.push_back(std::move(nc));
          }
          return Formula::let(std::move(clauses), rename_preds_rec(*n.body, active));
        }
      },
      f.node);
}

// Collects the set of predicates bound by some Let in f.
void bound_preds(const Formula& f, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
          for (const auto& p : n.parts) bound_preds(p, out);
        } else if constexpr (std::is_same_v<T, Exists>) {
          bound_preds(*n.body, out);
        } else if constexpr (std::is_same_v<T, Let>) {
          for (const auto& c : n.clauses) {
            out.insert(c.pred);
            bound_preds(c.body, out);
          }
          bound_preds(*n.body, out);
        }
      },
      f.node);
}

}  // namespace

Formula rename_let_predicates(const Formula& f, const std::map<std::string, std::string>& mapping,
                              const Vocabulary& vocab) {
  std::set<std::string> bound;
  bound_preds(f, bound);
  std::set<std::string> existing = symbol_names(f);
  std::map<std::string, std::string> active;
  std::set<std::string> targets;
  for (const auto& [src, tgt] : mapping) {
    if (src == tgt) continue;
    if (!bound.count(src)) continue;  // not a Let-bound predicate here: no-op
    if (!targets.insert(tgt).second)
      throw Error({DiagCode::ClashWithExistingName, src, "mapping is not injective on " + tgt});
    if (vocab.has_fn(tgt) || vocab.has_pred(tgt) || existing.count(tgt))
      throw Error({DiagCode::ClashWithExistingName, src, "target " + tgt + " already in use"});
    active.emplace(src, tgt);
  }
  if (active.empty()) return f;
  return rename_preds_rec(f, active);
}

// ---------------------------------------------------------------------------
// Well-formedness

namespace {

struct LetEnv {
  std::map<std::string, int> preds;  // Let-bound predicate -> arity (all positive)
};

void check_term(const Term& t, const Vocabulary& v, const std::string& path,
                ValidationReport& r) {
  if (t.is_var) {
    if (!t.args.empty()) r.add(DiagCode::IllFormed, path, "variable with arguments");
    return;
  }
  auto it = v.functions.find(t.name);
  if (it == v.functions.end()) {
    r.add(DiagCode::UndeclaredSymbol, path, "function " + t.name);
  } else if (static_cast<int>(t.args.size()) != it->second) {
    r.add(DiagCode::ArityMismatch, path,
          "function " + t.name + " expects " + std::to_string(it->second) + " arguments, got " +
              std::to_string(t.args.size()));
  }
  for (std::size_t i = 0; i < t.args.size(); ++i)
    check_term(t.args[i], v, path + "/arg[" + std::to_string(i) + "]", r);
}

void check_atom_common(const std::string& pred, const std::vector<Term>& args, bool negated,
                       const Vocabulary& v, const LetEnv& env, const std::string& path,
                       ValidationReport& r) {
  int arity = -1;
  bool negatable = false;
  if (pred == kEq) {
    arity = 2;
    negatable = true;
  } else if (auto it = env.preds.find(pred); it != env.preds.end()) {
    arity = it->second;
    negatable = false;
  } else if (auto vt = v.predicates.find(pred); vt != v.predicates.end()) {
    arity = vt->second.arity;
    negatable = vt->second.cls == PredClass::negatable;
  } else {
    r.add(DiagCode::UndeclaredSymbol, path, "predicate " + pred);
  }
  if (arity >= 0 && static_cast<int>(args.size()) != arity)
    r.add(DiagCode::ArityMismatch, path,
          "predicate " + pred + " expects " + std::to_string(arity) + " arguments, got " +
              std::to_string(args.size()));
  if (negated && arity >= 0 && !negatable)
    r.add(DiagCode::NegationOfPositive, path, "negation of positive predicate " + pred);
  for (std::size_t i = 0; i < args.size(); ++i)
    check_term(args[i], v, path + "/arg[" + std::to_string(i) + "]", r);
}

void check_formula_rec(const Formula& f, const Vocabulary& v, const LetEnv& env,
                       const std::string& path, ValidationReport& r) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atom>) {
          check_atom_common(n.pred, n.args, false, v, env, path, r);
        } else if constexpr (std::is_same_v<T, NegAtom>) {
          check_atom_common(n.pred, n.args, true, v, env, path, r);
        } else if constexpr (std::is_same_v<T, And>) {
          for (std::size_t i = 0; i < n.parts.size(); ++i)
            check_formula_rec(n.parts[i], v, env, path + "/and[" + std::to_string(i) + "]", r);
        } else if constexpr (std::is_same_v<T, Or>) {
          for (std::size_t i = 0; i < n.parts.size(); ++i)
            check_formula_rec(n.parts[i], v, env, path + "/or[" + std::to_string(i) + "]", r);
        } else if constexpr (std::is_same_v<T, Exists>) {
          check_formula_rec(*n.body, v, env, path + "/exists", r);
        } else {
          LetEnv inner = env;
          std::set<std::string> seen;
          for (std::size_t i = 0; i < n.clauses.size(); ++i) {
            const Clause& c = n.clauses[i];
            std::string cpath = path + "/clause[" + std::to_string(i) + "]";
            if (!seen.insert(c.pred).second)
              r.add(DiagCode::DuplicateLetPredicate, cpath, c.pred);
            else if (v.has_pred(c.pred) || v.has_fn(c.pred) || env.preds.count(c.pred))
              r.add(DiagCode::LetPredicateShadowsVocabulary, cpath, c.pred);
            std::set<std::string> params(c.params.begin(), c.params.end());
            if (params.size() != c.params.size())
              r.add(DiagCode::NonDistinctHeadVariables, cpath, c.pred);
            inner.preds[c.pred] = static_cast<int>(c.params.size());
          }
          for (std::size_t i = 0; i < n.clauses.size(); ++i)
            check_formula_rec(n.clauses[i].body, v, inner,
                              path + "/clause[" + std::to_string(i) + "]/body", r);
          check_formula_rec(*n.body, v, inner, path + "/body", r);
        }
      },
      f.node);
}

void check_substrate_part(const Formula& f, const Vocabulary& v, const std::string& path,
                          ValidationReport& r) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atom> || std::is_same_v<T, NegAtom>) {
          constexpr bool negated = std::is_same_v<T, NegAtom>;
          auto it = v.predicates.find(n.pred);
          if (it != v.predicates.end() && it->second.superstrate) {
            r.add(negated ? DiagCode::NegatedSuperstrateAtom : DiagCode::SuperstrateInSubstratePart,
                  path, n.pred);
            return;
          }
          check_atom_common(n.pred, n.args, negated, v, LetEnv{}, path, r);
        } else if constexpr (std::is_same_v<T, And>) {
          for (std::size_t i = 0; i < n.parts.size(); ++i)
            check_substrate_part(n.parts[i], v, path + "/and[" + std::to_string(i) + "]", r);
        } else if constexpr (std::is_same_v<T, Or>) {
          for (std::size_t i = 0; i < n.parts.size(); ++i)
            check_substrate_part(n.parts[i], v, path + "/or[" + std::to_string(i) + "]", r);
        } else {
          // Exists and Let are both binders; neither belongs in a rule body.
          r.add(DiagCode::QuantifierInRuleBody, path,
                std::is_same_v<T, Exists> ? "exists" : "let");
        }
      },
      f.node);
}

}  // namespace

ValidationReport check_formula(const Formula& f, const Vocabulary& vocab) {
  ValidationReport r = vocab.validate();
  check_formula_rec(f, vocab, LetEnv{}, "", r);
  return r;
}

ValidationReport check_program(const Program& p) {
  ValidationReport r = p.vocab.validate();
  for (std::size_t i = 0; i < p.rules.size(); ++i) {
    const Rule& rule = p.rules[i];
    std::string path = "rule[" + std::to_string(i) + "]";
    auto it = p.vocab.predicates.find(rule.head.pred);
    if (it == p.vocab.predicates.end()) {
      r.add(DiagCode::UndeclaredSymbol, path + "/head", "predicate " + rule.head.pred);
    } else {
      if (!it->second.superstrate)
        r.add(DiagCode::IllFormed, path + "/head",
              "head predicate " + rule.head.pred + " is not superstrate");
      if (static_cast<int>(rule.head.args.size()) != it->second.arity)
        r.add(DiagCode::ArityMismatch, path + "/head", rule.head.pred);
    }
    for (std::size_t j = 0; j < rule.head.args.size(); ++j)
      check_term(rule.head.args[j], p.vocab, path + "/head/arg[" + std::to_string(j) + "]", r);
    for (std::size_t j = 0; j < rule.superstrate_atoms.size(); ++j) {
      const Atom& a = rule.superstrate_atoms[j];
      std::string apath = path + "/atom[" + std::to_string(j) + "]";
      auto at = p.vocab.predicates.find(a.pred);
      if (at == p.vocab.predicates.end()) {
        r.add(DiagCode::UndeclaredSymbol, apath, "predicate " + a.pred);
        continue;
      }
      if (!at->second.superstrate)
        r.add(DiagCode::IllFormed, apath, "substrate atom in superstrate position: " + a.pred);
      if (static_cast<int>(a.args.size()) != at->second.arity)
        r.add(DiagCode::ArityMismatch, apath, a.pred);
      for (std::size_t k = 0; k < a.args.size(); ++k)
        check_term(a.args[k], p.vocab, apath + "/arg[" + std::to_string(k) + "]", r);
    }
    check_substrate_part(rule.substrate, p.vocab, path + "/substrate", r);
  }
  return r;
}

namespace {

bool let_positive_rec(const Formula& f, std::set<std::string>& bound) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atom>) {
          return true;
        } else if constexpr (std::is_same_v<T, NegAtom>) {
          return bound.count(n.pred) == 0;
        } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
          for (const auto& p : n.parts)
            if (!let_positive_rec(p, bound)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, Exists>) {
          return let_positive_rec(*n.body, bound);
        } else {
          for (const auto& c : n.clauses) bound.insert(c.pred);
          for (const auto& c : n.clauses)
            if (!let_positive_rec(c.body, bound)) return false;
          return let_positive_rec(*n.body, bound);
        }
      },
      f.node);
}

}  // namespace

bool let_predicates_positive(const Formula& f) {
  std::set<std::string> bound;
  return let_positive_rec(f, bound);
}

}  // namespace efpl
