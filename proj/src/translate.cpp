#include "efpl/translate.hpp"

#include <algorithm>

namespace efpl {

namespace {

std::vector<Term> var_terms(const std::vector<std::string>& names) {
  std::vector<Term> out;
  out.reserve(names.size());
  for (const std::string& n : names) out.push_back(Term::var(n));
  return out;
}

// splice one level of And so printed bodies stay flat
std::vector<Formula> conjuncts_of(const Formula& f) {
  if (const auto* a = std::get_if<And>(&f.node)) return a->parts;
  return {f};
}

std::set<std::string> names_of(const std::vector<Clause>& clauses, const Formula& body) {
  std::set<std::string> out = all_names(body);
  for (const Clause& c : clauses) {
    out.insert(c.pred);
    for (const std::string& v : c.params) out.insert(v);
    collect_names(c.body, out);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Program to formula

Program flatten_heads(const Program& p, Mutation m) {
  std::set<std::string> avoid = all_names(p);
  std::size_t width = 0;
  for (const Rule& r : p.rules) width = std::max(width, r.head.args.size());
  std::vector<std::string> canon;
  for (std::size_t i = 0; i < width; ++i) {
    std::string v = fresh_symbol("X", avoid);
    avoid.insert(v);
    canon.push_back(v);
  }

  Program out;
  out.vocab = p.vocab;
  bool mutated = false;
  for (const Rule& r : p.rules) {
    Rule nr;
    nr.head.pred = r.head.pred;
    std::vector<Formula> eqs;
    for (std::size_t i = 0; i < r.head.args.size(); ++i) {
      nr.head.args.push_back(Term::var(canon[i]));
      eqs.push_back(Formula::eq(Term::var(canon[i]), r.head.args[i]));
    }
    if (m == Mutation::skip_head_equality && !mutated && !eqs.empty()) {
      eqs.erase(eqs.begin());
      mutated = true;
    }
    nr.superstrate_atoms = r.superstrate_atoms;
    std::vector<Formula> parts;
    if (!(r.substrate == Formula::truth())) parts = conjuncts_of(r.substrate);
    parts.insert(parts.end(), eqs.begin(), eqs.end());
    nr.substrate = Formula::conj(std::move(parts));
    out.rules.push_back(std::move(nr));
  }
  return out;
}

MergedProgram merge_rules(const Program& p, Mutation m) {
  // recover the shared head tuple; flattened heads are prefixes of it
  std::vector<std::string> canon;
  for (const Rule& r : p.rules) {
    for (std::size_t i = 0; i < r.head.args.size(); ++i) {
      const Term& t = r.head.args[i];
      if (!t.is_var)
        throw Error({DiagCode::IllFormed, r.head.pred, "head not flattened"});
      if (i < canon.size()) {
        if (canon[i] != t.name)
          throw Error({DiagCode::IllFormed, r.head.pred, "heads disagree on the shared tuple"});
      } else {
        canon.push_back(t.name);
      }
    }
  }
  std::set<std::string> avoid = all_names(p);
  for (const std::string& v : canon) avoid.insert(v);

  MergedProgram out;
  out.vocab = p.vocab;
  bool mutated = false;
  for (const auto& [pred, sig] : p.vocab.predicates) {
    if (!sig.superstrate) continue;
    while (static_cast<int>(canon.size()) < sig.arity) {
      std::string v = fresh_symbol("X", avoid);
      avoid.insert(v);
      canon.push_back(v);
    }
    MergedRule mr;
    mr.head_vars.assign(canon.begin(), canon.begin() + sig.arity);
    std::vector<Formula> bodies;
    for (const Rule& r : p.rules) {
      if (r.head.pred != pred) continue;
      std::vector<Formula> parts;
      for (const Atom& a : r.superstrate_atoms) parts.push_back(Formula{a});
      if (!(r.substrate == Formula::truth())) {
        auto cs = conjuncts_of(r.substrate);
        parts.insert(parts.end(), cs.begin(), cs.end());
      }
      bodies.push_back(Formula::conj(std::move(parts)));
    }
    if (m == Mutation::drop_disjunct && !mutated && bodies.size() >= 2) {
      bodies.erase(bodies.begin() + 1);
      mutated = true;
    }
    mr.body = Formula::disj(std::move(bodies));
    out.preds.emplace(pred, std::move(mr));
  }
  return out;
}

MergedProgram quantify_bodies(MergedProgram mp) {
  for (auto& [pred, mr] : mp.preds) {
    std::set<std::string> extra = free_vars(mr.body);
    for (const std::string& v : mr.head_vars) extra.erase(v);
    mr.body = Formula::exists_many({extra.begin(), extra.end()}, std::move(mr.body));
  }
  return mp;
}

Formula program_to_formula(const Program& p, const std::string& target, Mutation m) {
  auto it = p.vocab.predicates.find(target);
  if (it == p.vocab.predicates.end() || !it->second.superstrate)
    throw Error({DiagCode::UnknownTarget, target, "not a superstrate predicate of the program"});
  MergedProgram mp = quantify_bodies(merge_rules(flatten_heads(p, m), m));
  std::vector<Clause> clauses;
  std::vector<std::string> target_vars;
  for (const auto& [pred, mr] : mp.preds) {
    clauses.push_back(Clause{pred, mr.head_vars, mr.body});
    if (pred == target) target_vars = mr.head_vars;
  }
  return Formula::let(std::move(clauses), Formula::atom(target, var_terms(target_vars)));
}

// ---------------------------------------------------------------------------
// Normal form

Formula as_formula(const NormalFormFormula& nf) {
  return Formula::let(nf.clauses, nf.body);
}

bool is_existential_fo(const Formula& f) {
  return std::visit(
      [](const auto& node) -> bool {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Atom> || std::is_same_v<T, NegAtom>) {
          return true;
        } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
          for (const Formula& p : node.parts)
            if (!is_existential_fo(p)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, Exists>) {
          return is_existential_fo(*node.body);
        } else {
          return false;
        }
      },
      f.node);
}

bool is_normal_form(const NormalFormFormula& nf) {
  for (const Clause& c : nf.clauses) {
    if (!is_existential_fo(c.body)) return false;
    std::set<std::string> params(c.params.begin(), c.params.end());
    if (params.size() != c.params.size()) return false;
    for (const std::string& v : free_vars(c.body))
      if (!params.count(v)) return false;
  }
  return is_existential_fo(nf.body);
}

namespace {

bool mentions_pred(const Formula& f, const std::string& pred) {
  return std::visit(
      [&](const auto& node) -> bool {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Atom> || std::is_same_v<T, NegAtom>) {
          return node.pred == pred;
        } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
          for (const Formula& p : node.parts)
            if (mentions_pred(p, pred)) return true;
          return false;
        } else if constexpr (std::is_same_v<T, Exists>) {
          return mentions_pred(*node.body, pred);
        } else {
          for (const Clause& c : node.clauses)
            if (mentions_pred(c.body, pred)) return true;
          return mentions_pred(*node.body, pred);
        }
      },
      f.node);
}

// replaces every atom oldp(t̄) with newp(t̄·ys), renaming quantified
// variables that would capture an appended ys
Formula widen_occurrences(const Formula& f, const std::string& oldp, const std::string& newp,
                          const std::vector<std::string>& ys, std::set<std::string>& avoid) {
  return std::visit(
      [&](const auto& node) -> Formula {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Atom> || std::is_same_v<T, NegAtom>) {
          if (node.pred != oldp) return f;
          T out = node;
          out.pred = newp;
          for (const std::string& y : ys) out.args.push_back(Term::var(y));
          return Formula{out};
        } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
          T out;
          for (const Formula& p : node.parts)
            out.parts.push_back(widen_occurrences(p, oldp, newp, ys, avoid));
          return Formula{out};
        } else if constexpr (std::is_same_v<T, Exists>) {
          std::string var = node.var;
          Formula body = *node.body;
          if (std::find(ys.begin(), ys.end(), var) != ys.end() && mentions_pred(body, oldp)) {
            std::string fresh = fresh_symbol(var, avoid);
            avoid.insert(fresh);
            body = substitute(body, {{var, Term::var(fresh)}});
            var = fresh;
          }
          return Formula::exists(var, widen_occurrences(body, oldp, newp, ys, avoid));
        } else {
          throw Error({DiagCode::IllFormed, oldp, "nested let during parameter elimination"});
        }
      },
      f.node);
}

}  // namespace

NormalFormFormula eliminate_parameters(std::vector<Clause> clauses, Formula body,
                                       std::set<std::string> avoid, Mutation m) {
  std::set<std::string> more = names_of(clauses, body);
  avoid.insert(more.begin(), more.end());

  std::set<std::size_t> exempt;
  bool mutated = false;
  while (true) {
    std::size_t pick = clauses.size();
    std::vector<std::string> extras;
    for (std::size_t i = 0; i < clauses.size(); ++i) {
      if (exempt.count(i)) continue;
      std::set<std::string> fv = free_vars(clauses[i].body);
      for (const std::string& pv : clauses[i].params) fv.erase(pv);
      if (!fv.empty()) {
        pick = i;
        extras.assign(fv.begin(), fv.end());
        break;
      }
    }
    if (pick == clauses.size()) break;
    if (m == Mutation::skip_param_widening && !mutated) {
      mutated = true;
      exempt.insert(pick);
      continue;
    }
    const std::string oldp = clauses[pick].pred;
    const std::string newp = fresh_symbol(oldp, avoid);
    avoid.insert(newp);
    for (Clause& c : clauses) c.body = widen_occurrences(c.body, oldp, newp, extras, avoid);
    body = widen_occurrences(body, oldp, newp, extras, avoid);
    clauses[pick].pred = newp;
    clauses[pick].params.insert(clauses[pick].params.end(), extras.begin(), extras.end());
  }
  return NormalFormFormula{std::move(clauses), std::move(body)};
}

NormalFormFormula flatten_let(const std::vector<Clause>& clauses, const Formula& body,
                              std::set<std::string> avoid) {
  std::set<std::string> more = names_of(clauses, body);
  avoid.insert(more.begin(), more.end());
  std::set<std::string> claimed;
  for (const Clause& c : clauses) claimed.insert(c.pred);

  NormalFormFormula out;
  // hoists the clause list of g (when g is a Let) into hoisted, returns the residual body
  auto strip = [&](const Formula& g, std::vector<Clause>& hoisted) -> Formula {
    const auto* let = std::get_if<Let>(&g.node);
    if (let == nullptr) return g;
    std::map<std::string, std::string> ren;
    for (const Clause& ic : let->clauses) {
      if (!claimed.count(ic.pred)) continue;
      std::string nn = fresh_symbol(ic.pred, avoid);
      avoid.insert(nn);
      ren.emplace(ic.pred, nn);
    }
    Formula renamed = ren.empty() ? g : rename_let_predicates(g, ren, Vocabulary::base());
    const Let& rl = std::get<Let>(renamed.node);
    for (const Clause& ic : rl.clauses) {
      claimed.insert(ic.pred);
      hoisted.push_back(ic);
    }
    return *rl.body;
  };

  for (const Clause& c : clauses) {
    std::vector<Clause> hoisted;
    Formula residual = strip(c.body, hoisted);
    out.clauses.push_back(Clause{c.pred, c.params, std::move(residual)});
    for (Clause& h : hoisted) out.clauses.push_back(std::move(h));
  }
  std::vector<Clause> hoisted;
  out.body = strip(body, hoisted);
  for (Clause& h : hoisted) out.clauses.push_back(std::move(h));
  return out;
}

namespace {

NormalFormFormula norm(const Formula& f, std::set<std::string>& avoid, Mutation m);

// renames clause predicates already claimed by earlier parts, then merges
NormalFormFormula combine_parts(const std::vector<Formula>& parts, bool conjunction,
                                std::set<std::string>& avoid, Mutation m) {
  NormalFormFormula acc;
  std::set<std::string> claimed;
  std::vector<Formula> bodies;
  for (const Formula& part : parts) {
    NormalFormFormula nf = norm(part, avoid, m);
    std::map<std::string, std::string> ren;
    for (const Clause& c : nf.clauses) {
      if (!claimed.count(c.pred)) continue;
      std::string nn = fresh_symbol(c.pred, avoid);
      avoid.insert(nn);
      ren.emplace(c.pred, nn);
    }
    if (!ren.empty()) {
      Formula g = rename_let_predicates(as_formula(nf), ren, Vocabulary::base());
      const Let& l = std::get<Let>(g.node);
      nf.clauses = l.clauses;
      nf.body = *l.body;
    }
    for (const Clause& c : nf.clauses) {
      claimed.insert(c.pred);
      acc.clauses.push_back(c);
    }
    bodies.push_back(std::move(nf.body));
  }
  acc.body = conjunction ? Formula::conj(std::move(bodies)) : Formula::disj(std::move(bodies));
  return acc;
}

NormalFormFormula norm(const Formula& f, std::set<std::string>& avoid, Mutation m) {
  return std::visit(
      [&](const auto& node) -> NormalFormFormula {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Atom> || std::is_same_v<T, NegAtom>) {
          return NormalFormFormula{{}, f};
        } else if constexpr (std::is_same_v<T, And>) {
          return combine_parts(node.parts, true, avoid, m);
        } else if constexpr (std::is_same_v<T, Or>) {
          return combine_parts(node.parts, false, avoid, m);
        } else if constexpr (std::is_same_v<T, Exists>) {
          NormalFormFormula nf = norm(*node.body, avoid, m);
          nf.body = Formula::exists(node.var, std::move(nf.body));
          return nf;
        } else {
          std::vector<Clause> nested;
          for (const Clause& c : node.clauses) {
            NormalFormFormula nc = norm(c.body, avoid, m);
            nested.push_back(Clause{c.pred, c.params, as_formula(nc)});
          }
          NormalFormFormula nt = norm(*node.body, avoid, m);
          NormalFormFormula flat = flatten_let(nested, as_formula(nt), avoid);
          std::set<std::string> grown = names_of(flat.clauses, flat.body);
          avoid.insert(grown.begin(), grown.end());
          NormalFormFormula done =
              eliminate_parameters(std::move(flat.clauses), std::move(flat.body), avoid, m);
          std::set<std::string> after = names_of(done.clauses, done.body);
          avoid.insert(after.begin(), after.end());
          return done;
        }
      },
      f.node);
}

}  // namespace

NormalFormFormula normalize(const Formula& f, Mutation m) {
  std::set<std::string> avoid = all_names(f);
  return norm(f, avoid, m);
}

NormalFormFormula alias_then(NormalFormFormula nf, const std::vector<std::string>& free_order,
                             std::set<std::string> avoid) {
  std::set<std::string> more = names_of(nf.clauses, nf.body);
  avoid.insert(more.begin(), more.end());
  avoid.insert(free_order.begin(), free_order.end());
  std::string q = fresh_symbol("Q", avoid);
  nf.clauses.push_back(Clause{q, free_order, std::move(nf.body)});
  nf.body = Formula::atom(q, var_terms(free_order));
  return nf;
}

// ---------------------------------------------------------------------------
// Prenex and DNF

namespace {

struct Prenexed {
  std::vector<std::string> vars;
  Formula matrix = Formula::truth();
};

Prenexed pull_quantifiers(const Formula& f, std::set<std::string>& used) {
  return std::visit(
      [&](const auto& node) -> Prenexed {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Atom> || std::is_same_v<T, NegAtom>) {
          return Prenexed{{}, f};
        } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
          Prenexed out;
          std::vector<Formula> parts;
          for (const Formula& p : node.parts) {
            Prenexed sub = pull_quantifiers(p, used);
            out.vars.insert(out.vars.end(), sub.vars.begin(), sub.vars.end());
            parts.push_back(std::move(sub.matrix));
          }
          out.matrix = std::is_same_v<T, And> ? Formula::conj(std::move(parts))
                                              : Formula::disj(std::move(parts));
          return out;
        } else if constexpr (std::is_same_v<T, Exists>) {
          std::string var = node.var;
          Formula body = *node.body;
          if (used.count(var)) {
            std::string nn = fresh_symbol(var, used);
            body = substitute(body, {{var, Term::var(nn)}});
            var = nn;
          }
          used.insert(var);
          Prenexed sub = pull_quantifiers(body, used);
          sub.vars.insert(sub.vars.begin(), var);
          return sub;
        } else {
          throw Error({DiagCode::IllFormed, "", "let inside a prenex candidate"});
        }
      },
      f.node);
}

std::vector<std::vector<Formula>> dnf(const Formula& f) {
  return std::visit(
      [&](const auto& node) -> std::vector<std::vector<Formula>> {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Atom> || std::is_same_v<T, NegAtom>) {
          return {{f}};
        } else if constexpr (std::is_same_v<T, Or>) {
          std::vector<std::vector<Formula>> out;
          for (const Formula& p : node.parts) {
            auto sub = dnf(p);
            out.insert(out.end(), sub.begin(), sub.end());
          }
          return out;
        } else if constexpr (std::is_same_v<T, And>) {
          std::vector<std::vector<Formula>> out{{}};
          for (const Formula& p : node.parts) {
            auto sub = dnf(p);
            std::vector<std::vector<Formula>> next;
            for (const auto& left : out)
              for (const auto& right : sub) {
                std::vector<Formula> row = left;
                row.insert(row.end(), right.begin(), right.end());
                next.push_back(std::move(row));
              }
            out = std::move(next);
          }
          return out;
        } else {
          throw Error({DiagCode::IllFormed, "", "quantifier inside a matrix"});
        }
      },
      f.node);
}

}  // namespace

PrenexDNF prenex_dnf(const Formula& f, const std::set<std::string>& avoid) {
  std::set<std::string> used = free_vars(f);
  used.insert(avoid.begin(), avoid.end());
  Prenexed p = pull_quantifiers(f, used);
  return PrenexDNF{std::move(p.vars), dnf(p.matrix)};
}

// ---------------------------------------------------------------------------
// Formula to program

TranslationResult formula_to_program(const Formula& f, const Vocabulary& vocab, Mutation m) {
  for (const auto& [name, sig] : vocab.predicates)
    if (sig.cls != PredClass::negatable || sig.superstrate)
      throw Error({DiagCode::PositiveSubstratePredicate, name,
                   "formula translation needs an all-negatable vocabulary"});

  std::set<std::string> avoid = all_names(f);
  for (const auto& [name, ar] : vocab.functions) avoid.insert(name);
  for (const auto& [name, sig] : vocab.predicates) avoid.insert(name);

  NormalFormFormula nf = norm(f, avoid, m);
  std::set<std::string> fv = free_vars(f);
  std::vector<std::string> u(fv.begin(), fv.end());
  nf = alias_then(std::move(nf), u, avoid);
  std::set<std::string> grown = names_of(nf.clauses, nf.body);
  avoid.insert(grown.begin(), grown.end());

  std::set<std::string> clause_preds;
  for (const Clause& c : nf.clauses) clause_preds.insert(c.pred);

  TranslationResult res;
  res.distinguished = nf.clauses.back().pred;
  res.free_vars = u;
  res.program.vocab = vocab;
  for (const Clause& c : nf.clauses)
    res.program.vocab.sup(c.pred, static_cast<int>(c.params.size()));

  for (const Clause& c : nf.clauses) {
    std::set<std::string> scope = avoid;
    scope.insert(c.params.begin(), c.params.end());
    PrenexDNF pd = prenex_dnf(c.body, scope);
    for (const std::vector<Formula>& disjunct : pd.disjuncts) {
      Rule r;
      r.head = Atom{c.pred, var_terms(c.params)};
      std::vector<Formula> substrate;
      for (const Formula& lit : disjunct) {
        const auto* a = std::get_if<Atom>(&lit.node);
        if (a != nullptr && clause_preds.count(a->pred))
          r.superstrate_atoms.push_back(*a);
        else
          substrate.push_back(lit);
      }
      r.substrate = Formula::conj(std::move(substrate));
      res.program.rules.push_back(std::move(r));
    }
  }

  if (m == Mutation::swap_and_or) {
    for (Rule& r : res.program.rules) {
      const auto* a = std::get_if<And>(&r.substrate.node);
      if (a != nullptr && a->parts.size() >= 2) {
        r.substrate = Formula::disj(a->parts);
        break;
      }
    }
  }
  return res;
}

}  // namespace efpl
