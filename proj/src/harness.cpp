#include "efpl/harness.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "efpl/eval.hpp"
#include "efpl/syntax.hpp"

namespace efpl {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

// All draws go through eng() directly so the sequence is identical on every
// platform (distribution classes are not pinned by the standard).
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  int below(int n) { return n <= 1 ? 0 : static_cast<int>(eng() % static_cast<std::uint64_t>(n)); }
  bool chance(int percent) { return below(100) < percent; }
  template <typename T>
  const T& pick(const std::vector<T>& xs) {
    return xs[below(static_cast<int>(xs.size()))];
  }
};

template <typename T>
std::vector<T> pick_distinct(Rng& rng, std::vector<T> pool, int k) {
  std::vector<T> out;
  for (int i = 0; i < k && !pool.empty(); ++i) {
    int j = rng.below(static_cast<int>(pool.size()));
    out.push_back(pool[j]);
    pool.erase(pool.begin() + j);
  }
  return out;
}

template <typename Fn>
void for_each_tuple(int n, int arity, Fn fn) {
  std::vector<int> t(static_cast<std::size_t>(arity), 0);
  while (true) {
    fn(t);
    int i = arity - 1;
    while (i >= 0 && t[i] == n - 1) {
      t[i] = 0;
      --i;
    }
    if (i < 0) break;
    ++t[i];
  }
}

std::string fmt_tuple(const std::vector<int>& t) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
  os << ')';
  return os.str();
}

std::string fmt_valuation(const std::vector<std::string>& names, const std::vector<int>& t) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? ", " : "") << names[i] << '=' << t[i];
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// Generators

using NamedArity = std::pair<std::string, int>;

Vocabulary gen_vocab_impl(Rng& rng, const GenConfig& cfg, bool with_superstrate) {
  Vocabulary v = Vocabulary::base();
  const std::vector<NamedArity> fns = {{"c", 0}, {"f", 1}, {"g", 2}};
  for (const auto& [name, ar] : fns)
    if (ar <= cfg.max_arity && rng.chance(60)) v.fn(name, ar);

  std::vector<NamedArity> spool;
  for (const auto& pr : std::vector<NamedArity>{{"p", 1}, {"q", 2}, {"r", 1}, {"e", 2}})
    if (pr.second <= cfg.max_arity) spool.push_back(pr);
  int nsub = 1 + rng.below(std::min(3, static_cast<int>(spool.size())));
  for (const auto& [name, ar] : pick_distinct(rng, spool, nsub)) v.pred(name, ar);

  if (with_superstrate) {
    std::vector<NamedArity> upool;
    for (const auto& pr : std::vector<NamedArity>{{"s", 1}, {"t", 2}, {"u", 0}})
      if (pr.second <= cfg.max_arity) upool.push_back(pr);
    int nsup = 1 + rng.below(std::min(2, static_cast<int>(upool.size())));
    for (const auto& [name, ar] : pick_distinct(rng, upool, nsup)) v.sup(name, ar);
  }
  return v;
}

Structure gen_structure_impl(const Vocabulary& v, Rng& rng, const GenConfig& cfg) {
  int span = std::max(1, cfg.max_universe - cfg.min_universe + 1);
  // two draws, smaller wins: small universes give exact oracles and tight shrinks
  int n = cfg.min_universe + std::min(rng.below(span), rng.below(span));
  Structure s;
  s.universe = n;
  for (const auto& [name, ar] : v.functions) {
    FunctionTable t;
    t.arity = ar;
    std::size_t count = 1;
    for (int i = 0; i < ar; ++i) count *= static_cast<std::size_t>(n);
    t.entries.resize(count);
    for (int& e : t.entries) e = rng.below(n);
    s.functions[name] = std::move(t);
  }
  for (const auto& [name, sig] : v.predicates) {
    if (name == kEq || sig.superstrate) continue;
    RelationData rd;
    rd.arity = sig.arity;
    int density = 25 + rng.below(50);
    for_each_tuple(n, sig.arity, [&](const std::vector<int>& t) {
      if (rng.chance(density)) rd.tuples.insert(t);
    });
    s.relations[name] = std::move(rd);
  }
  return s;
}

Term gen_term(const Vocabulary& v, Rng& rng, const std::vector<std::string>& vars, int depth) {
  std::vector<NamedArity> fns(v.functions.begin(), v.functions.end());
  if (depth <= 0 || fns.empty() || rng.chance(55)) return Term::var(rng.pick(vars));
  const auto& [name, ar] = rng.pick(fns);
  std::vector<Term> args;
  for (int i = 0; i < ar; ++i) args.push_back(gen_term(v, rng, vars, depth - 1));
  return Term::app(name, std::move(args));
}

Formula gen_literal(const Vocabulary& v, Rng& rng, const std::vector<NamedArity>& scope,
                    const std::vector<std::string>& vars, bool allow_scope) {
  std::vector<NamedArity> subs;
  for (const auto& [name, sig] : v.predicates)
    if (name != kEq && !sig.superstrate) subs.emplace_back(name, sig.arity);
  int roll = rng.below(100);
  if (allow_scope && !scope.empty() && roll < 35) {
    const auto& [name, ar] = rng.pick(scope);
    std::vector<Term> args;
    for (int i = 0; i < ar; ++i) args.push_back(gen_term(v, rng, vars, 1));
    return Formula::atom(name, std::move(args));
  }
  if (!subs.empty() && roll < 75) {
    const auto& [name, ar] = rng.pick(subs);
    std::vector<Term> args;
    for (int i = 0; i < ar; ++i) args.push_back(gen_term(v, rng, vars, 1));
    return rng.chance(25) ? Formula::neg(name, std::move(args))
                          : Formula::atom(name, std::move(args));
  }
  Term a = gen_term(v, rng, vars, 1);
  Term b = gen_term(v, rng, vars, 1);
  return rng.chance(25) ? Formula::neq(std::move(a), std::move(b))
                        : Formula::eq(std::move(a), std::move(b));
}

const std::vector<std::string> kVarPool = {"X", "Y", "Z", "W"};
const std::vector<NamedArity> kLetPool = {{"a", 1}, {"b", 2}, {"h", 1}};

Formula gen_formula_rec(const Vocabulary& v, Rng& rng, const GenConfig& cfg,
                        std::vector<NamedArity>& scope, const std::vector<std::string>& vars,
                        int depth, bool inside_let) {
  if (depth <= 0) return gen_literal(v, rng, scope, vars, true);
  int roll = rng.below(100);
  const int let_cut = inside_let ? 35 : 20;
  if (roll < let_cut) {
    std::vector<NamedArity> pool;
    for (const auto& [name, ar] : kLetPool) {
      if (ar > cfg.max_arity || v.has_pred(name) || v.has_fn(name)) continue;
      bool taken = false;
      for (const auto& sc : scope) taken = taken || sc.first == name;
      if (!taken) pool.push_back({name, ar});
    }
    if (pool.empty()) {
      std::vector<Formula> ps;
      for (int i = 0; i < 2; ++i)
        ps.push_back(gen_formula_rec(v, rng, cfg, scope, vars, depth - 1, inside_let));
      return Formula::conj(std::move(ps));
    }
    int k = 1 + rng.below(std::min(cfg.max_clauses, static_cast<int>(pool.size())));
    auto chosen = pick_distinct(rng, pool, k);
    for (const auto& c : chosen) scope.push_back(c);
    std::vector<Clause> clauses;
    for (const auto& [name, ar] : chosen) {
      std::vector<std::string> params(kVarPool.begin(), kVarPool.begin() + ar);
      std::vector<std::string> body_vars = params;
      if (rng.chance(50)) body_vars.push_back(rng.pick(vars));
      clauses.push_back(
          Clause{name, params, gen_formula_rec(v, rng, cfg, scope, body_vars, depth - 1, true)});
    }
    Formula body = gen_formula_rec(v, rng, cfg, scope, vars, depth - 1, inside_let);
    for (std::size_t i = 0; i < chosen.size(); ++i) scope.pop_back();
    return Formula::let(std::move(clauses), std::move(body));
  }
  int rest = roll - let_cut;
  int width = 100 - let_cut;
  if (rest < width * 3 / 10) {
    std::vector<Formula> ps;
    int parts = 2 + (rng.chance(20) ? 1 : 0);
    for (int i = 0; i < parts; ++i)
      ps.push_back(gen_formula_rec(v, rng, cfg, scope, vars, depth - 1, inside_let));
    return Formula::conj(std::move(ps));
  }
  if (rest < width * 6 / 10) {
    std::vector<Formula> ps;
    int parts = 2 + (rng.chance(20) ? 1 : 0);
    for (int i = 0; i < parts; ++i)
      ps.push_back(gen_formula_rec(v, rng, cfg, scope, vars, depth - 1, inside_let));
    return Formula::disj(std::move(ps));
  }
  if (rest < width * 8 / 10) {
    std::string var = rng.pick(kVarPool);
    std::vector<std::string> inner = vars;
    inner.push_back(var);
    return Formula::exists(var, gen_formula_rec(v, rng, cfg, scope, inner, depth - 1, inside_let));
  }
  return gen_literal(v, rng, scope, vars, true);
}

Formula gen_formula_impl(const Vocabulary& v, Rng& rng, const GenConfig& cfg) {
  std::vector<NamedArity> scope;
  return gen_formula_rec(v, rng, cfg, scope, {"X", "Y"}, cfg.max_depth, false);
}

// Let-free existential formula over the given positive predicate scope.
Formula gen_efo(const Vocabulary& v, Rng& rng, const std::vector<NamedArity>& scope,
                const std::vector<std::string>& vars, int depth) {
  if (depth <= 0) return gen_literal(v, rng, scope, vars, true);
  int roll = rng.below(100);
  if (roll < 60) {
    std::vector<Formula> ps;
    int parts = 2 + (rng.chance(20) ? 1 : 0);
    for (int i = 0; i < parts; ++i) ps.push_back(gen_efo(v, rng, scope, vars, depth - 1));
    return roll < 30 ? Formula::conj(std::move(ps)) : Formula::disj(std::move(ps));
  }
  if (roll < 80) {
    std::string var = rng.pick(kVarPool);
    std::vector<std::string> inner = vars;
    inner.push_back(var);
    return Formula::exists(var, gen_efo(v, rng, scope, inner, depth - 1));
  }
  return gen_literal(v, rng, scope, vars, true);
}

Formula gen_qf(const Vocabulary& v, Rng& rng, const std::vector<std::string>& vars, int depth) {
  if (depth <= 0 || rng.chance(45)) return gen_literal(v, rng, {}, vars, false);
  std::vector<Formula> ps;
  int parts = 2 + (rng.chance(20) ? 1 : 0);
  for (int i = 0; i < parts; ++i) ps.push_back(gen_qf(v, rng, vars, depth - 1));
  return rng.chance(50) ? Formula::conj(std::move(ps)) : Formula::disj(std::move(ps));
}

Program gen_program_impl(const Vocabulary& v, Rng& rng, const GenConfig& cfg) {
  std::vector<NamedArity> sups;
  for (const auto& [name, sig] : v.predicates)
    if (sig.superstrate) sups.emplace_back(name, sig.arity);
  if (sups.empty())
    throw Error({DiagCode::IllFormed, "", "program generation needs a superstrate predicate"});
  Program p;
  p.vocab = v;
  const std::vector<std::string> head_vars = {"X", "Y", "Z"};
  int nrules = 1 + rng.below(cfg.max_rules);
  for (int i = 0; i < nrules; ++i) {
    Rule r;
    const auto& [hp, har] = rng.pick(sups);
    r.head.pred = hp;
    for (int j = 0; j < har; ++j)
      r.head.args.push_back(gen_term(v, rng, head_vars, rng.chance(40) ? 1 : 0));
    int natoms = rng.below(3);
    for (int a = 0; a < natoms; ++a) {
      const auto& [sp, sar] = rng.pick(sups);
      Atom at;
      at.pred = sp;
      for (int j = 0; j < sar; ++j) at.args.push_back(gen_term(v, rng, head_vars, 1));
      r.superstrate_atoms.push_back(std::move(at));
    }
    if (rng.chance(85)) r.substrate = gen_qf(v, rng, head_vars, 2);
    p.rules.push_back(std::move(r));
  }
  return p;
}

Formula gen_neg_literal(const Vocabulary& v, Rng& rng) {
  std::vector<NamedArity> subs;
  for (const auto& [name, sig] : v.predicates)
    if (name != kEq && !sig.superstrate && sig.cls == PredClass::negatable)
      subs.emplace_back(name, sig.arity);
  if (!subs.empty() && rng.chance(50)) {
    const auto& [name, ar] = rng.pick(subs);
    std::vector<Term> args;
    for (int i = 0; i < ar; ++i) args.push_back(Term::var(kVarPool[rng.below(2)]));
    return Formula::neg(name, std::move(args));
  }
  return Formula::neq(Term::var("X"), Term::var("Y"));
}

}  // namespace

Vocabulary gen_vocabulary(const GenConfig& cfg, bool with_superstrate) {
  Rng rng(cfg.seed);
  return gen_vocab_impl(rng, cfg, with_superstrate);
}

Structure gen_structure(const Vocabulary& v, const GenConfig& cfg) {
  Rng rng(cfg.seed);
  return gen_structure_impl(v, rng, cfg);
}

Formula gen_formula(const Vocabulary& v, const GenConfig& cfg) {
  Rng rng(cfg.seed);
  return gen_formula_impl(v, rng, cfg);
}

Program gen_program(const Vocabulary& v, const GenConfig& cfg) {
  Rng rng(cfg.seed);
  return gen_program_impl(v, rng, cfg);
}

namespace {

bool contains_let(const Formula& f) {
  return std::visit(
      [](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atom> || std::is_same_v<T, NegAtom>) {
          return false;
        } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
          for (const Formula& p : n.parts)
            if (contains_let(p)) return true;
          return false;
        } else if constexpr (std::is_same_v<T, Exists>) {
          return contains_let(*n.body);
        } else {
          return true;
        }
      },
      f.node);
}

}  // namespace

bool contains_nested_let(const Formula& f) {
  return std::visit(
      [](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atom> || std::is_same_v<T, NegAtom>) {
          return false;
        } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
          for (const Formula& p : n.parts)
            if (contains_nested_let(p)) return true;
          return false;
        } else if constexpr (std::is_same_v<T, Exists>) {
          return contains_nested_let(*n.body);
        } else {
          for (const Clause& cl : n.clauses)
            if (contains_let(cl.body)) return true;
          return contains_let(*n.body);
        }
      },
      f.node);
}

namespace {

// ---------------------------------------------------------------------------
// Differential comparison and shrinking

Structure restrict_structure(const Structure& s, int m) {
  Structure out;
  out.universe = m;
  for (const auto& [name, ft] : s.functions) {
    FunctionTable t;
    t.arity = ft.arity;
    std::size_t count = 1;
    for (int i = 0; i < ft.arity; ++i) count *= static_cast<std::size_t>(m);
    t.entries.reserve(count);
    for_each_tuple(m, ft.arity, [&](const std::vector<int>& tup) {
      long long idx = 0;
      for (int e : tup) idx = idx * s.universe + e;
      t.entries.push_back(ft.entries[static_cast<std::size_t>(idx)] % m);
    });
    out.functions[name] = std::move(t);
  }
  for (const auto& [name, rd] : s.relations) {
    RelationData r;
    r.arity = rd.arity;
    for (const auto& tup : rd.tuples)
      if (std::all_of(tup.begin(), tup.end(), [&](int e) { return e < m; })) r.tuples.insert(tup);
    out.relations[name] = std::move(r);
  }
  return out;
}

std::optional<std::string> compare_program_formula(const Program& p, const std::string& target,
                                                   const Structure& s, Mutation m) {
  ProgramResult res = eval_program(p, s);
  const RelationData& rel = res.fixpoint.at(target);
  Formula f = program_to_formula(p, target, m);
  const Formula* body = &f;
  if (const Let* l = std::get_if<Let>(&f.node)) body = &l->body.get();
  const Atom& ta = std::get<Atom>(body->node);
  std::vector<std::string> order;
  for (const Term& t : ta.args) order.push_back(t.name);
  if (static_cast<int>(order.size()) != rel.arity)
    return "translated formula head arity differs from the program relation";
  std::optional<std::string> bad;
  for_each_tuple(s.universe, rel.arity, [&](const std::vector<int>& tup) {
    if (bad) return;
    Valuation val;
    for (std::size_t i = 0; i < order.size(); ++i) val[order[i]] = tup[i];
    bool in_program = rel.tuples.count(tup) != 0;
    bool in_formula = eval_formula(f, s, val);
    if (in_program != in_formula) {
      std::ostringstream os;
      os << "tuple " << fmt_tuple(tup) << ": program relation "
         << (in_program ? "contains it" : "omits it") << ", translated formula is "
         << (in_formula ? "true" : "false");
      bad = os.str();
    }
  });
  return bad;
}

std::optional<std::string> checked_compare_pf(const Program& p, const std::string& target,
                                              const Structure& s, Mutation m) {
  try {
    return compare_program_formula(p, target, s, m);
  } catch (const Error& e) {
    return std::string("error: ") + e.what();
  }
}

std::optional<std::string> compare_formula_program(const Formula& f, const TranslationResult& tr,
                                                   const Structure& s) {
  try {
    ProgramResult res = eval_program(tr.program, s);
    const RelationData& rel = res.fixpoint.at(tr.distinguished);
    std::optional<std::string> bad;
    for_each_tuple(s.universe, static_cast<int>(tr.free_vars.size()),
                   [&](const std::vector<int>& tup) {
                     if (bad) return;
                     Valuation val;
                     for (std::size_t i = 0; i < tr.free_vars.size(); ++i)
                       val[tr.free_vars[i]] = tup[i];
                     bool direct = eval_formula(f, s, val);
                     bool translated = rel.tuples.count(tup) != 0;
                     if (direct != translated) {
                       std::ostringstream os;
                       os << "valuation " << fmt_valuation(tr.free_vars, tup) << ": formula is "
                          << (direct ? "true" : "false") << ", program relation "
                          << (translated ? "contains the tuple" : "omits the tuple");
                       bad = os.str();
                     }
                   });
    return bad;
  } catch (const Error& e) {
    return std::string("error: ") + e.what();
  }
}

}  // namespace

CheckResult check_equivalence_program(const Program& p, const std::string& target,
                                      const GenConfig& cfg, Mutation m) {
  for (int trial = 0; trial < cfg.trials; ++trial) {
    std::uint64_t ts = mix_seed(cfg.seed, static_cast<std::uint64_t>(trial));
    Rng rng(ts);
    Structure s = gen_structure_impl(p.vocab, rng, cfg);
    std::optional<std::string> bad = checked_compare_pf(p, target, s, m);
    if (!bad) continue;

    Program sp = p;
    auto fails = [&](const Program& q, const Structure& t) {
      return checked_compare_pf(q, target, t, m).has_value();
    };
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < sp.rules.size(); ++i) {
        Program q = sp;
        q.rules.erase(q.rules.begin() + static_cast<std::ptrdiff_t>(i));
        if (fails(q, s)) {
          sp = std::move(q);
          changed = true;
          break;
        }
      }
    }
    for (int n2 = 1; n2 < s.universe; ++n2) {
      Structure t = restrict_structure(s, n2);
      if (fails(sp, t)) {
        s = std::move(t);
        break;
      }
    }
    Discrepancy d;
    d.kind = "program-formula-equivalence";
    d.seed = ts;
    d.artifact = print_program(sp);
    d.structure = print_structure(s);
    d.detail = checked_compare_pf(sp, target, s, m).value_or(*bad);
    return d;
  }
  return std::nullopt;
}

CheckResult check_equivalence_formula(const Formula& f, const Vocabulary& v, const GenConfig& cfg,
                                      Mutation m) {
  TranslationResult tr;
  try {
    tr = formula_to_program(f, v, m);
  } catch (const Error& e) {
    Discrepancy d;
    d.kind = "formula-translation-error";
    d.seed = cfg.seed;
    d.artifact = print_formula(f);
    d.detail = e.what();
    return d;
  }
  for (int trial = 0; trial < cfg.trials; ++trial) {
    std::uint64_t ts = mix_seed(cfg.seed, static_cast<std::uint64_t>(trial));
    Rng rng(ts);
    Structure s = gen_structure_impl(v, rng, cfg);
    std::optional<std::string> bad = compare_formula_program(f, tr, s);
    if (!bad) continue;
    for (int n2 = 1; n2 < s.universe; ++n2) {
      Structure t = restrict_structure(s, n2);
      if (compare_formula_program(f, tr, t)) {
        s = std::move(t);
        break;
      }
    }
    Discrepancy d;
    d.kind = "formula-program-equivalence";
    d.seed = ts;
    d.artifact = print_formula(f);
    d.structure = print_structure(s);
    d.detail = compare_formula_program(f, tr, s).value_or(*bad);
    return d;
  }
  return std::nullopt;
}

CheckResult check_homomorphism_preservation(const GenConfig& cfg, bool weakened) {
  for (int trial = 0; trial < cfg.trials; ++trial) {
    std::uint64_t ts = mix_seed(cfg.seed, static_cast<std::uint64_t>(trial));
    Rng rng(ts);
    Vocabulary v = gen_vocab_impl(rng, cfg, false);
    Structure tgt = gen_structure_impl(v, rng, cfg);
    Homomorphism h;
    h.target = tgt;
    Formula f = Formula::truth();

    if (!weakened) {
      std::set<int> sub;
      for (int i = 0; i < tgt.universe; ++i)
        if (rng.chance(60)) sub.insert(i);
      if (sub.empty()) sub.insert(rng.below(tgt.universe));
      bool grew = true;
      while (grew) {
        grew = false;
        std::vector<int> elems(sub.begin(), sub.end());
        for (const auto& [name, ft] : tgt.functions) {
          for_each_tuple(static_cast<int>(elems.size()), ft.arity,
                         [&](const std::vector<int>& ix) {
                           long long idx = 0;
                           for (int e : ix) idx = idx * tgt.universe + elems[e];
                           int img = ft.entries[static_cast<std::size_t>(idx)];
                           if (sub.insert(img).second) grew = true;
                         });
          if (grew) break;
        }
      }
      std::vector<int> order(sub.begin(), sub.end());
      std::map<int, int> to_new;
      for (std::size_t i = 0; i < order.size(); ++i) to_new[order[i]] = static_cast<int>(i);
      Structure src;
      src.universe = static_cast<int>(order.size());
      for (const auto& [name, ft] : tgt.functions) {
        FunctionTable t;
        t.arity = ft.arity;
        for_each_tuple(src.universe, ft.arity, [&](const std::vector<int>& tup) {
          long long idx = 0;
          for (int e : tup) idx = idx * tgt.universe + order[e];
          t.entries.push_back(to_new.at(ft.entries[static_cast<std::size_t>(idx)]));
        });
        src.functions[name] = std::move(t);
      }
      for (const auto& [name, rd] : tgt.relations) {
        RelationData r;
        r.arity = rd.arity;
        for_each_tuple(src.universe, rd.arity, [&](const std::vector<int>& tup) {
          std::vector<int> img(tup.size());
          for (std::size_t i = 0; i < tup.size(); ++i) img[i] = order[tup[i]];
          if (rd.tuples.count(img)) r.tuples.insert(tup);
        });
        src.relations[name] = std::move(r);
      }
      h.source = std::move(src);
      h.map = order;
      if (!check_homomorphism(h, v).ok()) {
        Discrepancy d;
        d.kind = "hom-embedding-rejected";
        d.seed = ts;
        d.structure = print_structure(h.source) + "\n---\n" + print_structure(h.target);
        d.detail = check_homomorphism(h, v).to_string();
        return d;
      }
      f = gen_formula_impl(v, rng, cfg);
    } else {
      int ns = tgt.universe + 1 + rng.below(2);
      h.map.resize(static_cast<std::size_t>(ns));
      for (int i = 0; i < tgt.universe; ++i) h.map[static_cast<std::size_t>(i)] = i;
      for (int i = tgt.universe; i < ns; ++i)
        h.map[static_cast<std::size_t>(i)] = rng.below(tgt.universe);
      Structure src;
      src.universe = ns;
      for (const auto& [name, ft] : tgt.functions) {
        FunctionTable t;
        t.arity = ft.arity;
        for_each_tuple(ns, ft.arity, [&](const std::vector<int>& tup) {
          long long idx = 0;
          for (int e : tup) idx = idx * tgt.universe + h.map[static_cast<std::size_t>(e)];
          t.entries.push_back(ft.entries[static_cast<std::size_t>(idx)]);
        });
        src.functions[name] = std::move(t);
      }
      for (const auto& [name, rd] : tgt.relations) {
        RelationData r;
        r.arity = rd.arity;
        for_each_tuple(ns, rd.arity, [&](const std::vector<int>& tup) {
          std::vector<int> img(tup.size());
          for (std::size_t i = 0; i < tup.size(); ++i) img[i] = h.map[static_cast<std::size_t>(tup[i])];
          if (rd.tuples.count(img) && rng.chance(70)) r.tuples.insert(tup);
        });
        src.relations[name] = std::move(r);
      }
      h.source = std::move(src);
      if (!check_homomorphism_weak(h, v).ok()) {
        Discrepancy d;
        d.kind = "hom-weak-check-rejected";
        d.seed = ts;
        d.structure = print_structure(h.source) + "\n---\n" + print_structure(h.target);
        d.detail = check_homomorphism_weak(h, v).to_string();
        return d;
      }
      Formula neglit = gen_neg_literal(v, rng);
      if (rng.chance(40)) {
        GenConfig small = cfg;
        small.max_depth = std::min(cfg.max_depth, 2);
        f = Formula::conj({gen_formula_impl(v, rng, small), neglit});
      } else {
        f = neglit;
      }
    }
    auto fv = free_vars(f);
    std::vector<std::string> names(fv.begin(), fv.end());
    std::optional<Discrepancy> found;
    for_each_tuple(h.source.universe, static_cast<int>(names.size()),
                   [&](const std::vector<int>& tup) {
                     if (found) return;
                     Valuation vs, vt;
                     for (std::size_t i = 0; i < names.size(); ++i) {
                       vs[names[i]] = tup[i];
                       vt[names[i]] = h.map[static_cast<std::size_t>(tup[i])];
                     }
                     if (eval_formula(f, h.source, vs) && !eval_formula(f, h.target, vt)) {
                       Discrepancy d;
                       d.kind = weakened ? "hom-weakened-violation" : "hom-preservation";
                       d.seed = ts;
                       d.artifact = print_formula(f);
                       d.structure =
                           print_structure(h.source) + "\n---\n" + print_structure(h.target);
                       d.detail = "true in the source at " + fmt_valuation(names, tup) +
                                  ", false in the target at the mapped valuation";
                       found = d;
                     }
                   });
    if (found) return found;
  }
  return std::nullopt;
}

CheckResult fuzz_theorem2_forward(const GenConfig& cfg, Mutation m) {
  for (int trial = 0; trial < cfg.trials; ++trial) {
    std::uint64_t ts = mix_seed(cfg.seed, static_cast<std::uint64_t>(trial));
    Rng rng(ts);
    Vocabulary v = gen_vocab_impl(rng, cfg, true);
    Program p = gen_program_impl(v, rng, cfg);
    GenConfig inner = cfg;
    inner.seed = mix_seed(ts, 0x5754);
    inner.trials = 5;
    for (const auto& [name, sig] : v.predicates) {
      if (!sig.superstrate) continue;
      CheckResult d = check_equivalence_program(p, name, inner, m);
      if (d) {
        d->kind = "theorem2-forward";
        d->seed = ts;
        return d;
      }
    }
  }
  return std::nullopt;
}

CheckResult fuzz_theorem2_converse(const GenConfig& cfg, Mutation m) {
  for (int trial = 0; trial < cfg.trials; ++trial) {
    std::uint64_t ts = mix_seed(cfg.seed, static_cast<std::uint64_t>(trial));
    Rng rng(ts);
    Vocabulary v = gen_vocab_impl(rng, cfg, false);
    Formula f = gen_formula_impl(v, rng, cfg);
    GenConfig inner = cfg;
    inner.seed = mix_seed(ts, 0x434e);
    inner.trials = 5;
    CheckResult d = check_equivalence_formula(f, v, inner, m);
    if (d) {
      d->kind = "theorem2-converse";
      d->seed = ts;
      return d;
    }
  }
  return std::nullopt;
}

CheckResult fuzz_operator_lemma(const GenConfig& cfg) {
  for (int trial = 0; trial < cfg.trials; ++trial) {
    std::uint64_t ts = mix_seed(cfg.seed, static_cast<std::uint64_t>(trial));
    Rng rng(ts);
    Vocabulary v = gen_vocab_impl(rng, cfg, true);
    Program p = gen_program_impl(v, rng, cfg);
    Structure s = gen_structure_impl(v, rng, cfg);
    auto report = [&](const std::string& kind, const std::string& detail) {
      Discrepancy d;
      d.kind = kind;
      d.seed = ts;
      d.artifact = print_program(p);
      d.structure = print_structure(s);
      d.detail = detail;
      return d;
    };
    try {
      ProgramResult res = eval_program(p, s);
      if (res.trace.stages.size() > res.trace.bound)
        return report("trace-bound", "trace has " + std::to_string(res.trace.stages.size()) +
                                         " stages, bound is " + std::to_string(res.trace.bound));
      if (res.trace.stages.empty() || res.trace.stages.back() != res.fixpoint)
        return report("trace-endpoint", "last trace stage is not the fixed point");
      Interpretation plain = eval_plain_delta(p, s);
      if (plain != res.fixpoint)
        return report("operator-lemma-plain",
                      "plain iteration and inflationary iteration reach different points");
      if (superstrate_space(p, s.universe) <= 16) {
        Interpretation oracle = least_closed_point_oracle(p, s);
        if (oracle != res.fixpoint)
          return report("operator-lemma-oracle",
                        "least closed point differs from the computed fixed point");
      }
    } catch (const Error& e) {
      return report("operator-lemma-error", e.what());
    }
  }
  return std::nullopt;
}

CheckResult fuzz_star_infinity(const GenConfig& cfg) {
  for (int trial = 0; trial < cfg.trials; ++trial) {
    std::uint64_t ts = mix_seed(cfg.seed, static_cast<std::uint64_t>(trial));
    Rng rng(ts);
    Vocabulary v = gen_vocab_impl(rng, cfg, false);
    Structure s = gen_structure_impl(v, rng, cfg);

    Formula rho = gen_efo(v, rng, {{"pa", 1}, {"rb", 1}}, {"Y"}, 2);
    Formula pi = gen_efo(v, rng, {{"pa", 1}, {"rb", 1}}, {"X"}, 2);
    Formula sigma = gen_efo(v, rng, {{"pa", 1}, {"sc", 1}}, {"Z"}, 2);
    Formula theta = gen_efo(v, rng, {{"pa", 1}, {"sc", 1}}, {"U"}, 2);

    Clause inner_r{"rb", {"Y"}, rho};
    Clause outer_p{"pa", {"X"}, Formula::let({inner_r}, pi)};
    Clause body_s{"sc", {"Z"}, sigma};
    Formula nested = Formula::let({outer_p}, Formula::let({body_s}, theta));

    auto report = [&](const std::string& detail) {
      Discrepancy d;
      d.kind = "star-infinity";
      d.seed = ts;
      d.artifact = print_formula(nested);
      d.structure = print_structure(s);
      d.detail = detail;
      return d;
    };
    try {
      NormalFormFormula flat = flatten_let({outer_p}, Formula::let({body_s}, theta));
      if (flat.clauses.size() != 3 || flat.clauses[0].pred != "pa" ||
          flat.clauses[1].pred != "rb" || flat.clauses[2].pred != "sc")
        return report("flattened clause family has an unexpected shape");

      Interpretation star = lfp_clauses(flat.clauses, s);
      Interpretation p_inf = lfp_clauses({outer_p}, s);
      Interpretation env_star{{"pa", star.at("pa")}};
      Interpretation r_inf = lfp_clauses({inner_r}, s, {}, env_star);
      Interpretation env_inf{{"pa", p_inf.at("pa")}};
      Interpretation s_inf = lfp_clauses({body_s}, s, {}, env_inf);

      if (star.at("pa") != p_inf.at("pa"))
        return report("flattened pa differs from the nested fixed point of pa");
      if (star.at("rb") != r_inf.at("rb"))
        return report("flattened rb differs from its fixed point over the flattened pa");
      if (star.at("sc") != s_inf.at("sc"))
        return report("flattened sc differs from its fixed point over the nested pa");
    } catch (const Error& e) {
      return report(std::string("error: ") + e.what());
    }
  }
  return std::nullopt;
}

CheckResult fuzz_sectioning(const GenConfig& cfg) {
  for (int trial = 0; trial < cfg.trials; ++trial) {
    std::uint64_t ts = mix_seed(cfg.seed, static_cast<std::uint64_t>(trial));
    Rng rng(ts);
    Vocabulary v = gen_vocab_impl(rng, cfg, false);
    Structure s = gen_structure_impl(v, rng, cfg);

    int nextras = 1 + rng.below(2);
    std::vector<std::string> extras(kVarPool.begin() + 1, kVarPool.begin() + 1 + nextras);
    std::vector<std::string> body_vars = {"X"};
    body_vars.insert(body_vars.end(), extras.begin(), extras.end());
    Formula d0 = gen_efo(v, rng, {{"pa", 1}}, body_vars, 2);
    std::vector<Formula> eqs;
    for (const std::string& y : extras) eqs.push_back(Formula::eq(Term::var("X"), Term::var(y)));
    Formula delta = Formula::disj({d0, Formula::conj(std::move(eqs))});
    Clause param_clause{"pa", {"X"}, delta};
    Formula use = Formula::atom("pa", {Term::var("X")});

    auto report = [&](const std::string& detail) {
      Discrepancy d;
      d.kind = "sectioning";
      d.seed = ts;
      d.artifact = print_formula(Formula::let({param_clause}, use));
      d.structure = print_structure(s);
      d.detail = detail;
      return d;
    };
    try {
      NormalFormFormula nf =
          eliminate_parameters({param_clause}, use, all_names(Formula::let({param_clause}, use)));
      if (nf.clauses.size() != 1) return report("parameter elimination changed the clause count");
      const Clause& wide = nf.clauses[0];
      if (wide.params.size() != 1 + extras.size())
        return report("widened clause has unexpected parameter count");
      for (std::size_t i = 0; i < extras.size(); ++i)
        if (wide.params[1 + i] != extras[i])
          return report("widened clause parameters are not the sorted extras");

      std::vector<Interpretation> wide_stages;
      lfp_clauses_stages({wide}, s, {}, {}, &wide_stages);

      std::optional<std::string> bad;
      for_each_tuple(s.universe, static_cast<int>(extras.size()), [&](const std::vector<int>& b) {
        if (bad) return;
        Valuation val;
        for (std::size_t i = 0; i < extras.size(); ++i) val[extras[i]] = b[i];
        std::vector<Interpretation> par_stages;
        lfp_clauses_stages({param_clause}, s, val, {}, &par_stages);
        std::size_t steps = std::max(par_stages.size(), wide_stages.size());
        for (std::size_t t = 0; t < steps; ++t) {
          const Interpretation& a = par_stages[std::min(t, par_stages.size() - 1)];
          const Interpretation& w = wide_stages[std::min(t, wide_stages.size() - 1)];
          std::set<std::vector<int>> section;
          for (const auto& tup : w.at(wide.pred).tuples) {
            bool match = true;
            for (std::size_t i = 0; i < b.size(); ++i)
              if (tup[1 + i] != b[i]) {
                match = false;
                break;
              }
            if (match) section.insert({tup[0]});
          }
          if (section != a.at("pa").tuples) {
            bad = "stage " + std::to_string(t) + " sectioned at " + fmt_valuation(extras, b) +
                  " differs from the parameterized stage";
            return;
          }
        }
      });
      if (bad) return report(*bad);
    } catch (const Error& e) {
      return report(std::string("error: ") + e.what());
    }
  }
  return std::nullopt;
}

}  // namespace efpl
