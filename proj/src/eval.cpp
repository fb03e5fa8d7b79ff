#include "efpl/eval.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <memory>
#include <set>
#include <stdexcept>

namespace efpl {

namespace {

constexpr long long kDenseLimit = 1ll << 26;

long long pow_clamped(long long n, int k) {
  long long r = 1;
  for (int i = 0; i < k; ++i) {
    if (r > 4 * kDenseLimit) return 4 * kDenseLimit + 1;
    r *= n;
  }
  return r;
}

// Relation readable by the compiled evaluator. Dense bitset when the tuple
// space fits, otherwise a view of a sorted tuple set.
struct Rel {
  int arity = 0;
  long long card = 0;  // n^arity when dense
  bool dense = false;
  std::vector<std::uint64_t> bits;
  const std::set<std::vector<int>>* sparse = nullptr;

  bool test_idx(long long i) const { return (bits[i >> 6] >> (i & 63)) & 1; }
  void set_idx(long long i) { bits[i >> 6] |= std::uint64_t{1} << (i & 63); }
};

const std::set<std::vector<int>> kNoTuples;

struct EvalCtx {
  int n = 1;
  std::vector<int> slots;
  std::vector<std::vector<Rel>*> frames;
};

struct CTerm {
  int var_slot = -1;
  const std::vector<int>* table = nullptr;
  std::vector<CTerm> args;

  int eval(const EvalCtx& c) const {
    if (var_slot >= 0) return c.slots[var_slot];
    long long idx = 0;
    for (const CTerm& a : args) idx = idx * c.n + a.eval(c);
    return (*table)[idx];
  }
};

struct CNode {
  virtual ~CNode() = default;
  virtual bool eval(EvalCtx& c) const = 0;
};
using NodePtr = std::unique_ptr<CNode>;

struct CEq : CNode {
  CTerm a, b;
  bool neg = false;
  bool eval(EvalCtx& c) const override { return (a.eval(c) == b.eval(c)) != neg; }
};

struct CRelAtom : CNode {
  const Rel* rel = nullptr;
  std::vector<CTerm> args;
  bool neg = false;
  bool eval(EvalCtx& c) const override {
    bool in;
    if (rel->dense) {
      long long idx = 0;
      for (const CTerm& a : args) idx = idx * c.n + a.eval(c);
      in = rel->test_idx(idx);
    } else {
      std::vector<int> tuple(args.size());
      for (std::size_t i = 0; i < args.size(); ++i) tuple[i] = args[i].eval(c);
      in = rel->sparse->count(tuple) != 0;
    }
    return in != neg;
  }
};

struct CFrameAtom : CNode {
  int frame_id = 0;
  int pred_ix = 0;
  std::vector<CTerm> args;
  bool eval(EvalCtx& c) const override {
    const Rel& r = (*c.frames[frame_id])[pred_ix];
    long long idx = 0;
    for (const CTerm& a : args) idx = idx * c.n + a.eval(c);
    return r.test_idx(idx);
  }
};

struct CAnd : CNode {
  std::vector<NodePtr> parts;
  bool eval(EvalCtx& c) const override {
    for (const NodePtr& p : parts)
      if (!p->eval(c)) return false;
    return true;
  }
};

struct COr : CNode {
  std::vector<NodePtr> parts;
  bool eval(EvalCtx& c) const override {
    for (const NodePtr& p : parts)
      if (p->eval(c)) return true;
    return false;
  }
};

struct CExists : CNode {
  int slot = 0;
  NodePtr body;
  bool eval(EvalCtx& c) const override {
    for (int v = 0; v < c.n; ++v) {
      c.slots[slot] = v;
      if (body->eval(c)) return true;
    }
    return false;
  }
};

struct CClause {
  int arity = 0;
  long long card = 1;
  std::vector<int> param_slots;
  NodePtr body;
};

std::vector<Rel> make_frame(const std::vector<CClause>& cls) {
  std::vector<Rel> rels(cls.size());
  for (std::size_t i = 0; i < cls.size(); ++i) {
    rels[i].arity = cls[i].arity;
    rels[i].card = cls[i].card;
    rels[i].dense = true;
    rels[i].bits.assign(static_cast<std::size_t>((cls[i].card + 63) / 64), 0);
  }
  return rels;
}

void decode(long long idx, int arity, const std::vector<int>& slots, EvalCtx& c) {
  for (int j = arity - 1; j >= 0; --j) {
    c.slots[slots[j]] = static_cast<int>(idx % c.n);
    idx /= c.n;
  }
}

// In-place ascending-order iteration to the least fixed point: additions are
// visible immediately; a sweep adding nothing certifies closure.
void run_chaotic(const std::vector<CClause>& cls, std::vector<Rel>& rels, EvalCtx& c) {
  long long total = 0;
  for (const CClause& cl : cls) total += cl.card;
  long long sweeps = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    if (++sweeps > total + 2) throw std::logic_error("fixed point sweep bound exceeded");
    for (std::size_t ci = 0; ci < cls.size(); ++ci) {
      const CClause& cl = cls[ci];
      Rel& r = rels[ci];
      for (long long idx = 0; idx < cl.card; ++idx) {
        if (r.test_idx(idx)) continue;
        decode(idx, cl.arity, cl.param_slots, c);
        if (cl.body->eval(c)) {
          r.set_idx(idx);
          changed = true;
        }
      }
    }
  }
}

struct CLet : CNode {
  int frame_id = 0;
  std::vector<CClause> clauses;
  NodePtr then_body;
  bool eval(EvalCtx& c) const override {
    std::vector<Rel> rels = make_frame(clauses);
    if (c.frames.size() <= static_cast<std::size_t>(frame_id))
      c.frames.resize(frame_id + 1, nullptr);
    std::vector<Rel>* saved = c.frames[frame_id];
    c.frames[frame_id] = &rels;
    run_chaotic(clauses, rels, c);
    bool r = then_body->eval(c);
    c.frames[frame_id] = saved;
    return r;
  }
};

// ---------------------------------------------------------------------------
// Compilation

struct Compiler {
  const Structure* s = nullptr;
  int n = 1;
  const Interpretation* env = nullptr;
  int next_slot = 0;
  int next_frame = 0;
  std::deque<Rel> owned;
  std::map<std::string, Rel*> rel_cache;  // structure and env relations
  std::vector<std::map<std::string, int>> var_scopes;
  struct PredBind {
    int frame_id;
    int pred_ix;
    int arity;
  };
  std::vector<std::map<std::string, PredBind>> pred_scopes;

  explicit Compiler(const Structure& st, const Interpretation* e = nullptr)
      : s(&st), n(st.universe), env(e) {
    if (n < 1) throw Error({DiagCode::EmptyUniverse, "", std::to_string(n)});
  }

  int bind_var(const std::string& name) {
    int slot = next_slot++;
    var_scopes.back()[name] = slot;
    return slot;
  }

  int lookup_var(const std::string& name) const {
    for (auto it = var_scopes.rbegin(); it != var_scopes.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return f->second;
    }
    return -1;
  }

  const PredBind* lookup_pred(const std::string& name) const {
    for (auto it = pred_scopes.rbegin(); it != pred_scopes.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }

  CTerm term(const Term& t) {
    CTerm ct;
    if (t.is_var) {
      ct.var_slot = lookup_var(t.name);
      if (ct.var_slot < 0) throw Error({DiagCode::UnboundVariable, t.name, "variable not bound"});
      return ct;
    }
    auto it = s->functions.find(t.name);
    if (it == s->functions.end())
      throw Error({DiagCode::UndeclaredSymbol, t.name, "no function table"});
    if (static_cast<int>(t.args.size()) != it->second.arity)
      throw Error({DiagCode::ArityMismatch, t.name,
                   "function applied to " + std::to_string(t.args.size()) + " arguments"});
    ct.table = &it->second.entries;
    for (const Term& a : t.args) ct.args.push_back(term(a));
    return ct;
  }

  Rel* data_rel(const std::string& name, const RelationData* rd, int arity) {
    auto it = rel_cache.find(name);
    if (it != rel_cache.end()) return it->second;
    owned.emplace_back();
    Rel& r = owned.back();
    r.arity = arity;
    long long card = pow_clamped(n, arity);
    if (rd == nullptr) {
      r.dense = false;
      r.sparse = &kNoTuples;
    } else if (card <= kDenseLimit) {
      r.dense = true;
      r.card = card;
      r.bits.assign(static_cast<std::size_t>((card + 63) / 64), 0);
      for (const std::vector<int>& t : rd->tuples) {
        long long idx = 0;
        for (int e : t) idx = idx * n + e;
        r.set_idx(idx);
      }
    } else {
      r.dense = false;
      r.sparse = &rd->tuples;
    }
    rel_cache.emplace(name, &r);
    return &r;
  }

  NodePtr atom(const std::string& pred, const std::vector<Term>& args, bool neg) {
    if (pred == kEq) {
      if (args.size() != 2) throw Error({DiagCode::IllFormed, pred, "equality needs 2 arguments"});
      auto node = std::make_unique<CEq>();
      node->a = term(args[0]);
      node->b = term(args[1]);
      node->neg = neg;
      return node;
    }
    if (const PredBind* pb = lookup_pred(pred)) {
      if (neg)
        throw Error({DiagCode::NegationOfPositive, pred, "negated fixed-point predicate"});
      if (pb->arity != static_cast<int>(args.size()))
        throw Error({DiagCode::ArityMismatch, pred, "bad argument count"});
      auto node = std::make_unique<CFrameAtom>();
      node->frame_id = pb->frame_id;
      node->pred_ix = pb->pred_ix;
      for (const Term& a : args) node->args.push_back(term(a));
      return node;
    }
    const RelationData* rd = nullptr;
    int arity = static_cast<int>(args.size());
    if (env != nullptr) {
      auto it = env->find(pred);
      if (it != env->end()) {
        if (neg)
          throw Error({DiagCode::NegationOfPositive, pred, "negated fixed-point predicate"});
        rd = &it->second;
      }
    }
    if (rd == nullptr) {
      auto it = s->relations.find(pred);
      if (it != s->relations.end()) rd = &it->second;  // absent relation = empty
    }
    if (rd != nullptr && rd->arity != arity)
      throw Error({DiagCode::ArityMismatch, pred, "bad argument count"});
    auto node = std::make_unique<CRelAtom>();
    node->rel = data_rel(pred, rd, arity);
    node->neg = neg;
    for (const Term& a : args) node->args.push_back(term(a));
    return node;
  }

  std::pair<int, std::vector<CClause>> clause_system(const std::vector<Clause>& clauses) {
    int fid = next_frame++;
    std::map<std::string, PredBind> binds;
    for (std::size_t i = 0; i < clauses.size(); ++i) {
      long long card = pow_clamped(n, static_cast<int>(clauses[i].params.size()));
      if (card > kDenseLimit)
        throw Error({DiagCode::TupleSpaceTooLarge, clauses[i].pred,
                     "clause tuple space exceeds the evaluator limit"});
      binds[clauses[i].pred] =
          PredBind{fid, static_cast<int>(i), static_cast<int>(clauses[i].params.size())};
    }
    pred_scopes.push_back(std::move(binds));
    std::vector<CClause> out;
    for (const Clause& cl : clauses) {
      CClause cc;
      cc.arity = static_cast<int>(cl.params.size());
      cc.card = pow_clamped(n, cc.arity);
      var_scopes.emplace_back();
      for (const std::string& pv : cl.params) cc.param_slots.push_back(bind_var(pv));
      cc.body = formula(cl.body);
      var_scopes.pop_back();
      out.push_back(std::move(cc));
    }
    return {fid, std::move(out)};
  }

  NodePtr formula(const Formula& f) {
    return std::visit(
        [&](const auto& node) -> NodePtr {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, Atom>) {
            return atom(node.pred, node.args, false);
          } else if constexpr (std::is_same_v<T, NegAtom>) {
            return atom(node.pred, node.args, true);
          } else if constexpr (std::is_same_v<T, And>) {
            auto out = std::make_unique<CAnd>();
            for (const Formula& p : node.parts) out->parts.push_back(formula(p));
            return out;
          } else if constexpr (std::is_same_v<T, Or>) {
            auto out = std::make_unique<COr>();
            for (const Formula& p : node.parts) out->parts.push_back(formula(p));
            return out;
          } else if constexpr (std::is_same_v<T, Exists>) {
            auto out = std::make_unique<CExists>();
            var_scopes.emplace_back();
            out->slot = bind_var(node.var);
            out->body = formula(*node.body);
            var_scopes.pop_back();
            return out;
          } else {
            auto out = std::make_unique<CLet>();
            auto [fid, cls] = clause_system(node.clauses);
            out->frame_id = fid;
            out->clauses = std::move(cls);
            out->then_body = formula(*node.body);
            pred_scopes.pop_back();
            return out;
          }
        },
        f.node);
  }
};

std::map<std::string, int> val_scope(Compiler& comp, const Valuation& val,
                                     std::vector<std::pair<int, int>>& preset) {
  std::map<std::string, int> scope;
  for (const auto& [name, v] : val) {
    if (v < 0 || v >= comp.n)
      throw Error({DiagCode::IllFormed, name, "valuation value outside the universe"});
    int slot = comp.next_slot++;
    scope[name] = slot;
    preset.emplace_back(slot, v);
  }
  return scope;
}

RelationData rel_to_data(const Rel& r, int n) {
  RelationData out;
  out.arity = r.arity;
  std::vector<int> tuple(r.arity);
  for (long long idx = 0; idx < r.card; ++idx) {
    if (!r.test_idx(idx)) continue;
    long long rest = idx;
    for (int j = r.arity - 1; j >= 0; --j) {
      tuple[j] = static_cast<int>(rest % n);
      rest /= n;
    }
    out.tuples.insert(tuple);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Formula evaluation

bool eval_formula(const Formula& f, const Structure& s, const Valuation& val,
                  const Interpretation& env) {
  Compiler comp(s, &env);
  std::vector<std::pair<int, int>> preset;
  comp.var_scopes.push_back(val_scope(comp, val, preset));
  NodePtr root = comp.formula(f);
  EvalCtx ctx;
  ctx.n = comp.n;
  ctx.slots.assign(comp.next_slot, 0);
  for (auto [slot, v] : preset) ctx.slots[slot] = v;
  return root->eval(ctx);
}

Interpretation lfp_clauses(const std::vector<Clause>& clauses, const Structure& s,
                           const Valuation& val, const Interpretation& env) {
  Compiler comp(s, &env);
  std::vector<std::pair<int, int>> preset;
  comp.var_scopes.push_back(val_scope(comp, val, preset));
  auto [fid, cls] = comp.clause_system(clauses);
  EvalCtx ctx;
  ctx.n = comp.n;
  ctx.slots.assign(comp.next_slot, 0);
  for (auto [slot, v] : preset) ctx.slots[slot] = v;
  std::vector<Rel> rels = make_frame(cls);
  ctx.frames.assign(comp.next_frame, nullptr);
  ctx.frames[fid] = &rels;
  run_chaotic(cls, rels, ctx);
  Interpretation out;
  for (std::size_t i = 0; i < clauses.size(); ++i)
    out[clauses[i].pred] = rel_to_data(rels[i], ctx.n);
  return out;
}

Interpretation lfp_clauses_stages(const std::vector<Clause>& clauses, const Structure& s,
                                  const Valuation& val, const Interpretation& env,
                                  std::vector<Interpretation>* stages) {
  Compiler comp(s, &env);
  std::vector<std::pair<int, int>> preset;
  comp.var_scopes.push_back(val_scope(comp, val, preset));
  auto [fid, cls] = comp.clause_system(clauses);
  EvalCtx ctx;
  ctx.n = comp.n;
  ctx.slots.assign(comp.next_slot, 0);
  for (auto [slot, v] : preset) ctx.slots[slot] = v;
  ctx.frames.assign(comp.next_frame, nullptr);

  std::vector<Rel> cur = make_frame(cls);
  long long total = 0;
  for (const CClause& cl : cls) total += cl.card;
  auto snapshot = [&]() {
    Interpretation out;
    for (std::size_t i = 0; i < clauses.size(); ++i)
      out[clauses[i].pred] = rel_to_data(cur[i], ctx.n);
    return out;
  };
  if (stages != nullptr) stages->push_back(snapshot());
  long long steps = 0;
  while (true) {
    if (++steps > total + 2) throw std::logic_error("staged iteration exceeded the closure bound");
    std::vector<Rel> nxt = make_frame(cls);
    ctx.frames[fid] = &cur;
    for (std::size_t ci = 0; ci < cls.size(); ++ci) {
      for (long long idx = 0; idx < cls[ci].card; ++idx) {
        decode(idx, cls[ci].arity, cls[ci].param_slots, ctx);
        if (cls[ci].body->eval(ctx)) nxt[ci].set_idx(idx);
      }
    }
    bool same = true;
    for (std::size_t ci = 0; ci < cls.size(); ++ci) {
      for (std::size_t w = 0; w < cur[ci].bits.size(); ++w) {
        if (cur[ci].bits[w] & ~nxt[ci].bits[w])
          throw std::logic_error("staged iteration lost tuples");
        if (cur[ci].bits[w] != nxt[ci].bits[w]) same = false;
      }
    }
    if (same) break;
    cur = std::move(nxt);
    if (stages != nullptr) stages->push_back(snapshot());
  }
  return snapshot();
}

// ---------------------------------------------------------------------------
// Program evaluation

bool subseteq(const Interpretation& a, const Interpretation& b) {
  for (const auto& [name, rd] : a) {
    if (rd.tuples.empty()) continue;
    auto it = b.find(name);
    if (it == b.end()) return false;
    if (!std::includes(it->second.tuples.begin(), it->second.tuples.end(), rd.tuples.begin(),
                       rd.tuples.end()))
      return false;
  }
  return true;
}

std::size_t superstrate_space(const Program& p, int n) {
  long long total = 0;
  for (const auto& [name, sig] : p.vocab.predicates) {
    if (!sig.superstrate) continue;
    total += pow_clamped(n, sig.arity);
    if (total > 4 * kDenseLimit) return static_cast<std::size_t>(4 * kDenseLimit);
  }
  return static_cast<std::size_t>(total);
}

namespace {

// The substrate part of a rule body does not depend on the superstrate
// interpretation, so each rule valuation with a true substrate yields a fixed
// implication "superstrate atom tuples present -> head tuple present".
// The engine enumerates them once; every operator application replays them.
struct DeltaEngine {
  std::vector<std::string> preds;  // superstrate predicates
  std::map<std::string, int> pred_ix;
  std::vector<int> arities;
  struct Imp {
    int head;
    std::vector<int> head_tuple;
    std::vector<std::pair<int, std::vector<int>>> sups;
  };
  std::vector<Imp> imps;

  DeltaEngine(const Program& p, const Structure& s) {
    for (const auto& [name, sig] : p.vocab.predicates) {
      if (!sig.superstrate) continue;
      pred_ix.emplace(name, static_cast<int>(preds.size()));
      preds.push_back(name);
      arities.push_back(sig.arity);
    }
    const int n = s.universe;
    Compiler comp(s);
    EvalCtx ctx;
    for (const Rule& rule : p.rules) {
      std::set<std::string> vars;
      for (const Term& t : rule.head.args) {
        auto tv = term_vars(t);
        vars.insert(tv.begin(), tv.end());
      }
      for (const Atom& a : rule.superstrate_atoms)
        for (const Term& t : a.args) {
          auto tv = term_vars(t);
          vars.insert(tv.begin(), tv.end());
        }
      auto fv = free_vars(rule.substrate);
      vars.insert(fv.begin(), fv.end());

      long long count = pow_clamped(n, static_cast<int>(vars.size()));
      if (count > kDenseLimit)
        throw Error({DiagCode::TupleSpaceTooLarge, rule.head.pred,
                     "rule valuation space exceeds the evaluator limit"});

      comp.var_scopes.emplace_back();
      std::vector<int> slots;
      for (const std::string& v : vars) slots.push_back(comp.bind_var(v));
      std::vector<CTerm> head_args;
      for (const Term& t : rule.head.args) head_args.push_back(comp.term(t));
      std::vector<std::pair<int, std::vector<CTerm>>> sup_args;
      for (const Atom& a : rule.superstrate_atoms) {
        auto it = pred_ix.find(a.pred);
        if (it == pred_ix.end())
          throw Error({DiagCode::UndeclaredSymbol, a.pred, "not a superstrate predicate"});
        std::vector<CTerm> args;
        for (const Term& t : a.args) args.push_back(comp.term(t));
        sup_args.emplace_back(it->second, std::move(args));
      }
      auto hit = pred_ix.find(rule.head.pred);
      if (hit == pred_ix.end())
        throw Error({DiagCode::UndeclaredSymbol, rule.head.pred, "not a superstrate predicate"});
      NodePtr substrate = comp.formula(rule.substrate);
      comp.var_scopes.pop_back();

      ctx.n = n;
      ctx.slots.assign(comp.next_slot, 0);
      ctx.frames.assign(comp.next_frame, nullptr);
      for (long long idx = 0; idx < count; ++idx) {
        decode(idx, static_cast<int>(slots.size()), slots, ctx);
        if (!substrate->eval(ctx)) continue;
        Imp im;
        im.head = hit->second;
        im.head_tuple.resize(head_args.size());
        for (std::size_t i = 0; i < head_args.size(); ++i)
          im.head_tuple[i] = head_args[i].eval(ctx);
        for (const auto& [pix, args] : sup_args) {
          std::vector<int> t(args.size());
          for (std::size_t i = 0; i < args.size(); ++i) t[i] = args[i].eval(ctx);
          im.sups.emplace_back(pix, std::move(t));
        }
        imps.push_back(std::move(im));
        if (imps.size() > (1u << 24))
          throw Error({DiagCode::TupleSpaceTooLarge, rule.head.pred,
                       "rule instantiation count exceeds the evaluator limit"});
      }
    }
  }

  Interpretation bottom() const {
    Interpretation out;
    for (std::size_t i = 0; i < preds.size(); ++i)
      out[preds[i]] = RelationData{arities[i], {}};
    return out;
  }

  Interpretation step(const Interpretation& a) const {
    std::vector<const std::set<std::vector<int>>*> rel(preds.size(), &kNoTuples);
    for (std::size_t i = 0; i < preds.size(); ++i) {
      auto it = a.find(preds[i]);
      if (it != a.end()) rel[i] = &it->second.tuples;
    }
    Interpretation out = bottom();
    for (const Imp& im : imps) {
      bool fire = true;
      for (const auto& [pix, tup] : im.sups)
        if (rel[pix]->count(tup) == 0) {
          fire = false;
          break;
        }
      if (fire) out[preds[im.head]].tuples.insert(im.head_tuple);
    }
    return out;
  }
};

Interpretation union_of(Interpretation a, const Interpretation& b) {
  for (const auto& [name, rd] : b) {
    RelationData& dst = a[name];
    dst.arity = rd.arity;
    dst.tuples.insert(rd.tuples.begin(), rd.tuples.end());
  }
  return a;
}

}  // namespace

Interpretation delta_step(const Program& p, const Structure& s, const Interpretation& a) {
  return DeltaEngine(p, s).step(a);
}

Interpretation gamma_step(const Program& p, const Structure& s, const Interpretation& a) {
  return union_of(delta_step(p, s, a), a);
}

ProgramResult eval_program(const Program& p, const Structure& s) {
  DeltaEngine eng(p, s);
  ProgramResult res;
  res.trace.bound = 1 + superstrate_space(p, s.universe);
  Interpretation a = eng.bottom();
  res.trace.stages.push_back(a);
  while (true) {
    Interpretation next = union_of(eng.step(a), a);
    if (!subseteq(a, next)) throw std::logic_error("inflationary step lost tuples");
    if (next == a) break;
    a = std::move(next);
    res.trace.stages.push_back(a);
    if (res.trace.stages.size() > res.trace.bound)
      throw std::logic_error("iteration exceeded the closure bound");
  }
  res.fixpoint = std::move(a);
  return res;
}

Interpretation eval_plain_delta(const Program& p, const Structure& s) {
  DeltaEngine eng(p, s);
  std::size_t bound = 1 + superstrate_space(p, s.universe);
  Interpretation a = eng.bottom();
  std::size_t steps = 0;
  while (true) {
    if (++steps > bound) throw std::logic_error("plain iteration exceeded the closure bound");
    Interpretation next = eng.step(a);
    if (!subseteq(a, next)) throw std::logic_error("plain iteration from bottom lost tuples");
    if (next == a) break;
    a = std::move(next);
  }
  return a;
}

Interpretation least_closed_point_oracle(const Program& p, const Structure& s) {
  const int n = s.universe;
  long long total = 0;
  std::map<std::string, std::pair<long long, int>> layout;  // name -> (bit offset, arity)
  for (const auto& [name, sig] : p.vocab.predicates) {
    if (!sig.superstrate) continue;
    layout[name] = {total, sig.arity};
    total += pow_clamped(n, sig.arity);
    if (total > 16)
      throw Error({DiagCode::TupleSpaceTooLarge, name,
                   "superstrate tuple space exceeds 16; oracle unavailable"});
  }
  const int k = static_cast<int>(total);

  DeltaEngine eng(p, s);
  auto bit_of = [&](int pred, const std::vector<int>& tuple) {
    const auto& [off, ar] = layout.at(eng.preds[pred]);
    long long idx = 0;
    for (int e : tuple) idx = idx * n + e;
    return static_cast<int>(off + idx);
  };
  std::set<std::pair<std::uint32_t, int>> implications;
  for (const auto& im : eng.imps) {
    std::uint32_t mask = 0;
    for (const auto& [pix, tup] : im.sups) mask |= std::uint32_t{1} << bit_of(pix, tup);
    implications.emplace(mask, bit_of(im.head, im.head_tuple));
  }

  auto closed = [&](std::uint32_t a) {
    for (const auto& [mask, head] : implications)
      if ((a & mask) == mask && !((a >> head) & 1)) return false;
    return true;
  };

  std::uint32_t all = (k >= 32) ? 0xffffffffu : ((std::uint32_t{1} << k) - 1);
  std::uint32_t meet = all;
  for (std::uint32_t a = 0;; ++a) {
    if (closed(a)) meet &= a;
    if (a == all) break;
  }
  if (!closed(meet)) throw std::logic_error("intersection of closed points is not closed");

  Interpretation out = eng.bottom();
  for (const auto& [name, la] : layout) {
    const auto& [off, ar] = la;
    long long card = pow_clamped(n, ar);
    for (long long idx = 0; idx < card; ++idx) {
      if (!((meet >> (off + idx)) & 1)) continue;
      std::vector<int> tuple(ar);
      long long rest = idx;
      for (int j = ar - 1; j >= 0; --j) {
        tuple[j] = static_cast<int>(rest % n);
        rest /= n;
      }
      out[name].tuples.insert(tuple);
    }
  }
  return out;
}

}  // namespace efpl
