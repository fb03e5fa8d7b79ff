#include "efpl/structure.hpp"

#include <cmath>
#include <cstdint>

namespace efpl {

namespace {

std::uint64_t pow_u64(int base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::uint64_t>(base);
  return r;
}

std::string tuple_str(const std::vector<int>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(t[i]);
  }
  return s + ")";
}

}  // namespace

Structure Structure::succ(int n) {
  Structure s;
  s.universe = n;
  FunctionTable zero{0, {0}};
  FunctionTable sf{1, {}};
  sf.entries.resize(n);
  for (int i = 0; i < n; ++i) sf.entries[i] = i + 1 < n ? i + 1 : n - 1;
  s.functions["0"] = zero;
  s.functions["s"] = sf;
  return s;
}

Structure Structure::clamp_arith(int n) {
  Structure s;
  s.universe = n;
  s.functions["0"] = FunctionTable{0, {0}};
  s.functions["1"] = FunctionTable{0, {n > 1 ? 1 : 0}};
  FunctionTable plus{2, {}}, times{2, {}};
  plus.entries.resize(static_cast<std::size_t>(n) * n);
  times.entries.resize(static_cast<std::size_t>(n) * n);
  auto clamp = [n](long v) { return static_cast<int>(v < n ? v : n - 1); };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      plus.entries[static_cast<std::size_t>(a) * n + b] = clamp(static_cast<long>(a) + b);
      times.entries[static_cast<std::size_t>(a) * n + b] = clamp(static_cast<long>(a) * b);
    }
  s.functions["plus"] = std::move(plus);
  s.functions["times"] = std::move(times);
  RelationData less{2, {}};
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) less.tuples.insert({a, b});
  s.relations["less"] = std::move(less);
  return s;
}

Vocabulary Structure::implied_vocabulary() const {
  Vocabulary v = Vocabulary::base();
  for (const auto& [n, t] : functions) v.fn(n, t.arity);
  for (const auto& [n, r] : relations) v.pred(n, r.arity);
  return v;
}

ValidationReport validate_structure(const Structure& s, const Vocabulary& v) {
  ValidationReport r;
  if (s.universe < 1) {
    r.add(DiagCode::EmptyUniverse, "universe", std::to_string(s.universe));
    return r;
  }
  for (const auto& [name, arity] : v.functions) {
    auto it = s.functions.find(name);
    if (it == s.functions.end()) {
      r.add(DiagCode::MissingFunctionTable, name, "no table");
      continue;
    }
    const FunctionTable& t = it->second;
    if (t.arity != arity) {
      r.add(DiagCode::MissingFunctionTable, name,
            "table arity " + std::to_string(t.arity) + ", declared " + std::to_string(arity));
      continue;
    }
    std::uint64_t want = pow_u64(s.universe, arity);
    if (t.entries.size() != want) {
      r.add(DiagCode::MissingFunctionTable, name,
            "table has " + std::to_string(t.entries.size()) + " entries, needs " +
                std::to_string(want));
      continue;
    }
    for (std::size_t i = 0; i < t.entries.size(); ++i)
      if (t.entries[i] < 0 || t.entries[i] >= s.universe) {
        r.add(DiagCode::TableEntryOutOfRange, name,
              "entry " + std::to_string(i) + " = " + std::to_string(t.entries[i]));
        break;
      }
  }
  for (const auto& [name, sig] : v.predicates) {
    if (name == kEq || sig.superstrate) continue;
    auto it = s.relations.find(name);
    if (it == s.relations.end()) continue;  // absent relation = empty
    const RelationData& rel = it->second;
    if (rel.arity != sig.arity) {
      r.add(DiagCode::TupleArityMismatch, name,
            "relation arity " + std::to_string(rel.arity) + ", declared " +
                std::to_string(sig.arity));
      continue;
    }
    for (const auto& t : rel.tuples) {
      if (static_cast<int>(t.size()) != rel.arity) {
        r.add(DiagCode::TupleArityMismatch, name, tuple_str(t));
        break;
      }
      bool bad = false;
      for (int e : t)
        if (e < 0 || e >= s.universe) {
          r.add(DiagCode::TableEntryOutOfRange, name, tuple_str(t));
          bad = true;
          break;
        }
      if (bad) break;
    }
  }
  return r;
}

int eval_term(const Term& t, const Structure& s, const Valuation& val) {
  if (t.is_var) {
    auto it = val.find(t.name);
    if (it == val.end())
      throw Error({DiagCode::UnboundVariable, t.name, "variable not bound by valuation"});
    return it->second;
  }
  auto it = s.functions.find(t.name);
  if (it == s.functions.end())
    throw Error({DiagCode::UndeclaredSymbol, t.name, "no function table"});
  const FunctionTable& tbl = it->second;
  if (static_cast<int>(t.args.size()) != tbl.arity)
    throw Error({DiagCode::ArityMismatch, t.name, "function applied at wrong arity"});
  std::uint64_t idx = 0;
  for (const auto& a : t.args)
    idx = idx * static_cast<std::uint64_t>(s.universe) +
          static_cast<std::uint64_t>(eval_term(a, s, val));
  return tbl.entries[idx];
}

namespace {

ValidationReport check_hom_impl(const Homomorphism& h, const Vocabulary& v, bool strong) {
  ValidationReport r;
  const Structure& a = h.source;
  const Structure& b = h.target;
  if (a.universe < 1 || b.universe < 1) {
    r.add(DiagCode::EmptyUniverse, "", "");
    return r;
  }
  if (static_cast<int>(h.map.size()) != a.universe) {
    r.add(DiagCode::IllFormed, "map", "element map must have one entry per source element");
    return r;
  }
  for (int e : h.map)
    if (e < 0 || e >= b.universe) {
      r.add(DiagCode::TableEntryOutOfRange, "map", std::to_string(e));
      return r;
    }

  // equality is a negatable predicate: its complement condition is injectivity
  if (strong) {
    for (int x = 0; x < a.universe; ++x)
      for (int y = x + 1; y < a.universe; ++y)
        if (h.map[x] == h.map[y]) {
          r.add(DiagCode::NegatableComplementNotPreserved, kEq,
                std::to_string(x) + " and " + std::to_string(y) + " collapse to " +
                    std::to_string(h.map[x]));
          break;
        }
  }

  for (const auto& [name, arity] : v.functions) {
    auto sa = a.functions.find(name);
    auto sb = b.functions.find(name);
    if (sa == a.functions.end() || sb == b.functions.end()) {
      r.add(DiagCode::MissingFunctionTable, name, "");
      continue;
    }
    std::vector<int> tup(arity, 0);
    bool done = arity == 0 ? false : false;
    // odometer over source tuples
    std::uint64_t total = pow_u64(a.universe, arity);
    for (std::uint64_t i = 0; i < total; ++i) {
      std::uint64_t x = i;
      std::uint64_t src_idx = 0, tgt_idx = 0;
      for (int k = arity - 1; k >= 0; --k) {
        tup[k] = static_cast<int>(x % a.universe);
        x /= a.universe;
      }
      for (int k = 0; k < arity; ++k) {
        src_idx = src_idx * a.universe + tup[k];
        tgt_idx = tgt_idx * b.universe + h.map[tup[k]];
      }
      int lhs = h.map[sa->second.entries[src_idx]];
      int rhs = sb->second.entries[tgt_idx];
      if (lhs != rhs) {
        r.add(DiagCode::FunctionNotPreserved, name, "at " + tuple_str(tup));
        done = true;
        break;
      }
    }
    (void)done;
  }

  for (const auto& [name, sig] : v.predicates) {
    if (name == kEq || sig.superstrate) continue;
    static const std::set<std::vector<int>> kEmpty;
    auto ra = a.relations.find(name);
    auto rb = b.relations.find(name);
    const auto& ta = ra == a.relations.end() ? kEmpty : ra->second.tuples;
    const auto& tb = rb == b.relations.end() ? kEmpty : rb->second.tuples;
    std::uint64_t total = pow_u64(a.universe, sig.arity);
    std::vector<int> tup(sig.arity, 0), img(sig.arity, 0);
    for (std::uint64_t i = 0; i < total; ++i) {
      std::uint64_t x = i;
      for (int k = sig.arity - 1; k >= 0; --k) {
        tup[k] = static_cast<int>(x % a.universe);
        x /= a.universe;
      }
      for (int k = 0; k < sig.arity; ++k) img[k] = h.map[tup[k]];
      bool in_a = ta.count(tup) != 0;
      bool in_b = tb.count(img) != 0;
      if (in_a && !in_b) {
        r.add(DiagCode::RelationNotPreserved, name, tuple_str(tup));
        break;
      }
      if (strong && sig.cls == PredClass::negatable && !in_a && in_b) {
        r.add(DiagCode::NegatableComplementNotPreserved, name, tuple_str(tup));
        break;
      }
    }
  }
  return r;
}

}  // namespace

ValidationReport check_homomorphism(const Homomorphism& h, const Vocabulary& v) {
  return check_hom_impl(h, v, true);
}

ValidationReport check_homomorphism_weak(const Homomorphism& h, const Vocabulary& v) {
  return check_hom_impl(h, v, false);
}

}  // namespace efpl
