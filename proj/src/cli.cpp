#include "efpl/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "efpl/eval.hpp"
#include "efpl/harness.hpp"
#include "efpl/syntax.hpp"
#include "efpl/translate.hpp"

namespace efpl {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error({DiagCode::IoError, path, "cannot open file"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size())
    throw Error({DiagCode::UsageError, what, "expected an unsigned integer"});
  return v;
}

Valuation parse_val_flag(const std::string& text) {
  Valuation out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item =
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= item.size())
      throw Error({DiagCode::UsageError, "--val", "expected NAME=value, got '" + item + "'"});
    int v = 0;
    std::string num = item.substr(eq + 1);
    auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
    if (ec != std::errc() || p != num.data() + num.size())
      throw Error({DiagCode::UsageError, "--val", "bad value in '" + item + "'"});
    out[item.substr(0, eq)] = v;
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string fmt_tuple_set(const std::set<std::vector<int>>& tuples) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& t : tuples) {
    if (!first) os << ',';
    first = false;
    os << '(';
    for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
    os << ')';
  }
  os << '}';
  return os.str();
}

void print_interp(std::ostream& out, const Interpretation& a, const char* indent) {
  for (const auto& [name, rd] : a) out << indent << name << " = " << fmt_tuple_set(rd.tuples) << "\n";
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

int cmd_eval_formula(const std::string& formula_path, const std::string& struct_path,
                     const std::string& val_text, bool free_mode, std::ostream& out,
                     std::ostream& err) {
  ParsedFormula pf = parse_formula(slurp(formula_path));
  ParsedStructure ps = parse_structure(slurp(struct_path));
  ValidationReport rep = validate_structure(ps.structure, pf.vocab);
  if (!rep.ok()) {
    err << rep.to_string();
    return 2;
  }
  Valuation val = parse_val_flag(val_text);
  if (!free_mode) {
    bool r = eval_formula(pf.formula, ps.structure, val);
    out << (r ? "true" : "false") << "\n";
    return r ? 0 : 1;
  }
  std::set<std::string> fv = free_vars(pf.formula);
  for (const auto& [name, v] : val) fv.erase(name);
  std::vector<std::string> names(fv.begin(), fv.end());
  long long count = 1;
  for (std::size_t i = 0; i < names.size(); ++i) {
    count *= ps.structure.universe;
    if (count > 1'000'000)
      throw Error({DiagCode::TupleSpaceTooLarge, "--free",
                   "free-variable tuple space exceeds 1000000"});
  }
  out << "free:";
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? ", " : " ") << names[i];
  out << "\n";
  std::set<std::vector<int>> sat;
  for_each_tuple(ps.structure.universe, static_cast<int>(names.size()),
                 [&](const std::vector<int>& tup) {
                   Valuation v = val;
                   for (std::size_t i = 0; i < names.size(); ++i) v[names[i]] = tup[i];
                   if (eval_formula(pf.formula, ps.structure, v)) sat.insert(tup);
                 });
  out << fmt_tuple_set(sat) << "\n";
  return 0;
}

int cmd_eval_program(const std::string& prog_path, const std::string& struct_path, bool trace,
                     std::ostream& out, std::ostream& err) {
  ParsedProgram pp = parse_program(slurp(prog_path));
  ParsedStructure ps = parse_structure(slurp(struct_path));
  ValidationReport rep = validate_structure(ps.structure, pp.program.vocab);
  if (!rep.ok()) {
    err << rep.to_string();
    return 2;
  }
  ProgramResult res = eval_program(pp.program, ps.structure);
  if (trace) {
    for (std::size_t i = 0; i < res.trace.stages.size(); ++i) {
      out << "stage " << i << ":\n";
      print_interp(out, res.trace.stages[i], "  ");
    }
  }
  print_interp(out, res.fixpoint, "");
  return 0;
}

int cmd_to_formula(const std::string& prog_path, const std::string& target, std::ostream& out) {
  ParsedProgram pp = parse_program(slurp(prog_path));
  Formula f = program_to_formula(pp.program, target);
  out << print_formula(f) << "\n";
  return 0;
}

int cmd_to_program(const std::string& formula_path, std::ostream& out) {
  ParsedFormula pf = parse_formula(slurp(formula_path));
  TranslationResult tr = formula_to_program(pf.formula, pf.vocab);
  out << "distinguished: " << tr.distinguished << "(";
  for (std::size_t i = 0; i < tr.free_vars.size(); ++i) out << (i ? "," : "") << tr.free_vars[i];
  out << ")\n";
  out << print_program(tr.program);
  return 0;
}

int cmd_normalize(const std::string& formula_path, std::ostream& out) {
  ParsedFormula pf = parse_formula(slurp(formula_path));
  NormalFormFormula nf = normalize(pf.formula);
  out << print_formula(as_formula(nf)) << "\n";
  return 0;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int cmd_check(const std::string& path, std::ostream& out) {
  std::string text = slurp(path);
  if (ends_with(path, ".efpl")) {
    parse_formula(text);
  } else if (ends_with(path, ".lp")) {
    parse_program(text);
  } else if (ends_with(path, ".struct")) {
    parse_structure(text);
  } else {
    throw Error({DiagCode::UsageError, path, "expected a .efpl, .lp, or .struct file"});
  }
  out << "ok\n";
  return 0;
}

int report_discrepancy(std::ostream& out, const std::string& name, const Discrepancy& d) {
  out << name << ": discrepancy\n";
  out << "kind: " << d.kind << "\n";
  out << "seed: " << d.seed << "\n";
  if (!d.artifact.empty()) {
    out << "artifact:\n" << d.artifact;
    if (d.artifact.back() != '\n') out << "\n";
  }
  if (!d.structure.empty()) {
    out << "structure:\n" << d.structure;
    if (d.structure.back() != '\n') out << "\n";
  }
  if (!d.detail.empty()) out << "detail: " << d.detail << "\n";
  return 3;
}

struct InjectTarget {
  Mutation mutation;
  bool converse;
};

std::optional<InjectTarget> inject_of(const std::string& name) {
  if (name == "drop_disjunct") return InjectTarget{Mutation::drop_disjunct, false};
  if (name == "skip_head_equality") return InjectTarget{Mutation::skip_head_equality, false};
  if (name == "skip_param_widening") return InjectTarget{Mutation::skip_param_widening, true};
  if (name == "swap_and_or") return InjectTarget{Mutation::swap_and_or, true};
  return std::nullopt;
}

int cmd_fuzz(std::uint64_t seed, int trials, const std::string& inject, std::ostream& out) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.trials = trials;
  using Entry = std::pair<std::string, std::function<CheckResult()>>;
  std::vector<Entry> checks;
  if (!inject.empty()) {
    std::optional<InjectTarget> t = inject_of(inject);
    if (!t)
      throw Error({DiagCode::UsageError, "--inject",
                   "expected drop_disjunct, skip_head_equality, skip_param_widening, or "
                   "swap_and_or"});
    if (t->converse)
      checks.emplace_back("theorem2-converse",
                          [cfg, m = t->mutation] { return fuzz_theorem2_converse(cfg, m); });
    else
      checks.emplace_back("theorem2-forward",
                          [cfg, m = t->mutation] { return fuzz_theorem2_forward(cfg, m); });
  } else {
    checks.emplace_back("theorem2-forward", [cfg] { return fuzz_theorem2_forward(cfg); });
    checks.emplace_back("theorem2-converse", [cfg] { return fuzz_theorem2_converse(cfg); });
    checks.emplace_back("operator-lemma", [cfg] { return fuzz_operator_lemma(cfg); });
    checks.emplace_back("star-infinity", [cfg] { return fuzz_star_infinity(cfg); });
    checks.emplace_back("sectioning", [cfg] { return fuzz_sectioning(cfg); });
    checks.emplace_back("hom-preservation", [cfg] { return check_homomorphism_preservation(cfg); });
  }
  for (const auto& [name, run] : checks) {
    CheckResult r = run();
    if (r) return report_discrepancy(out, name, *r);
    out << name << ": ok (" << trials << " trials)\n";
  }
  return 0;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("FIXLOG_SEED");
  if (env == nullptr || *env == '\0') return 1;
  return parse_u64(env, "FIXLOG_SEED");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"existential fixed-point logic and liberal Datalog toolkit", "efpl"};
  app.require_subcommand(1);

  std::string formula_path, struct_path, prog_path, check_path, val_text, target, inject;
  bool free_mode = false;
  bool trace = false;
  std::uint64_t seed = 1;
  int trials = 50;

  CLI::App* ef = app.add_subcommand("eval-formula", "evaluate a formula over a structure");
  ef->add_option("formula", formula_path, "formula file")->required();
  ef->add_option("structure", struct_path, "structure file")->required();
  ef->add_option("--val", val_text, "valuation of free variables, e.g. X=3,Y=0");
  ef->add_flag("--free", free_mode, "print the satisfying tuples of the free variables");

  CLI::App* ep = app.add_subcommand("eval-program", "evaluate a program over a structure");
  ep->add_option("program", prog_path, "program file")->required();
  ep->add_option("structure", struct_path, "structure file")->required();
  ep->add_flag("--trace", trace, "print each iteration stage");

  CLI::App* tf = app.add_subcommand("to-formula", "translate a program to a formula");
  tf->add_option("program", prog_path, "program file")->required();
  tf->add_option("--target", target, "superstrate predicate the formula defines")->required();

  CLI::App* tp = app.add_subcommand("to-program", "translate a formula to a program");
  tp->add_option("formula", formula_path, "formula file")->required();

  CLI::App* nm = app.add_subcommand("normalize", "print the normal form of a formula");
  nm->add_option("formula", formula_path, "formula file")->required();

  CLI::App* ck = app.add_subcommand("check", "validate a .efpl, .lp, or .struct file");
  ck->add_option("file", check_path, "input file")->required();

  CLI::App* fz = app.add_subcommand("fuzz", "run the randomized equivalence checks");
  fz->add_option("--seed", seed, "base seed (default 1, or FIXLOG_SEED if set)");
  fz->add_option("--trials", trials, "trials per check");
  fz->add_option("--inject", inject, "seed a translator bug and expect a discrepancy");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 4;
  }

  try {
    if (ef->parsed()) return cmd_eval_formula(formula_path, struct_path, val_text, free_mode, out, err);
    if (ep->parsed()) return cmd_eval_program(prog_path, struct_path, trace, out, err);
    if (tf->parsed()) return cmd_to_formula(prog_path, target, out);
    if (tp->parsed()) return cmd_to_program(formula_path, out);
    if (nm->parsed()) return cmd_normalize(formula_path, out);
    if (ck->parsed()) return cmd_check(check_path, out);
    if (fz->parsed()) {
      if (fz->count("--seed") == 0) seed = default_seed();
      return cmd_fuzz(seed, trials, inject, out);
    }
  } catch (const ValidationError& e) {
    std::string text = e.report().to_string();
    err << text;
    if (!text.empty() && text.back() != '\n') err << "\n";
    return 2;
  } catch (const Error& e) {
    err << to_string(e.diagnostic()) << "\n";
    DiagCode c = e.diagnostic().code;
    return (c == DiagCode::UsageError || c == DiagCode::IoError) ? 4 : 2;
  }
  err << "no subcommand\n";
  return 4;
}

}  // namespace efpl
