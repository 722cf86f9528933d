#include "topo/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "topo/infer_strong.hpp"
#include "topo/oracle.hpp"

namespace topo {

TypeScheme typecheck_strong(const ExprPtr& e) {
  return canonical_scheme(infer_strong_scheme(e));
}

namespace {

int count_var(const TypePtr& t, const std::string& v) {
  switch (t->kind) {
    case TypeKind::Var:
      return t->var == v ? 1 : 0;
    case TypeKind::Arrow:
      return count_var(t->from, v) + count_var(t->to, v);
    case TypeKind::Coll:
      return count_var(t->elem, v);
    case TypeKind::Union:
    case TypeKind::Inter: {
      int n = 0;
      for (const auto& p : t->parts) n += count_var(p, v);
      return n;
    }
    case TypeKind::Cond:
      return count_var(t->value, v) + count_var(t->guard, v);
    default:
      return 0;
  }
}

// A variable with a single upper bound, no lower bounds and a single
// occurrence is displayed as that bound. This reads back the shape that a
// function-typed parameter variable stands for.
void eliminate_single_upper_vars(TypePtr& type, ConstraintSet& residual,
                                 const SolvedForm& f) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < residual.size(); ++i) {
      const Constraint& c = residual[i];
      if (c.lhs->kind != TypeKind::Var) continue;
      const std::string& v = c.lhs->var;
      if (count_var(type, v) != 1) continue;
      if (contains_type_var(c.rhs, v)) continue;
      auto it = f.vars.find(v);
      if (it != f.vars.end() &&
          (!it->second.lowers.empty() || !it->second.guarded.empty()))
        continue;
      size_t uppers = 0;
      for (const auto& d : residual)
        if (d.lhs->kind == TypeKind::Var && d.lhs->var == v) ++uppers;
      if (uppers != 1) continue;
      Substitution s = Substitution::bind_type(v, c.rhs);
      type = normalize(apply_subst(s, type));
      ConstraintSet rest;
      for (size_t j = 0; j < residual.size(); ++j) {
        if (j == i) continue;
        rest.push_back(Constraint{apply_subst(s, residual[j].lhs),
                                  apply_subst(s, residual[j].rhs),
                                  residual[j].origin});
      }
      residual = std::move(rest);
      changed = true;
      break;
    }
  }
}

}  // namespace

SoftResult typecheck_soft(const ExprPtr& e, bool refine_catch_all) {
  SoftResult out;
  FreshSupply fresh;
  GenerateOptions opts;
  opts.refine_catch_all = refine_catch_all;
  GenResult gen = generate(TypingContext{}, e, opts, fresh);
  out.raw_type = gen.type;
  out.raw_constraints = gen.constraints;

  SolveResult solved = solve(gen.constraints);
  if (auto* verdict = std::get_if<VerdictUnsolvable>(&solved)) {
    std::ostringstream os;
    os << "type constraints are unsolvable:";
    for (const auto& step : verdict->trace) os << "\n  " << step;
    throw TypeError(os.str(), e->loc);
  }
  out.solved = std::move(std::get<SolvedForm>(solved));

  VarSet vars;
  free_vars(gen.type, vars);
  Substitution least = least_solution(out.solved, vars.type_vars);
  TypePtr type = normalize(apply_subst(least, gen.type));

  // Residual constraints that still talk about the presented type.
  ConstraintSet residual;
  for (const auto& c : out.solved.residual_constraints) {
    VarSet cs;
    free_vars(c.lhs, cs);
    free_vars(c.rhs, cs);
    bool relevant = false;
    VarSet tv;
    free_vars(type, tv);
    for (const auto& v : cs.type_vars) relevant = relevant || tv.has_type(v);
    if (relevant || c.origin == "recursive binding") residual.push_back(c);
  }
  eliminate_single_upper_vars(type, residual, out.solved);

  out.solved_type = type;
  TypeScheme scheme = generalize(TypingContext{}, type, residual);
  out.scheme = canonical_scheme(scheme);
  return out;
}

Dialect dialect_of_source(const std::string& source) {
  std::istringstream is(source);
  std::string line;
  while (std::getline(is, line)) {
    size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line.compare(pos, 2, "//") != 0) break;
    if (line.find("dialect: strong") != std::string::npos)
      return Dialect::Strong;
    if (line.find("dialect: soft") != std::string::npos) return Dialect::Soft;
  }
  return Dialect::Soft;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool value_in_scheme(const ValuePtr& v, const TypeScheme& scheme) {
  if (!is_first_order(v)) return true;
  const FiniteUniverse& u = FiniteUniverse::standard();
  const auto& menu = ground_type_menu();
  const TopoSym topos[] = {TopoSym::Set, TopoSym::Bag, TopoSym::Seq,
                           TopoSym::Grid};

  size_t n_type = scheme.type_vars.size();
  size_t n_topo = scheme.topo_vars.size();
  // Cap the number of instantiations; schemes in the corpus are small.
  if (n_type > 3 || n_topo > 2) return true;

  size_t total = 1;
  for (size_t i = 0; i < n_type; ++i) total *= menu.size();
  for (size_t i = 0; i < n_topo; ++i) total *= 4;
  size_t checked = 0;
  for (size_t mask = 0; mask < total; ++mask) {
    size_t m = mask;
    Substitution s;
    for (size_t i = 0; i < n_type; ++i) {
      s.type_map[scheme.type_vars[i]] = menu[m % menu.size()];
      m /= menu.size();
    }
    for (size_t i = 0; i < n_topo; ++i) {
      s.topo_map[scheme.topo_vars[i]] = Topology::symbol(topos[m % 4]);
      m /= 4;
    }
    if (!scheme.constraints.empty()) {
      ConstraintSet grounded;
      bool all_ground = true;
      for (const auto& c : scheme.constraints) {
        Constraint g{apply_subst(s, c.lhs), apply_subst(s, c.rhs), c.origin};
        all_ground = all_ground && is_ground(g.lhs) && is_ground(g.rhs);
        grounded.push_back(std::move(g));
      }
      if (!all_ground) continue;
      if (!check_solution(grounded, Substitution{}, u)) continue;
    }
    ++checked;
    if (!member(v, scheme.body, s, u)) return false;
    if (checked >= 512) break;
  }
  return true;
}

CorpusFileResult check_corpus_file(const std::string& path, long long fuel) {
  CorpusFileResult r;
  r.path = path;
  std::string source;
  try {
    source = read_file(path);
  } catch (const std::exception& ex) {
    r.detail = ex.what();
    return r;
  }
  r.dialect = dialect_of_source(source);
  ExprPtr ast;
  TypeScheme scheme;
  try {
    ast = parse(source, r.dialect);
    if (r.dialect == Dialect::Strong) {
      scheme = typecheck_strong(ast);
    } else {
      scheme = typecheck_soft(ast).scheme;
    }
    r.typechecked = true;
    r.scheme_text = pretty(scheme);
  } catch (const std::exception& ex) {
    r.detail = ex.what();
    return r;
  }
  EvalCtx ctx;
  ctx.fuel = fuel;
  Outcome out = eval(ast, nullptr, ctx);
  r.outcome_text = out.ok() ? show(out.value) : name_of(out.kind);
  r.never_wrong = out.kind != OutcomeKind::Wrong;
  if (!out.ok()) {
    // shape_err and running out of fuel do not contradict well-typedness.
    r.ran = false;
    r.member_ok = r.never_wrong;
    r.pass = r.never_wrong;
    if (!r.never_wrong) r.detail = out.detail;
    return r;
  }
  r.ran = true;
  try {
    r.member_ok = value_in_scheme(out.value, scheme);
    if (!r.member_ok)
      r.detail = "result " + show(out.value) + " is not in " + pretty(scheme);
  } catch (const UnsupportedValue&) {
    r.member_ok = true;
  }
  r.pass = r.never_wrong && r.member_ok;
  return r;
}

long long default_fuel() {
  if (const char* env = std::getenv("TOPOCHECK_FUEL")) {
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 100000;
}

}  // namespace topo
