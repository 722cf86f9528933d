#include "topo/constraints.hpp"

#include <algorithm>
#include <sstream>

#include "topo/solver.hpp"

namespace topo {

TypePtr comp(const std::vector<ElemPattern>& elements, const TypePtr& tau) {
  if (elements.empty()) return t_one();
  const ElemPattern& e = elements.front();
  bool last = elements.size() == 1;
  TypePtr here;
  switch (e.kind) {
    case ElemKind::Plain:
      here = tau;  // tau & 1
      break;
    case ElemKind::Typed:
      here = t_inter(tau, t_base(e.base));
      break;
    case ElemKind::Star:
      here = t_one();  // a star matches arbitrarily many elements, possibly none
      break;
    case ElemKind::TypedStar:
      here = t_inter(tau, t_base(e.base));
      break;
  }
  if (last) return here;
  std::vector<ElemPattern> rest(elements.begin() + 1, elements.end());
  TypePtr tail = comp(rest, tau);
  // Plain elements (and bare stars) put no condition of their own.
  if (e.kind == ElemKind::Plain || e.kind == ElemKind::Star) return tail;
  return t_cond(here, tail);
}

std::vector<std::pair<std::string, TypePtr>> gamma(
    const std::vector<ElemPattern>& elements, const TypePtr& tau) {
  std::vector<std::pair<std::string, TypePtr>> out;
  for (const auto& e : elements) {
    switch (e.kind) {
      case ElemKind::Plain:
        out.emplace_back(e.var, tau);
        break;
      case ElemKind::Typed:
        out.emplace_back(e.var, t_inter(tau, t_base(e.base)));
        break;
      case ElemKind::Star:
        out.emplace_back(e.var, t_coll(Topology::symbol(TopoSym::Seq), tau));
        break;
      case ElemKind::TypedStar:
        out.emplace_back(e.var,
                         t_coll(Topology::symbol(TopoSym::Seq),
                                t_inter(tau, t_base(e.base))));
        break;
    }
  }
  return out;
}

namespace {

std::string origin_of(const ExprPtr& e, const char* rule) {
  std::ostringstream os;
  os << e->loc.line << ":" << e->loc.col << " " << rule;
  return os.str();
}

struct Generator {
  const GenerateOptions& opts;
  FreshSupply& fresh;
  ConstraintSet acc;

  void emit(TypePtr lhs, TypePtr rhs, const ExprPtr& site, const char* rule) {
    acc.push_back(Constraint{std::move(lhs), std::move(rhs),
                             origin_of(site, rule)});
  }

  TypePtr go(const TypingContext& ctx, const ExprPtr& e) {
    switch (e->kind) {
      case ExprKind::Var: {
        const TypeScheme* scheme = ctx.lookup(e->name);
        if (!scheme)
          throw UnboundVariable("unbound variable '" + e->name + "'", e->loc);
        auto [t, cs] = instantiate(*scheme, fresh);
        for (auto& c : cs) {
          c.origin = origin_of(e, "inst");
          acc.push_back(std::move(c));
        }
        return t;
      }
      case ExprKind::Const: {
        TypeScheme scheme = [&] {
          try {
            return tc(e->name, Dialect::Soft);
          } catch (const UnknownConstant&) {
            throw TypeError("unknown constant '" + e->name + "'", e->loc);
          }
        }();
        auto [t, cs] = instantiate(scheme, fresh);
        for (auto& c : cs) {
          c.origin = origin_of(e, "inst");
          acc.push_back(std::move(c));
        }
        return t;
      }
      case ExprKind::Lambda: {
        TypePtr a = t_var(fresh.type_var());
        TypePtr body = go(ctx.extended(e->name, monotype(a)), e->a);
        return t_arrow(a, body);
      }
      case ExprKind::App: {
        TypePtr t1 = go(ctx, e->a);
        TypePtr t2 = go(ctx, e->b);
        TypePtr t3 = t_var(fresh.type_var());
        TypePtr t4 = t_var(fresh.type_var());
        emit(t2, t3, e, "app");
        emit(t1, t_arrow(t3, t4), e, "app");
        return t4;
      }
      case ExprKind::Let: {
        size_t mark = acc.size();
        TypePtr t1 = go(ctx, e->a);
        ConstraintSet local(acc.begin() + mark, acc.end());
        acc.resize(mark);

        // gen immediately after let; the scheme keeps the bound expression's
        // constraints and they must be solvable.
        if (std::holds_alternative<VerdictUnsolvable>(solve(local)))
          throw SchemeUnsolvable(
              "let-bound expression has no typing: constraints are unsolvable",
              e->loc);
        VarSet ctx_vars;
        ctx.free_vars(ctx_vars);
        for (const auto& c : acc) {  // keep variables of the ambient set free
          free_vars(c.lhs, ctx_vars);
          free_vars(c.rhs, ctx_vars);
        }
        VarSet vars;
        free_vars(t1, vars);
        for (const auto& c : local) {
          free_vars(c.lhs, vars);
          free_vars(c.rhs, vars);
        }
        TypeScheme scheme;
        scheme.body = t1;
        scheme.constraints = local;
        for (const auto& v : vars.type_vars)
          if (!ctx_vars.has_type(v)) scheme.type_vars.push_back(v);
        for (const auto& v : vars.topo_vars)
          if (!ctx_vars.has_topo(v)) scheme.topo_vars.push_back(v);
        return go(ctx.extended(e->name, scheme), e->b);
      }
      case ExprKind::Trans:
        return trans(ctx, e);
    }
    throw TypeError("malformed expression", e->loc);
  }

  TypePtr trans(const TypingContext& ctx, const ExprPtr& e) {
    TypePtr content = t_var(fresh.type_var());
    TypePtr result = t_var(fresh.type_var());
    Topology rho = Topology::variable(fresh.topo_var());
    bool has_catch_all = false;

    for (const Rule& rule : e->rules) {
      Pattern p = desugar_direction(rule.pattern);
      if (is_catch_all(p)) has_catch_all = true;

      TypingContext rule_ctx =
          ctx.extended("self", monotype(t_coll(rho, content)));
      for (const auto& [name, t] : gamma(p.elements, content))
        rule_ctx = rule_ctx.extended(name, monotype(t));

      ExprPtr guard = p.guard ? p.guard : e_true();
      TypePtr tg = go(rule_ctx, guard);
      emit(tg, t_bool(), e, "trans-guard");

      TypePtr tb = go(rule_ctx, rule.replacement);
      TypePtr ti = t_var(fresh.type_var());
      emit(tb, t_coll(Topology::symbol(TopoSym::Seq), ti), e, "trans-body");
      emit(t_cond(ti, comp(p.elements, content)), result, e, "trans-rule");
    }
    if (!(opts.refine_catch_all && has_catch_all))
      emit(content, result, e, "trans-unmatched");
    return t_arrow(t_coll(rho, content), t_coll(rho, result));
  }
};

}  // namespace

GenResult generate(const TypingContext& ctx, const ExprPtr& e,
                   const GenerateOptions& opts, FreshSupply& fresh) {
  Generator gen{opts, fresh, {}};
  TypePtr t = gen.go(ctx, e);
  return GenResult{t, std::move(gen.acc)};
}

}  // namespace topo
