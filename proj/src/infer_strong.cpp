#include "topo/infer_strong.hpp"

#include <functional>

namespace topo {

namespace {

void require_strong_fragment(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Base:
    case TypeKind::Var:
      return;
    case TypeKind::Arrow:
      require_strong_fragment(t->from);
      require_strong_fragment(t->to);
      return;
    case TypeKind::Coll:
      require_strong_fragment(t->elem);
      return;
    default:
      throw UnifyMismatch("unification is defined on the strong fragment only, got " +
                          pretty(t));
  }
}

Substitution bind_var(const std::string& v, const TypePtr& t) {
  if (t->kind == TypeKind::Var && t->var == v) return Substitution{};
  if (contains_type_var(t, v))
    throw OccursCheck("occurs check: " + v + " in " + pretty(t));
  return Substitution::bind_type(v, t);
}

}  // namespace

Substitution unify_topo(const Topology& a, const Topology& b) {
  if (a == b) return Substitution{};
  if (a.is_var()) return Substitution::bind_topo(a.var, b);
  if (b.is_var()) return Substitution::bind_topo(b.var, a);
  throw UnifyMismatch(std::string("topology mismatch: ") + name_of(a.sym) +
                      " vs " + name_of(b.sym));
}

Substitution unify(const TypePtr& a, const TypePtr& b) {
  require_strong_fragment(a);
  require_strong_fragment(b);
  if (a->kind == TypeKind::Var) return bind_var(a->var, b);
  if (b->kind == TypeKind::Var) return bind_var(b->var, a);
  if (a->kind != b->kind)
    throw UnifyMismatch("cannot unify " + pretty(a) + " with " + pretty(b));
  switch (a->kind) {
    case TypeKind::Base:
      if (a->base != b->base)
        throw UnifyMismatch("cannot unify " + pretty(a) + " with " + pretty(b));
      return Substitution{};
    case TypeKind::Arrow: {
      Substitution s1 = unify(a->from, b->from);
      Substitution s2 =
          unify(apply_subst(s1, a->to), apply_subst(s1, b->to));
      return compose(s2, s1);
    }
    case TypeKind::Coll: {
      Substitution s1 = unify_topo(a->topo, b->topo);
      Substitution s2 =
          unify(apply_subst(s1, a->elem), apply_subst(s1, b->elem));
      return compose(s2, s1);
    }
    default:
      throw UnifyMismatch("cannot unify " + pretty(a) + " with " + pretty(b));
  }
}

namespace {

struct StrongInfer {
  FreshSupply& fresh;

  std::pair<Substitution, TypePtr> go(const TypingContext& ctx,
                                      const ExprPtr& e) {
    switch (e->kind) {
      case ExprKind::Var: {
        const TypeScheme* scheme = ctx.lookup(e->name);
        if (!scheme)
          throw UnboundVariable("unbound variable '" + e->name + "'", e->loc);
        return {Substitution{}, instantiate(*scheme, fresh).first};
      }
      case ExprKind::Const: {
        TypeScheme scheme = [&] {
          try {
            return tc(e->name, Dialect::Strong);
          } catch (const UnknownConstant&) {
            throw TypeError("unknown constant '" + e->name + "'", e->loc);
          }
        }();
        return {Substitution{}, instantiate(scheme, fresh).first};
      }
      case ExprKind::Lambda: {
        TypePtr a = t_var(fresh.type_var());
        auto [s, body] = go(ctx.extended(e->name, monotype(a)), e->a);
        return {s, t_arrow(apply_subst(s, a), body)};
      }
      case ExprKind::App: {
        auto [s1, t1] = go(ctx, e->a);
        auto [s2, t2] = go(apply_subst(s1, ctx), e->b);
        TypePtr r = t_var(fresh.type_var());
        Substitution s3 = [&, t1 = t1, t2 = t2] {
          try {
            return unify(apply_subst(s2, t1), t_arrow(t2, r));
          } catch (const TypeError& err) {
            throw TypeError(std::string(err.what()) + " in application",
                            e->loc);
          }
        }();
        return {compose(s3, compose(s2, s1)), apply_subst(s3, r)};
      }
      case ExprKind::Let: {
        auto [s1, t1] = go(ctx, e->a);
        TypingContext ctx1 = apply_subst(s1, ctx);
        TypeScheme scheme = generalize(ctx1, t1);
        auto [s2, t2] = go(ctx1.extended(e->name, scheme), e->b);
        return {compose(s2, s1), t2};
      }
      case ExprKind::Trans:
        return trans(ctx, e);
    }
    throw TypeError("malformed expression", e->loc);
  }

  std::pair<Substitution, TypePtr> trans(const TypingContext& ctx,
                                         const ExprPtr& e) {
    TypePtr content = t_var(fresh.type_var());
    TypePtr result = t_var(fresh.type_var());
    Topology rho = Topology::variable(fresh.topo_var());
    Substitution s;

    for (const Rule& rule : e->rules) {
      Pattern p = desugar_direction(rule.pattern);
      TypingContext rule_ctx = apply_subst(s, ctx);
      TypePtr tau = apply_subst(s, content);
      rule_ctx = rule_ctx.extended(
          "self", monotype(t_coll(apply_subst(s, rho), tau)));
      for (const auto& elem : p.elements)
        rule_ctx = rule_ctx.extended(elem.var, monotype(tau));

      ExprPtr guard = p.guard ? p.guard : e_true();
      auto [sg, tg] = go(rule_ctx, guard);
      Substitution sgb = [&, tg = tg] {
        try {
          return unify(tg, t_bool());
        } catch (const TypeError& err) {
          throw TypeError(std::string(err.what()) + " in rule guard", rule.loc);
        }
      }();
      s = compose(sgb, compose(sg, s));

      auto [sb, tb] = go(apply_subst(s, rule_ctx), rule.replacement);
      s = compose(sb, s);
      TypePtr want =
          t_coll(Topology::symbol(TopoSym::Seq), apply_subst(s, result));
      Substitution sbr = [&, tb = tb] {
        try {
          return unify(apply_subst(s, tb), want);
        } catch (const TypeError& err) {
          throw TypeError(std::string(err.what()) +
                              " in rule replacement (must be a sequence)",
                          rule.loc);
        }
      }();
      s = compose(sbr, s);
    }
    TypePtr out = t_arrow(t_coll(rho, content), t_coll(rho, result));
    return {s, apply_subst(s, out)};
  }
};

}  // namespace

std::pair<Substitution, TypePtr> infer_w(const TypingContext& ctx,
                                         const ExprPtr& e, FreshSupply& fresh) {
  StrongInfer inf{fresh};
  return inf.go(ctx, e);
}

TypeScheme infer_strong_scheme(const ExprPtr& e) {
  FreshSupply fresh;
  auto [s, t] = infer_w(TypingContext{}, e, fresh);
  return generalize(TypingContext{}, t);
}

bool is_instance_of(const TypePtr& general, const TypePtr& specific) {
  Substitution s;
  std::function<bool(const TypePtr&, const TypePtr&)> match =
      [&](const TypePtr& g, const TypePtr& t) -> bool {
    if (g->kind == TypeKind::Var) {
      auto it = s.type_map.find(g->var);
      if (it != s.type_map.end()) return equal(it->second, t);
      s.type_map[g->var] = t;
      return true;
    }
    if (g->kind != t->kind) return false;
    switch (g->kind) {
      case TypeKind::Base:
        return g->base == t->base;
      case TypeKind::Arrow:
        return match(g->from, t->from) && match(g->to, t->to);
      case TypeKind::Coll: {
        if (g->topo.is_var()) {
          auto it = s.topo_map.find(g->topo.var);
          if (it != s.topo_map.end()) {
            if (!(it->second == t->topo)) return false;
          } else {
            s.topo_map[g->topo.var] = t->topo;
          }
        } else if (!(g->topo == t->topo)) {
          return false;
        }
        return match(g->elem, t->elem);
      }
      default:
        return false;
    }
  };
  return match(general, specific);
}

}  // namespace topo
