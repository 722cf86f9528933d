#include "topo/jsonio.hpp"

namespace topo {

using nlohmann::json;

json to_json(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Base:
      return {{"kind", "base"}, {"name", name_of(t->base)}};
    case TypeKind::Var:
      return {{"kind", "var"}, {"name", t->var}};
    case TypeKind::Zero:
      return {{"kind", "zero"}};
    case TypeKind::One:
      return {{"kind", "one"}};
    case TypeKind::Arrow:
      return {{"kind", "arrow"}, {"from", to_json(t->from)}, {"to", to_json(t->to)}};
    case TypeKind::Coll: {
      json topo = t->topo.is_var()
                      ? json{{"kind", "var"}, {"name", t->topo.var}}
                      : json{{"kind", "sym"}, {"name", name_of(t->topo.sym)}};
      return {{"kind", "coll"}, {"topo", topo}, {"elem", to_json(t->elem)}};
    }
    case TypeKind::Union:
    case TypeKind::Inter: {
      json parts = json::array();
      for (const auto& p : t->parts) parts.push_back(to_json(p));
      return {{"kind", t->kind == TypeKind::Union ? "union" : "inter"},
              {"types", parts}};
    }
    case TypeKind::Cond:
      return {{"kind", "cond"},
              {"value", to_json(t->value)},
              {"guard", to_json(t->guard)}};
  }
  return {};
}

TypePtr type_from_json(const json& j) {
  const std::string kind = j.at("kind");
  if (kind == "base") {
    auto b = base_from_name(j.at("name").get<std::string>());
    if (!b) throw TypeSyntaxError("unknown base type in JSON");
    return t_base(*b);
  }
  if (kind == "var") return t_var(j.at("name").get<std::string>());
  if (kind == "zero") return t_zero();
  if (kind == "one") return t_one();
  if (kind == "arrow")
    return t_arrow(type_from_json(j.at("from")), type_from_json(j.at("to")));
  if (kind == "coll") {
    const json& tj = j.at("topo");
    Topology topo;
    if (tj.at("kind") == "var") {
      topo = Topology::variable(tj.at("name").get<std::string>());
    } else {
      auto s = topo_from_name(tj.at("name").get<std::string>());
      if (!s) throw TypeSyntaxError("unknown topology in JSON");
      topo = Topology::symbol(*s);
    }
    return t_coll(topo, type_from_json(j.at("elem")));
  }
  if (kind == "union" || kind == "inter") {
    std::vector<TypePtr> parts;
    for (const auto& p : j.at("types")) parts.push_back(type_from_json(p));
    return kind == "union" ? t_union(std::move(parts))
                           : t_inter(std::move(parts));
  }
  if (kind == "cond")
    return t_cond(type_from_json(j.at("value")), type_from_json(j.at("guard")));
  throw TypeSyntaxError("unknown type kind in JSON: " + kind);
}

json to_json(const TypeScheme& s) {
  json q = json::array();
  for (const auto& v : s.type_vars) q.push_back({{"name", v}, {"sort", "type"}});
  for (const auto& v : s.topo_vars) q.push_back({{"name", v}, {"sort", "topo"}});
  return {{"quantified", q},
          {"body", to_json(s.body)},
          {"constraints", to_json(s.constraints)}};
}

TypeScheme scheme_from_json(const json& j) {
  TypeScheme s;
  for (const auto& q : j.at("quantified")) {
    if (q.at("sort") == "type")
      s.type_vars.push_back(q.at("name").get<std::string>());
    else
      s.topo_vars.push_back(q.at("name").get<std::string>());
  }
  s.body = type_from_json(j.at("body"));
  s.constraints = constraints_from_json(j.at("constraints"));
  return s;
}

json to_json(const ConstraintSet& cs) {
  json out = json::array();
  for (const auto& c : cs)
    out.push_back({{"lhs", to_json(c.lhs)},
                   {"rhs", to_json(c.rhs)},
                   {"origin", c.origin}});
  return out;
}

ConstraintSet constraints_from_json(const json& j) {
  ConstraintSet out;
  for (const auto& c : j)
    out.push_back(Constraint{type_from_json(c.at("lhs")),
                             type_from_json(c.at("rhs")),
                             c.value("origin", std::string{})});
  return out;
}

static json to_json(const Pattern& p) {
  json elems = json::array();
  for (const auto& e : p.elements) {
    json je;
    switch (e.kind) {
      case ElemKind::Plain: je["kind"] = "plain"; break;
      case ElemKind::Typed: je["kind"] = "typed"; break;
      case ElemKind::Star: je["kind"] = "star"; break;
      case ElemKind::TypedStar: je["kind"] = "typed_star"; break;
    }
    je["var"] = e.var;
    if (e.kind == ElemKind::Typed || e.kind == ElemKind::TypedStar)
      je["base"] = name_of(e.base);
    if (e.dir_before != Dir::None) je["dir"] = name_of(e.dir_before);
    elems.push_back(je);
  }
  json out{{"elements", elems}};
  if (p.guard) out["guard"] = to_json(p.guard);
  return out;
}

static Pattern pattern_from_json(const json& j) {
  Pattern p;
  for (const auto& je : j.at("elements")) {
    ElemPattern e;
    const std::string kind = je.at("kind");
    if (kind == "plain") e.kind = ElemKind::Plain;
    else if (kind == "typed") e.kind = ElemKind::Typed;
    else if (kind == "star") e.kind = ElemKind::Star;
    else e.kind = ElemKind::TypedStar;
    e.var = je.at("var").get<std::string>();
    if (je.contains("base")) e.base = *base_from_name(je.at("base").get<std::string>());
    if (je.contains("dir")) {
      const std::string d = je.at("dir");
      e.dir_before = d == "nord" ? Dir::Nord
                     : d == "-nord" ? Dir::MinusNord
                     : d == "est" ? Dir::Est
                                  : Dir::MinusEst;
    }
    p.elements.push_back(e);
  }
  if (j.contains("guard")) p.guard = expr_from_json(j.at("guard"));
  return p;
}

json to_json(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Var:
      return {{"kind", "var"}, {"name", e->name}};
    case ExprKind::Const:
      return {{"kind", "const"}, {"name", e->name}};
    case ExprKind::Lambda:
      return {{"kind", "lambda"}, {"param", e->name}, {"body", to_json(e->a)}};
    case ExprKind::App:
      return {{"kind", "app"}, {"fn", to_json(e->a)}, {"arg", to_json(e->b)}};
    case ExprKind::Let:
      return {{"kind", "let"},
              {"name", e->name},
              {"bound", to_json(e->a)},
              {"body", to_json(e->b)}};
    case ExprKind::Trans: {
      json rules = json::array();
      for (const auto& r : e->rules)
        rules.push_back({{"pattern", to_json(r.pattern)},
                         {"replacement", to_json(r.replacement)}});
      return {{"kind", "trans"}, {"rules", rules}};
    }
  }
  return {};
}

ExprPtr expr_from_json(const json& j) {
  const std::string kind = j.at("kind");
  if (kind == "var") return e_var(j.at("name").get<std::string>());
  if (kind == "const") return e_const(j.at("name").get<std::string>());
  if (kind == "lambda")
    return e_lambda(j.at("param").get<std::string>(),
                    expr_from_json(j.at("body")));
  if (kind == "app")
    return e_app(expr_from_json(j.at("fn")), expr_from_json(j.at("arg")));
  if (kind == "let")
    return e_let(j.at("name").get<std::string>(), expr_from_json(j.at("bound")),
                 expr_from_json(j.at("body")));
  if (kind == "trans") {
    std::vector<Rule> rules;
    for (const auto& r : j.at("rules")) {
      Rule rule;
      rule.pattern = pattern_from_json(r.at("pattern"));
      rule.replacement = expr_from_json(r.at("replacement"));
      rules.push_back(std::move(rule));
    }
    return e_trans(std::move(rules));
  }
  throw SyntaxError("unknown expression kind in JSON: " + kind, Loc{});
}

}  // namespace topo
