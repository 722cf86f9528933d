#include "topo/types.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace topo {

const char* name_of(BaseType b) {
  switch (b) {
    case BaseType::Int: return "int";
    case BaseType::Bool: return "bool";
    case BaseType::Float: return "float";
    case BaseType::String: return "string";
  }
  return "?";
}

const char* name_of(TopoSym t) {
  switch (t) {
    case TopoSym::Set: return "set";
    case TopoSym::Bag: return "bag";
    case TopoSym::Seq: return "seq";
    case TopoSym::Grid: return "grid";
  }
  return "?";
}

std::optional<BaseType> base_from_name(std::string_view s) {
  if (s == "int") return BaseType::Int;
  if (s == "bool") return BaseType::Bool;
  if (s == "float") return BaseType::Float;
  if (s == "string") return BaseType::String;
  return std::nullopt;
}

std::optional<TopoSym> topo_from_name(std::string_view s) {
  if (s == "set") return TopoSym::Set;
  if (s == "bag") return TopoSym::Bag;
  if (s == "seq") return TopoSym::Seq;
  if (s == "grid") return TopoSym::Grid;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Constructors

TypePtr t_base(BaseType b) {
  auto t = std::make_shared<Type>(TypeKind::Base);
  t->base = b;
  return t;
}

TypePtr t_int() { static TypePtr t = t_base(BaseType::Int); return t; }
TypePtr t_bool() { static TypePtr t = t_base(BaseType::Bool); return t; }
TypePtr t_float() { static TypePtr t = t_base(BaseType::Float); return t; }
TypePtr t_string() { static TypePtr t = t_base(BaseType::String); return t; }

TypePtr t_var(std::string name) {
  auto t = std::make_shared<Type>(TypeKind::Var);
  t->var = std::move(name);
  return t;
}

TypePtr t_arrow(TypePtr from, TypePtr to) {
  auto t = std::make_shared<Type>(TypeKind::Arrow);
  t->from = std::move(from);
  t->to = std::move(to);
  return t;
}

TypePtr t_coll(Topology topo, TypePtr elem) {
  auto t = std::make_shared<Type>(TypeKind::Coll);
  t->topo = std::move(topo);
  t->elem = std::move(elem);
  return t;
}

TypePtr t_zero() {
  static TypePtr t = std::make_shared<Type>(TypeKind::Zero);
  return t;
}

TypePtr t_one() {
  static TypePtr t = std::make_shared<Type>(TypeKind::One);
  return t;
}

static void flatten_into(TypeKind k, const TypePtr& t,
                         std::vector<TypePtr>& out) {
  if (t->kind == k) {
    for (const auto& p : t->parts) flatten_into(k, p, out);
  } else {
    out.push_back(t);
  }
}

TypePtr t_union(std::vector<TypePtr> parts) {
  std::vector<TypePtr> flat;
  for (const auto& p : parts) flatten_into(TypeKind::Union, p, flat);
  if (flat.empty()) return t_zero();
  if (flat.size() == 1) return flat[0];
  auto t = std::make_shared<Type>(TypeKind::Union);
  t->parts = std::move(flat);
  return t;
}

TypePtr t_union(TypePtr a, TypePtr b) {
  return t_union(std::vector<TypePtr>{std::move(a), std::move(b)});
}

TypePtr t_inter(std::vector<TypePtr> parts) {
  std::vector<TypePtr> flat;
  for (const auto& p : parts) flatten_into(TypeKind::Inter, p, flat);
  if (flat.empty()) return t_one();
  if (flat.size() == 1) return flat[0];
  auto t = std::make_shared<Type>(TypeKind::Inter);
  t->parts = std::move(flat);
  return t;
}

TypePtr t_inter(TypePtr a, TypePtr b) {
  return t_inter(std::vector<TypePtr>{std::move(a), std::move(b)});
}

TypePtr t_cond(TypePtr value, TypePtr guard) {
  auto t = std::make_shared<Type>(TypeKind::Cond);
  t->value = std::move(value);
  t->guard = std::move(guard);
  return t;
}

// ---------------------------------------------------------------------------
// Comparison

static int compare_topo(const Topology& a, const Topology& b) {
  if (a.is_var() != b.is_var()) return a.is_var() ? 1 : -1;
  if (a.is_var()) return a.var.compare(b.var);
  return static_cast<int>(a.sym) - static_cast<int>(b.sym);
}

int compare(const TypePtr& a, const TypePtr& b) {
  if (a.get() == b.get()) return 0;
  if (a->kind != b->kind)
    return static_cast<int>(a->kind) < static_cast<int>(b->kind) ? -1 : 1;
  switch (a->kind) {
    case TypeKind::Base:
      return static_cast<int>(a->base) - static_cast<int>(b->base);
    case TypeKind::Var:
      return a->var.compare(b->var);
    case TypeKind::Arrow: {
      int c = compare(a->from, b->from);
      return c != 0 ? c : compare(a->to, b->to);
    }
    case TypeKind::Coll: {
      int c = compare_topo(a->topo, b->topo);
      return c != 0 ? c : compare(a->elem, b->elem);
    }
    case TypeKind::Union:
    case TypeKind::Inter: {
      if (a->parts.size() != b->parts.size())
        return a->parts.size() < b->parts.size() ? -1 : 1;
      for (size_t i = 0; i < a->parts.size(); ++i) {
        int c = compare(a->parts[i], b->parts[i]);
        if (c != 0) return c;
      }
      return 0;
    }
    case TypeKind::Zero:
    case TypeKind::One:
      return 0;
    case TypeKind::Cond: {
      int c = compare(a->value, b->value);
      return c != 0 ? c : compare(a->guard, b->guard);
    }
  }
  return 0;
}

bool equal(const TypePtr& a, const TypePtr& b) { return compare(a, b) == 0; }

bool contains_type_var(const TypePtr& t, const std::string& name) {
  switch (t->kind) {
    case TypeKind::Base:
    case TypeKind::Zero:
    case TypeKind::One:
      return false;
    case TypeKind::Var:
      return t->var == name;
    case TypeKind::Arrow:
      return contains_type_var(t->from, name) || contains_type_var(t->to, name);
    case TypeKind::Coll:
      return contains_type_var(t->elem, name);
    case TypeKind::Union:
    case TypeKind::Inter:
      for (const auto& p : t->parts)
        if (contains_type_var(p, name)) return true;
      return false;
    case TypeKind::Cond:
      return contains_type_var(t->value, name) ||
             contains_type_var(t->guard, name);
  }
  return false;
}

bool is_ground(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Base:
    case TypeKind::Zero:
    case TypeKind::One:
      return true;
    case TypeKind::Var:
      return false;
    case TypeKind::Arrow:
      return is_ground(t->from) && is_ground(t->to);
    case TypeKind::Coll:
      return !t->topo.is_var() && is_ground(t->elem);
    case TypeKind::Union:
    case TypeKind::Inter:
      for (const auto& p : t->parts)
        if (!is_ground(p)) return false;
      return true;
    case TypeKind::Cond:
      return is_ground(t->value) && is_ground(t->guard);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Free variables

void VarSet::add_type(const std::string& v) {
  if (!has_type(v)) type_vars.push_back(v);
}
void VarSet::add_topo(const std::string& v) {
  if (!has_topo(v)) topo_vars.push_back(v);
}
bool VarSet::has_type(const std::string& v) const {
  return std::find(type_vars.begin(), type_vars.end(), v) != type_vars.end();
}
bool VarSet::has_topo(const std::string& v) const {
  return std::find(topo_vars.begin(), topo_vars.end(), v) != topo_vars.end();
}

void free_vars(const TypePtr& t, VarSet& out) {
  switch (t->kind) {
    case TypeKind::Base:
    case TypeKind::Zero:
    case TypeKind::One:
      return;
    case TypeKind::Var:
      out.add_type(t->var);
      return;
    case TypeKind::Arrow:
      free_vars(t->from, out);
      free_vars(t->to, out);
      return;
    case TypeKind::Coll:
      if (t->topo.is_var()) out.add_topo(t->topo.var);
      free_vars(t->elem, out);
      return;
    case TypeKind::Union:
    case TypeKind::Inter:
      for (const auto& p : t->parts) free_vars(p, out);
      return;
    case TypeKind::Cond:
      free_vars(t->value, out);
      free_vars(t->guard, out);
      return;
  }
}

void free_vars(const TypeScheme& scheme, VarSet& out) {
  VarSet inner;
  free_vars(scheme.body, inner);
  for (const auto& c : scheme.constraints) {
    free_vars(c.lhs, inner);
    free_vars(c.rhs, inner);
  }
  for (const auto& v : inner.type_vars) {
    if (std::find(scheme.type_vars.begin(), scheme.type_vars.end(), v) ==
        scheme.type_vars.end())
      out.add_type(v);
  }
  for (const auto& v : inner.topo_vars) {
    if (std::find(scheme.topo_vars.begin(), scheme.topo_vars.end(), v) ==
        scheme.topo_vars.end())
      out.add_topo(v);
  }
}

// ---------------------------------------------------------------------------
// Substitution

Substitution Substitution::bind_type(const std::string& v, TypePtr t) {
  Substitution s;
  s.type_map[v] = std::move(t);
  return s;
}

Substitution Substitution::bind_topo(const std::string& v, Topology t) {
  Substitution s;
  s.topo_map[v] = std::move(t);
  return s;
}

Topology apply_subst(const Substitution& s, const Topology& t) {
  if (!t.is_var()) return t;
  auto it = s.topo_map.find(t.var);
  return it == s.topo_map.end() ? t : it->second;
}

TypePtr apply_subst(const Substitution& s, const TypePtr& t) {
  if (s.empty()) return t;
  switch (t->kind) {
    case TypeKind::Base:
    case TypeKind::Zero:
    case TypeKind::One:
      return t;
    case TypeKind::Var: {
      auto it = s.type_map.find(t->var);
      return it == s.type_map.end() ? t : it->second;
    }
    case TypeKind::Arrow:
      return t_arrow(apply_subst(s, t->from), apply_subst(s, t->to));
    case TypeKind::Coll:
      return t_coll(apply_subst(s, t->topo), apply_subst(s, t->elem));
    case TypeKind::Union: {
      std::vector<TypePtr> parts;
      parts.reserve(t->parts.size());
      for (const auto& p : t->parts) parts.push_back(apply_subst(s, p));
      return t_union(std::move(parts));
    }
    case TypeKind::Inter: {
      std::vector<TypePtr> parts;
      parts.reserve(t->parts.size());
      for (const auto& p : t->parts) parts.push_back(apply_subst(s, p));
      return t_inter(std::move(parts));
    }
    case TypeKind::Cond:
      return t_cond(apply_subst(s, t->value), apply_subst(s, t->guard));
  }
  return t;
}

Substitution compose(const Substitution& outer, const Substitution& inner) {
  Substitution r;
  for (const auto& [v, t] : inner.type_map) r.type_map[v] = apply_subst(outer, t);
  for (const auto& [v, t] : outer.type_map) {
    if (!r.type_map.count(v)) r.type_map[v] = t;
  }
  for (const auto& [v, t] : inner.topo_map) r.topo_map[v] = apply_subst(outer, t);
  for (const auto& [v, t] : outer.topo_map) {
    if (!r.topo_map.count(v)) r.topo_map[v] = t;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Schemes

TypeScheme monotype(TypePtr t) { return TypeScheme{{}, {}, std::move(t), {}}; }

TypeScheme apply_subst(const Substitution& s, const TypeScheme& scheme) {
  // Quantified variables are untouched: strip them from the substitution's
  // domain. If the remaining range mentions a quantified name, rename that
  // quantifier first.
  Substitution trimmed;
  for (const auto& [v, t] : s.type_map) {
    if (std::find(scheme.type_vars.begin(), scheme.type_vars.end(), v) ==
        scheme.type_vars.end())
      trimmed.type_map[v] = t;
  }
  for (const auto& [v, t] : s.topo_map) {
    if (std::find(scheme.topo_vars.begin(), scheme.topo_vars.end(), v) ==
        scheme.topo_vars.end())
      trimmed.topo_map[v] = t;
  }
  VarSet range_vars;
  for (const auto& [v, t] : trimmed.type_map) free_vars(t, range_vars);
  for (const auto& [v, t] : trimmed.topo_map) {
    if (t.is_var()) range_vars.add_topo(t.var);
  }

  TypeScheme out = scheme;
  Substitution rename;
  long counter = 0;
  auto fresh_name = [&counter](const std::string& v) {
    return v + "'" + std::to_string(++counter);
  };
  for (auto& q : out.type_vars) {
    if (range_vars.has_type(q)) {
      std::string nq = fresh_name(q);
      rename.type_map[q] = t_var(nq);
      q = nq;
    }
  }
  for (auto& q : out.topo_vars) {
    if (range_vars.has_topo(q)) {
      std::string nq = fresh_name(q);
      rename.topo_map[q] = Topology::variable(nq);
      q = nq;
    }
  }
  if (!rename.empty()) {
    out.body = apply_subst(rename, out.body);
    for (auto& c : out.constraints) {
      c.lhs = apply_subst(rename, c.lhs);
      c.rhs = apply_subst(rename, c.rhs);
    }
  }
  out.body = apply_subst(trimmed, out.body);
  for (auto& c : out.constraints) {
    c.lhs = apply_subst(trimmed, c.lhs);
    c.rhs = apply_subst(trimmed, c.rhs);
  }
  return out;
}

const TypeScheme* TypingContext::lookup(const std::string& name) const {
  auto it = bindings.find(name);
  return it == bindings.end() ? nullptr : &it->second;
}

TypingContext TypingContext::extended(const std::string& name,
                                      TypeScheme scheme) const {
  TypingContext out = *this;
  out.bindings[name] = std::move(scheme);
  return out;
}

void TypingContext::free_vars(VarSet& out) const {
  for (const auto& [name, scheme] : bindings) topo::free_vars(scheme, out);
}

TypingContext apply_subst(const Substitution& s, const TypingContext& ctx) {
  TypingContext out;
  for (const auto& [name, scheme] : ctx.bindings)
    out.bindings[name] = apply_subst(s, scheme);
  return out;
}

TypeScheme generalize(const TypingContext& ctx, const TypePtr& t,
                      const ConstraintSet& constraints) {
  VarSet ctx_vars;
  ctx.free_vars(ctx_vars);
  VarSet vars;
  free_vars(t, vars);
  for (const auto& c : constraints) {
    free_vars(c.lhs, vars);
    free_vars(c.rhs, vars);
  }
  TypeScheme out;
  for (const auto& v : vars.type_vars)
    if (!ctx_vars.has_type(v)) out.type_vars.push_back(v);
  for (const auto& v : vars.topo_vars)
    if (!ctx_vars.has_topo(v)) out.topo_vars.push_back(v);
  out.body = t;
  out.constraints = constraints;
  return out;
}

std::pair<TypePtr, ConstraintSet> instantiate(const TypeScheme& scheme,
                                              FreshSupply& fresh) {
  Substitution s;
  for (const auto& v : scheme.type_vars) s.type_map[v] = t_var(fresh.type_var());
  for (const auto& v : scheme.topo_vars)
    s.topo_map[v] = Topology::variable(fresh.topo_var());
  ConstraintSet cs;
  cs.reserve(scheme.constraints.size());
  for (const auto& c : scheme.constraints)
    cs.push_back(Constraint{apply_subst(s, c.lhs), apply_subst(s, c.rhs), c.origin});
  return {apply_subst(s, scheme.body), std::move(cs)};
}

// ---------------------------------------------------------------------------
// Normalization

static std::vector<TypePtr> sorted_unique(std::vector<TypePtr> parts) {
  std::sort(parts.begin(), parts.end(),
            [](const TypePtr& a, const TypePtr& b) { return compare(a, b) < 0; });
  parts.erase(std::unique(parts.begin(), parts.end(),
                          [](const TypePtr& a, const TypePtr& b) {
                            return compare(a, b) == 0;
                          }),
              parts.end());
  return parts;
}

static TypePtr normalize_step(const TypePtr& t);

static TypePtr normalize_inter(std::vector<TypePtr> parts) {
  parts = sorted_unique(std::move(parts));
  // Drop 1, shortcut 0.
  std::vector<TypePtr> kept;
  for (const auto& p : parts) {
    if (p->kind == TypeKind::One) continue;
    if (p->kind == TypeKind::Zero) return t_zero();
    kept.push_back(p);
  }
  if (kept.empty()) return t_one();

  // Pairwise disjointness of the atomic kinds and collection merging.
  bool all_ground = true;
  for (const auto& p : kept) all_ground = all_ground && is_ground(p);
  for (size_t i = 0; i < kept.size(); ++i) {
    for (size_t j = i + 1; j < kept.size(); ++j) {
      const auto& a = kept[i];
      const auto& b = kept[j];
      auto kinds = std::minmax(a->kind, b->kind);
      if (a->kind == TypeKind::Base && b->kind == TypeKind::Base &&
          a->base != b->base)
        return t_zero();
      if (kinds.first == TypeKind::Base &&
          (kinds.second == TypeKind::Coll || kinds.second == TypeKind::Arrow))
        return t_zero();
      if (kinds.first == TypeKind::Arrow && kinds.second == TypeKind::Coll)
        return t_zero();
      if (a->kind == TypeKind::Coll && b->kind == TypeKind::Coll) {
        if (!a->topo.is_var() && !b->topo.is_var() && !(a->topo == b->topo))
          return t_zero();
        if (a->topo == b->topo) {
          std::vector<TypePtr> rest;
          for (size_t k = 0; k < kept.size(); ++k)
            if (k != i && k != j) rest.push_back(kept[k]);
          rest.push_back(t_coll(a->topo, t_inter(a->elem, b->elem)));
          return normalize_step(t_inter(std::move(rest)));
        }
      }
    }
  }

  // Ground distribution over unions; never crosses a type variable.
  if (all_ground) {
    for (size_t i = 0; i < kept.size(); ++i) {
      if (kept[i]->kind == TypeKind::Union) {
        std::vector<TypePtr> rest;
        for (size_t k = 0; k < kept.size(); ++k)
          if (k != i) rest.push_back(kept[k]);
        std::vector<TypePtr> branches;
        for (const auto& u : kept[i]->parts) {
          std::vector<TypePtr> one = rest;
          one.push_back(u);
          branches.push_back(t_inter(std::move(one)));
        }
        return normalize_step(t_union(std::move(branches)));
      }
    }
  }

  if (kept.size() == 1) return kept[0];
  return t_inter(std::move(kept));
}

static TypePtr normalize_step(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Base:
    case TypeKind::Var:
    case TypeKind::Zero:
    case TypeKind::One:
      return t;
    case TypeKind::Arrow: {
      auto f = normalize_step(t->from);
      auto to = normalize_step(t->to);
      if (f.get() == t->from.get() && to.get() == t->to.get()) return t;
      return t_arrow(f, to);
    }
    case TypeKind::Coll: {
      auto e = normalize_step(t->elem);
      if (e.get() == t->elem.get()) return t;
      return t_coll(t->topo, e);
    }
    case TypeKind::Union: {
      std::vector<TypePtr> parts;
      for (const auto& p : t->parts) parts.push_back(normalize_step(p));
      parts = sorted_unique(std::move(parts));
      std::vector<TypePtr> kept;
      for (const auto& p : parts) {
        if (p->kind == TypeKind::Zero) continue;
        if (p->kind == TypeKind::One) return t_one();
        kept.push_back(p);
      }
      if (kept.empty()) return t_zero();
      if (kept.size() == 1) return kept[0];
      return t_union(std::move(kept));
    }
    case TypeKind::Inter: {
      std::vector<TypePtr> parts;
      for (const auto& p : t->parts) parts.push_back(normalize_step(p));
      return normalize_inter(std::move(parts));
    }
    case TypeKind::Cond: {
      auto v = normalize_step(t->value);
      auto g = normalize_step(t->guard);
      Emptiness ge = is_empty(g);
      if (ge == Emptiness::True) return t_zero();
      if (is_empty(v) == Emptiness::True) return t_zero();
      if (ge == Emptiness::False && is_ground(g)) return v;
      return t_cond(v, g);
    }
  }
  return t;
}

TypePtr normalize(const TypePtr& t) {
  TypePtr cur = t;
  for (int i = 0; i < 16; ++i) {
    TypePtr next = normalize_step(cur);
    if (equal(next, cur)) return next;
    cur = next;
  }
  return cur;
}

Emptiness is_empty(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Zero:
      return Emptiness::True;
    case TypeKind::Base:
    case TypeKind::One:
    case TypeKind::Arrow:
    case TypeKind::Coll:
      // The empty collection inhabits every collection type.
      return Emptiness::False;
    case TypeKind::Var:
      return Emptiness::Unknown;
    case TypeKind::Union: {
      bool all_true = true;
      for (const auto& p : t->parts) {
        Emptiness e = is_empty(p);
        if (e == Emptiness::False) return Emptiness::False;
        if (e != Emptiness::True) all_true = false;
      }
      return all_true ? Emptiness::True : Emptiness::Unknown;
    }
    case TypeKind::Inter: {
      TypePtr n = normalize(t);
      if (n->kind == TypeKind::Inter) {
        if (is_ground(n)) return Emptiness::False;  // only arrow intersections survive
        return Emptiness::Unknown;
      }
      return is_empty(n);
    }
    case TypeKind::Cond: {
      Emptiness g = is_empty(t->guard);
      if (g == Emptiness::True) return Emptiness::True;
      Emptiness v = is_empty(t->value);
      if (v == Emptiness::True) return Emptiness::True;
      if (g == Emptiness::False) return v;
      return Emptiness::Unknown;
    }
  }
  return Emptiness::Unknown;
}

bool sub_structural(const TypePtr& lhs, const TypePtr& rhs) {
  TypePtr l = normalize(lhs);
  TypePtr r = normalize(rhs);
  std::function<bool(const TypePtr&, const TypePtr&)> go =
      [&](const TypePtr& a, const TypePtr& b) -> bool {
    if (equal(a, b)) return true;
    if (a->kind == TypeKind::Zero || is_empty(a) == Emptiness::True) return true;
    if (b->kind == TypeKind::One) return true;
    if (a->kind == TypeKind::Union) {
      for (const auto& p : a->parts)
        if (!go(p, b)) return false;
      return true;
    }
    if (a->kind == TypeKind::Cond) return go(a->value, b);
    if (b->kind == TypeKind::Inter) {
      for (const auto& p : b->parts)
        if (!go(a, p)) return false;
      return true;
    }
    if (b->kind == TypeKind::Union) {
      for (const auto& p : b->parts)
        if (go(a, p)) return true;
      // fall through: an intersection lhs may still embed in one branch
    }
    if (a->kind == TypeKind::Inter) {
      for (const auto& p : a->parts)
        if (go(p, b)) return true;
      return false;
    }
    if (b->kind == TypeKind::Union) return false;
    if (b->kind == TypeKind::Cond) {
      Emptiness g = is_empty(b->guard);
      if (g == Emptiness::False) return go(a, b->value);
      return false;  // guard undecided or empty: only an empty lhs fits (handled above)
    }
    if (a->kind == TypeKind::Coll && b->kind == TypeKind::Coll)
      return a->topo == b->topo && go(a->elem, b->elem);
    if (a->kind == TypeKind::Arrow && b->kind == TypeKind::Arrow)
      return go(b->from, a->from) && go(a->to, b->to);
    return false;
  };
  return go(l, r);
}

// ---------------------------------------------------------------------------
// Constant table

static TypeScheme scheme_of(std::vector<std::string> tv,
                            std::vector<std::string> pv, TypePtr body,
                            ConstraintSet cs = {}) {
  return TypeScheme{std::move(tv), std::move(pv), std::move(body),
                    std::move(cs)};
}

static bool looks_like_int(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

static bool looks_like_float(std::string_view s) {
  auto dot = s.find('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 >= s.size())
    return false;
  return looks_like_int(s.substr(0, dot)) && looks_like_int(s.substr(dot + 1));
}

bool is_builtin_name(std::string_view name) {
  static const std::set<std::string, std::less<>> names = {
      "::",       "nord",     "-nord",    "est",       "-est",
      "empty_seq", "empty_set", "empty_bag", "empty_grid", "if",
      "+",        "-",        "*",        "mod",       ">",
      "<",        "=",        "&&",       "||",        "nord_nb",
      "est_nb",   "-nord_nb", "-est_nb",  "true",      "false"};
  return names.count(name) > 0;
}

TypeScheme tc(const std::string& name, Dialect dialect) {
  const auto a = [] { return t_var("a"); };
  const auto b = [] { return t_var("b"); };
  const auto th = [] { return Topology::variable("t"); };
  const auto grid = [] { return Topology::symbol(TopoSym::Grid); };

  if (looks_like_int(name)) return monotype(t_int());
  if (looks_like_float(name)) return monotype(t_float());
  if (name.size() >= 2 && name.front() == '"' && name.back() == '"')
    return monotype(t_string());
  if (name == "true" || name == "false") return monotype(t_bool());

  if (name == "::")
    return scheme_of({"a"}, {"t"},
                     t_arrow(a(), t_arrow(t_coll(th(), a()), t_coll(th(), a()))));
  if (name == "nord" || name == "-nord" || name == "est" || name == "-est")
    return scheme_of({"a"}, {},
                     t_arrow(a(), t_arrow(t_coll(grid(), a()),
                                          t_coll(grid(), a()))));
  if (name == "empty_seq")
    return scheme_of({"a"}, {}, t_coll(Topology::symbol(TopoSym::Seq), a()));
  if (name == "empty_set")
    return scheme_of({"a"}, {}, t_coll(Topology::symbol(TopoSym::Set), a()));
  if (name == "empty_bag")
    return scheme_of({"a"}, {}, t_coll(Topology::symbol(TopoSym::Bag), a()));
  if (name == "empty_grid")
    return scheme_of({"a"}, {}, t_coll(Topology::symbol(TopoSym::Grid), a()));
  if (name == "if") {
    if (dialect == Dialect::Strong)
      return scheme_of({"a"}, {},
                       t_arrow(t_bool(), t_arrow(a(), t_arrow(a(), a()))));
    return scheme_of({"a", "b"}, {},
                     t_arrow(t_bool(),
                             t_arrow(a(), t_arrow(b(), t_union(a(), b())))));
  }
  if (name == ">" || name == "<" || name == "=")
    return scheme_of({"a"}, {}, t_arrow(a(), t_arrow(a(), t_bool())));
  if (name == "+" || name == "-" || name == "*") {
    if (dialect == Dialect::Strong)
      return monotype(t_arrow(t_int(), t_arrow(t_int(), t_int())));
    // Overloading on int and float through conditional types.
    TypePtr result = t_union(t_cond(t_int(), t_inter(a(), t_int())),
                             t_cond(t_float(), t_inter(a(), t_float())));
    ConstraintSet cs{Constraint{a(), t_union(t_int(), t_float()),
                                std::string("tc ") + name}};
    return scheme_of({"a"}, {}, t_arrow(a(), t_arrow(a(), result)),
                     std::move(cs));
  }
  if (name == "mod")
    return monotype(t_arrow(t_int(), t_arrow(t_int(), t_int())));
  if (name == "&&" || name == "||")
    return monotype(t_arrow(t_bool(), t_arrow(t_bool(), t_bool())));
  if (name == "nord_nb" || name == "est_nb" || name == "-nord_nb" ||
      name == "-est_nb")
    return scheme_of({"a"}, {},
                     t_arrow(t_coll(grid(), a()),
                             t_arrow(a(), t_arrow(a(), t_bool()))));
  throw UnknownConstant(name);
}

// ---------------------------------------------------------------------------
// Pretty-printing

std::string pretty(const Topology& t) {
  return t.is_var() ? t.var : name_of(t.sym);
}

// Precedence: arrow(0) < union(1) < cond(2) < inter(3) < atom(4).
static void print_type(std::ostringstream& os, const TypePtr& t, int prec) {
  auto paren = [&](int mine, auto&& body) {
    if (prec > mine) os << "(";
    body();
    if (prec > mine) os << ")";
  };
  switch (t->kind) {
    case TypeKind::Base:
      os << name_of(t->base);
      break;
    case TypeKind::Var:
      os << t->var;
      break;
    case TypeKind::Zero:
      os << "0";
      break;
    case TypeKind::One:
      os << "1";
      break;
    case TypeKind::Arrow:
      paren(0, [&] {
        print_type(os, t->from, 1);
        os << " -> ";
        print_type(os, t->to, 0);
      });
      break;
    case TypeKind::Coll:
      paren(4, [&] {
        os << "[" << pretty(t->topo) << "] ";
        print_type(os, t->elem, 4);
      });
      break;
    case TypeKind::Union:
      paren(1, [&] {
        for (size_t i = 0; i < t->parts.size(); ++i) {
          if (i) os << " | ";
          print_type(os, t->parts[i], 2);
        }
      });
      break;
    case TypeKind::Inter:
      paren(3, [&] {
        for (size_t i = 0; i < t->parts.size(); ++i) {
          if (i) os << " & ";
          print_type(os, t->parts[i], 4);
        }
      });
      break;
    case TypeKind::Cond:
      paren(2, [&] {
        print_type(os, t->value, 3);
        os << " ? ";
        print_type(os, t->guard, 3);
      });
      break;
  }
}

std::string pretty(const TypePtr& t) {
  std::ostringstream os;
  print_type(os, t, 0);
  return os.str();
}

std::string pretty(const TypeScheme& s) {
  std::ostringstream os;
  if (!s.type_vars.empty() || !s.topo_vars.empty()) {
    os << "forall ";
    bool first = true;
    for (const auto& v : s.type_vars) {
      if (!first) os << ", ";
      os << v;
      first = false;
    }
    for (const auto& v : s.topo_vars) {
      if (!first) os << ", ";
      os << v;
      first = false;
    }
    os << ". ";
  }
  print_type(os, s.body, 0);
  if (!s.constraints.empty()) {
    os << " where {";
    for (size_t i = 0; i < s.constraints.size(); ++i) {
      if (i) os << ", ";
      print_type(os, s.constraints[i].lhs, 0);
      os << " <: ";
      print_type(os, s.constraints[i].rhs, 0);
    }
    os << "}";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Type text parser

namespace {

class TypeParser {
 public:
  explicit TypeParser(const std::string& text) : s_(text) {}

  TypePtr parse_full_type() {
    TypePtr t = arrow();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input in type");
    return t;
  }

  TypeScheme parse_full_scheme() {
    skip_ws();
    TypeScheme out;
    std::vector<std::string> quantified;
    if (try_word("forall")) {
      while (true) {
        std::string v = ident();
        quantified.push_back(v);
        skip_ws();
        if (!try_char(',')) break;
      }
      skip_ws();
      if (!try_char('.')) fail("expected '.' after quantifier list");
    }
    out.body = arrow();
    skip_ws();
    if (try_word("where")) {
      skip_ws();
      if (!try_char('{')) fail("expected '{' after where");
      skip_ws();
      if (!try_char('}')) {
        while (true) {
          TypePtr l = arrow();
          skip_ws();
          if (!(try_char('<') && try_char(':'))) fail("expected '<:'");
          TypePtr r = arrow();
          out.constraints.push_back(Constraint{l, r, "parsed"});
          skip_ws();
          if (try_char('}')) break;
          if (!try_char(',')) fail("expected ',' or '}' in constraint set");
        }
      }
    }
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input in scheme");
    // Classify quantified names by how they are used.
    VarSet used;
    free_vars(out.body, used);
    for (const auto& c : out.constraints) {
      free_vars(c.lhs, used);
      free_vars(c.rhs, used);
    }
    for (const auto& q : quantified) {
      if (used.has_topo(q) && topo_vars_.count(q))
        out.topo_vars.push_back(q);
      else
        out.type_vars.push_back(q);
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw TypeSyntaxError(msg + " at offset " + std::to_string(pos_) +
                          " in \"" + s_ + "\"");
  }

  void skip_ws() {
    while (pos_ < s_.size() &&
           std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool try_char(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool peek_char(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  bool try_word(const std::string& w) {
    skip_ws();
    if (s_.compare(pos_, w.size(), w) == 0) {
      size_t end = pos_ + w.size();
      if (end == s_.size() ||
          !(std::isalnum(static_cast<unsigned char>(s_[end])) ||
            s_[end] == '_')) {
        pos_ = end;
        return true;
      }
    }
    return false;
  }

  std::string ident() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
            s_[pos_] == '_' || s_[pos_] == '\''))
      ++pos_;
    if (start == pos_) fail("expected identifier");
    return s_.substr(start, pos_ - start);
  }

  TypePtr arrow() {
    TypePtr l = union_type();
    skip_ws();
    if (pos_ + 1 < s_.size() && s_[pos_] == '-' && s_[pos_ + 1] == '>') {
      pos_ += 2;
      return t_arrow(l, arrow());
    }
    return l;
  }

  TypePtr union_type() {
    std::vector<TypePtr> parts{cond()};
    while (peek_char('|')) {
      ++pos_;
      parts.push_back(cond());
    }
    return parts.size() == 1 ? parts[0] : t_union(std::move(parts));
  }

  TypePtr cond() {
    TypePtr v = inter();
    if (peek_char('?')) {
      ++pos_;
      return t_cond(v, cond());
    }
    return v;
  }

  TypePtr inter() {
    std::vector<TypePtr> parts{atom()};
    while (peek_char('&')) {
      ++pos_;
      parts.push_back(atom());
    }
    return parts.size() == 1 ? parts[0] : t_inter(std::move(parts));
  }

  TypePtr atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of type");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      TypePtr t = arrow();
      if (!try_char(')')) fail("expected ')'");
      return t;
    }
    if (c == '[') {
      ++pos_;
      std::string name = ident();
      Topology topo;
      if (auto sym = topo_from_name(name)) {
        topo = Topology::symbol(*sym);
      } else {
        topo = Topology::variable(name);
        topo_vars_.insert(name);
      }
      if (!try_char(']')) fail("expected ']'");
      return t_coll(topo, atom());
    }
    if (c == '0') {
      ++pos_;
      return t_zero();
    }
    if (c == '1') {
      ++pos_;
      return t_one();
    }
    std::string name = ident();
    if (auto b = base_from_name(name)) return t_base(*b);
    return t_var(name);
  }

  const std::string& s_;
  size_t pos_ = 0;
  std::set<std::string> topo_vars_;
};

}  // namespace

TypePtr parse_type(const std::string& text) {
  return TypeParser(text).parse_full_type();
}

TypeScheme parse_scheme(const std::string& text) {
  return TypeParser(text).parse_full_scheme();
}

// ---------------------------------------------------------------------------
// Alpha renaming and equality

static void occurrence_order(const TypePtr& t, std::vector<std::string>& tv,
                             std::vector<std::string>& pv) {
  VarSet vars;
  free_vars(t, vars);
  for (const auto& v : vars.type_vars)
    if (std::find(tv.begin(), tv.end(), v) == tv.end()) tv.push_back(v);
  for (const auto& v : vars.topo_vars)
    if (std::find(pv.begin(), pv.end(), v) == pv.end()) pv.push_back(v);
}

static std::string presentation_type_name(size_t i) {
  // a, b, c, ..., skipping t-like letters used by topologies.
  static const char* names = "abcdefghijklmnopqrs";
  if (i < 19) return std::string(1, names[i]);
  return "a" + std::to_string(i - 18);
}

static std::string presentation_topo_name(size_t i) {
  static const char* names = "tuvw";
  if (i < 4) return std::string(1, names[i]);
  return "t" + std::to_string(i - 3);
}

TypeScheme canonical_scheme(const TypeScheme& s) {
  std::vector<std::string> tv, pv;
  occurrence_order(s.body, tv, pv);
  for (const auto& c : s.constraints) {
    occurrence_order(c.lhs, tv, pv);
    occurrence_order(c.rhs, tv, pv);
  }
  Substitution rename;
  TypeScheme out;
  size_t ti = 0, pi = 0;
  for (const auto& v : tv) {
    if (std::find(s.type_vars.begin(), s.type_vars.end(), v) ==
        s.type_vars.end())
      continue;
    std::string nv = presentation_type_name(ti++);
    rename.type_map[v] = t_var(nv);
    out.type_vars.push_back(nv);
  }
  for (const auto& v : pv) {
    if (std::find(s.topo_vars.begin(), s.topo_vars.end(), v) ==
        s.topo_vars.end())
      continue;
    std::string nv = presentation_topo_name(pi++);
    rename.topo_map[v] = Topology::variable(nv);
    out.topo_vars.push_back(nv);
  }
  out.body = apply_subst(rename, s.body);
  for (const auto& c : s.constraints)
    out.constraints.push_back(
        Constraint{apply_subst(rename, c.lhs), apply_subst(rename, c.rhs), c.origin});
  return out;
}

namespace {

struct AlphaEnv {
  std::map<std::string, std::string> fwd, bwd;
  std::map<std::string, std::string> topo_fwd, topo_bwd;

  bool match_type(const std::string& a, const std::string& b) {
    auto f = fwd.find(a);
    auto g = bwd.find(b);
    if (f == fwd.end() && g == bwd.end()) {
      fwd[a] = b;
      bwd[b] = a;
      return true;
    }
    return f != fwd.end() && f->second == b && g != bwd.end() && g->second == a;
  }
  bool match_topo(const std::string& a, const std::string& b) {
    auto f = topo_fwd.find(a);
    auto g = topo_bwd.find(b);
    if (f == topo_fwd.end() && g == topo_bwd.end()) {
      topo_fwd[a] = b;
      topo_bwd[b] = a;
      return true;
    }
    return f != topo_fwd.end() && f->second == b && g != topo_bwd.end() &&
           g->second == a;
  }
};

bool alpha_eq(const TypePtr& a, const TypePtr& b, AlphaEnv& env) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TypeKind::Base:
      return a->base == b->base;
    case TypeKind::Zero:
    case TypeKind::One:
      return true;
    case TypeKind::Var:
      return env.match_type(a->var, b->var);
    case TypeKind::Arrow:
      return alpha_eq(a->from, b->from, env) && alpha_eq(a->to, b->to, env);
    case TypeKind::Coll: {
      if (a->topo.is_var() != b->topo.is_var()) return false;
      if (a->topo.is_var()) {
        if (!env.match_topo(a->topo.var, b->topo.var)) return false;
      } else if (a->topo.sym != b->topo.sym) {
        return false;
      }
      return alpha_eq(a->elem, b->elem, env);
    }
    case TypeKind::Union:
    case TypeKind::Inter: {
      if (a->parts.size() != b->parts.size()) return false;
      // Operand lists are canonically sorted, but renaming can reorder;
      // try to match parts greedily with backtracking on small lists.
      std::vector<bool> used(b->parts.size(), false);
      std::function<bool(size_t, AlphaEnv&)> match = [&](size_t i,
                                                         AlphaEnv& e) -> bool {
        if (i == a->parts.size()) return true;
        for (size_t j = 0; j < b->parts.size(); ++j) {
          if (used[j]) continue;
          AlphaEnv saved = e;
          if (alpha_eq(a->parts[i], b->parts[j], e)) {
            used[j] = true;
            if (match(i + 1, e)) return true;
            used[j] = false;
          }
          e = saved;
        }
        return false;
      };
      return match(0, env);
    }
    case TypeKind::Cond:
      return alpha_eq(a->value, b->value, env) &&
             alpha_eq(a->guard, b->guard, env);
  }
  return false;
}

}  // namespace

bool type_alpha_equal(const TypePtr& a, const TypePtr& b) {
  AlphaEnv env;
  return alpha_eq(normalize(a), normalize(b), env);
}

bool scheme_alpha_equal(const TypeScheme& a, const TypeScheme& b) {
  if (a.type_vars.size() != b.type_vars.size() ||
      a.topo_vars.size() != b.topo_vars.size() ||
      a.constraints.size() != b.constraints.size())
    return false;
  AlphaEnv env;
  if (!alpha_eq(normalize(a.body), normalize(b.body), env)) return false;
  for (size_t i = 0; i < a.constraints.size(); ++i) {
    if (!alpha_eq(normalize(a.constraints[i].lhs),
                  normalize(b.constraints[i].lhs), env) ||
        !alpha_eq(normalize(a.constraints[i].rhs),
                  normalize(b.constraints[i].rhs), env))
      return false;
  }
  return true;
}

}  // namespace topo
