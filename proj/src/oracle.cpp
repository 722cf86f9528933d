#include "topo/oracle.hpp"

#include <algorithm>
#include <functional>
#include <random>

namespace topo {

namespace {

Collection make_store(TopoSym topo, std::vector<ValuePtr> items) {
  Collection c;
  c.topo = topo;
  if (topo == TopoSym::Set) {
    for (const auto& v : items) {
      bool dup = false;
      for (const auto& w : c.items) dup = dup || value_equal(v, w);
      if (!dup) c.items.push_back(v);
    }
  } else {
    c.items = std::move(items);
  }
  return c;
}

Collection make_grid(const std::vector<Coord>& shape,
                     const std::vector<ValuePtr>& items) {
  Collection c;
  c.topo = TopoSym::Grid;
  for (size_t i = 0; i < shape.size(); ++i) c.grid.cells[shape[i]] = items[i];
  if (!c.grid.cells.empty()) c.grid.cursor = c.grid.cells.rbegin()->first;
  return c;
}

// All tuples of the given length over a pool, visited in pool order.
void for_tuples(const std::vector<ValuePtr>& pool, size_t len,
                const std::function<void(const std::vector<ValuePtr>&)>& f) {
  if (len == 0) return;
  std::vector<size_t> idx(len, 0);
  std::vector<ValuePtr> tuple(len);
  while (true) {
    for (size_t i = 0; i < len; ++i) tuple[i] = pool[idx[i]];
    f(tuple);
    size_t k = 0;
    while (k < len) {
      if (++idx[k] < pool.size()) break;
      idx[k] = 0;
      ++k;
    }
    if (k == len) break;
  }
}

FiniteUniverse build_standard() {
  FiniteUniverse u;
  std::vector<ValuePtr> atoms = {v_int(0),     v_int(1),      v_int(2),
                                 v_bool(false), v_bool(true),  v_float(0.5),
                                 v_float(1.5), v_string(""),  v_string("a")};
  for (const auto& a : atoms) u.values.push_back(a);

  const TopoSym topos[] = {TopoSym::Seq, TopoSym::Set, TopoSym::Bag,
                           TopoSym::Grid};
  const std::vector<std::vector<Coord>> grid_shapes = {
      {Coord{0, 0}},
      {Coord{0, 0}, Coord{1, 0}},
      {Coord{0, 0}, Coord{0, 1}},
      {Coord{0, 0}, Coord{1, 0}, Coord{0, 1}}};

  for (TopoSym t : topos) {
    Collection c;
    c.topo = t;
    u.values.push_back(v_coll(std::move(c)));  // empty collection
  }

  // Depth-1 collections: all singletons and pairs over the atoms, plus a
  // sampled batch of triples.
  std::vector<ValuePtr> depth1;
  std::mt19937 rng(12345);
  for (TopoSym t : topos) {
    if (t == TopoSym::Grid) {
      for (const auto& shape : grid_shapes) {
        if (shape.size() > 2) continue;
        for_tuples(atoms, shape.size(), [&](const std::vector<ValuePtr>& tup) {
          depth1.push_back(v_coll(make_grid(shape, tup)));
        });
      }
      for (int k = 0; k < 24; ++k) {
        std::vector<ValuePtr> tup;
        for (int j = 0; j < 3; ++j) tup.push_back(atoms[rng() % atoms.size()]);
        depth1.push_back(v_coll(make_grid(grid_shapes[3], tup)));
      }
      continue;
    }
    for (size_t len = 1; len <= 2; ++len) {
      for_tuples(atoms, len, [&](const std::vector<ValuePtr>& tup) {
        depth1.push_back(v_coll(make_store(t, tup)));
      });
    }
    for (int k = 0; k < 24; ++k) {
      std::vector<ValuePtr> tup;
      for (int j = 0; j < 3; ++j) tup.push_back(atoms[rng() % atoms.size()]);
      depth1.push_back(v_coll(make_store(t, tup)));
    }
  }
  for (const auto& v : depth1) u.values.push_back(v);

  // Depth-2 samples: collections mixing atoms and depth-1 collections.
  std::vector<ValuePtr> pool = atoms;
  for (size_t i = 0; i < depth1.size(); i += 7) pool.push_back(depth1[i]);
  for (int k = 0; k < 120; ++k) {
    TopoSym t = topos[rng() % 4];
    size_t len = 1 + rng() % 3;
    std::vector<ValuePtr> tup;
    for (size_t j = 0; j < len; ++j) tup.push_back(pool[rng() % pool.size()]);
    if (t == TopoSym::Grid)
      u.values.push_back(v_coll(make_grid(grid_shapes[len - 1], tup)));
    else
      u.values.push_back(v_coll(make_store(t, tup)));
  }
  return u;
}

}  // namespace

const FiniteUniverse& FiniteUniverse::standard() {
  static FiniteUniverse u = build_standard();
  return u;
}

namespace {

using NonemptyMemo = std::map<TypePtr, bool, TypeLess>;

bool member_impl(const ValuePtr& v, const TypePtr& t, const FiniteUniverse& u,
                 NonemptyMemo& memo);

bool nonempty_impl(const TypePtr& t, const FiniteUniverse& u,
                   NonemptyMemo& memo) {
  auto it = memo.find(t);
  if (it != memo.end()) return it->second;
  memo[t] = false;  // guards self-reference during the scan
  bool found = false;
  for (const auto& v : u.values) {
    if (!is_first_order(v)) continue;
    if (member_impl(v, t, u, memo)) {
      found = true;
      break;
    }
  }
  memo[t] = found;
  return found;
}

bool member_impl(const ValuePtr& v, const TypePtr& t, const FiniteUniverse& u,
                 NonemptyMemo& memo) {
  if (!is_first_order(v))
    throw UnsupportedValue(
        "membership of closures is not decided by the oracle");
  switch (t->kind) {
    case TypeKind::Zero:
      return false;
    case TypeKind::One:
      return true;
    case TypeKind::Base:
      switch (t->base) {
        case BaseType::Int: return v->kind == ValueKind::Int;
        case BaseType::Bool: return v->kind == ValueKind::Bool;
        case BaseType::Float: return v->kind == ValueKind::Float;
        case BaseType::String: return v->kind == ValueKind::String;
      }
      return false;
    case TypeKind::Var:
      throw UnsupportedValue("membership needs a ground type; variable '" +
                             t->var + "' is unbound");
    case TypeKind::Arrow:
      return false;  // first-order values are never functions
    case TypeKind::Union:
      for (const auto& p : t->parts)
        if (member_impl(v, p, u, memo)) return true;
      return false;
    case TypeKind::Inter:
      for (const auto& p : t->parts)
        if (!member_impl(v, p, u, memo)) return false;
      return true;
    case TypeKind::Cond:
      if (!nonempty_impl(t->guard, u, memo)) return false;
      return member_impl(v, t->value, u, memo);
    case TypeKind::Coll: {
      if (v->kind != ValueKind::Coll) return false;
      if (t->topo.is_var())
        throw UnsupportedValue("membership needs a ground topology");
      if (v->coll->topo != t->topo.sym) return false;
      if (v->coll->topo == TopoSym::Grid) {
        for (const auto& [c, e] : v->coll->grid.cells)
          if (!member_impl(e, t->elem, u, memo)) return false;
        return true;
      }
      for (const auto& e : v->coll->items)
        if (!member_impl(e, t->elem, u, memo)) return false;
      return true;
    }
  }
  return false;
}

}  // namespace

bool member(const ValuePtr& v, const TypePtr& t, const Substitution& s,
            const FiniteUniverse& u) {
  NonemptyMemo memo;
  return member_impl(v, apply_subst(s, t), u, memo);
}

bool nonempty_in(const TypePtr& t, const FiniteUniverse& u) {
  NonemptyMemo memo;
  return nonempty_impl(t, u, memo);
}

std::vector<bool> member_set(const TypePtr& t, const FiniteUniverse& u) {
  NonemptyMemo memo;
  std::vector<bool> out(u.values.size(), false);
  for (size_t i = 0; i < u.values.size(); ++i) {
    if (!is_first_order(u.values[i])) continue;
    out[i] = member_impl(u.values[i], t, u, memo);
  }
  return out;
}

bool subset_in(const TypePtr& lhs, const TypePtr& rhs,
               const FiniteUniverse& u) {
  NonemptyMemo memo;
  for (const auto& v : u.values) {
    if (!is_first_order(v)) continue;
    if (member_impl(v, lhs, u, memo) && !member_impl(v, rhs, u, memo))
      return false;
  }
  return true;
}

const std::vector<TypePtr>& ground_type_menu() {
  static const std::vector<TypePtr> menu = [] {
    std::vector<TypePtr> m;
    auto coll = [](TopoSym t, TypePtr e) {
      return t_coll(Topology::symbol(t), std::move(e));
    };
    m.push_back(t_zero());
    m.push_back(t_one());
    m.push_back(t_int());
    m.push_back(t_bool());
    m.push_back(t_float());
    m.push_back(t_string());
    m.push_back(t_union(t_int(), t_bool()));
    m.push_back(t_union(t_int(), t_float()));
    m.push_back(coll(TopoSym::Seq, t_int()));
    m.push_back(coll(TopoSym::Set, t_int()));
    m.push_back(coll(TopoSym::Set, t_union(t_int(), t_bool())));
    m.push_back(coll(TopoSym::Bag, t_bool()));
    m.push_back(coll(TopoSym::Grid, t_int()));
    m.push_back(coll(TopoSym::Seq, coll(TopoSym::Seq, t_int())));
    return m;
  }();
  return menu;
}

}  // namespace topo
