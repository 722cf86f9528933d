#include "topo/solver.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>

namespace topo {

namespace {

struct Contradiction {
  Constraint failing;
  int trace_id;
};

struct PairLess {
  bool operator()(const std::pair<TypePtr, TypePtr>& a,
                  const std::pair<TypePtr, TypePtr>& b) const {
    int c = compare(a.first, b.first);
    if (c != 0) return c < 0;
    return compare(a.second, b.second) < 0;
  }
};

bool has_type(const std::vector<TypePtr>& v, const TypePtr& t) {
  for (const auto& x : v)
    if (equal(x, t)) return true;
  return false;
}

class Solver {
 public:
  SolveResult run(const ConstraintSet& constraints) {
    try {
      prescan(constraints);
      for (size_t i = 0; i < constraints.size(); ++i) {
        if (skip_.count(i)) continue;
        const Constraint& c = constraints[i];
        int id = trace_root(c);
        process(c.lhs, c.rhs, id);
      }
      extract();
      resolve_pendings();
      build_residuals();
    } catch (const Contradiction& c) {
      VerdictUnsolvable v;
      v.failing = c.failing;
      for (int id = c.trace_id; id >= 0; id = trace_parent_[id])
        v.trace.push_back(trace_desc_[id]);
      std::reverse(v.trace.begin(), v.trace.end());
      return v;
    }
    return std::move(form_);
  }

 private:
  // --- trace -------------------------------------------------------------

  int trace_add(const std::string& desc, int parent) {
    trace_desc_.push_back(desc);
    trace_parent_.push_back(parent);
    return static_cast<int>(trace_desc_.size()) - 1;
  }

  int trace_root(const Constraint& c) {
    return trace_add(pretty(c.lhs) + " <: " + pretty(c.rhs) +
                         (c.origin.empty() ? "" : "  (" + c.origin + ")"),
                     -1);
  }

  [[noreturn]] void contradict(const TypePtr& l, const TypePtr& r, int id,
                               const std::string& why) {
    int leaf = trace_add("contradiction: " + pretty(l) + " <: " + pretty(r) +
                             " — " + why,
                         id);
    throw Contradiction{Constraint{l, r, why}, leaf};
  }

  // --- pre-pass ------------------------------------------------------------

  void prescan(const ConstraintSet& cs) {
    // Intersections of arrow types may not appear on a constraint lhs.
    for (const auto& c : cs) {
      TypePtr l = normalize(c.lhs);
      if (l->kind == TypeKind::Inter) {
        int arrows = 0;
        for (const auto& p : l->parts)
          if (p->kind == TypeKind::Arrow) ++arrows;
        if (arrows >= 2)
          throw NotInductiveError(
              "intersection of arrow types on a constraint lhs: " + pretty(l));
      }
    }
    // Explicit equality loops define recursive types.
    for (size_t i = 0; i < cs.size(); ++i) {
      for (size_t j = i + 1; j < cs.size(); ++j) {
        if (skip_.count(i) || skip_.count(j)) continue;
        const auto& a = cs[i];
        const auto& b = cs[j];
        if (equal(a.lhs, b.rhs) && equal(a.rhs, b.lhs)) {
          const TypePtr& va = a.lhs->kind == TypeKind::Var ? a.lhs : a.rhs;
          const TypePtr& ta = a.lhs->kind == TypeKind::Var ? a.rhs : a.lhs;
          if (va->kind == TypeKind::Var && ta->kind != TypeKind::Var &&
              contains_type_var(ta, va->var)) {
            form_.recursive[va->var] = ta;
            skip_.insert(i);
            skip_.insert(j);
          }
        }
      }
    }
  }

  // --- topology unification ------------------------------------------------

  Topology topo_resolve(Topology t) const {
    while (t.is_var()) {
      auto it = topo_sub_.topo_map.find(t.var);
      if (it == topo_sub_.topo_map.end()) break;
      t = it->second;
    }
    return t;
  }

  void topo_unify(const Topology& a, const Topology& b, const TypePtr& l,
                  const TypePtr& r, int id) {
    Topology ra = topo_resolve(a);
    Topology rb = topo_resolve(b);
    if (ra == rb) return;
    if (ra.is_var()) {
      topo_sub_.topo_map[ra.var] = rb;
      return;
    }
    if (rb.is_var()) {
      topo_sub_.topo_map[rb.var] = ra;
      return;
    }
    contradict(l, r, id,
               std::string("topology clash ") + name_of(ra.sym) + " vs " +
                   name_of(rb.sym));
  }

  // --- saturation ----------------------------------------------------------

  void process(const TypePtr& raw_l, const TypePtr& raw_r, int parent) {
    TypePtr l = normalize(apply_subst(topo_sub_, raw_l));
    TypePtr r = normalize(apply_subst(topo_sub_, raw_r));
    auto key = std::make_pair(l, r);
    if (!memo_.insert(key).second) return;
    int id = trace_add(pretty(l) + " <: " + pretty(r), parent);

    if (equal(l, r)) return;
    if (is_empty(l) == Emptiness::True) return;
    if (r->kind == TypeKind::One) return;

    if (l->kind == TypeKind::Union) {
      for (const auto& p : l->parts) process(p, r, id);
      return;
    }
    if (r->kind == TypeKind::Inter) {
      for (const auto& p : r->parts) process(l, p, id);
      return;
    }
    if (l->kind == TypeKind::Cond) {
      Emptiness ge = is_empty(l->guard);
      if (ge == Emptiness::True) return;
      if (ge == Emptiness::False && is_ground(l->guard)) {
        process(l->value, r, id);
        return;
      }
      if (r->kind == TypeKind::Var) {
        if (tautology_discharge(l, r, id)) return;
        add_guarded(r->var, l->guard, l->value, id);
        return;
      }
      pendings_.push_back(Pending{l->guard, l->value, r, id});
      return;
    }
    if (l->kind == TypeKind::Var) {
      if (r->kind == TypeKind::Var) {
        add_edge(l->var, r->var, id);
        return;
      }
      add_upper(l->var, r, id);
      return;
    }
    if (r->kind == TypeKind::Var) {
      if (contains_type_var(l, r->var)) {
        if (form_.recursive.count(r->var)) return;  // covered by the binding
        throw NotInductiveError("self-referential bound " + pretty(l) +
                                " <: " + r->var +
                                " outside an explicit equality");
      }
      add_lower(r->var, l, id);
      return;
    }
    check_nonvar(l, r, id);
  }

  // (bound ? (a & B)) <: a holds for every a: base types are atomic, so a
  // nonempty a & B forces B below a.
  bool tautology_discharge(const TypePtr& cond, const TypePtr& rvar, int id) {
    const TypePtr& g = cond->guard;
    if (g->kind != TypeKind::Inter || g->parts.size() != 2) return false;
    TypePtr base, var;
    for (const auto& p : g->parts) {
      if (p->kind == TypeKind::Base) base = p;
      if (p->kind == TypeKind::Var) var = p;
    }
    if (!base || !var || var->var != rvar->var) return false;
    if (!sub_structural(cond->value, base)) return false;
    form_.residual.push_back("tautology: " + pretty(cond) +
                             " <: " + pretty(rvar));
    trace_add("discharged as tautology", id);
    return true;
  }

  void check_nonvar(const TypePtr& l, const TypePtr& r, int id) {
    if (sub_structural(l, r)) return;
    switch (r->kind) {
      case TypeKind::Zero: {
        Emptiness e = is_empty(l);
        if (e == Emptiness::Unknown) {
          pendings_.push_back(Pending{l, l, r, id});
          return;
        }
        contradict(l, r, id, "a nonempty type is not below 0");
      }
      case TypeKind::Cond: {
        Emptiness ge = is_empty(r->guard);
        if (ge == Emptiness::False && is_ground(r->guard)) {
          process(l, r->value, id);
          return;
        }
        if (ge == Emptiness::True)
          contradict(l, r, id, "rhs conditional is empty");
        throw NotInductiveError("undecided conditional on a constraint rhs: " +
                                pretty(r));
      }
      case TypeKind::Union: {
        // Commit to the unique branch whose head can accept the lhs.
        std::vector<TypePtr> fits;
        for (const auto& p : r->parts)
          if (head_compatible(l, p)) fits.push_back(p);
        if (fits.size() == 1) {
          process(l, fits[0], id);
          return;
        }
        if (fits.empty())
          contradict(l, r, id, "no union branch accepts the lhs");
        throw NotInductiveError(
            "ambiguous union on a constraint rhs: " + pretty(l) +
            " <: " + pretty(r));
      }
      default:
        break;
    }
    switch (l->kind) {
      case TypeKind::Inter:
        // e.g. a & int <: bool — decidable only once a is solved.
        pendings_.push_back(Pending{l, l, r, id});
        return;
      case TypeKind::Coll:
        if (r->kind == TypeKind::Coll) {
          topo_unify(l->topo, r->topo, l, r, id);
          process(l->elem, r->elem, id);
          return;
        }
        contradict(l, r, id, "a collection is only below collection types");
      case TypeKind::Arrow:
        if (r->kind == TypeKind::Arrow) {
          process(r->from, l->from, id);
          process(l->to, r->to, id);
          return;
        }
        contradict(l, r, id, "a function is only below arrow types");
      case TypeKind::Base:
        contradict(l, r, id, "base type mismatch");
      case TypeKind::One:
        contradict(l, r, id, "1 is only below 1");
      default:
        contradict(l, r, id, "no rewrite applies");
    }
  }

  bool head_compatible(const TypePtr& l, const TypePtr& branch) const {
    if (branch->kind == TypeKind::Var) return true;
    if (branch->kind == TypeKind::One) return true;
    if (l->kind != branch->kind) return false;
    if (l->kind == TypeKind::Base) return l->base == branch->base;
    if (l->kind == TypeKind::Coll) {
      Topology a = topo_resolve(l->topo);
      Topology b = topo_resolve(branch->topo);
      return a.is_var() || b.is_var() || a == b;
    }
    return true;
  }

  void add_edge(const std::string& a, const std::string& b, int id) {
    if (a == b) return;
    if (!edges_[a].insert(b).second) return;
    trace_add("edge " + a + " <: " + b, id);
    for (const auto& lb : bounds_[a].lowers) add_lower(b, lb, id);
    for (const auto& [g, bd] : bounds_[a].guarded) add_guarded(b, g, bd, id);
  }

  void add_lower(const std::string& v, const TypePtr& t, int id) {
    auto& b = bounds_[v];
    if (has_type(b.lowers, t)) return;
    b.lowers.push_back(t);
    for (const auto& u : b.uppers) process(t, u, id);
    for (const auto& succ : edges_[v]) add_lower(succ, t, id);
  }

  void add_guarded(const std::string& v, const TypePtr& g, const TypePtr& bd,
                   int id) {
    auto& b = bounds_[v];
    for (const auto& [g0, b0] : b.guarded)
      if (equal(g0, g) && equal(b0, bd)) return;
    b.guarded.emplace_back(g, bd);
    for (const auto& u : b.uppers) pendings_.push_back(Pending{g, bd, u, id});
    for (const auto& succ : edges_[v]) add_guarded(succ, g, bd, id);
  }

  void add_upper(const std::string& v, const TypePtr& t, int id) {
    auto& b = bounds_[v];
    if (has_type(b.uppers, t)) return;
    b.uppers.push_back(t);
    for (const auto& lb : b.lowers) process(lb, t, id);
    for (const auto& [g, bd] : b.guarded)
      pendings_.push_back(Pending{g, bd, t, id});
  }

  // --- extraction ----------------------------------------------------------

  void compute_sccs() {
    // Tarjan over the edge graph; every variable in one component is equal.
    std::map<std::string, int> index, low;
    std::vector<std::string> stack;
    std::set<std::string> on_stack;
    int next = 0;
    std::function<void(const std::string&)> strong =
        [&](const std::string& v) {
          index[v] = low[v] = next++;
          stack.push_back(v);
          on_stack.insert(v);
          for (const auto& w : edges_[v]) {
            if (!index.count(w)) {
              strong(w);
              low[v] = std::min(low[v], low[w]);
            } else if (on_stack.count(w)) {
              low[v] = std::min(low[v], index[w]);
            }
          }
          if (low[v] == index[v]) {
            std::vector<std::string> comp;
            while (true) {
              std::string w = stack.back();
              stack.pop_back();
              on_stack.erase(w);
              comp.push_back(w);
              if (w == v) break;
            }
            std::string rep = *std::min_element(comp.begin(), comp.end());
            for (const auto& w : comp)
              if (w != rep) form_.var_rep[w] = rep;
          }
        };
    std::vector<std::string> all;
    for (const auto& [v, e] : edges_) {
      all.push_back(v);
      for (const auto& w : e)
        all.push_back(w);
    }
    for (const auto& [v, b] : bounds_) all.push_back(v);
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    for (const auto& v : all)
      if (!index.count(v)) strong(v);
  }

  TypePtr least_subst(const TypePtr& t) {
    return normalize(apply_subst(least_sub_, apply_subst(topo_sub_, t)));
  }

  // A union term is dropped when another term already covers it; the
  // conditional-vs-variable case uses base-type atomicity.
  static bool absorbed(const TypePtr& t, const TypePtr& by) {
    if (equal(t, by)) return true;
    if (sub_structural(t, by)) return true;
    if (t->kind == TypeKind::Cond && by->kind == TypeKind::Var) {
      const TypePtr& g = t->guard;
      if (g->kind == TypeKind::Inter && g->parts.size() == 2) {
        TypePtr base, var;
        for (const auto& p : g->parts) {
          if (p->kind == TypeKind::Base) base = p;
          if (p->kind == TypeKind::Var) var = p;
        }
        if (base && var && var->var == by->var &&
            sub_structural(t->value, base))
          return true;
      }
    }
    return false;
  }

  void extract() {
    compute_sccs();

    // Merge bounds into representatives.
    std::map<std::string, SolvedForm::VarBounds> merged;
    std::map<std::string, std::set<std::string>> preds;  // rep -> rep sources
    for (const auto& [v, b] : bounds_) {
      auto& m = merged[form_.rep(v)];
      for (const auto& t : b.lowers)
        if (!has_type(m.lowers, t)) m.lowers.push_back(t);
      for (const auto& [g, bd] : b.guarded) {
        bool dup = false;
        for (const auto& [g0, b0] : m.guarded)
          dup = dup || (equal(g0, g) && equal(b0, bd));
        if (!dup) m.guarded.emplace_back(g, bd);
      }
      for (const auto& t : b.uppers)
        if (!has_type(m.uppers, t)) m.uppers.push_back(t);
    }
    for (const auto& [a, succs] : edges_) {
      for (const auto& b : succs) {
        std::string ra = form_.rep(a), rb = form_.rep(b);
        if (ra != rb) preds[rb].insert(ra);
      }
    }
    for (const auto& [v, s] : preds)
      if (!merged.count(v)) merged[v];

    // Dependency order: a variable needs its predecessors and every variable
    // mentioned in its bounds.
    std::map<std::string, std::set<std::string>> deps;
    for (const auto& [v, b] : merged) {
      auto& d = deps[v];
      for (const auto& p : preds[v]) d.insert(p);
      auto add_mentioned = [&](const TypePtr& t) {
        VarSet vs;
        free_vars(t, vs);
        for (const auto& w : vs.type_vars) {
          std::string rw = form_.rep(w);
          if (rw != v && (merged.count(rw) || form_.recursive.count(rw)))
            d.insert(rw);
        }
      };
      for (const auto& t : b.lowers) add_mentioned(t);
      for (const auto& [g, bd] : b.guarded) {
        add_mentioned(g);
        add_mentioned(bd);
      }
    }

    std::vector<std::string> order;
    std::set<std::string> done, visiting;
    std::function<void(const std::string&)> visit = [&](const std::string& v) {
      if (done.count(v)) return;
      if (form_.recursive.count(v)) {
        done.insert(v);
        return;
      }
      if (!visiting.insert(v).second)
        throw NotInductiveError("cyclic bounds through variable " + v);
      for (const auto& d : deps[v]) visit(d);
      visiting.erase(v);
      done.insert(v);
      order.push_back(v);
    };
    for (const auto& [v, b] : merged) visit(v);

    for (const auto& v : order) {
      const auto& b = merged[v];
      std::vector<TypePtr> terms;
      for (const auto& t : b.lowers) terms.push_back(least_subst(t));
      for (const auto& p : preds[v]) {
        auto it = form_.least.find(p);
        terms.push_back(it != form_.least.end() ? it->second : t_var(p));
      }
      for (const auto& [g, bd] : b.guarded) {
        TypePtr g2 = least_subst(g);
        TypePtr b2 = least_subst(bd);
        Emptiness ge = is_empty(g2);
        if (ge == Emptiness::True) continue;
        if (g2->kind == TypeKind::Var || (ge == Emptiness::False && is_ground(g2)))
          terms.push_back(b2);
        else
          terms.push_back(t_cond(b2, g2));
      }
      // Absorption.
      std::vector<TypePtr> kept;
      for (size_t i = 0; i < terms.size(); ++i) {
        bool drop = false;
        for (size_t j = 0; j < terms.size() && !drop; ++j) {
          if (i == j) continue;
          if (absorbed(terms[i], terms[j])) {
            // Tie-break mutually absorbing (equal) terms by index.
            drop = !absorbed(terms[j], terms[i]) || j < i;
          }
        }
        if (!drop) kept.push_back(terms[i]);
      }
      if (kept.empty()) {
        form_.least[v] = t_var(v);
        continue;
      }
      TypePtr sol = normalize(t_union(std::move(kept)));
      form_.least[v] = sol;
      if (!(sol->kind == TypeKind::Var && sol->var == v))
        least_sub_.type_map[v] = sol;
    }
    // Non-representative variables resolve to their representative's value.
    for (const auto& [v, rep] : form_.var_rep) {
      auto it = form_.least.find(rep);
      TypePtr val = it != form_.least.end() ? it->second : t_var(rep);
      form_.least[v] = val;
      least_sub_.type_map[v] = val;
    }
    form_.vars = std::move(merged);
    form_.topo = topo_sub_.topo_map;
    for (auto& [v, t] : form_.topo) t = topo_resolve(t);
  }

  void resolve_pendings() {
    for (const auto& p : pendings_) {
      TypePtr g = least_subst(p.guard);
      TypePtr b = least_subst(p.bound);
      TypePtr u = least_subst(p.upper);
      Emptiness ge = is_empty(g);
      if (ge == Emptiness::True) {
        form_.residual.push_back("vacuous: guard " + pretty(g) + " is empty");
        continue;
      }
      if (sub_structural(b, u)) {
        form_.residual.push_back("checked: " + pretty(b) + " <: " + pretty(u));
        continue;
      }
      if (ge == Emptiness::False) {
        int leaf = trace_add("deferred check failed: " + pretty(b) +
                                 " <: " + pretty(u) + " with nonempty guard " +
                                 pretty(g),
                             p.trace_id);
        throw Contradiction{Constraint{t_cond(p.bound, p.guard), p.upper, ""},
                            leaf};
      }
      throw NotInductiveError("guard " + pretty(g) +
                              " undecided against bound " + pretty(u));
    }
  }

  void build_residuals() {
    for (const auto& [v, b] : form_.vars) {
      TypePtr lhs = form_.least.count(v) ? form_.least.at(v) : t_var(v);
      for (const auto& u : b.uppers) {
        TypePtr ru = least_subst(u);
        if (sub_structural(lhs, ru)) continue;
        form_.residual_constraints.push_back(
            Constraint{t_var(v), ru, "residual upper bound"});
      }
    }
    for (const auto& [v, t] : form_.recursive) {
      form_.residual_constraints.push_back(
          Constraint{t_var(v), t, "recursive binding"});
      form_.residual_constraints.push_back(
          Constraint{t, t_var(v), "recursive binding"});
    }
  }

  struct Pending {
    TypePtr guard, bound, upper;
    int trace_id;
  };

  SolvedForm form_;
  std::map<std::string, SolvedForm::VarBounds> bounds_;
  std::map<std::string, std::set<std::string>> edges_;
  Substitution topo_sub_;
  Substitution least_sub_;
  std::set<std::pair<TypePtr, TypePtr>, PairLess> memo_;
  std::vector<Pending> pendings_;
  std::set<size_t> skip_;
  std::vector<std::string> trace_desc_;
  std::vector<int> trace_parent_;
};

}  // namespace

SolveResult solve(const ConstraintSet& constraints) {
  Solver s;
  return s.run(constraints);
}

Substitution least_solution(const SolvedForm& f,
                            const std::vector<std::string>& target_type_vars) {
  Substitution s;
  for (const auto& v : target_type_vars) {
    std::string rep = f.rep(v);
    auto it = f.least.find(rep);
    TypePtr val = it != f.least.end() ? it->second : t_var(rep);
    if (!(val->kind == TypeKind::Var && val->var == v)) s.type_map[v] = val;
  }
  for (const auto& [v, t] : f.topo)
    if (!t.is_var() || t.var != v) s.topo_map[v] = t;
  return s;
}

namespace {

bool contains_arrow(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Arrow:
      return true;
    case TypeKind::Coll:
      return contains_arrow(t->elem);
    case TypeKind::Union:
    case TypeKind::Inter:
      for (const auto& p : t->parts)
        if (contains_arrow(p)) return true;
      return false;
    case TypeKind::Cond:
      return contains_arrow(t->value) || contains_arrow(t->guard);
    default:
      return false;
  }
}

bool incl(const TypePtr& l, const TypePtr& r, const FiniteUniverse& u) {
  if (!contains_arrow(l) && !contains_arrow(r)) return subset_in(l, r, u);
  if (l->kind == TypeKind::Union) {
    for (const auto& p : l->parts)
      if (!incl(p, r, u)) return false;
    return true;
  }
  if (r->kind == TypeKind::Inter) {
    for (const auto& p : r->parts)
      if (!incl(l, p, u)) return false;
    return true;
  }
  if (l->kind == TypeKind::Cond) {
    if (is_empty(l->guard) == Emptiness::True) return true;
    return incl(l->value, r, u);
  }
  if (l->kind == TypeKind::Arrow && r->kind == TypeKind::Arrow)
    return incl(r->from, l->from, u) && incl(l->to, r->to, u);
  if (r->kind == TypeKind::Union) {
    for (const auto& p : r->parts)
      if (incl(l, p, u)) return true;
    return false;
  }
  if (l->kind == TypeKind::Inter) {
    for (const auto& p : l->parts)
      if (incl(p, r, u)) return true;
    return false;
  }
  return sub_structural(l, r);
}

}  // namespace

bool check_solution(const ConstraintSet& constraints, const Substitution& s,
                    const FiniteUniverse& u) {
  for (const auto& c : constraints) {
    TypePtr l = normalize(apply_subst(s, c.lhs));
    TypePtr r = normalize(apply_subst(s, c.rhs));
    if (!is_ground(l) || !is_ground(r))
      throw std::invalid_argument(
          "check_solution needs a grounding substitution; got " + pretty(l) +
          " <: " + pretty(r));
    if (!incl(l, r, u)) return false;
  }
  return true;
}

}  // namespace topo
