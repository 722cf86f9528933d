#include "topo/runtime.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>

namespace topo {

namespace {
std::atomic<long> next_value_id{1};
}

Env env_bind(Env env, std::string name, ValuePtr v) {
  auto node = std::make_shared<EnvNode>();
  node->name = std::move(name);
  node->value = std::move(v);
  node->next = std::move(env);
  return node;
}

const ValuePtr* env_lookup(const Env& env, const std::string& name) {
  for (const EnvNode* n = env.get(); n; n = n->next.get())
    if (n->name == name) return &n->value;
  return nullptr;
}

ValuePtr v_int(long long v) {
  auto p = std::make_shared<Value>(ValueKind::Int);
  p->i = v;
  return p;
}
ValuePtr v_float(double v) {
  auto p = std::make_shared<Value>(ValueKind::Float);
  p->f = v;
  return p;
}
ValuePtr v_bool(bool v) {
  auto p = std::make_shared<Value>(ValueKind::Bool);
  p->b = v;
  return p;
}
ValuePtr v_string(std::string v) {
  auto p = std::make_shared<Value>(ValueKind::String);
  p->s = std::move(v);
  return p;
}
ValuePtr v_coll(Collection c) {
  auto p = std::make_shared<Value>(ValueKind::Coll);
  p->coll = std::make_shared<Collection>(std::move(c));
  return p;
}
ValuePtr v_coll(CollPtr c) {
  auto p = std::make_shared<Value>(ValueKind::Coll);
  p->coll = std::move(c);
  return p;
}

static ValuePtr v_closure(std::string param, ExprPtr body, Env env) {
  auto p = std::make_shared<Value>(ValueKind::Closure);
  p->param = std::move(param);
  p->body = std::move(body);
  p->env = std::move(env);
  p->id = next_value_id++;
  return p;
}

static ValuePtr v_builtin(std::string name, std::vector<ValuePtr> args) {
  auto p = std::make_shared<Value>(ValueKind::Builtin);
  p->bname = std::move(name);
  p->bargs = std::move(args);
  p->id = next_value_id++;
  return p;
}

static ValuePtr v_trans(std::vector<Rule> rules, Env env) {
  auto p = std::make_shared<Value>(ValueKind::Trans);
  p->rules = std::move(rules);
  p->env = std::move(env);
  p->id = next_value_id++;
  return p;
}

bool is_first_order(const ValuePtr& v) {
  switch (v->kind) {
    case ValueKind::Int:
    case ValueKind::Float:
    case ValueKind::Bool:
    case ValueKind::String:
      return true;
    case ValueKind::Closure:
    case ValueKind::Builtin:
    case ValueKind::Trans:
      return false;
    case ValueKind::Coll: {
      if (v->coll->topo == TopoSym::Grid) {
        for (const auto& [c, e] : v->coll->grid.cells)
          if (!is_first_order(e)) return false;
        return true;
      }
      for (const auto& e : v->coll->items)
        if (!is_first_order(e)) return false;
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Ordering and equality

static int kind_rank(ValueKind k) { return static_cast<int>(k); }

static std::vector<ValuePtr> sorted_items(const Collection& c) {
  std::vector<ValuePtr> v = c.items;
  std::sort(v.begin(), v.end(), [](const ValuePtr& a, const ValuePtr& b) {
    return compare_values(a, b) < 0;
  });
  return v;
}

int compare_values(const ValuePtr& a, const ValuePtr& b) {
  bool a_num = a->kind == ValueKind::Int || a->kind == ValueKind::Float;
  bool b_num = b->kind == ValueKind::Int || b->kind == ValueKind::Float;
  if (a_num && b_num) {
    long double x = a->kind == ValueKind::Int ? (long double)a->i : a->f;
    long double y = b->kind == ValueKind::Int ? (long double)b->i : b->f;
    if (x < y) return -1;
    if (x > y) return 1;
    return kind_rank(a->kind) - kind_rank(b->kind);
  }
  if (a->kind != b->kind) return kind_rank(a->kind) - kind_rank(b->kind);
  switch (a->kind) {
    case ValueKind::Bool:
      return (a->b ? 1 : 0) - (b->b ? 1 : 0);
    case ValueKind::String:
      return a->s.compare(b->s);
    case ValueKind::Closure:
    case ValueKind::Builtin:
    case ValueKind::Trans:
      return a->id < b->id ? -1 : a->id > b->id ? 1 : 0;
    case ValueKind::Coll: {
      const Collection& ca = *a->coll;
      const Collection& cb = *b->coll;
      if (ca.topo != cb.topo)
        return static_cast<int>(ca.topo) - static_cast<int>(cb.topo);
      if (ca.topo == TopoSym::Grid) {
        auto ia = ca.grid.cells.begin();
        auto ib = cb.grid.cells.begin();
        for (; ia != ca.grid.cells.end() && ib != cb.grid.cells.end();
             ++ia, ++ib) {
          if (ia->first < ib->first) return -1;
          if (ib->first < ia->first) return 1;
          int c = compare_values(ia->second, ib->second);
          if (c != 0) return c;
        }
        if (ia != ca.grid.cells.end()) return 1;
        if (ib != cb.grid.cells.end()) return -1;
        return 0;
      }
      std::vector<ValuePtr> va = ca.items;
      std::vector<ValuePtr> vb = cb.items;
      if (ca.topo != TopoSym::Seq) {
        va = sorted_items(ca);
        vb = sorted_items(cb);
      }
      for (size_t i = 0; i < std::min(va.size(), vb.size()); ++i) {
        int c = compare_values(va[i], vb[i]);
        if (c != 0) return c;
      }
      if (va.size() != vb.size()) return va.size() < vb.size() ? -1 : 1;
      return 0;
    }
    default:
      return 0;
  }
}

bool value_equal(const ValuePtr& a, const ValuePtr& b) {
  return compare_values(a, b) == 0;
}

bool collection_equal(const Collection& a, const Collection& b) {
  if (a.topo != b.topo) return false;
  ValuePtr va = v_coll(std::make_shared<Collection>(a));
  ValuePtr vb = v_coll(std::make_shared<Collection>(b));
  return value_equal(va, vb);
}

// ---------------------------------------------------------------------------
// Display

static std::string show_float(double f) {
  std::ostringstream os;
  os << f;
  std::string s = os.str();
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

std::string show(const ValuePtr& v) {
  switch (v->kind) {
    case ValueKind::Int:
      return std::to_string(v->i);
    case ValueKind::Float:
      return show_float(v->f);
    case ValueKind::Bool:
      return v->b ? "true" : "false";
    case ValueKind::String:
      return "\"" + v->s + "\"";
    case ValueKind::Closure:
      return "<fun>";
    case ValueKind::Builtin:
      return "<fun " + v->bname + ">";
    case ValueKind::Trans:
      return "<trans>";
    case ValueKind::Coll: {
      const Collection& c = *v->coll;
      std::ostringstream os;
      if (c.topo == TopoSym::Seq) {
        os << "[";
        for (size_t i = 0; i < c.items.size(); ++i) {
          if (i) os << ", ";
          os << show(c.items[i]);
        }
        os << "]";
      } else if (c.topo == TopoSym::Grid) {
        os << "grid{";
        bool first = true;
        for (const auto& [coord, val] : c.grid.cells) {
          if (!first) os << ", ";
          os << "(" << coord.x << "," << coord.y << "): " << show(val);
          first = false;
        }
        os << "}";
      } else {
        os << name_of(c.topo) << "{";
        for (size_t i = 0; i < c.items.size(); ++i) {
          if (i) os << ", ";
          os << show(c.items[i]);
        }
        os << "}";
      }
      return os.str();
    }
  }
  return "?";
}

const char* name_of(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Ok: return "ok";
    case OutcomeKind::Wrong: return "wrong";
    case OutcomeKind::ShapeErr: return "shape_err";
    case OutcomeKind::OutOfFuel: return "out_of_fuel";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Builtins

namespace {

struct DirVec {
  int dx, dy;
};

std::optional<DirVec> dir_vec(const std::string& name) {
  if (name == "nord") return DirVec{0, 1};
  if (name == "-nord") return DirVec{0, -1};
  if (name == "est") return DirVec{1, 0};
  if (name == "-est") return DirVec{-1, 0};
  return std::nullopt;
}

int builtin_arity(const std::string& name) {
  if (name == "nord_nb" || name == "est_nb" || name == "-nord_nb" ||
      name == "-est_nb" || name == "if")
    return 3;
  return 2;
}

bool set_contains(const std::vector<ValuePtr>& items, const ValuePtr& v) {
  for (const auto& it : items)
    if (value_equal(it, v)) return true;
  return false;
}

Outcome grid_insert(const Collection& g, const ValuePtr& v, DirVec d) {
  Collection out = g;
  if (out.grid.cells.empty()) {
    out.grid.cells[Coord{0, 0}] = v;
    out.grid.cursor = Coord{0, 0};
    return Outcome::of(v_coll(std::move(out)));
  }
  Coord target{out.grid.cursor.x + d.dx, out.grid.cursor.y + d.dy};
  if (out.grid.cells.count(target))
    return Outcome::shape_err("grid position already occupied");
  out.grid.cells[target] = v;
  out.grid.cursor = target;
  return Outcome::of(v_coll(std::move(out)));
}

Outcome apply_builtin(const std::string& name,
                      const std::vector<ValuePtr>& args, EvalCtx& ctx) {
  (void)ctx;
  auto wrong = [&](const std::string& why) {
    return Outcome::wrong(name + ": " + why);
  };
  if (name == "::") {
    const ValuePtr& v = args[0];
    const ValuePtr& cv = args[1];
    if (cv->kind != ValueKind::Coll) return wrong("expected a collection");
    const Collection& c = *cv->coll;
    if (c.topo == TopoSym::Grid) return grid_insert(c, v, DirVec{1, 0});
    Collection out = c;
    if (c.topo == TopoSym::Set && set_contains(out.items, v))
      return Outcome::of(cv);
    out.items.insert(out.items.begin(), v);
    return Outcome::of(v_coll(std::move(out)));
  }
  if (auto d = dir_vec(name)) {
    const ValuePtr& v = args[0];
    const ValuePtr& cv = args[1];
    if (cv->kind != ValueKind::Coll || cv->coll->topo != TopoSym::Grid)
      return wrong("expected a grid");
    return grid_insert(*cv->coll, v, *d);
  }
  if (name == "+" || name == "-" || name == "*") {
    const ValuePtr& a = args[0];
    const ValuePtr& b = args[1];
    if (a->kind == ValueKind::Int && b->kind == ValueKind::Int) {
      long long r = name == "+" ? a->i + b->i
                    : name == "-" ? a->i - b->i
                                  : a->i * b->i;
      return Outcome::of(v_int(r));
    }
    if (a->kind == ValueKind::Float && b->kind == ValueKind::Float) {
      double r = name == "+" ? a->f + b->f
                 : name == "-" ? a->f - b->f
                               : a->f * b->f;
      return Outcome::of(v_float(r));
    }
    return wrong("expects two ints or two floats");
  }
  if (name == "mod") {
    const ValuePtr& a = args[0];
    const ValuePtr& b = args[1];
    if (a->kind != ValueKind::Int || b->kind != ValueKind::Int)
      return wrong("expects two ints");
    return Outcome::of(v_int(b->i == 0 ? 0 : a->i % b->i));
  }
  if (name == ">" || name == "<" || name == "=") {
    int c = compare_values(args[0], args[1]);
    bool r = name == ">" ? c > 0 : name == "<" ? c < 0 : c == 0;
    return Outcome::of(v_bool(r));
  }
  if (name == "&&" || name == "||") {
    if (args[0]->kind != ValueKind::Bool || args[1]->kind != ValueKind::Bool)
      return wrong("expects two booleans");
    bool r = name == "&&" ? (args[0]->b && args[1]->b)
                          : (args[0]->b || args[1]->b);
    return Outcome::of(v_bool(r));
  }
  if (name == "if") {
    if (args[0]->kind != ValueKind::Bool) return wrong("condition must be a boolean");
    return Outcome::of(args[0]->b ? args[1] : args[2]);
  }
  if (name.size() > 3 && name.substr(name.size() - 3) == "_nb") {
    auto d = dir_vec(name.substr(0, name.size() - 3));
    if (!d) return wrong("unknown builtin");
    const ValuePtr& gv = args[0];
    if (gv->kind != ValueKind::Coll || gv->coll->topo != TopoSym::Grid)
      return wrong("expects a grid");
    for (const auto& [coord, val] : gv->coll->grid.cells) {
      if (!value_equal(val, args[1])) continue;
      auto it = gv->coll->grid.cells.find(Coord{coord.x + d->dx, coord.y + d->dy});
      if (it != gv->coll->grid.cells.end() && value_equal(it->second, args[2]))
        return Outcome::of(v_bool(true));
    }
    return Outcome::of(v_bool(false));
  }
  return wrong("unknown builtin");
}

bool parse_int_lit(const std::string& s, long long& out) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  out = std::strtoll(s.c_str(), nullptr, 10);
  return true;
}

bool parse_float_lit(const std::string& s, double& out) {
  auto dot = s.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 >= s.size()) return false;
  for (size_t i = 0; i < s.size(); ++i)
    if (i != dot && !std::isdigit(static_cast<unsigned char>(s[i])))
      return false;
  out = std::strtod(s.c_str(), nullptr);
  return true;
}

}  // namespace

std::optional<ValuePtr> builtin_value(const std::string& name) {
  long long i;
  double f;
  if (parse_int_lit(name, i)) return v_int(i);
  if (parse_float_lit(name, f)) return v_float(f);
  if (name.size() >= 2 && name.front() == '"' && name.back() == '"')
    return v_string(name.substr(1, name.size() - 2));
  if (name == "true") return v_bool(true);
  if (name == "false") return v_bool(false);
  if (name == "empty_seq") return v_coll(Collection{TopoSym::Seq, {}, {}});
  if (name == "empty_set") return v_coll(Collection{TopoSym::Set, {}, {}});
  if (name == "empty_bag") return v_coll(Collection{TopoSym::Bag, {}, {}});
  if (name == "empty_grid") return v_coll(Collection{TopoSym::Grid, {}, {}});
  if (is_builtin_name(name)) return v_builtin(name, {});
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Matching

std::vector<Coord> grid_coords(const Collection& c) {
  std::vector<Coord> out;
  out.reserve(c.grid.cells.size());
  for (const auto& [coord, v] : c.grid.cells) out.push_back(coord);
  return out;  // map order is already (y, x) lexicographic
}

std::vector<ValuePtr> positions_of(const Collection& c) {
  if (c.topo != TopoSym::Grid) return c.items;
  std::vector<ValuePtr> out;
  for (const auto& [coord, v] : c.grid.cells) out.push_back(v);
  return out;
}

namespace {

class Matcher {
 public:
  Matcher(const Pattern& pattern, const Collection& c,
          const std::vector<bool>& consumed, const Env& env, EvalCtx& ctx)
      : pattern_(pattern),
        coll_(c),
        consumed_(consumed),
        env_(env),
        ctx_(ctx),
        values_(positions_of(c)),
        coords_(c.topo == TopoSym::Grid ? grid_coords(c)
                                        : std::vector<Coord>{}) {
    if (c.topo == TopoSym::Grid)
      for (size_t i = 0; i < coords_.size(); ++i) coord_index_[coords_[i]] = i;
  }

  MatchResult run() {
    MatchResult out;
    std::vector<Pos> path;
    std::vector<bool> used(values_.size(), false);
    std::vector<std::pair<std::string, ValuePtr>> bindings;
    int r = match_elem(0, std::nullopt, path, used, bindings);
    if (r == 2) {
      out.error = error_;
      return out;
    }
    if (r == 1) out.match = PathMatch{found_path_, found_bindings_};
    return out;
  }

 private:
  bool tag_ok(const ElemPattern& e, const ValuePtr& v) const {
    if (e.kind == ElemKind::Plain || e.kind == ElemKind::Star) return true;
    switch (e.base) {
      case BaseType::Int: return v->kind == ValueKind::Int;
      case BaseType::Bool: return v->kind == ValueKind::Bool;
      case BaseType::Float: return v->kind == ValueKind::Float;
      case BaseType::String: return v->kind == ValueKind::String;
    }
    return false;
  }

  bool free_pos(Pos p, const std::vector<bool>& used) const {
    return !consumed_[p] && !used[p];
  }

  // Candidate next positions after `from` (or starts when nullopt), in
  // canonical order. Untagged grid steps go east or north only, so the path
  // advances in the canonical coordinate order; explicit tags pick the one
  // named neighbor.
  std::vector<Pos> candidates(std::optional<Pos> from, Dir dir,
                              const std::vector<bool>& used) const {
    std::vector<Pos> out;
    size_t n = values_.size();
    if (!from.has_value()) {
      for (size_t p = 0; p < n; ++p)
        if (free_pos(p, used)) out.push_back(p);
      return out;
    }
    Pos f = *from;
    switch (coll_.topo) {
      case TopoSym::Seq: {
        if (dir != Dir::None) return out;
        if (static_cast<size_t>(f + 1) < n && free_pos(f + 1, used))
          out.push_back(f + 1);
        return out;
      }
      case TopoSym::Set:
      case TopoSym::Bag: {
        if (dir != Dir::None) return out;
        for (size_t p = 0; p < n; ++p)
          if (static_cast<Pos>(p) != f && free_pos(p, used)) out.push_back(p);
        return out;
      }
      case TopoSym::Grid: {
        Coord c = coords_[f];
        auto push_if = [&](Coord t) {
          auto it = coord_index_.find(t);
          if (it != coord_index_.end() && free_pos(it->second, used))
            out.push_back(it->second);
        };
        switch (dir) {
          case Dir::None:
            push_if(Coord{c.x + 1, c.y});  // est first: same row
            push_if(Coord{c.x, c.y + 1});  // then nord
            break;
          case Dir::Nord: push_if(Coord{c.x, c.y + 1}); break;
          case Dir::MinusNord: push_if(Coord{c.x, c.y - 1}); break;
          case Dir::Est: push_if(Coord{c.x + 1, c.y}); break;
          case Dir::MinusEst: push_if(Coord{c.x - 1, c.y}); break;
        }
        return out;
      }
    }
    return out;
  }

  // 0 = exhausted, 1 = found, 2 = error
  int match_elem(size_t i, std::optional<Pos> last, std::vector<Pos>& path,
                 std::vector<bool>& used,
                 std::vector<std::pair<std::string, ValuePtr>>& bindings) {
    if (i == pattern_.elements.size()) return finish(path, bindings);
    const ElemPattern& e = pattern_.elements[i];
    if (e.kind == ElemKind::Plain || e.kind == ElemKind::Typed) {
      for (Pos p : candidates(last, e.dir_before, used)) {
        if (!tag_ok(e, values_[p])) continue;
        path.push_back(p);
        used[p] = true;
        bindings.emplace_back(e.var, values_[p]);
        int r = match_elem(i + 1, p, path, used, bindings);
        if (r != 0) return r;
        bindings.pop_back();
        used[p] = false;
        path.pop_back();
      }
      return 0;
    }
    // Star: greedily build the longest typed run of consecutive free
    // neighbors, then shrink it on backtracking.
    std::vector<Pos> run;
    {
      std::optional<Pos> anchor = last;
      while (true) {
        std::vector<Pos> next = candidates(anchor, Dir::None, used);
        Pos chosen = -1;
        for (Pos p : next) {
          if (std::find(run.begin(), run.end(), p) != run.end()) continue;
          if (!tag_ok(e, values_[p])) continue;
          chosen = p;
          break;
        }
        if (chosen < 0) break;
        run.push_back(chosen);
        used[chosen] = true;
        anchor = chosen;
      }
    }
    for (size_t len = run.size() + 1; len-- > 0;) {
      for (size_t k = len; k < run.size(); ++k) used[run[k]] = false;
      Collection seq;
      seq.topo = TopoSym::Seq;
      for (size_t k = 0; k < len; ++k) {
        seq.items.push_back(values_[run[k]]);
        path.push_back(run[k]);
      }
      bindings.emplace_back(e.var, v_coll(std::move(seq)));
      std::optional<Pos> anchor = len > 0 ? std::optional<Pos>(run[len - 1]) : last;
      int r = match_elem(i + 1, anchor, path, used, bindings);
      if (r != 0) return r;
      bindings.pop_back();
      for (size_t k = 0; k < len; ++k) path.pop_back();
      for (size_t k = 0; k < len; ++k) used[run[k]] = false;
    }
    return 0;
  }

  int finish(const std::vector<Pos>& path,
             const std::vector<std::pair<std::string, ValuePtr>>& bindings) {
    if (path.empty()) return 0;  // a path has length >= 1
    ExprPtr guard = pattern_.guard ? pattern_.guard : e_true();
    Env genv = env_;
    for (const auto& [name, v] : bindings) genv = env_bind(genv, name, v);
    Outcome out = eval(guard, genv, ctx_);
    if (!out.ok()) {
      error_ = out;
      return 2;
    }
    if (out.value->kind != ValueKind::Bool) {
      error_ = Outcome::wrong("pattern guard did not evaluate to a boolean");
      return 2;
    }
    if (!out.value->b) return 0;
    found_path_ = path;
    found_bindings_ = bindings;
    return 1;
  }

  const Pattern& pattern_;
  const Collection& coll_;
  const std::vector<bool>& consumed_;
  const Env& env_;
  EvalCtx& ctx_;
  std::vector<ValuePtr> values_;
  std::vector<Coord> coords_;
  std::map<Coord, size_t> coord_index_;
  Outcome error_;
  std::vector<Pos> found_path_;
  std::vector<std::pair<std::string, ValuePtr>> found_bindings_;
};

}  // namespace

MatchResult find_match(const Pattern& pattern, const Collection& c,
                       const std::vector<bool>& consumed, const Env& env,
                       EvalCtx& ctx) {
  return Matcher(pattern, c, consumed, env, ctx).run();
}

RuleMatches collect_matches(const Pattern& pattern, const Collection& c,
                            std::vector<bool>& consumed, const Env& env,
                            EvalCtx& ctx) {
  RuleMatches out;
  while (true) {
    MatchResult r = find_match(pattern, c, consumed, env, ctx);
    if (!r.error.ok()) {
      out.error = r.error;
      return out;
    }
    if (!r.match.has_value()) return out;
    for (Pos p : r.match->path) consumed[p] = true;
    out.matches.push_back(std::move(*r.match));
  }
}

// ---------------------------------------------------------------------------
// Transformation application

Outcome apply_transformation(const Value& trans, const Collection& c,
                             EvalCtx& ctx) {
  if (!ctx.spend()) return Outcome::out_of_fuel();
  Env env = env_bind(trans.env, "self", v_coll(std::make_shared<Collection>(c)));
  size_t n = positions_of(c).size();
  std::vector<bool> consumed(n, false);

  struct Record {
    size_t rule;
    PathMatch match;
  };
  std::vector<Record> records;
  for (size_t ri = 0; ri < trans.rules.size(); ++ri) {
    RuleMatches rm =
        collect_matches(trans.rules[ri].pattern, c, consumed, env, ctx);
    if (!rm.error.ok()) return rm.error;
    for (auto& m : rm.matches) records.push_back(Record{ri, std::move(m)});
  }

  // Phase 2: evaluate replacements; each must denote a sequence.
  std::vector<std::vector<ValuePtr>> replacements(records.size());
  for (size_t k = 0; k < records.size(); ++k) {
    Env renv = env;
    for (const auto& [name, v] : records[k].match.bindings)
      renv = env_bind(renv, name, v);
    Outcome out = eval(trans.rules[records[k].rule].replacement, renv, ctx);
    if (!out.ok()) return out;
    if (out.value->kind != ValueKind::Coll ||
        out.value->coll->topo != TopoSym::Seq)
      return Outcome::wrong("rule replacement must be a sequence");
    replacements[k] = out.value->coll->items;
  }

  Collection result;
  result.topo = c.topo;
  switch (c.topo) {
    case TopoSym::Seq: {
      // Paths in a sequence are contiguous ascending runs.
      std::map<Pos, size_t> start_of;
      for (size_t k = 0; k < records.size(); ++k) {
        Pos start = *std::min_element(records[k].match.path.begin(),
                                      records[k].match.path.end());
        start_of[start] = k;
      }
      for (size_t i = 0; i < c.items.size();) {
        auto it = start_of.find(static_cast<Pos>(i));
        if (it != start_of.end()) {
          for (const auto& v : replacements[it->second])
            result.items.push_back(v);
          i += records[it->second].match.path.size();
        } else {
          result.items.push_back(c.items[i]);
          ++i;
        }
      }
      break;
    }
    case TopoSym::Set:
    case TopoSym::Bag: {
      for (size_t i = 0; i < c.items.size(); ++i)
        if (!consumed[i]) result.items.push_back(c.items[i]);
      for (size_t k = 0; k < records.size(); ++k) {
        for (const auto& v : replacements[k]) {
          if (c.topo == TopoSym::Set && set_contains(result.items, v)) continue;
          result.items.push_back(v);
        }
      }
      break;
    }
    case TopoSym::Grid: {
      std::vector<Coord> coords = grid_coords(c);
      result.grid = c.grid;
      for (size_t k = 0; k < records.size(); ++k) {
        const auto& path = records[k].match.path;
        if (replacements[k].size() != path.size())
          return Outcome::shape_err(
              "grid replacement must have the same length as the matched path");
        for (size_t j = 0; j < path.size(); ++j)
          result.grid.cells[coords[path[j]]] = replacements[k][j];
      }
      if (!result.grid.cells.empty())
        result.grid.cursor = result.grid.cells.rbegin()->first;
      break;
    }
  }
  return Outcome::of(v_coll(std::move(result)));
}

Outcome fixpoint(const Value& trans, const Collection& c, EvalCtx& ctx) {
  CollPtr cur = std::make_shared<Collection>(c);
  while (true) {
    Outcome out = apply_transformation(trans, *cur, ctx);
    if (!out.ok()) return out;
    const CollPtr& next = out.value->coll;
    if (collection_equal(*next, *cur)) return out;
    cur = next;
  }
}

// ---------------------------------------------------------------------------
// Evaluation

static Outcome apply_value(const ValuePtr& fn, const ValuePtr& arg,
                           EvalCtx& ctx);

Outcome eval(const ExprPtr& e, Env env, EvalCtx& ctx) {
  switch (e->kind) {
    case ExprKind::Var: {
      const ValuePtr* v = env_lookup(env, e->name);
      if (!v) return Outcome::wrong("unbound variable '" + e->name + "'");
      return Outcome::of(*v);
    }
    case ExprKind::Const: {
      auto v = builtin_value(e->name);
      if (!v) return Outcome::wrong("unknown constant '" + e->name + "'");
      return Outcome::of(*v);
    }
    case ExprKind::Lambda:
      return Outcome::of(v_closure(e->name, e->a, env));
    case ExprKind::Trans:
      return Outcome::of(v_trans(e->rules, env));
    case ExprKind::Let: {
      if (!ctx.spend()) return Outcome::out_of_fuel();
      Outcome bound = eval(e->a, env, ctx);
      if (!bound.ok()) return bound;
      return eval(e->b, env_bind(env, e->name, bound.value), ctx);
    }
    case ExprKind::App: {
      Outcome fn = eval(e->a, env, ctx);
      if (!fn.ok()) return fn;
      Outcome arg = eval(e->b, env, ctx);
      if (!arg.ok()) return arg;
      return apply_value(fn.value, arg.value, ctx);
    }
  }
  return Outcome::wrong("malformed expression");
}

static Outcome apply_value(const ValuePtr& fn, const ValuePtr& arg,
                           EvalCtx& ctx) {
  switch (fn->kind) {
    case ValueKind::Closure: {
      if (!ctx.spend()) return Outcome::out_of_fuel();
      return eval(fn->body, env_bind(fn->env, fn->param, arg), ctx);
    }
    case ValueKind::Builtin: {
      std::vector<ValuePtr> args = fn->bargs;
      args.push_back(arg);
      if (static_cast<int>(args.size()) < builtin_arity(fn->bname))
        return Outcome::of(v_builtin(fn->bname, std::move(args)));
      if (!ctx.spend()) return Outcome::out_of_fuel();
      return apply_builtin(fn->bname, args, ctx);
    }
    case ValueKind::Trans: {
      if (arg->kind != ValueKind::Coll)
        return Outcome::wrong("a transformation expects a collection");
      return apply_transformation(*fn, *arg->coll, ctx);
    }
    default:
      return Outcome::wrong("applied a value that is not a function");
  }
}

}  // namespace topo
