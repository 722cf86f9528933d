#pragma once

// Reference interpreter: values, topological collections with their
// neighborhood relations, path matching, transformation application and
// fuel-bounded evaluation. Errors are outcome values, never exceptions.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "topo/syntax.hpp"
#include "topo/types.hpp"

namespace topo {

class Value;
using ValuePtr = std::shared_ptr<const Value>;

struct Coord {
  int x = 0;
  int y = 0;
  // Canonical grid order is row-major by (y, x).
  friend bool operator<(const Coord& a, const Coord& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  }
  friend bool operator==(const Coord& a, const Coord& b) {
    return a.x == b.x && a.y == b.y;
  }
};

struct GridStore {
  std::map<Coord, ValuePtr> cells;
  Coord cursor{0, 0};
};

struct Collection {
  TopoSym topo = TopoSym::Seq;
  // seq/set/bag store, in display order (:: prepends).
  std::vector<ValuePtr> items;
  GridStore grid;

  size_t size() const {
    return topo == TopoSym::Grid ? grid.cells.size() : items.size();
  }
  bool empty() const { return size() == 0; }
};
using CollPtr = std::shared_ptr<const Collection>;

struct EnvNode;
using Env = std::shared_ptr<const EnvNode>;
struct EnvNode {
  std::string name;
  ValuePtr value;
  Env next;
};
Env env_bind(Env env, std::string name, ValuePtr v);
const ValuePtr* env_lookup(const Env& env, const std::string& name);

enum class ValueKind { Int, Float, Bool, String, Closure, Builtin, Trans, Coll };

class Value {
 public:
  ValueKind kind;
  long long i = 0;        // Int
  double f = 0;           // Float
  bool b = false;         // Bool
  std::string s;          // String
  std::string param;      // Closure
  ExprPtr body;           // Closure
  Env env;                // Closure / Trans
  std::string bname;      // Builtin
  std::vector<ValuePtr> bargs;  // Builtin partial application
  std::vector<Rule> rules;      // Trans
  CollPtr coll;           // Coll
  long id = 0;            // identity of function-like values

  explicit Value(ValueKind k) : kind(k) {}
};

ValuePtr v_int(long long v);
ValuePtr v_float(double v);
ValuePtr v_bool(bool v);
ValuePtr v_string(std::string v);
ValuePtr v_coll(Collection c);
ValuePtr v_coll(CollPtr c);

bool is_first_order(const ValuePtr& v);  // no closures/builtins/transformations inside

// Total order; cross-tag numeric values compare by magnitude with the tag as
// tie-break, so comparison builtins are total and equality is tag-strict.
int compare_values(const ValuePtr& a, const ValuePtr& b);
bool value_equal(const ValuePtr& a, const ValuePtr& b);
bool collection_equal(const Collection& a, const Collection& b);

std::string show(const ValuePtr& v);

enum class OutcomeKind { Ok, Wrong, ShapeErr, OutOfFuel };

struct Outcome {
  OutcomeKind kind = OutcomeKind::Ok;
  ValuePtr value;        // set when kind == Ok
  std::string detail;    // diagnostic for error outcomes

  bool ok() const { return kind == OutcomeKind::Ok; }
  static Outcome of(ValuePtr v) { return Outcome{OutcomeKind::Ok, std::move(v), ""}; }
  static Outcome wrong(std::string why) {
    return Outcome{OutcomeKind::Wrong, nullptr, std::move(why)};
  }
  static Outcome shape_err(std::string why) {
    return Outcome{OutcomeKind::ShapeErr, nullptr, std::move(why)};
  }
  static Outcome out_of_fuel() { return Outcome{OutcomeKind::OutOfFuel, nullptr, ""}; }
};
const char* name_of(OutcomeKind k);

struct EvalCtx {
  long long fuel = 100000;
  bool spend(long long n = 1) {
    if (fuel < n) {
      fuel = 0;
      return false;
    }
    fuel -= n;
    return true;
  }
};

Outcome eval(const ExprPtr& e, Env env, EvalCtx& ctx);

// One two-phase application: maximal disjoint matching rule by rule, then
// replacement. The result has the same topology as the input.
Outcome apply_transformation(const Value& trans, const Collection& c,
                             EvalCtx& ctx);

// Iterates the transformation until the result equals the input
// (seq: ordered, set/bag: extensional, grid: coordinate-wise).
Outcome fixpoint(const Value& trans, const Collection& c, EvalCtx& ctx);

// --- matching (exposed for tests and the optimizer cross-checks) ---

// Positions: index into the canonical position order of the collection
// (seq/set/bag: store order; grid: sorted coordinates).
using Pos = int;

struct PathMatch {
  std::vector<Pos> path;  // all consumed positions, in match order
  std::vector<std::pair<std::string, ValuePtr>> bindings;
};

struct MatchResult {
  Outcome error;                 // non-Ok when a guard failed to evaluate
  std::optional<PathMatch> match;
};

std::vector<ValuePtr> positions_of(const Collection& c);  // canonical order
std::vector<Coord> grid_coords(const Collection& c);      // canonical order

// First match in canonical order among unconsumed positions, or none.
MatchResult find_match(const Pattern& pattern, const Collection& c,
                       const std::vector<bool>& consumed, const Env& env,
                       EvalCtx& ctx);

// All matches obtained by running the phase-1 loop of a single rule.
struct RuleMatches {
  Outcome error;
  std::vector<PathMatch> matches;
};
RuleMatches collect_matches(const Pattern& pattern, const Collection& c,
                            std::vector<bool>& consumed, const Env& env,
                            EvalCtx& ctx);

// Builtin constants as runtime values (literals included).
std::optional<ValuePtr> builtin_value(const std::string& name);

}  // namespace topo
