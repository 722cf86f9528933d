#pragma once

// Type algebra shared by both dialects: base types, type/topology variables,
// arrows, collection types with a topology component, and the soft-system
// connectives (union, intersection, 0, 1, conditional).

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace topo {

enum class BaseType { Int, Bool, Float, String };
enum class TopoSym { Set, Bag, Seq, Grid };

const char* name_of(BaseType b);
const char* name_of(TopoSym t);
std::optional<BaseType> base_from_name(std::string_view s);
std::optional<TopoSym> topo_from_name(std::string_view s);

// A topology is either one of the four symbols or a topology variable.
struct Topology {
  TopoSym sym = TopoSym::Set;
  std::string var;  // non-empty means variable

  bool is_var() const { return !var.empty(); }
  static Topology symbol(TopoSym s) { return Topology{s, ""}; }
  static Topology variable(std::string name) {
    return Topology{TopoSym::Set, std::move(name)};
  }
  friend bool operator==(const Topology& a, const Topology& b) {
    return a.is_var() == b.is_var() &&
           (a.is_var() ? a.var == b.var : a.sym == b.sym);
  }
};

class Type;
using TypePtr = std::shared_ptr<const Type>;

enum class TypeKind { Base, Var, Arrow, Coll, Union, Inter, Zero, One, Cond };

class Type {
 public:
  TypeKind kind;
  BaseType base = BaseType::Int;      // Base
  std::string var;                    // Var
  TypePtr from, to;                   // Arrow
  Topology topo;                      // Coll
  TypePtr elem;                       // Coll
  std::vector<TypePtr> parts;         // Union / Inter, flattened, size >= 2
  TypePtr value, guard;               // Cond: value ? guard

  explicit Type(TypeKind k) : kind(k) {}
};

TypePtr t_base(BaseType b);
TypePtr t_int();
TypePtr t_bool();
TypePtr t_float();
TypePtr t_string();
TypePtr t_var(std::string name);
TypePtr t_arrow(TypePtr from, TypePtr to);
TypePtr t_coll(Topology topo, TypePtr elem);
TypePtr t_union(std::vector<TypePtr> parts);  // flattens; 0 parts -> 0, 1 part -> itself
TypePtr t_union(TypePtr a, TypePtr b);
TypePtr t_inter(std::vector<TypePtr> parts);  // flattens; 0 parts -> 1, 1 part -> itself
TypePtr t_inter(TypePtr a, TypePtr b);
TypePtr t_zero();
TypePtr t_one();
TypePtr t_cond(TypePtr value, TypePtr guard);

// Total order on types; drives the canonical operand order of unions and
// intersections and makes structural equality usable as a map key.
int compare(const TypePtr& a, const TypePtr& b);
bool equal(const TypePtr& a, const TypePtr& b);

struct TypeLess {
  bool operator()(const TypePtr& a, const TypePtr& b) const {
    return compare(a, b) < 0;
  }
};

bool contains_type_var(const TypePtr& t, const std::string& name);
bool is_ground(const TypePtr& t);  // no type vars and no topology vars

// Ordered, duplicate-free free-variable lists.
struct VarSet {
  std::vector<std::string> type_vars;
  std::vector<std::string> topo_vars;
  void add_type(const std::string& v);
  void add_topo(const std::string& v);
  bool has_type(const std::string& v) const;
  bool has_topo(const std::string& v) const;
};
void free_vars(const TypePtr& t, VarSet& out);

// Simultaneous substitution on type and topology variables. Kept idempotent
// by construction (compose applies the outer map to the inner map's range).
struct Substitution {
  std::map<std::string, TypePtr> type_map;
  std::map<std::string, Topology> topo_map;

  bool empty() const { return type_map.empty() && topo_map.empty(); }
  static Substitution bind_type(const std::string& v, TypePtr t);
  static Substitution bind_topo(const std::string& v, Topology t);
};

Topology apply_subst(const Substitution& s, const Topology& t);
TypePtr apply_subst(const Substitution& s, const TypePtr& t);
Substitution compose(const Substitution& outer, const Substitution& inner);

// Inclusion constraint lhs <: rhs; an equality is stored as two inclusions.
struct Constraint {
  TypePtr lhs, rhs;
  std::string origin;  // "line:col rule" into the source program
};
using ConstraintSet = std::vector<Constraint>;

struct TypeScheme {
  std::vector<std::string> type_vars;  // quantified
  std::vector<std::string> topo_vars;  // quantified
  TypePtr body;
  ConstraintSet constraints;  // empty in the strong system
};

TypeScheme monotype(TypePtr t);
TypeScheme apply_subst(const Substitution& s, const TypeScheme& scheme);
void free_vars(const TypeScheme& scheme, VarSet& out);

class FreshSupply {
 public:
  std::string type_var() { return "a" + std::to_string(++n_); }
  std::string topo_var() { return "t" + std::to_string(++n_); }

 private:
  long n_ = 0;
};

// Typing context: program variable -> type scheme. `self` is bound exactly
// while typing a transformation body.
struct TypingContext {
  std::map<std::string, TypeScheme> bindings;

  const TypeScheme* lookup(const std::string& name) const;
  TypingContext extended(const std::string& name, TypeScheme scheme) const;
  void free_vars(VarSet& out) const;
};
TypingContext apply_subst(const Substitution& s, const TypingContext& ctx);

TypeScheme generalize(const TypingContext& ctx, const TypePtr& t,
                      const ConstraintSet& constraints = {});
std::pair<TypePtr, ConstraintSet> instantiate(const TypeScheme& scheme,
                                              FreshSupply& fresh);

// Confluent simplification to a canonical form: units of union/intersection,
// empty base intersections, collection/base/arrow disjointness, conditional
// reduction on decided guards, and sorted duplicate-free operand lists.
// Never rewrites across a type variable (a & int stays a & int).
TypePtr normalize(const TypePtr& t);

enum class Emptiness { True, False, Unknown };
Emptiness is_empty(const TypePtr& t);

// Sound structural inclusion check. Complete on the ground canonical forms
// used by the solver; returns false when inclusion cannot be established.
bool sub_structural(const TypePtr& lhs, const TypePtr& rhs);

enum class Dialect { Strong, Soft };

struct UnknownConstant : std::runtime_error {
  explicit UnknownConstant(const std::string& name)
      : std::runtime_error("unknown constant: " + name), name(name) {}
  std::string name;
};

// Constant table. Literal spellings (integers, floats, strings, true/false)
// and the fixed builtin names.
TypeScheme tc(const std::string& name, Dialect dialect);
bool is_builtin_name(std::string_view name);

// Text forms. pretty uses the project syntax: [topo] elem, ->, |, &, ?, 0, 1.
std::string pretty(const Topology& t);
std::string pretty(const TypePtr& t);
std::string pretty(const TypeScheme& s);

struct TypeSyntaxError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
TypePtr parse_type(const std::string& text);
TypeScheme parse_scheme(const std::string& text);

// Presentation renaming: quantified variables become a, b, c, ... / t, u, ...
// in order of first occurrence in the body.
TypeScheme canonical_scheme(const TypeScheme& s);
bool scheme_alpha_equal(const TypeScheme& a, const TypeScheme& b);
bool type_alpha_equal(const TypePtr& a, const TypePtr& b);

}  // namespace topo
