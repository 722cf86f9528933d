#pragma once

// Surface language shared by both dialects: lexer, parser, AST and
// pretty-printer, plus the direction-tag desugaring pass.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "topo/types.hpp"

namespace topo {

struct Loc {
  int line = 0;
  int col = 0;
};

struct SyntaxError : std::runtime_error {
  SyntaxError(const std::string& msg, Loc loc)
      : std::runtime_error(std::to_string(loc.line) + ":" +
                           std::to_string(loc.col) + ": " + msg),
        loc(loc) {}
  Loc loc;
};

// Raised when a program uses soft-only syntax under the strong dialect or
// lacks the mandatory final catch-all rule.
struct DialectError : SyntaxError {
  using SyntaxError::SyntaxError;
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Direction tag carried by the separator before a pattern element.
enum class Dir { None, Nord, MinusNord, Est, MinusEst };
const char* name_of(Dir d);              // "nord", ...
std::string neighbor_builtin_of(Dir d);  // "nord_nb", ...

enum class ElemKind { Plain, Typed, Star, TypedStar };

struct ElemPattern {
  ElemKind kind = ElemKind::Plain;
  std::string var;
  BaseType base = BaseType::Int;  // Typed / TypedStar
  Dir dir_before = Dir::None;     // tag on the separator preceding this element
  Loc loc;
};

struct Pattern {
  std::vector<ElemPattern> elements;
  ExprPtr guard;  // null means the implicit guard `true`
};

struct Rule {
  Pattern pattern;
  ExprPtr replacement;
  Loc loc;
};

enum class ExprKind { Var, Const, Lambda, App, Let, Trans };

class Expr {
 public:
  ExprKind kind;
  Loc loc;
  std::string name;        // Var / Const name, Lambda param, Let binder
  ExprPtr a, b;            // Lambda: a=body; App: a=fn, b=arg; Let: a=bound, b=body
  std::vector<Rule> rules; // Trans

  explicit Expr(ExprKind k) : kind(k) {}
};

ExprPtr e_var(std::string name, Loc loc = {});
ExprPtr e_const(std::string name, Loc loc = {});
ExprPtr e_lambda(std::string param, ExprPtr body, Loc loc = {});
ExprPtr e_app(ExprPtr fn, ExprPtr arg, Loc loc = {});
ExprPtr e_let(std::string name, ExprPtr bound, ExprPtr body, Loc loc = {});
ExprPtr e_trans(std::vector<Rule> rules, Loc loc = {});
ExprPtr e_true();

ExprPtr parse(const std::string& source, Dialect dialect);

// Replaces each direction tag with a conjunct `<dir>_nb self x y` on the
// rule guard. The result carries no tags and binds the same variables.
Pattern desugar_direction(const Pattern& p);
bool pattern_has_direction(const Pattern& p);
bool is_catch_all(const Pattern& p);

std::string pretty(const ExprPtr& e);
std::string pretty(const Pattern& p);

bool alpha_equal(const ExprPtr& a, const ExprPtr& b);

// All variables bound by the pattern's elements, in element order.
std::vector<std::string> pattern_vars(const Pattern& p);

}  // namespace topo
