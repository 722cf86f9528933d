#pragma once

// Hindley/Milner inference for the strong dialect: Robinson unification
// extended to collection types and topologies, and algorithm W extended with
// the transformation case.

#include <stdexcept>
#include <string>
#include <utility>

#include "topo/syntax.hpp"
#include "topo/types.hpp"

namespace topo {

struct TypeError : std::runtime_error {
  TypeError(const std::string& msg, Loc loc = {})
      : std::runtime_error(loc.line > 0 ? std::to_string(loc.line) + ":" +
                                              std::to_string(loc.col) + ": " +
                                              msg
                                        : msg),
        loc(loc) {}
  Loc loc;
};

struct UnifyMismatch : TypeError {
  using TypeError::TypeError;
};

struct OccursCheck : TypeError {
  using TypeError::TypeError;
};

struct UnboundVariable : TypeError {
  using TypeError::TypeError;
};

// Most general unifier of two types in the strong fragment (no union,
// intersection, conditional, 0 or 1 nodes).
Substitution unify(const TypePtr& a, const TypePtr& b);
Substitution unify_topo(const Topology& a, const Topology& b);

std::pair<Substitution, TypePtr> infer_w(const TypingContext& ctx,
                                         const ExprPtr& e, FreshSupply& fresh);

// Convenience wrapper: infer and generalize in an empty context.
TypeScheme infer_strong_scheme(const ExprPtr& e);

// Instance check: is there a substitution s over the variables of
// `general` with s(general) == specific? Used by the unifier property tests.
bool is_instance_of(const TypePtr& general, const TypePtr& specific);

}  // namespace topo
