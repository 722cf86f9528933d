#pragma once

// Soft-system constraint generation: the compatibility function Comp, the
// pattern context function gamma, and the most-general derivation strategy
// (fresh variables everywhere, gen immediately after let, inst after
// var/const).

#include <string>
#include <utility>
#include <vector>

#include "topo/infer_strong.hpp"
#include "topo/syntax.hpp"
#include "topo/types.hpp"

namespace topo {

struct SchemeUnsolvable : TypeError {
  using TypeError::TypeError;
};

// Compatibility of a pattern with a content type: 0 exactly when the pattern
// can never match inside a collection of that content type.
TypePtr comp(const std::vector<ElemPattern>& elements, const TypePtr& tau);

// Context fragment binding the pattern variables against content type tau.
std::vector<std::pair<std::string, TypePtr>> gamma(
    const std::vector<ElemPattern>& elements, const TypePtr& tau);

struct GenerateOptions {
  // Omit the `content <: result` constraint of a transformation when some
  // rule is a plain unguarded catch-all, so nothing survives unfiltered.
  bool refine_catch_all = false;
};

struct GenResult {
  TypePtr type;
  ConstraintSet constraints;
};

GenResult generate(const TypingContext& ctx, const ExprPtr& e,
                   const GenerateOptions& opts, FreshSupply& fresh);

}  // namespace topo
