#pragma once

// Finite-universe semantic oracle: a desk-scale stand-in for the value
// domain, used to test membership, emptiness, normalization and constraint
// solutions extensionally. Never used by inference itself.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "topo/runtime.hpp"
#include "topo/types.hpp"

namespace topo {

struct UnsupportedValue : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FiniteUniverse {
  int max_depth = 2;
  int max_collection_size = 3;
  std::vector<ValuePtr> values;  // enumeration order is fixed

  // maxDepth 2, maxCollectionSize 3, deterministic sampling.
  static const FiniteUniverse& standard();
};

// Fig-style structural membership of a first-order value in a type, under an
// instantiation of its type and topology variables. Conditional guards are
// decided by searching the universe for a witness. Values containing
// closures are not decided and raise UnsupportedValue.
bool member(const ValuePtr& v, const TypePtr& t, const Substitution& s,
            const FiniteUniverse& u);

// Is some universe value a member of the (ground) type?
bool nonempty_in(const TypePtr& t, const FiniteUniverse& u);

// Membership bit-vector over u.values for a ground type.
std::vector<bool> member_set(const TypePtr& t, const FiniteUniverse& u);
bool subset_in(const TypePtr& lhs, const TypePtr& rhs, const FiniteUniverse& u);

// Small fixed menu of ground types over the universe, used to enumerate
// ground assignments to type variables.
const std::vector<TypePtr>& ground_type_menu();

}  // namespace topo
