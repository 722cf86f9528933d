#pragma once

// Type-directed source-to-source optimizations on transformations:
// dead-rule elimination and dynamic type-test elimination, both justified by
// the content type of the argument collection.

#include <string>
#include <vector>

#include "topo/syntax.hpp"
#include "topo/types.hpp"

namespace topo {

// Drops every rule whose pattern is incompatible with the content type
// (Comp normalizes to 0). Rule order is preserved.
ExprPtr eliminate_dead_rules(const ExprPtr& trans, const TypePtr& content,
                             std::vector<std::string>* report = nullptr);

// Rewrites x:b to x (and b* as x to * as x) when the content type is
// variable-free and every possible element passes the test.
ExprPtr eliminate_type_tests(const ExprPtr& trans, const TypePtr& content,
                             std::vector<std::string>* report = nullptr);

}  // namespace topo
