#pragma once

// JSON wire formats: one object per AST node with a "kind" field, and the
// type/constraint dumps consumed by the standalone solver entry point.

#include <json.hpp>

#include "topo/syntax.hpp"
#include "topo/types.hpp"

namespace topo {

nlohmann::json to_json(const TypePtr& t);
TypePtr type_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TypeScheme& s);
TypeScheme scheme_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ConstraintSet& cs);
ConstraintSet constraints_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ExprPtr& e);
ExprPtr expr_from_json(const nlohmann::json& j);

}  // namespace topo
