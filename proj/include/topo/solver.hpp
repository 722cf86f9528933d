#pragma once

// Rewriting-based resolution of inclusion constraint systems over the full
// type algebra: saturation into per-variable bounds, solvability verdicts
// with replayable traces, and least-solution extraction.

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "topo/oracle.hpp"
#include "topo/types.hpp"

namespace topo {

struct SolvedForm {
  struct VarBounds {
    std::vector<TypePtr> lowers;
    // (guard, bound): contributes `bound ? guard` to the least solution.
    std::vector<std::pair<TypePtr, TypePtr>> guarded;
    std::vector<TypePtr> uppers;
  };
  std::map<std::string, VarBounds> vars;
  std::map<std::string, Topology> topo;        // resolved topology variables
  std::map<std::string, std::string> var_rep;  // representative of equal vars
  std::map<std::string, TypePtr> recursive;    // named recursive bindings
  std::vector<std::string> residual;           // discharged checks, for the record
  std::map<std::string, TypePtr> least;        // least solution per variable
  ConstraintSet residual_constraints;          // bounds kept for presentation

  std::string rep(const std::string& v) const {
    auto it = var_rep.find(v);
    return it == var_rep.end() ? v : it->second;
  }
};

struct VerdictUnsolvable {
  Constraint failing;
  std::vector<std::string> trace;  // replayable reduction chain
};

// The input violates the inductive form this solver accepts (never raised on
// generator-produced systems for the shipped corpus).
struct NotInductiveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using SolveResult = std::variant<SolvedForm, VerdictUnsolvable>;

SolveResult solve(const ConstraintSet& constraints);

// Least solution restricted to the requested type variables (plus the
// resolved topology variables). Unbounded variables stay themselves.
Substitution least_solution(const SolvedForm& f,
                            const std::vector<std::string>& target_type_vars);

// Ground oracle check: under a grounding substitution, every constraint's
// member set of the lhs is included in the rhs's within the universe.
// Arrow-typed constraints are decided by the structural rules instead.
bool check_solution(const ConstraintSet& constraints, const Substitution& s,
                    const FiniteUniverse& u);

}  // namespace topo
