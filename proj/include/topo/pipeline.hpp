#pragma once

// End-to-end flows shared by the command-line tool, the corpus runner and
// the acceptance suite: strong typechecking, soft typechecking with solving
// and least-solution presentation, and the per-file corpus check.

#include <string>
#include <vector>

#include "topo/constraints.hpp"
#include "topo/runtime.hpp"
#include "topo/solver.hpp"
#include "topo/syntax.hpp"
#include "topo/types.hpp"

namespace topo {

TypeScheme typecheck_strong(const ExprPtr& e);

struct SoftResult {
  TypePtr raw_type;             // as generated, before solving
  ConstraintSet raw_constraints;
  SolvedForm solved;
  TypePtr solved_type;          // after least_solution and presentation cleanup
  TypeScheme scheme;            // quantified presentation form
};

SoftResult typecheck_soft(const ExprPtr& e, bool refine_catch_all = false);

// Reads an optional leading "// dialect: strong|soft" header; defaults soft.
Dialect dialect_of_source(const std::string& source);

std::string read_file(const std::string& path);

struct CorpusFileResult {
  std::string path;
  Dialect dialect = Dialect::Soft;
  bool typechecked = false;
  bool ran = false;            // evaluation produced a value within fuel
  bool never_wrong = false;    // outcome was not Wrong
  bool member_ok = false;      // first-order results inhabit the scheme
  bool pass = false;
  std::string scheme_text;
  std::string outcome_text;
  std::string detail;
};

CorpusFileResult check_corpus_file(const std::string& path, long long fuel);

// Membership of a value in a scheme: every sampled instantiation of the
// quantified variables that satisfies the scheme's constraints must accept
// the value. Non-first-order values are out of the oracle's scope and
// return true.
bool value_in_scheme(const ValuePtr& v, const TypeScheme& scheme);

long long default_fuel();  // TOPOCHECK_FUEL, falling back to 100000

}  // namespace topo
