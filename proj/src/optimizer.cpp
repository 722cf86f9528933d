#include "topo/optimizer.hpp"

#include <stdexcept>

#include "topo/constraints.hpp"

namespace topo {

static void require_trans(const ExprPtr& e) {
  if (e->kind != ExprKind::Trans)
    throw std::invalid_argument("optimizer passes apply to transformations");
}

ExprPtr eliminate_dead_rules(const ExprPtr& trans, const TypePtr& content,
                             std::vector<std::string>* report) {
  require_trans(trans);
  std::vector<Rule> kept;
  for (size_t i = 0; i < trans->rules.size(); ++i) {
    const Rule& r = trans->rules[i];
    TypePtr compat = normalize(comp(r.pattern.elements, content));
    if (compat->kind == TypeKind::Zero) {
      if (report)
        report->push_back("dropped rule " + std::to_string(i + 1) + ": " +
                          pretty(r.pattern) + " cannot match content type " +
                          pretty(content));
      continue;
    }
    kept.push_back(r);
  }
  if (kept.size() == trans->rules.size()) return trans;
  return e_trans(std::move(kept), trans->loc);
}

ExprPtr eliminate_type_tests(const ExprPtr& trans, const TypePtr& content,
                             std::vector<std::string>* report) {
  require_trans(trans);
  if (!is_ground(content)) return trans;
  TypePtr norm_content = normalize(content);
  bool changed = false;
  std::vector<Rule> rules;
  for (const Rule& r : trans->rules) {
    Rule out = r;
    for (auto& e : out.pattern.elements) {
      if (e.kind != ElemKind::Typed && e.kind != ElemKind::TypedStar) continue;
      TypePtr tested = normalize(t_inter(content, t_base(e.base)));
      if (!equal(tested, norm_content)) continue;
      if (report)
        report->push_back("dropped type test :" +
                          std::string(name_of(e.base)) + " on '" + e.var +
                          "': every element of " + pretty(content) +
                          " passes it");
      e.kind = e.kind == ElemKind::Typed ? ElemKind::Plain : ElemKind::Star;
      changed = true;
    }
    rules.push_back(std::move(out));
  }
  if (!changed) return trans;
  return e_trans(std::move(rules), trans->loc);
}

}  // namespace topo
