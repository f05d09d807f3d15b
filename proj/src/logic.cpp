// SPDX-License-Identifier: Apache-2.0
#include "logicol/logic.hpp"

#include <algorithm>

#include "logicol/util.hpp"

namespace logicol {

int template_arity(Template t) {
  switch (t) {
    case Template::Atom:
      return 1;
    case Template::And:
    case Template::Or:
    case Template::Diff:
      return 2;
    case Template::And3:
    case Template::AndDiff:
    case Template::Or3:
      return 3;
  }
  return 0;
}

std::string_view template_code(Template t) {
  switch (t) {
    case Template::Atom:
      return "A";
    case Template::And:
      return "A&B";
    case Template::Or:
      return "A|B";
    case Template::Diff:
      return "A-B";
    case Template::And3:
      return "A&B&C";
    case Template::AndDiff:
      return "A&B-C";
    case Template::Or3:
      return "A|B|C";
  }
  return "?";
}

std::optional<Template> template_from_code(std::string_view code) {
  for (Template t : kAllTemplates) {
    if (template_code(t) == code) return t;
  }
  return std::nullopt;
}

std::string expr_key(const QueryExpr& expr) {
  std::string key(template_code(expr.tmpl));
  key += '(';
  for (size_t i = 0; i < expr.atoms.size(); ++i) {
    if (i) key += ',';
    key += expr.atoms[i];
  }
  key += ')';
  return key;
}

void validate_expr(const QueryExpr& expr) {
  int arity = template_arity(expr.tmpl);
  if (static_cast<int>(expr.atoms.size()) != arity) {
    throw DatasetError("expression " + expr_key(expr) + ": expected " +
                       std::to_string(arity) + " atoms, got " +
                       std::to_string(expr.atoms.size()));
  }
  for (size_t i = 0; i < expr.atoms.size(); ++i) {
    if (expr.atoms[i].empty()) {
      throw DatasetError("expression " + expr_key(expr) + ": empty atom id");
    }
    for (size_t j = i + 1; j < expr.atoms.size(); ++j) {
      if (expr.atoms[i] == expr.atoms[j]) {
        throw DatasetError("expression " + expr_key(expr) +
                           ": atoms must be distinct");
      }
    }
  }
}

namespace {

// Boolean value of the expression when atom k of expr.atoms has value
// values[k].
bool eval_with_values(Template t, const bool* v) {
  switch (t) {
    case Template::Atom:
      return v[0];
    case Template::And:
      return v[0] && v[1];
    case Template::Or:
      return v[0] || v[1];
    case Template::Diff:
      return v[0] && !v[1];
    case Template::And3:
      return v[0] && v[1] && v[2];
    case Template::AndDiff:
      return v[0] && v[1] && !v[2];
    case Template::Or3:
      return v[0] || v[1] || v[2];
  }
  return false;
}

}  // namespace

bool eval_expr(const QueryExpr& expr, const std::map<std::string, bool>& membership) {
  bool v[3] = {false, false, false};
  for (size_t i = 0; i < expr.atoms.size(); ++i) {
    auto it = membership.find(expr.atoms[i]);
    if (it == membership.end()) {
      throw DatasetError("eval_expr: no membership entry for atom '" +
                         expr.atoms[i] + "'");
    }
    v[i] = it->second;
  }
  return eval_with_values(expr.tmpl, v);
}

std::vector<std::string> set_union(const std::vector<std::string>& a,
                                   const std::vector<std::string>& b) {
  std::vector<std::string> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::string> set_intersection(const std::vector<std::string>& a,
                                          const std::vector<std::string>& b) {
  std::vector<std::string> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

std::vector<std::string> set_difference(const std::vector<std::string>& a,
                                        const std::vector<std::string>& b) {
  std::vector<std::string> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

std::vector<std::string> derive_ground_truth(
    const QueryExpr& expr,
    const std::map<std::string, std::vector<std::string>>& atom_sets) {
  auto get = [&](int i) -> const std::vector<std::string>& {
    auto it = atom_sets.find(expr.atoms[static_cast<size_t>(i)]);
    if (it == atom_sets.end()) {
      throw DatasetError("derive_ground_truth: unknown atom id '" +
                         expr.atoms[static_cast<size_t>(i)] + "'");
    }
    return it->second;
  };
  switch (expr.tmpl) {
    case Template::Atom:
      return get(0);
    case Template::And:
      return set_intersection(get(0), get(1));
    case Template::Or:
      return set_union(get(0), get(1));
    case Template::Diff:
      return set_difference(get(0), get(1));
    case Template::And3:
      return set_intersection(set_intersection(get(0), get(1)), get(2));
    case Template::AndDiff:
      return set_difference(set_intersection(get(0), get(1)), get(2));
    case Template::Or3:
      return set_union(set_union(get(0), get(1)), get(2));
  }
  return {};
}

Relation derive_relation(const QueryExpr& e1, const QueryExpr& e2) {
  // Union of atoms, positions frozen for mask indexing.
  std::vector<std::string> atoms = e1.atoms;
  for (const auto& a : e2.atoms) {
    if (std::find(atoms.begin(), atoms.end(), a) == atoms.end()) atoms.push_back(a);
  }
  auto position = [&](const std::string& a) {
    return static_cast<size_t>(
        std::find(atoms.begin(), atoms.end(), a) - atoms.begin());
  };
  std::vector<size_t> pos1(e1.atoms.size()), pos2(e2.atoms.size());
  for (size_t i = 0; i < e1.atoms.size(); ++i) pos1[i] = position(e1.atoms[i]);
  for (size_t i = 0; i < e2.atoms.size(); ++i) pos2[i] = position(e2.atoms[i]);

  auto eval_mask = [](Template t, const std::vector<size_t>& pos, uint32_t mask) {
    bool v[3] = {false, false, false};
    for (size_t i = 0; i < pos.size(); ++i) v[i] = (mask >> pos[i]) & 1u;
    return eval_with_values(t, v);
  };

  bool implies = true;    // e1 => e2 under every assignment
  bool disjoint = true;   // e1 && e2 unsatisfiable
  uint32_t n = 1u << atoms.size();
  for (uint32_t mask = 0; mask < n; ++mask) {
    bool b1 = eval_mask(e1.tmpl, pos1, mask);
    bool b2 = eval_mask(e2.tmpl, pos2, mask);
    if (b1 && !b2) implies = false;
    if (b1 && b2) disjoint = false;
    if (!implies && !disjoint) return Relation::None;
  }
  if (implies) return Relation::Subset;
  if (disjoint) return Relation::Exclusion;
  return Relation::None;
}

}  // namespace logicol
