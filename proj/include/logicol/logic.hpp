// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace logicol {

// The seven boolean query shapes. Two- and three-atom templates take their
// operands in the order of QueryExpr::atoms; Diff(a,b) reads "a minus b".
enum class Template {
  Atom,     // A
  And,      // A & B
  Or,       // A | B
  Diff,     // A - B
  And3,     // A & B & C
  AndDiff,  // A & B - C
  Or3,      // A | B | C
};

inline constexpr Template kAllTemplates[] = {
    Template::Atom, Template::And,     Template::Or,  Template::Diff,
    Template::And3, Template::AndDiff, Template::Or3,
};

int template_arity(Template t);

// Wire codes used by queries.jsonl: "A", "A&B", "A|B", "A-B", "A&B&C",
// "A&B-C", "A|B|C".
std::string_view template_code(Template t);
std::optional<Template> template_from_code(std::string_view code);

struct QueryExpr {
  Template tmpl = Template::Atom;
  std::vector<std::string> atoms;  // size == arity, ids distinct

  bool operator==(const QueryExpr&) const = default;
};

// Canonical string form, e.g. "A&B-C(a1,a2,a3)". Used as a dedup key.
std::string expr_key(const QueryExpr& expr);

// Throws DatasetError if the atom count does not match the template arity or
// atoms repeat within the expression.
void validate_expr(const QueryExpr& expr);

// Standard boolean semantics; Diff(a,b) = a && !b. Throws DatasetError when
// an atom of the expression is missing from the membership map.
bool eval_expr(const QueryExpr& expr, const std::map<std::string, bool>& membership);

// Applies the template's set operations to the atoms' document sets. All doc
// sets are sorted, duplicate-free id vectors. Throws DatasetError on a
// missing atom id.
std::vector<std::string> derive_ground_truth(
    const QueryExpr& expr,
    const std::map<std::string, std::vector<std::string>>& atom_sets);

enum class Relation { None, Subset, Exclusion };

enum class RelationKind { Subset, Exclusion };

// An edge between two in-batch query positions. Subset(src,dst) means src's
// expression implies dst's; Exclusion is symmetric and stored once with
// src < dst.
struct RelationEdge {
  int src = 0;
  int dst = 0;
  RelationKind kind = RelationKind::Subset;

  bool operator==(const RelationEdge&) const = default;
};

// Truth-table enumeration over the union of both expressions' atoms (at most
// six, so at most 64 assignments). Subset is checked before Exclusion, so a
// pair that satisfies both (e1 unsatisfiable) reports Subset. Returns None
// for mere set-theoretic superset; only implication in the stated direction
// counts.
Relation derive_relation(const QueryExpr& e1, const QueryExpr& e2);

// Sorted-vector set helpers shared by ground-truth derivation and the tests.
std::vector<std::string> set_union(const std::vector<std::string>& a,
                                   const std::vector<std::string>& b);
std::vector<std::string> set_intersection(const std::vector<std::string>& a,
                                          const std::vector<std::string>& b);
std::vector<std::string> set_difference(const std::vector<std::string>& a,
                                        const std::vector<std::string>& b);

}  // namespace logicol
