// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <functional>

#include "logicol/logic.hpp"
#include "logicol/util.hpp"

using namespace logicol;

namespace {

QueryExpr make(Template t, std::vector<std::string> atoms) {
  return QueryExpr{t, std::move(atoms)};
}

// All expressions over the pool {A,B,C}: every template with every ordered
// selection of distinct atoms.
std::vector<QueryExpr> all_exprs_over(const std::vector<std::string>& pool) {
  std::vector<QueryExpr> out;
  for (Template t : kAllTemplates) {
    int arity = template_arity(t);
    std::vector<int> idx(pool.size());
    for (size_t i = 0; i < pool.size(); ++i) idx[i] = static_cast<int>(i);
    // ordered selections via simple recursion
    std::vector<std::string> chosen;
    std::function<void()> rec = [&]() {
      if (static_cast<int>(chosen.size()) == arity) {
        out.push_back(make(t, chosen));
        return;
      }
      for (const auto& a : pool) {
        if (std::find(chosen.begin(), chosen.end(), a) != chosen.end()) continue;
        chosen.push_back(a);
        rec();
        chosen.pop_back();
      }
    };
    rec();
  }
  return out;
}

// Random universe: doc -> membership bitmask over the pool atoms.
std::map<std::string, std::vector<std::string>> random_universe(
    Rng& rng, const std::vector<std::string>& pool, int n_docs,
    std::vector<std::map<std::string, bool>>* memberships = nullptr) {
  std::map<std::string, std::vector<std::string>> sets;
  for (const auto& a : pool) sets[a] = {};
  for (int d = 0; d < n_docs; ++d) {
    std::string doc = "d" + std::to_string(d);
    std::map<std::string, bool> member;
    for (const auto& a : pool) {
      bool in = rng.chance(0.5);
      member[a] = in;
      if (in) sets[a].push_back(doc);
    }
    if (memberships) memberships->push_back(member);
  }
  for (auto& [atom, docs] : sets) std::sort(docs.begin(), docs.end());
  return sets;
}

}  // namespace

TEST_CASE("template codes round-trip") {
  for (Template t : kAllTemplates) {
    auto back = template_from_code(template_code(t));
    REQUIRE(back.has_value());
    CHECK(*back == t);
  }
  CHECK_FALSE(template_from_code("A&&B").has_value());
}

TEST_CASE("derive_ground_truth applies the set operations") {
  std::map<std::string, std::vector<std::string>> sets{
      {"A", {"1", "2", "3"}}, {"B", {"2", "3", "4"}}};
  CHECK(derive_ground_truth(make(Template::And, {"A", "B"}), sets) ==
        std::vector<std::string>{"2", "3"});
  CHECK(derive_ground_truth(make(Template::Diff, {"A", "B"}), sets) ==
        std::vector<std::string>{"1"});
  CHECK(derive_ground_truth(make(Template::Atom, {"A"}), sets) ==
        std::vector<std::string>{"1", "2", "3"});

  std::map<std::string, std::vector<std::string>> sets3{
      {"A", {"1", "2"}}, {"B", {"2", "3"}}, {"C", {"3", "4"}}};
  // (A & B) - C evaluated by per-document enumeration.
  std::vector<std::string> expected;
  for (const std::string& doc : {"1", "2", "3", "4"}) {
    std::map<std::string, bool> member;
    for (const auto& [atom, docs] : sets3) {
      member[atom] = std::find(docs.begin(), docs.end(), doc) != docs.end();
    }
    if (eval_expr(make(Template::AndDiff, {"A", "B", "C"}), member)) {
      expected.push_back(doc);
    }
  }
  CHECK(expected == std::vector<std::string>{"2"});
  CHECK(derive_ground_truth(make(Template::AndDiff, {"A", "B", "C"}), sets3) ==
        expected);
}

TEST_CASE("derive_ground_truth rejects missing atoms") {
  std::map<std::string, std::vector<std::string>> sets{{"A", {"1"}}};
  CHECK_THROWS_AS(derive_ground_truth(make(Template::And, {"A", "B"}), sets),
                  DatasetError);
}

TEST_CASE("eval_expr boolean semantics") {
  CHECK_FALSE(eval_expr(make(Template::And, {"A", "B"}), {{"A", true}, {"B", false}}));
  CHECK(eval_expr(make(Template::Diff, {"A", "B"}), {{"A", true}, {"B", false}}));
  CHECK_FALSE(eval_expr(make(Template::AndDiff, {"A", "B", "C"}),
                        {{"A", true}, {"B", true}, {"C", true}}));
  CHECK_THROWS_AS(eval_expr(make(Template::And, {"A", "B"}), {{"A", true}}),
                  DatasetError);
}

TEST_CASE("derive_relation on the canonical pairs") {
  auto and_ab = make(Template::And, {"A", "B"});
  auto or_ab = make(Template::Or, {"A", "B"});
  auto diff_ab = make(Template::Diff, {"A", "B"});
  auto atom_a = make(Template::Atom, {"A"});
  auto atom_b = make(Template::Atom, {"B"});

  CHECK(derive_relation(and_ab, atom_a) == Relation::Subset);
  CHECK(derive_relation(diff_ab, atom_b) == Relation::Exclusion);
  CHECK(derive_relation(or_ab, and_ab) == Relation::None);
  CHECK(derive_relation(and_ab, or_ab) == Relation::Subset);
  // Superset without subset stays None.
  CHECK(derive_relation(atom_a, and_ab) == Relation::None);
}

TEST_CASE("derive_relation reports equivalent expressions as Subset both ways") {
  auto or_ab = make(Template::Or, {"A", "B"});
  auto or_ba = make(Template::Or, {"B", "A"});
  CHECK(derive_relation(or_ab, or_ba) == Relation::Subset);
  CHECK(derive_relation(or_ba, or_ab) == Relation::Subset);
}

TEST_CASE("ground truth membership matches expression evaluation") {
  Rng rng(42);
  std::vector<std::string> pool{"A", "B", "C"};
  auto exprs = all_exprs_over(pool);
  for (int round = 0; round < 20; ++round) {
    std::vector<std::map<std::string, bool>> memberships;
    auto sets = random_universe(rng, pool, 30, &memberships);
    for (const auto& e : exprs) {
      auto gt = derive_ground_truth(e, sets);
      for (int d = 0; d < 30; ++d) {
        std::string doc = "d" + std::to_string(d);
        bool in_gt = std::binary_search(gt.begin(), gt.end(), doc);
        CHECK(in_gt == eval_expr(e, memberships[static_cast<size_t>(d)]));
      }
    }
  }
}

TEST_CASE("relations imply containment and disjointness on every universe") {
  Rng rng(7);
  std::vector<std::string> pool{"A", "B", "C"};
  auto exprs = all_exprs_over(pool);

  // Precompute pairwise relations once; they are universe-independent.
  for (size_t i = 0; i < exprs.size(); ++i) {
    for (size_t j = 0; j < exprs.size(); ++j) {
      if (i == j) continue;
      Relation r = derive_relation(exprs[i], exprs[j]);
      // Exclusion symmetry.
      if (r == Relation::Exclusion) {
        CHECK(derive_relation(exprs[j], exprs[i]) == Relation::Exclusion);
      }
      if (r == Relation::None) continue;
      for (int round = 0; round < 5; ++round) {
        auto sets = random_universe(rng, pool, 25);
        auto gt1 = derive_ground_truth(exprs[i], sets);
        auto gt2 = derive_ground_truth(exprs[j], sets);
        if (r == Relation::Subset) {
          CHECK(std::includes(gt2.begin(), gt2.end(), gt1.begin(), gt1.end()));
        } else {
          CHECK(set_intersection(gt1, gt2).empty());
        }
      }
    }
  }
}

TEST_CASE("validate_expr enforces arity and distinctness") {
  CHECK_THROWS_AS(validate_expr(make(Template::And, {"A"})), DatasetError);
  CHECK_THROWS_AS(validate_expr(make(Template::And, {"A", "A"})), DatasetError);
  CHECK_NOTHROW(validate_expr(make(Template::And, {"A", "B"})));
}
