// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "logicol/index.hpp"

namespace logicol {

struct PrMetrics {
  double p_at_1 = 0.0;
  std::map<int, double> recall_at;  // k -> recall
};

// P@1 = [top-1 in gt]; R@k = |top-k ∩ gt| / |gt|. gt must be non-empty
// (callers exclude and count empty-gt queries).
PrMetrics precision_recall(const Ranking& ranking,
                           const std::vector<std::string>& doc_ids,
                           const std::vector<std::string>& gt_docs,
                           const std::vector<int>& ks);

// One negation query's rank evidence: 1-based ranks of its ground-truth and
// logically excluded documents over the full corpus ordering.
struct ViolationCase {
  std::vector<int> gt_ranks;
  std::vector<int> excluded_ranks;
};

// true when the excluded documents outrank the gold ones on average.
bool is_violation(const ViolationCase& vc);

struct ViolationStats {
  double rate = 0.0;       // fraction of eligible queries violating
  int eligible = 0;        // queries with a non-empty excluded set
  int skipped_empty = 0;   // negation queries skipped for empty excluded set
};

ViolationStats violation_rate(const std::vector<ViolationCase>& cases,
                              int skipped_empty = 0);

// Mean pairwise cosine over the group members' unit embeddings; requires
// n >= 2.
double avg_group_sim(std::span<const double> embeddings, int n, int dim);

double pearson(std::span<const double> x, std::span<const double> y,
               bool* defined = nullptr);

struct CorrelationRecord {
  std::string query1;
  std::string query2;
  double pearson_r = 0.0;
  bool r_defined = false;
  int topk_overlap = 0;
  int pool_size = 0;
};

// Scores both queries against the union of their top-k document pools and
// correlates the two score vectors; overlap counts shared top-k documents.
CorrelationRecord similarity_correlation(const CorpusIndex& index,
                                         std::span<const double> emb1,
                                         std::span<const double> emb2, int k);

}  // namespace logicol
