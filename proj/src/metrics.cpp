// SPDX-License-Identifier: Apache-2.0
#include "logicol/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "logicol/util.hpp"

namespace logicol {

PrMetrics precision_recall(const Ranking& ranking,
                           const std::vector<std::string>& doc_ids,
                           const std::vector<std::string>& gt_docs,
                           const std::vector<int>& ks) {
  if (gt_docs.empty()) throw DatasetError("precision_recall: empty ground truth");
  std::set<std::string> gt(gt_docs.begin(), gt_docs.end());
  PrMetrics out;
  if (!ranking.positions.empty()) {
    out.p_at_1 = gt.count(doc_ids[static_cast<size_t>(ranking.positions[0])]) ? 1.0 : 0.0;
  }
  for (int k : ks) {
    int hits = 0;
    int limit = std::min<int>(k, static_cast<int>(ranking.positions.size()));
    for (int i = 0; i < limit; ++i) {
      if (gt.count(doc_ids[static_cast<size_t>(ranking.positions[static_cast<size_t>(i)])])) ++hits;
    }
    out.recall_at[k] = static_cast<double>(hits) / static_cast<double>(gt.size());
  }
  return out;
}

bool is_violation(const ViolationCase& vc) {
  if (vc.gt_ranks.empty() || vc.excluded_ranks.empty()) return false;
  double gt_sum = 0.0, ex_sum = 0.0;
  for (int r : vc.gt_ranks) gt_sum += r;
  for (int r : vc.excluded_ranks) ex_sum += r;
  double avg_gt = gt_sum / static_cast<double>(vc.gt_ranks.size());
  double avg_ex = ex_sum / static_cast<double>(vc.excluded_ranks.size());
  return avg_ex < avg_gt;
}

ViolationStats violation_rate(const std::vector<ViolationCase>& cases,
                              int skipped_empty) {
  ViolationStats out;
  out.eligible = static_cast<int>(cases.size());
  out.skipped_empty = skipped_empty;
  if (cases.empty()) return out;
  int violations = 0;
  for (const auto& vc : cases) {
    if (is_violation(vc)) ++violations;
  }
  out.rate = static_cast<double>(violations) / static_cast<double>(cases.size());
  return out;
}

double avg_group_sim(std::span<const double> embeddings, int n, int dim) {
  if (n < 2) throw ConfigError("avg_group_sim: need at least two members");
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double* a = embeddings.data() + static_cast<size_t>(i) * dim;
    for (int j = i + 1; j < n; ++j) {
      const double* b = embeddings.data() + static_cast<size_t>(j) * dim;
      double s = 0.0;
      for (int t = 0; t < dim; ++t) s += a[t] * b[t];
      sum += s;
    }
  }
  return 2.0 * sum / (static_cast<double>(n) * (n - 1));
}

double pearson(std::span<const double> x, std::span<const double> y, bool* defined) {
  if (x.size() != y.size() || x.empty()) {
    throw ConfigError("pearson: vectors must be equal-length and non-empty");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double cov = 0.0, vx = 0.0, vy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    cov += dx * dy;
    vx += dx * dx;
    vy += dy * dy;
  }
  if (vx < 1e-300 || vy < 1e-300) {
    if (defined) *defined = false;
    return 0.0;
  }
  if (defined) *defined = true;
  return cov / std::sqrt(vx * vy);
}

CorrelationRecord similarity_correlation(const CorpusIndex& index,
                                         std::span<const double> emb1,
                                         std::span<const double> emb2, int k) {
  CorrelationRecord rec;
  k = std::min(k, index.size());
  Ranking r1 = rank(index, emb1, k);
  Ranking r2 = rank(index, emb2, k);

  std::set<int> top1(r1.positions.begin(), r1.positions.end());
  int overlap = 0;
  for (int pos : r2.positions) {
    if (top1.count(pos)) ++overlap;
  }
  rec.topk_overlap = overlap;

  std::vector<int> pool(r1.positions.begin(), r1.positions.end());
  pool.insert(pool.end(), r2.positions.begin(), r2.positions.end());
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  rec.pool_size = static_cast<int>(pool.size());

  std::vector<double> s1, s2;
  s1.reserve(pool.size());
  s2.reserve(pool.size());
  for (int pos : pool) {
    const double* d = index.embeddings.data() + static_cast<size_t>(pos) * index.dim;
    double a = 0.0, b = 0.0;
    for (int t = 0; t < index.dim; ++t) {
      a += emb1[static_cast<size_t>(t)] * d[t];
      b += emb2[static_cast<size_t>(t)] * d[t];
    }
    s1.push_back(a);
    s2.push_back(b);
  }
  rec.pearson_r = pearson(s1, s2, &rec.r_defined);
  return rec;
}

}  // namespace logicol
