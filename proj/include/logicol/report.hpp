// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "logicol/dataset.hpp"
#include "logicol/encoder.hpp"
#include "logicol/index.hpp"
#include "logicol/metrics.hpp"

namespace logicol {

struct EvalOptions {
  std::string split = "test";
  std::vector<int> ks = {5, 20, 100, 1000};
  // Pool size for the intersection-vs-negation correlation analysis; 0
  // disables it.
  int correlation_k = 100;
  ExecPolicy policy = ExecPolicy::Parallel;
};

struct TemplateMetrics {
  int n_queries = 0;
  double p_at_1 = 0.0;
  std::map<int, double> recall_at;
};

struct GroupSim {
  std::string pool;  // comma-joined sorted atom ids
  int members = 0;
  double value = 0.0;
};

struct EvalReport {
  std::string split;
  std::string model_tag;
  int corpus_size = 0;
  std::vector<int> ks;  // after the small-corpus adjustment
  TemplateMetrics overall;
  std::map<std::string, TemplateMetrics> by_template;
  // Rollups: none / intersection / negation / union.
  std::map<std::string, TemplateMetrics> by_category;
  ViolationStats violation;
  double group_sim_mean = 0.0;
  std::vector<GroupSim> group_sims;
  std::vector<CorrelationRecord> correlations;
  double correlation_mean_r = 0.0;
  double correlation_mean_overlap = 0.0;
  int correlation_undefined = 0;
  int skipped_empty_gt = 0;

  double overall_recall(int k) const;
  double category_recall(const std::string& category, int k) const;
};

// "none", "intersection", "negation" or "union".
std::string template_category(Template t);

// When k exceeds the corpus, recall is reported at ceil(corpus/3) instead;
// the adjusted list is what the report carries.
std::vector<int> adjust_ks(const std::vector<int>& ks, int corpus_size);

// Builds the full metric suite for one model over one dataset split. A
// prebuilt corpus index may be supplied (its model tag must match); by
// default the index is built in-memory from the dataset's documents.
EvalReport evaluate(const EncoderModel& model, const Dataset& dataset,
                    const EvalOptions& options,
                    const CorpusIndex* prebuilt_index = nullptr);

// Deterministic JSON rendering (sorted keys).
std::string report_to_json(const EvalReport& report);

// Intersection-vs-negation query pairs of a split: (A&B, A-B) and
// (A&B&C, A&B-C) over the same atom pool.
std::vector<std::pair<int, int>> and_not_pairs(const Dataset& dataset,
                                               const std::string& split);

}  // namespace logicol
