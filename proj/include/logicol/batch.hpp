// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "logicol/dataset.hpp"
#include "logicol/util.hpp"

namespace logicol {

enum class BatchStrategy { Random, Grouped, Mixed };

std::string_view strategy_name(BatchStrategy s);
std::optional<BatchStrategy> strategy_from_name(std::string_view name);

struct BatchConfig {
  BatchStrategy strategy = BatchStrategy::Mixed;
  double alpha = 0.5;  // fraction of random slots in a mixed batch
  int batch_size = 16;
};

// The unit every loss consumes: queries, sampled documents, in-batch
// positive positions P(i), and the relation edges between query positions.
struct MiniBatch {
  std::vector<int> queries;                 // indices into Dataset::queries
  std::vector<int> docs;                    // indices into Dataset::documents
  std::vector<std::vector<int>> positives;  // per query, positions into docs
  std::vector<RelationEdge> edges;          // over query positions
  int fallback_slots = 0;                   // grouped slots served randomly
};

// Relation edges over the batch's query expressions: every Subset direction
// that holds, plus one canonical (src < dst) edge per Exclusion pair.
// Logically equivalent pairs keep a single Subset edge.
std::vector<RelationEdge> batch_edges(const Dataset& dataset,
                                      const std::vector<int>& query_ids);

// Epoch-based sampler. Three independent rng streams (query shuffling,
// group shuffling, gold-document draws) keep Mixed with alpha=1 bit-exactly
// equal to Random and alpha=0 equal to Grouped under one seed.
class BatchSampler {
 public:
  BatchSampler(const Dataset& dataset, std::vector<QueryGroup> groups,
               const BatchConfig& config, uint64_t seed);

  // Fills the next mini-batch of the epoch; returns false when the epoch is
  // exhausted (the next call starts a new epoch).
  bool next(MiniBatch& batch);

  int epoch() const { return epoch_; }
  int fallback_total() const { return fallback_total_; }

 private:
  void start_epoch();
  int next_random_query();

  const Dataset& dataset_;
  std::vector<QueryGroup> groups_;
  BatchConfig config_;
  Rng rng_queries_;
  Rng rng_groups_;
  Rng rng_golds_;

  std::vector<int> eligible_;       // train queries with non-empty gt
  std::vector<int> query_stream_;   // epoch permutation of eligible_
  size_t query_cursor_ = 0;
  std::vector<int> group_stream_;   // epoch permutation of group indices
  size_t group_cursor_ = 0;
  int epoch_ = 0;
  bool epoch_open_ = false;
  bool pending_epoch_end_ = false;
  int fallback_total_ = 0;
};

}  // namespace logicol
