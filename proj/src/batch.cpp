// SPDX-License-Identifier: Apache-2.0
#include "logicol/batch.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace logicol {

std::string_view strategy_name(BatchStrategy s) {
  switch (s) {
    case BatchStrategy::Random:
      return "random";
    case BatchStrategy::Grouped:
      return "grouped";
    case BatchStrategy::Mixed:
      return "mixed";
  }
  return "?";
}

std::optional<BatchStrategy> strategy_from_name(std::string_view name) {
  if (name == "random") return BatchStrategy::Random;
  if (name == "grouped") return BatchStrategy::Grouped;
  if (name == "mixed") return BatchStrategy::Mixed;
  return std::nullopt;
}

std::vector<RelationEdge> batch_edges(const Dataset& dataset,
                                      const std::vector<int>& query_ids) {
  const int n = static_cast<int>(query_ids.size());
  std::vector<RelationEdge> edges;
  for (int i = 0; i < n; ++i) {
    const auto& ei = dataset.queries[static_cast<size_t>(query_ids[static_cast<size_t>(i)])].expr;
    for (int j = i + 1; j < n; ++j) {
      const auto& ej = dataset.queries[static_cast<size_t>(query_ids[static_cast<size_t>(j)])].expr;
      Relation fwd = derive_relation(ei, ej);
      Relation bwd = derive_relation(ej, ei);
      if (fwd == Relation::Subset) {
        // Equivalent expressions hold in both directions; keep one edge.
        edges.push_back({i, j, RelationKind::Subset});
      } else if (bwd == Relation::Subset) {
        edges.push_back({j, i, RelationKind::Subset});
      }
      if (fwd == Relation::Exclusion) {
        edges.push_back({i, j, RelationKind::Exclusion});
      }
    }
  }
  return edges;
}

BatchSampler::BatchSampler(const Dataset& dataset, std::vector<QueryGroup> groups,
                           const BatchConfig& config, uint64_t seed)
    : dataset_(dataset),
      groups_(std::move(groups)),
      config_(config),
      rng_queries_(derive_seed(seed, "batch-queries")),
      rng_groups_(derive_seed(seed, "batch-groups")),
      rng_golds_(derive_seed(seed, "batch-golds")) {
  if (config_.batch_size < 2) {
    throw ConfigError("batch_size must be at least 2");
  }
  if (config_.alpha < 0.0 || config_.alpha > 1.0) {
    throw ConfigError("alpha must lie in [0, 1]");
  }
  for (size_t i = 0; i < dataset_.queries.size(); ++i) {
    const auto& q = dataset_.queries[i];
    if (q.split == "train" && !q.gt_docs.empty()) {
      eligible_.push_back(static_cast<int>(i));
    }
  }
  if (eligible_.empty()) throw DatasetError("no trainable queries in dataset");
  bool needs_groups = config_.strategy == BatchStrategy::Grouped ||
                      (config_.strategy == BatchStrategy::Mixed && config_.alpha < 1.0);
  if (needs_groups && groups_.empty()) {
    throw DatasetError("grouped/mixed batching requires non-empty groups");
  }
}

void BatchSampler::start_epoch() {
  query_stream_ = eligible_;
  rng_queries_.shuffle(query_stream_);
  query_cursor_ = 0;
  group_stream_.resize(groups_.size());
  for (size_t i = 0; i < groups_.size(); ++i) group_stream_[i] = static_cast<int>(i);
  rng_groups_.shuffle(group_stream_);
  group_cursor_ = 0;
  ++epoch_;
  epoch_open_ = true;
}

int BatchSampler::next_random_query() {
  if (query_cursor_ >= query_stream_.size()) return -1;
  return query_stream_[query_cursor_++];
}

bool BatchSampler::next(MiniBatch& batch) {
  // A false return marks exactly one epoch boundary; the call after it
  // begins the next epoch.
  if (pending_epoch_end_) {
    pending_epoch_end_ = false;
    return false;
  }
  if (!epoch_open_) start_epoch();

  batch = MiniBatch{};
  const int size = config_.batch_size;
  int random_slots = 0;
  switch (config_.strategy) {
    case BatchStrategy::Random:
      random_slots = size;
      break;
    case BatchStrategy::Grouped:
      random_slots = 0;
      break;
    case BatchStrategy::Mixed:
      random_slots = static_cast<int>(std::ceil(config_.alpha * size));
      break;
  }
  const int group_slots = size - random_slots;

  std::set<int> taken;
  auto add_query = [&](int q) {
    if (!taken.insert(q).second) return false;
    batch.queries.push_back(q);
    return true;
  };

  for (int filled = 0; filled < random_slots;) {
    int q = next_random_query();
    if (q < 0) break;  // stream exhausted; epoch closes below
    if (add_query(q)) ++filled;
  }

  for (int filled = 0; filled < group_slots;) {
    if (group_cursor_ >= group_stream_.size()) {
      // No group left to serve this slot: fall back to the random stream.
      int q = next_random_query();
      if (q < 0) break;
      if (add_query(q)) {
        ++filled;
        ++batch.fallback_slots;
        ++fallback_total_;
      }
      continue;
    }
    const QueryGroup& group = groups_[static_cast<size_t>(group_stream_[group_cursor_++])];
    // Atoms keep priority when the group must be truncated to fit.
    std::vector<int> members_atomic, members_complex;
    for (int m : group.members) {
      if (dataset_.queries[static_cast<size_t>(m)].expr.tmpl == Template::Atom) {
        members_atomic.push_back(m);
      } else {
        members_complex.push_back(m);
      }
    }
    rng_groups_.shuffle(members_atomic);
    rng_groups_.shuffle(members_complex);
    std::vector<int> ordered = members_atomic;
    ordered.insert(ordered.end(), members_complex.begin(), members_complex.end());
    for (int m : ordered) {
      if (filled == group_slots) break;
      if (add_query(m)) ++filled;
    }
  }

  if (static_cast<int>(batch.queries.size()) < 2) {
    epoch_open_ = false;
    return false;
  }

  bool exhausted = false;
  switch (config_.strategy) {
    case BatchStrategy::Random:
      exhausted = query_cursor_ >= query_stream_.size();
      break;
    case BatchStrategy::Grouped:
      exhausted = group_cursor_ >= group_stream_.size();
      break;
    case BatchStrategy::Mixed:
      exhausted = (config_.alpha > 0.0 && query_cursor_ >= query_stream_.size()) ||
                  (config_.alpha < 1.0 && group_cursor_ >= group_stream_.size());
      break;
  }
  if (exhausted) {
    epoch_open_ = false;
    pending_epoch_end_ = true;
  }

  // One gold document per query; duplicates collapse to one position.
  std::map<int, int> doc_position;
  for (int q : batch.queries) {
    const auto& gt = dataset_.queries[static_cast<size_t>(q)].gt_docs;
    const std::string& doc_id = gt[rng_golds_.index(gt.size())];
    int doc = dataset_.doc_index.at(doc_id);
    if (!doc_position.count(doc)) {
      doc_position[doc] = static_cast<int>(batch.docs.size());
      batch.docs.push_back(doc);
    }
  }

  // P(i): every in-batch document inside query i's ground truth.
  batch.positives.resize(batch.queries.size());
  for (size_t i = 0; i < batch.queries.size(); ++i) {
    const auto& gt = dataset_.queries[static_cast<size_t>(batch.queries[i])].gt_docs;
    for (size_t jpos = 0; jpos < batch.docs.size(); ++jpos) {
      const std::string& doc_id =
          dataset_.documents[static_cast<size_t>(batch.docs[jpos])].id;
      if (std::binary_search(gt.begin(), gt.end(), doc_id)) {
        batch.positives[i].push_back(static_cast<int>(jpos));
      }
    }
    if (batch.positives[i].empty()) {
      throw TrainError("batch construction produced a query with no in-batch positive: " +
                       dataset_.queries[static_cast<size_t>(batch.queries[i])].id);
    }
  }

  batch.edges = batch_edges(dataset_, batch.queries);
  return true;
}

}  // namespace logicol
