// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "logicol/dataset.hpp"
#include "logicol/encoder.hpp"

namespace logicol {

// Dense matrix of unit document embeddings for brute-force scanning. The
// model tag pins which parameter state produced it.
struct CorpusIndex {
  int dim = 0;
  std::vector<std::string> doc_ids;
  std::vector<double> embeddings;  // n x dim, unit rows
  std::string model_tag;

  int size() const { return static_cast<int>(doc_ids.size()); }
};

CorpusIndex build_index(const EncoderModel& model,
                        const std::vector<Document>& documents,
                        ExecPolicy policy = ExecPolicy::Parallel);

void save_index(const std::filesystem::path& path, const CorpusIndex& index);
// Throws IoError on format mismatch; if expect_tag is non-empty, also on a
// model/index tag mismatch.
CorpusIndex load_index(const std::filesystem::path& path,
                       const std::string& expect_tag = "");

struct Ranking {
  std::vector<int> positions;   // corpus positions, best first
  std::vector<double> scores;   // non-increasing
};

// Exact top-k by cosine via full scan; ties break by ascending doc id.
Ranking rank(const CorpusIndex& index, std::span<const double> query_embedding,
             int k);

// One ranking per query row, parallel across queries.
std::vector<Ranking> rank_all(const CorpusIndex& index,
                              std::span<const double> query_embeddings,
                              int n_queries, int k,
                              ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace logicol
