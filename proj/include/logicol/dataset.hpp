// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "logicol/logic.hpp"

namespace logicol {

struct Document {
  std::string id;
  std::string title;
  std::string text;
};

struct AtomicQuery {
  std::string id;
  std::string text;
  std::vector<std::string> doc_ids;  // sorted, duplicate-free
};

struct QueryRecord {
  std::string id;
  QueryExpr expr;
  std::string text;
  std::vector<std::string> gt_docs;  // sorted, duplicate-free
  std::string split;                 // train | validation | test
};

// All template variants plus the individual atoms over one shared atom pool.
struct QueryGroup {
  std::vector<std::string> atom_ids;  // sorted pool key
  std::vector<int> members;           // indices into Dataset::queries
};

struct Dataset {
  std::vector<Document> documents;
  std::vector<AtomicQuery> atoms;
  std::vector<QueryRecord> queries;

  std::map<std::string, int> doc_index;
  std::map<std::string, int> atom_index;
  std::map<std::string, int> query_index;

  void rebuild_indexes();

  std::map<std::string, std::vector<std::string>> atom_sets() const;
};

struct LoadStats {
  // Queries whose stored gt_docs disagree with derive_ground_truth over the
  // loaded atom sets.
  int integrity_warnings = 0;
};

// Directory schema: documents.jsonl, atoms.jsonl, queries.jsonl (one JSON
// object per line). Malformed lines raise DatasetError naming file, line
// number and field.
Dataset load_dataset(const std::filesystem::path& dir, LoadStats* stats = nullptr);
void save_dataset(const std::filesystem::path& dir, const Dataset& dataset);

// One group per distinct atom pool of the multi-atom queries; members are
// the pool's template variants plus the pool atoms' single-atom records.
// Pools that end up with fewer than two members are dropped.
std::vector<QueryGroup> build_groups(const Dataset& dataset);

bool valid_split_name(const std::string& s);

}  // namespace logicol
