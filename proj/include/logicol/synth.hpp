// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "logicol/dataset.hpp"
#include "logicol/util.hpp"

namespace logicol {

// Synthetic corpus: entities carrying category sets, categories doubling as
// atomic queries ("<class> of <region>"). Complex queries are composed per
// template over small atom pools drawn within one class, so intersections
// and differences come out non-empty.
struct SynthConfig {
  int n_entities = 2000;
  int n_atoms = 60;
  int n_classes = 12;
  // Mean number of categories per entity, within its class.
  double mean_categories = 3.0;
  // Number of 2- or 3-atom pools to draw (each pool becomes a query group).
  int n_pools = 180;
  double pool3_fraction = 0.5;
  // Split fractions applied to pools; the remainder is the test split.
  double train_fraction = 0.70;
  double validation_fraction = 0.10;
  // Complex variants kept per pool in the baseline (sparse-sharing) dataset.
  int baseline_variants_per_pool = 1;
  // How many surface renderings per connective are sampled from (1..3).
  int surface_variety = 3;
};

SynthConfig synth_config_from_json_file(const std::filesystem::path& path);
std::string synth_config_to_json(const SynthConfig& config);

struct SynthReport {
  int atoms_dropped_empty = 0;
  int variants_dropped_empty = 0;
  int pools_generated = 0;
  // split -> template code -> count, for the variants dataset.
  std::map<std::string, std::map<std::string, int>> variant_counts;
  std::map<std::string, std::map<std::string, int>> baseline_counts;
};

struct SynthOutput {
  Dataset variants;  // full template variants per pool
  Dataset baseline;  // atoms plus a sampled subset of variants per pool
  SynthReport report;
};

SynthOutput synthesize(const SynthConfig& config, uint64_t seed);

// Composition step: given an ordered atom pool (size 2 or 3), emits the
// pool's single-atom records plus every applicable multi-atom template
// instance whose derived ground truth is non-empty. Record ids are assigned
// by the caller.
struct ComposedQuery {
  QueryExpr expr;
  std::string text;
  std::vector<std::string> gt_docs;
};

std::vector<ComposedQuery> compose_variants(
    const std::vector<std::string>& pool_atom_ids,
    const std::map<std::string, std::string>& atom_texts,
    const std::map<std::string, std::vector<std::string>>& atom_sets,
    int surface_variety, Rng& rng, int* dropped_empty = nullptr);

}  // namespace logicol
