// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "logicol/report.hpp"
#include "logicol/trainer.hpp"

namespace logicol {

inline constexpr const char* kToolVersion = "1.0.0";

// The ablation grid: (training data, batching, constraint weights).
//   SupCon                = baseline data, random batching, no constraints
//   NoGroupNoConstraints  = variants data, random batching, no constraints
//   NoMixNoConstraints    = variants data, all-grouped (alpha = 0), no constraints
//   NoConstraints         = variants data, mixed batching, no constraints
//   Full                  = variants data, mixed batching, both constraints
enum class Variant { SupCon, NoGroupNoConstraints, NoMixNoConstraints, NoConstraints, Full };

std::string_view variant_name(Variant v);
std::optional<Variant> variant_from_name(std::string_view name);

struct ExperimentConfig {
  std::filesystem::path data_root;  // contains baseline/ and variants/
  std::optional<Variant> variant;
  std::string train_dataset = "variants";  // subdirectory under data_root
  std::string eval_dataset = "variants";
  TrainConfig train;
  EvalOptions eval;
};

// Rewrites dataset/strategy/lambdas per the variant table above.
void apply_variant(Variant v, ExperimentConfig& config);

// Schema round-trip for config files. from_json accepts either a bare config
// object or a run manifest (whose "config" member is then used), so any run
// can be reproduced straight from its manifest.
ExperimentConfig experiment_config_from_json(const std::string& text);
std::string experiment_config_to_json(const ExperimentConfig& config);

// When the config text is a run manifest carrying dataset checksums, verify
// them against the files on disk. Throws DatasetError on a mismatch; a bare
// config (no recorded checksums) passes trivially.
void verify_manifest_checksums(const std::string& config_text);

struct ExperimentResult {
  EvalReport report;
  std::filesystem::path checkpoint_path;
  std::filesystem::path report_path;
  std::filesystem::path loss_csv_path;
  std::filesystem::path manifest_path;
};

// Full run: integrity-check datasets, train, checkpoint, evaluate, and write
// the manifest. Aborts (throws) before training if any dataset record's
// ground truth disagrees with its expression.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::filesystem::path& out_dir);

// One Full-variant run per alpha value with shared seeds; writes
// out_dir/sweep.csv plus the per-run artifacts under out_dir/alpha_<v>/.
std::filesystem::path alpha_sweep(const std::vector<double>& alphas,
                                  ExperimentConfig base,
                                  const std::filesystem::path& out_dir);

}  // namespace logicol
