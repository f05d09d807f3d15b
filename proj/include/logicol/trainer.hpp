// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <vector>

#include "logicol/batch.hpp"
#include "logicol/dataset.hpp"
#include "logicol/encoder.hpp"
#include "logicol/losses.hpp"

namespace logicol {

struct TrainConfig {
  BatchConfig batch;
  LossConfig loss;
  AdamConfig optim;
  HashConfig hash;
  int embed_dim = 64;
  int epochs = 10;
  uint64_t seed = 0;  // split internally into init/batching streams
  int checkpoint_every = 0;  // epochs between mid-run checkpoints; 0 = none
  ExecPolicy policy = ExecPolicy::Parallel;

  void validate() const;
};

struct EpochStats {
  double supcon = 0.0;
  double exclusion = 0.0;
  double subset = 0.0;
  double joint = 0.0;
  int steps = 0;
};

struct TrainResult {
  EncoderModel model;
  std::vector<EpochStats> epochs;
  int total_steps = 0;
  int fallback_slots = 0;       // grouped slots served from the random stream
  int fallback_embeddings = 0;  // zero-vector embeddings hit during training
};

// Runs the full training loop. Groups are derived from the dataset's train
// split. If loss_csv is non-null, one row of per-step loss components is
// appended per update. Optional per-epoch checkpoints land in checkpoint_dir.
TrainResult train_model(const Dataset& dataset, const TrainConfig& config,
                        std::ostream* loss_csv = nullptr,
                        const std::filesystem::path* checkpoint_dir = nullptr);

extern const char* const kLossCsvHeader;

}  // namespace logicol
