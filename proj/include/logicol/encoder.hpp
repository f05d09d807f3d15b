// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "logicol/kernels.hpp"

namespace logicol {

struct HashConfig {
  uint32_t feature_dim = 1u << 15;  // power of two
  int max_ngram = 2;                // 1 = unigrams only, 2 = + bigrams
  uint64_t seed = 0x5851f42d4c957f2dULL;

  bool operator==(const HashConfig&) const = default;
};

// Sparse hashed bag of n-grams. Entries are sorted by bucket index and carry
// strictly positive counts.
struct FeatureVector {
  std::vector<std::pair<uint32_t, float>> entries;

  bool empty() const { return entries.empty(); }
};

// Lowercases, splits on non-alphanumerics, hashes word unigrams and bigrams
// into feature_dim buckets. Deterministic.
FeatureVector featurize(std::string_view text, const HashConfig& config);

// Linear embedder on hashed features: y = normalize(W^T x). The zero-input
// edge case maps to a fixed unit vector (1, 0, ..., 0) and is flagged so
// training can log it.
struct EncoderModel {
  HashConfig hash;
  int embed_dim = 64;
  std::vector<double> weights;  // feature_dim x embed_dim, row-major
  std::string version_tag;

  size_t param_count() const { return weights.size(); }

  static EncoderModel init(const HashConfig& hash, int embed_dim, uint64_t seed);
};

// Embeds one feature vector; out must have embed_dim slots. Returns the
// pre-normalization norm (0 means the fallback vector was used). If
// fallback != nullptr it is set accordingly.
double embed(const EncoderModel& model, const FeatureVector& fv,
             std::span<double> out, bool* fallback = nullptr);

struct BatchEmbeddings {
  int dim = 0;
  std::vector<double> vectors;    // n x dim unit rows
  std::vector<double> norms;      // pre-normalization norms
  std::vector<uint8_t> fallback;  // 1 where the fixed fallback vector was used
  int count() const { return static_cast<int>(norms.size()); }
};

BatchEmbeddings embed_batch(const EncoderModel& model,
                            std::span<const FeatureVector> fvs,
                            ExecPolicy policy = ExecPolicy::Parallel);

// Chain rule through normalize and the linear map: given upstream gradients
// with respect to the unit embeddings (n x dim), accumulates dL/dW into
// grad_w (same shape as weights). Fallback items contribute nothing, their
// output being constant.
void accumulate_weight_grad(const EncoderModel& model,
                            std::span<const FeatureVector> fvs,
                            const BatchEmbeddings& emb,
                            std::span<const double> upstream,
                            std::span<double> grad_w,
                            ExecPolicy policy = ExecPolicy::Parallel);

struct AdamConfig {
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  int64_t step = 0;
  std::vector<double> m;
  std::vector<double> v;

  static AdamState init(size_t param_count);
};

// One adaptive-moment update. Throws TrainError (before touching any state)
// if the gradient contains a non-finite value.
void adam_step(AdamState& state, std::span<double> params,
               std::span<const double> grad, const AdamConfig& config,
               ExecPolicy policy = ExecPolicy::Parallel);

// Versioned binary checkpoint: header (format version, hash config, dims)
// followed by the raw row-major weights. Loading a file with a different
// magic or format version throws IoError.
void save_model(const std::filesystem::path& path, const EncoderModel& model);
EncoderModel load_model(const std::filesystem::path& path);

// Tag identifying the exact parameter state; stored in indexes so stale
// indexes are rejected.
std::string model_tag(const EncoderModel& model);

}  // namespace logicol
