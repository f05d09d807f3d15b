// SPDX-License-Identifier: Apache-2.0
#include "logicol/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "logicol/util.hpp"

namespace logicol {

namespace {

constexpr uint32_t kCheckpointMagic = 0x4c43474cu;  // "LGCL"
constexpr uint32_t kCheckpointVersion = 1;

uint64_t hash_token(std::string_view token, uint64_t seed) {
  uint64_t h = fnv1a64(token);
  h ^= seed;
  h *= 0x100000001b3ULL;
  h ^= h >> 29;
  return h;
}

}  // namespace

FeatureVector featurize(std::string_view text, const HashConfig& config) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    bool alnum = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                 (ch >= '0' && ch <= '9');
    if (alnum) {
      if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
      current += ch;
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));

  uint32_t mask = config.feature_dim - 1;
  std::vector<uint32_t> buckets;
  buckets.reserve(tokens.size() * 2);
  for (const auto& tok : tokens) {
    buckets.push_back(static_cast<uint32_t>(hash_token(tok, config.seed)) & mask);
  }
  if (config.max_ngram >= 2) {
    for (size_t i = 0; i + 1 < tokens.size(); ++i) {
      std::string joined = tokens[i];
      joined += '\x1f';
      joined += tokens[i + 1];
      buckets.push_back(static_cast<uint32_t>(hash_token(joined, config.seed)) & mask);
    }
  }
  std::sort(buckets.begin(), buckets.end());

  FeatureVector fv;
  for (size_t i = 0; i < buckets.size();) {
    size_t j = i;
    while (j < buckets.size() && buckets[j] == buckets[i]) ++j;
    fv.entries.emplace_back(buckets[i], static_cast<float>(j - i));
    i = j;
  }
  return fv;
}

EncoderModel EncoderModel::init(const HashConfig& hash, int embed_dim,
                                uint64_t seed) {
  if ((hash.feature_dim & (hash.feature_dim - 1)) != 0 || hash.feature_dim == 0) {
    throw ConfigError("feature_dim must be a power of two");
  }
  if (embed_dim < 1) throw ConfigError("embed_dim must be positive");
  EncoderModel model;
  model.hash = hash;
  model.embed_dim = embed_dim;
  model.weights.resize(static_cast<size_t>(hash.feature_dim) * embed_dim);
  Rng rng(derive_seed(seed, "encoder-init"));
  const double scale = 0.1;
  for (double& w : model.weights) w = rng.normal(0.0, scale);
  model.version_tag = model_tag(model);
  return model;
}

double embed(const EncoderModel& model, const FeatureVector& fv,
             std::span<double> out, bool* fallback) {
  const int d = model.embed_dim;
  for (int t = 0; t < d; ++t) out[static_cast<size_t>(t)] = 0.0;
  for (const auto& [idx, count] : fv.entries) {
    const double* row = model.weights.data() + static_cast<size_t>(idx) * d;
    const double c = count;
    for (int t = 0; t < d; ++t) out[static_cast<size_t>(t)] += c * row[t];
  }
  double norm_sq = 0.0;
  for (int t = 0; t < d; ++t) norm_sq += out[static_cast<size_t>(t)] * out[static_cast<size_t>(t)];
  double norm = std::sqrt(norm_sq);
  if (norm < 1e-300) {
    for (int t = 0; t < d; ++t) out[static_cast<size_t>(t)] = 0.0;
    out[0] = 1.0;
    if (fallback) *fallback = true;
    return 0.0;
  }
  for (int t = 0; t < d; ++t) out[static_cast<size_t>(t)] /= norm;
  if (fallback) *fallback = false;
  return norm;
}

BatchEmbeddings embed_batch(const EncoderModel& model,
                            std::span<const FeatureVector> fvs,
                            ExecPolicy policy) {
  const int n = static_cast<int>(fvs.size());
  const int d = model.embed_dim;
  BatchEmbeddings out;
  out.dim = d;
  out.vectors.assign(static_cast<size_t>(n) * d, 0.0);
  out.norms.assign(static_cast<size_t>(n), 0.0);
  out.fallback.assign(static_cast<size_t>(n), 0);

  auto one = [&](int i) {
    bool fb = false;
    double norm = embed(model, fvs[static_cast<size_t>(i)],
                        std::span<double>(out.vectors.data() + static_cast<size_t>(i) * d,
                                          static_cast<size_t>(d)),
                        &fb);
    out.norms[static_cast<size_t>(i)] = norm;
    out.fallback[static_cast<size_t>(i)] = fb ? 1 : 0;
  };

  if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) one(i);
  } else {
    for (int i = 0; i < n; ++i) one(i);
  }
  return out;
}

void accumulate_weight_grad(const EncoderModel& model,
                            std::span<const FeatureVector> fvs,
                            const BatchEmbeddings& emb,
                            std::span<const double> upstream,
                            std::span<double> grad_w, ExecPolicy policy) {
  const int n = emb.count();
  const int d = model.embed_dim;

  // Phase 1: per-item pre-normalization gradients
  //   u = (g - (g . y) y) / ||z||      with z = W^T x, y = z / ||z||.
  std::vector<double> u(static_cast<size_t>(n) * d, 0.0);
  auto one = [&](int i) {
    if (emb.fallback[static_cast<size_t>(i)]) return;  // constant output
    const double* y = emb.vectors.data() + static_cast<size_t>(i) * d;
    const double* g = upstream.data() + static_cast<size_t>(i) * d;
    double* ui = u.data() + static_cast<size_t>(i) * d;
    double gy = 0.0;
    for (int t = 0; t < d; ++t) gy += g[t] * y[t];
    const double inv_norm = 1.0 / emb.norms[static_cast<size_t>(i)];
    for (int t = 0; t < d; ++t) ui[t] = (g[t] - gy * y[t]) * inv_norm;
  };
  if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) one(i);
  } else {
    for (int i = 0; i < n; ++i) one(i);
  }

  // Phase 2: dW[r, t] += sum_i x_i[r] * u_i[t].  Each column t is owned by
  // one thread and items are visited in index order, so accumulation is
  // deterministic for any thread count.
  auto column = [&](int t) {
    for (int i = 0; i < n; ++i) {
      if (emb.fallback[static_cast<size_t>(i)]) continue;
      const double ut = u[static_cast<size_t>(i) * d + t];
      if (ut == 0.0) continue;
      for (const auto& [idx, count] : fvs[static_cast<size_t>(i)].entries) {
        grad_w[static_cast<size_t>(idx) * d + t] += static_cast<double>(count) * ut;
      }
    }
  };
  if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static)
    for (int t = 0; t < d; ++t) column(t);
  } else {
    for (int t = 0; t < d; ++t) column(t);
  }
}

AdamState AdamState::init(size_t param_count) {
  AdamState s;
  s.m.assign(param_count, 0.0);
  s.v.assign(param_count, 0.0);
  return s;
}

void adam_step(AdamState& state, std::span<double> params,
               std::span<const double> grad, const AdamConfig& config,
               ExecPolicy policy) {
  const int64_t n = static_cast<int64_t>(params.size());
  if (grad.size() != params.size() || state.m.size() != params.size()) {
    throw TrainError("adam_step: shape mismatch");
  }

  bool finite = true;
  if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static) reduction(&& : finite)
    for (int64_t i = 0; i < n; ++i) finite = finite && std::isfinite(grad[static_cast<size_t>(i)]);
  } else {
    for (int64_t i = 0; i < n; ++i) finite = finite && std::isfinite(grad[static_cast<size_t>(i)]);
  }
  if (!finite) {
    throw TrainError("adam_step: non-finite gradient, step aborted at t=" +
                     std::to_string(state.step + 1));
  }

  state.step += 1;
  const double b1 = config.beta1;
  const double b2 = config.beta2;
  const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  const double lr = config.learning_rate;
  const double eps = config.epsilon;

  auto update = [&](int64_t i) {
    const size_t k = static_cast<size_t>(i);
    const double g = grad[k];
    state.m[k] = b1 * state.m[k] + (1.0 - b1) * g;
    state.v[k] = b2 * state.v[k] + (1.0 - b2) * g * g;
    const double mhat = state.m[k] / bc1;
    const double vhat = state.v[k] / bc2;
    params[k] -= lr * mhat / (std::sqrt(vhat) + eps);
  };
  if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) update(i);
  } else {
    for (int64_t i = 0; i < n; ++i) update(i);
  }
}

namespace {

template <typename T>
void write_pod(std::string& out, const T& v) {
  out.append(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(const std::string& in, size_t& off) {
  if (off + sizeof(T) > in.size()) throw IoError("checkpoint truncated");
  T v;
  std::memcpy(&v, in.data() + off, sizeof(T));
  off += sizeof(T);
  return v;
}

}  // namespace

void save_model(const std::filesystem::path& path, const EncoderModel& model) {
  std::string out;
  out.reserve(32 + model.weights.size() * sizeof(double));
  write_pod(out, kCheckpointMagic);
  write_pod(out, kCheckpointVersion);
  write_pod(out, model.hash.feature_dim);
  write_pod(out, static_cast<uint32_t>(model.hash.max_ngram));
  write_pod(out, model.hash.seed);
  write_pod(out, static_cast<uint32_t>(model.embed_dim));
  out.append(reinterpret_cast<const char*>(model.weights.data()),
             model.weights.size() * sizeof(double));
  atomic_write_file(path, out);
}

EncoderModel load_model(const std::filesystem::path& path) {
  std::string in = read_file(path);
  size_t off = 0;
  uint32_t magic = read_pod<uint32_t>(in, off);
  if (magic != kCheckpointMagic) {
    throw IoError("not a checkpoint file: " + path.string());
  }
  uint32_t version = read_pod<uint32_t>(in, off);
  if (version != kCheckpointVersion) {
    throw IoError("checkpoint format version mismatch in " + path.string() +
                  ": file has v" + std::to_string(version) + ", reader is v" +
                  std::to_string(kCheckpointVersion));
  }
  EncoderModel model;
  model.hash.feature_dim = read_pod<uint32_t>(in, off);
  model.hash.max_ngram = static_cast<int>(read_pod<uint32_t>(in, off));
  model.hash.seed = read_pod<uint64_t>(in, off);
  model.embed_dim = static_cast<int>(read_pod<uint32_t>(in, off));
  size_t count = static_cast<size_t>(model.hash.feature_dim) * model.embed_dim;
  if (in.size() - off != count * sizeof(double)) {
    throw IoError("checkpoint payload size mismatch in " + path.string());
  }
  model.weights.resize(count);
  std::memcpy(model.weights.data(), in.data() + off, count * sizeof(double));
  model.version_tag = model_tag(model);
  return model;
}

std::string model_tag(const EncoderModel& model) {
  uint64_t h = fnv1a64(std::span<const unsigned char>(
      reinterpret_cast<const unsigned char*>(model.weights.data()),
      model.weights.size() * sizeof(double)));
  h ^= model.hash.seed;
  h ^= static_cast<uint64_t>(model.hash.feature_dim) << 32;
  h ^= static_cast<uint64_t>(model.embed_dim);
  return "enc1-" + to_hex(h);
}

}  // namespace logicol
