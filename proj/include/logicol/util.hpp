// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace logicol {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DatasetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Deterministic pseudo-random source. All sampling helpers are implemented
/// here on top of the standard mt19937_64 engine; the std <random>
/// distributions are implementation-defined and would break cross-toolchain
/// reproducibility.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, bound). bound must be > 0.
  uint64_t uniform(uint64_t bound);

  size_t index(size_t n) { return static_cast<size_t>(uniform(n)); }

  // Uniform in [0, 1) with 53-bit resolution.
  double real();

  // Bernoulli(p).
  bool chance(double p) { return real() < p; }

  // Box-Muller; the sine partner is discarded so state advances by exactly
  // two engine draws per call.
  double normal(double mean, double stddev);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    if (v.size() < 2) return;
    for (size_t i = v.size() - 1; i > 0; --i) {
      size_t j = index(i + 1);
      std::swap(v[i], v[j]);
    }
  }

  // k distinct indices from [0, n), in sampled order.
  std::vector<size_t> sample_indices(size_t n, size_t k);

 private:
  std::mt19937_64 engine_;
};

// Splits one user-facing seed into independent per-concern streams.
uint64_t derive_seed(uint64_t base, std::string_view tag);

uint64_t fnv1a64(std::span<const unsigned char> bytes);
uint64_t fnv1a64(std::string_view s);
std::string to_hex(uint64_t v);

// FNV-1a of a file's bytes, as 16-char hex. Used for manifest checksums.
std::string file_checksum(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

// Write-then-rename so partially written artifacts are never observable.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

// Deterministic shortest-ish decimal rendering for CSV output.
std::string format_double(double v);

std::string lowercase_ascii(std::string_view s);

}  // namespace logicol
