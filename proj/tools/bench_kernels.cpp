// SPDX-License-Identifier: Apache-2.0
//
// Times the serial reference implementations against the OpenMP kernels and
// verifies they agree bit-for-bit.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "logicol/encoder.hpp"
#include "logicol/kernels.hpp"
#include "logicol/util.hpp"

using namespace logicol;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  auto dt = std::chrono::steady_clock::now() - t0;
  return std::chrono::duration<double, std::milli>(dt).count();
}

template <typename F>
double time_best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, ms_since(t0));
  }
  return best;
}

void row(const char* name, double serial_ms, double parallel_ms, bool match) {
  std::printf("%-24s %10.2f ms %10.2f ms %8.2fx   %s\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms, match ? "bitwise-equal" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("threads available: %d\n", kernels::max_threads());
  std::printf("%-24s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

  Rng rng(7);

  // dot_matrix: 512 queries x 8192 docs x 64 dims
  {
    const int na = 512, nb = 8192, dim = 64;
    std::vector<double> a(static_cast<size_t>(na) * dim), b(static_cast<size_t>(nb) * dim);
    for (auto& v : a) v = rng.normal(0, 1);
    for (auto& v : b) v = rng.normal(0, 1);
    std::vector<double> out_s(static_cast<size_t>(na) * nb), out_p(out_s.size());
    double ts = time_best_of(3, [&] { kernels::dot_matrix_serial(a, na, b, nb, dim, out_s); });
    double tp = time_best_of(3, [&] { kernels::dot_matrix_parallel(a, na, b, nb, dim, out_p); });
    row("dot_matrix", ts, tp, out_s == out_p);
  }

  // embed_batch: 20000 synthetic feature vectors
  {
    HashConfig hash;
    hash.feature_dim = 1u << 15;
    EncoderModel model = EncoderModel::init(hash, 64, 11);
    std::vector<FeatureVector> fvs(20000);
    for (auto& fv : fvs) {
      int nnz = 20 + static_cast<int>(rng.index(40));
      for (int i = 0; i < nnz; ++i) {
        fv.entries.emplace_back(static_cast<uint32_t>(rng.index(hash.feature_dim)), 1.0f);
      }
      std::sort(fv.entries.begin(), fv.entries.end());
      fv.entries.erase(std::unique(fv.entries.begin(), fv.entries.end(),
                                   [](auto& x, auto& y) { return x.first == y.first; }),
                       fv.entries.end());
    }
    BatchEmbeddings es, ep;
    double ts = time_best_of(3, [&] { es = embed_batch(model, fvs, ExecPolicy::Serial); });
    double tp = time_best_of(3, [&] { ep = embed_batch(model, fvs, ExecPolicy::Parallel); });
    row("embed_batch", ts, tp, es.vectors == ep.vectors && es.norms == ep.norms);
  }

  // coeff_rows / coeff_cols: 256 x 4096 x 64
  {
    const int na = 256, nb = 4096, dim = 64;
    std::vector<double> coeff(static_cast<size_t>(na) * nb), mat(static_cast<size_t>(nb) * dim);
    for (auto& v : coeff) v = rng.normal(0, 1);
    for (auto& v : mat) v = rng.normal(0, 1);
    std::vector<double> out_s(static_cast<size_t>(na) * dim, 0.0), out_p(out_s.size(), 0.0);
    double ts = time_best_of(3, [&] {
      std::fill(out_s.begin(), out_s.end(), 0.0);
      kernels::coeff_rows_serial(coeff, na, mat, nb, dim, out_s);
    });
    double tp = time_best_of(3, [&] {
      std::fill(out_p.begin(), out_p.end(), 0.0);
      kernels::coeff_rows_parallel(coeff, na, mat, nb, dim, out_p);
    });
    row("coeff_rows", ts, tp, out_s == out_p);

    std::vector<double> qmat(static_cast<size_t>(na) * dim);
    for (auto& v : qmat) v = rng.normal(0, 1);
    std::vector<double> col_s(static_cast<size_t>(nb) * dim, 0.0), col_p(col_s.size(), 0.0);
    ts = time_best_of(3, [&] {
      std::fill(col_s.begin(), col_s.end(), 0.0);
      kernels::coeff_cols_serial(coeff, na, qmat, nb, dim, col_s);
    });
    tp = time_best_of(3, [&] {
      std::fill(col_p.begin(), col_p.end(), 0.0);
      kernels::coeff_cols_parallel(coeff, na, qmat, nb, dim, col_p);
    });
    row("coeff_cols", ts, tp, col_s == col_p);
  }

  // adam_step: 4M parameters
  {
    const size_t n = 4u << 20;
    std::vector<double> params_s(n), grad(n);
    for (auto& v : params_s) v = rng.normal(0, 1);
    for (auto& v : grad) v = rng.normal(0, 1);
    std::vector<double> params_p = params_s;
    AdamConfig cfg;
    AdamState ss = AdamState::init(n), sp = AdamState::init(n);
    double ts = time_best_of(3, [&] { adam_step(ss, params_s, grad, cfg, ExecPolicy::Serial); });
    double tp = time_best_of(3, [&] { adam_step(sp, params_p, grad, cfg, ExecPolicy::Parallel); });
    row("adam_step", ts, tp, params_s == params_p);
  }

  return 0;
}
