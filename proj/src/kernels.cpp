// SPDX-License-Identifier: Apache-2.0
#include "logicol/kernels.hpp"

#include <algorithm>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace logicol::kernels {

namespace {

inline double dot(const double* x, const double* y, int dim) {
  double s = 0.0;
  for (int t = 0; t < dim; ++t) s += x[t] * y[t];
  return s;
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void dot_matrix_serial(std::span<const double> a, int na,
                       std::span<const double> b, int nb, int dim,
                       std::span<double> out) {
  for (int i = 0; i < na; ++i) {
    const double* ai = a.data() + static_cast<size_t>(i) * dim;
    for (int j = 0; j < nb; ++j) {
      out[static_cast<size_t>(i) * nb + j] =
          dot(ai, b.data() + static_cast<size_t>(j) * dim, dim);
    }
  }
}

void dot_matrix_parallel(std::span<const double> a, int na,
                         std::span<const double> b, int nb, int dim,
                         std::span<double> out) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < na; ++i) {
    const double* ai = a.data() + static_cast<size_t>(i) * dim;
    for (int j = 0; j < nb; ++j) {
      out[static_cast<size_t>(i) * nb + j] =
          dot(ai, b.data() + static_cast<size_t>(j) * dim, dim);
    }
  }
}

void dot_matrix(std::span<const double> a, int na, std::span<const double> b,
                int nb, int dim, std::span<double> out, ExecPolicy policy) {
  if (policy == ExecPolicy::Parallel) {
    dot_matrix_parallel(a, na, b, nb, dim, out);
  } else {
    dot_matrix_serial(a, na, b, nb, dim, out);
  }
}

void coeff_rows_serial(std::span<const double> coeff, int na,
                       std::span<const double> b, int nb, int dim,
                       std::span<double> out) {
  for (int i = 0; i < na; ++i) {
    double* oi = out.data() + static_cast<size_t>(i) * dim;
    for (int j = 0; j < nb; ++j) {
      double c = coeff[static_cast<size_t>(i) * nb + j];
      if (c == 0.0) continue;
      const double* bj = b.data() + static_cast<size_t>(j) * dim;
      for (int t = 0; t < dim; ++t) oi[t] += c * bj[t];
    }
  }
}

void coeff_rows_parallel(std::span<const double> coeff, int na,
                         std::span<const double> b, int nb, int dim,
                         std::span<double> out) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < na; ++i) {
    double* oi = out.data() + static_cast<size_t>(i) * dim;
    for (int j = 0; j < nb; ++j) {
      double c = coeff[static_cast<size_t>(i) * nb + j];
      if (c == 0.0) continue;
      const double* bj = b.data() + static_cast<size_t>(j) * dim;
      for (int t = 0; t < dim; ++t) oi[t] += c * bj[t];
    }
  }
}

void coeff_rows(std::span<const double> coeff, int na, std::span<const double> b,
                int nb, int dim, std::span<double> out, ExecPolicy policy) {
  if (policy == ExecPolicy::Parallel) {
    coeff_rows_parallel(coeff, na, b, nb, dim, out);
  } else {
    coeff_rows_serial(coeff, na, b, nb, dim, out);
  }
}

void coeff_cols_serial(std::span<const double> coeff, int na,
                       std::span<const double> a, int nb, int dim,
                       std::span<double> out) {
  for (int j = 0; j < nb; ++j) {
    double* oj = out.data() + static_cast<size_t>(j) * dim;
    for (int i = 0; i < na; ++i) {
      double c = coeff[static_cast<size_t>(i) * nb + j];
      if (c == 0.0) continue;
      const double* ai = a.data() + static_cast<size_t>(i) * dim;
      for (int t = 0; t < dim; ++t) oj[t] += c * ai[t];
    }
  }
}

void coeff_cols_parallel(std::span<const double> coeff, int na,
                         std::span<const double> a, int nb, int dim,
                         std::span<double> out) {
#pragma omp parallel for schedule(static)
  for (int j = 0; j < nb; ++j) {
    double* oj = out.data() + static_cast<size_t>(j) * dim;
    for (int i = 0; i < na; ++i) {
      double c = coeff[static_cast<size_t>(i) * nb + j];
      if (c == 0.0) continue;
      const double* ai = a.data() + static_cast<size_t>(i) * dim;
      for (int t = 0; t < dim; ++t) oj[t] += c * ai[t];
    }
  }
}

void coeff_cols(std::span<const double> coeff, int na, std::span<const double> a,
                int nb, int dim, std::span<double> out, ExecPolicy policy) {
  if (policy == ExecPolicy::Parallel) {
    coeff_cols_parallel(coeff, na, a, nb, dim, out);
  } else {
    coeff_cols_serial(coeff, na, a, nb, dim, out);
  }
}

std::vector<int> top_k(std::span<const double> scores,
                       const std::vector<std::string>& ids, int k) {
  int n = static_cast<int>(scores.size());
  if (k > n) k = n;
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  auto better = [&](int x, int y) {
    if (scores[static_cast<size_t>(x)] != scores[static_cast<size_t>(y)]) {
      return scores[static_cast<size_t>(x)] > scores[static_cast<size_t>(y)];
    }
    return ids[static_cast<size_t>(x)] < ids[static_cast<size_t>(y)];
  };
  if (k < n) {
    std::partial_sort(order.begin(), order.begin() + k, order.end(), better);
    order.resize(static_cast<size_t>(k));
  } else {
    std::sort(order.begin(), order.end(), better);
  }
  return order;
}

}  // namespace logicol::kernels
