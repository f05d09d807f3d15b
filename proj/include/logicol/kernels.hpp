// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace logicol {

// Every data-parallel kernel has a serial reference implementation and an
// OpenMP one. Each output element is owned by exactly one thread and inner
// summation order is fixed, so the two produce bit-identical results; the
// tests assert that and the bench tool compares their throughput.
enum class ExecPolicy { Serial, Parallel };

namespace kernels {

// out[i*nb + j] = dot(a[i*dim .. ], b[j*dim .. ]) for i < na, j < nb.
void dot_matrix_serial(std::span<const double> a, int na,
                       std::span<const double> b, int nb, int dim,
                       std::span<double> out);
void dot_matrix_parallel(std::span<const double> a, int na,
                         std::span<const double> b, int nb, int dim,
                         std::span<double> out);
void dot_matrix(std::span<const double> a, int na, std::span<const double> b,
                int nb, int dim, std::span<double> out, ExecPolicy policy);

// out[i*dim + t] = sum_j coeff[i*nb + j] * b[j*dim + t]; rows owned per i.
void coeff_rows_serial(std::span<const double> coeff, int na,
                       std::span<const double> b, int nb, int dim,
                       std::span<double> out);
void coeff_rows_parallel(std::span<const double> coeff, int na,
                         std::span<const double> b, int nb, int dim,
                         std::span<double> out);
void coeff_rows(std::span<const double> coeff, int na, std::span<const double> b,
                int nb, int dim, std::span<double> out, ExecPolicy policy);

// out[j*dim + t] = sum_i coeff[i*nb + j] * a[i*dim + t]; columns owned per j.
void coeff_cols_serial(std::span<const double> coeff, int na,
                       std::span<const double> a, int nb, int dim,
                       std::span<double> out);
void coeff_cols_parallel(std::span<const double> coeff, int na,
                         std::span<const double> a, int nb, int dim,
                         std::span<double> out);
void coeff_cols(std::span<const double> coeff, int na, std::span<const double> a,
                int nb, int dim, std::span<double> out, ExecPolicy policy);

// Descending score order; equal scores break by ascending id. Returns the
// first k positions of that order.
std::vector<int> top_k(std::span<const double> scores,
                       const std::vector<std::string>& ids, int k);

int max_threads();

}  // namespace kernels
}  // namespace logicol
