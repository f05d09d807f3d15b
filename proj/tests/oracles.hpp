// SPDX-License-Identifier: Apache-2.0
//
// Direct-formula reference implementations used to check the library's loss
// and metric code. These are deliberately naive translations of the
// definitions and stay independent of the implementation paths they verify.
#pragma once

#include <cmath>
#include <vector>

#include "logicol/logic.hpp"
#include "logicol/util.hpp"

namespace oracle {

// Dot products computed pairwise, no blocking, no kernels.
inline std::vector<std::vector<double>> sim_table(const std::vector<double>& q,
                                                  int nq,
                                                  const std::vector<double>& d,
                                                  int nd, int dim) {
  std::vector<std::vector<double>> s(static_cast<size_t>(nq),
                                     std::vector<double>(static_cast<size_t>(nd), 0.0));
  for (int i = 0; i < nq; ++i) {
    for (int j = 0; j < nd; ++j) {
      double acc = 0.0;
      for (int t = 0; t < dim; ++t) {
        acc += q[static_cast<size_t>(i) * dim + t] * d[static_cast<size_t>(j) * dim + t];
      }
      s[static_cast<size_t>(i)][static_cast<size_t>(j)] = acc;
    }
  }
  return s;
}

// sum_i (-1/|P(i)|) sum_{p in P(i)} log( exp(s_ip/tau) / sum_j exp(s_ij/tau) )
inline double supcon(const std::vector<std::vector<double>>& s,
                     const std::vector<std::vector<int>>& positives, double tau) {
  double total = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    double denom = 0.0;
    for (double v : s[i]) denom += std::exp(v / tau);
    double inner = 0.0;
    for (int p : positives[i]) {
      inner += std::log(std::exp(s[i][static_cast<size_t>(p)] / tau) / denom);
    }
    total += -inner / static_cast<double>(positives[i].size());
  }
  return total;
}

inline std::vector<double> softmax(const std::vector<double>& v, double tau) {
  std::vector<double> out(v.size());
  double denom = 0.0;
  for (double x : v) denom += std::exp(x / tau);
  for (size_t i = 0; i < v.size(); ++i) out[i] = std::exp(v[i] / tau) / denom;
  return out;
}

inline double kl(const std::vector<double>& p, const std::vector<double>& q,
                 double eps) {
  double out = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    out += p[i] * (std::log(std::max(p[i], eps)) - std::log(std::max(q[i], eps)));
  }
  return out;
}

inline double sym_kl(const std::vector<double>& p, const std::vector<double>& q,
                     double eps) {
  return 0.5 * (kl(p, q, eps) + kl(q, p, eps));
}

inline double exclusion(const std::vector<std::vector<double>>& s,
                        const std::vector<logicol::RelationEdge>& edges,
                        double gamma, double tau, double eps) {
  double total = 0.0;
  int n = 0;
  for (const auto& e : edges) {
    if (e.kind != logicol::RelationKind::Exclusion) continue;
    ++n;
    auto p = softmax(s[static_cast<size_t>(e.src)], tau);
    auto q = softmax(s[static_cast<size_t>(e.dst)], tau);
    total += std::max(gamma - sym_kl(p, q, eps), 0.0);
  }
  return n == 0 ? 0.0 : total / n;
}

inline double subset(const std::vector<std::vector<double>>& s,
                     const std::vector<logicol::RelationEdge>& edges,
                     double gamma, double eps, bool mean) {
  double total = 0.0;
  int n = 0;
  size_t nd = s.empty() ? 0 : s[0].size();
  for (const auto& e : edges) {
    if (e.kind != logicol::RelationKind::Subset) continue;
    ++n;
    for (size_t k = 0; k < nd; ++k) {
      auto map = [&](double v) {
        double m = (v + 1.0) / 2.0;
        return std::min(std::max(m, eps), 1.0);
      };
      double term = std::log(map(s[static_cast<size_t>(e.src)][k])) -
                    std::log(map(s[static_cast<size_t>(e.dst)][k])) + gamma;
      if (term > 0.0) total += term;
    }
  }
  if (n == 0) return 0.0;
  if (mean) total /= static_cast<double>(n) * static_cast<double>(nd);
  return total;
}

// Pearson via the E[xy] - E[x]E[y] route (the library uses centered sums).
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
  }
  double cov = sxy / n - (sx / n) * (sy / n);
  double vx = sxx / n - (sx / n) * (sx / n);
  double vy = syy / n - (sy / n) * (sy / n);
  return cov / std::sqrt(vx * vy);
}

// n random rows, each normalized to unit length.
inline std::vector<double> random_unit_rows(logicol::Rng& rng, int n, int dim) {
  std::vector<double> out(static_cast<size_t>(n) * dim);
  for (int i = 0; i < n; ++i) {
    double norm_sq = 0.0;
    for (int t = 0; t < dim; ++t) {
      double v = rng.normal(0.0, 1.0);
      out[static_cast<size_t>(i) * dim + t] = v;
      norm_sq += v * v;
    }
    double norm = std::sqrt(norm_sq);
    for (int t = 0; t < dim; ++t) out[static_cast<size_t>(i) * dim + t] /= norm;
  }
  return out;
}

}  // namespace oracle
