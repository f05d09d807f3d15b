// SPDX-License-Identifier: Apache-2.0
#include "logicol/losses.hpp"

#include <algorithm>
#include <cmath>

#include "logicol/util.hpp"

namespace logicol {

void LossConfig::validate() const {
  if (tau <= 0.0) throw ConfigError("tau must be positive");
  if (dist_tau == 0.0) throw ConfigError("dist_tau must be positive or negative-for-default");
  if (gamma_excl <= 0.0 || !std::isfinite(gamma_excl)) {
    throw ConfigError("gamma_excl must be positive and finite");
  }
  if (gamma_subset <= 0.0 || !std::isfinite(gamma_subset)) {
    throw ConfigError("gamma_subset must be positive and finite");
  }
  if (lambda_excl < 0.0 || lambda_subset < 0.0) {
    throw ConfigError("lambda weights must be non-negative");
  }
  if (eps <= 0.0 || eps >= 1.0) throw ConfigError("eps must lie in (0, 1)");
}

void LossGrads::reset(int n_queries, int n_docs, int dim) {
  d_queries.assign(static_cast<size_t>(n_queries) * dim, 0.0);
  d_docs.assign(static_cast<size_t>(n_docs) * dim, 0.0);
}

namespace {

std::vector<double> dot_rows(std::span<const double> queries, int n_queries,
                             std::span<const double> docs, int n_docs, int dim,
                             ExecPolicy policy) {
  std::vector<double> sims(static_cast<size_t>(n_queries) * n_docs);
  kernels::dot_matrix(queries, n_queries, docs, n_docs, dim, sims, policy);
  return sims;
}

std::vector<double> softmax_scaled(const double* row, int n, double tau) {
  std::vector<double> p(static_cast<size_t>(n));
  double max_v = row[0];
  for (int k = 1; k < n; ++k) max_v = std::max(max_v, row[k]);
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    p[static_cast<size_t>(k)] = std::exp((row[k] - max_v) / tau);
    sum += p[static_cast<size_t>(k)];
  }
  for (int k = 0; k < n; ++k) p[static_cast<size_t>(k)] /= sum;
  return p;
}

// C[i*n_docs + j] accumulates dL/dS_ij; loss-specific builders below.

double supcon_coeffs(const std::vector<double>& sims, int n_queries, int n_docs,
                     const std::vector<std::vector<int>>& positives, double tau,
                     double weight, std::vector<double>* coeff, ExecPolicy policy) {
  // Exceptions cannot cross an OpenMP region, so validate up front.
  for (int i = 0; i < n_queries; ++i) {
    if (positives[static_cast<size_t>(i)].empty()) {
      throw TrainError("supcon_loss: query position " + std::to_string(i) +
                       " has no in-batch positive");
    }
  }
  std::vector<double> per_query(static_cast<size_t>(n_queries), 0.0);
  auto one = [&](int i) {
    const double* row = sims.data() + static_cast<size_t>(i) * n_docs;
    const auto& pos = positives[static_cast<size_t>(i)];
    double max_v = row[0];
    for (int j = 1; j < n_docs; ++j) max_v = std::max(max_v, row[j]);
    double z = 0.0;
    for (int j = 0; j < n_docs; ++j) z += std::exp((row[j] - max_v) / tau);
    double log_z = max_v / tau + std::log(z);
    double pos_sum = 0.0;
    for (int p : pos) pos_sum += row[p];
    const double inv_p = 1.0 / static_cast<double>(pos.size());
    per_query[static_cast<size_t>(i)] = log_z - pos_sum * inv_p / tau;
    if (coeff) {
      double* c = coeff->data() + static_cast<size_t>(i) * n_docs;
      for (int j = 0; j < n_docs; ++j) {
        double pi = std::exp((row[j] - max_v) / tau) / z;
        c[j] += weight * pi / tau;
      }
      for (int p : pos) c[p] -= weight * inv_p / tau;
    }
  };
  if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_queries; ++i) one(i);
  } else {
    for (int i = 0; i < n_queries; ++i) one(i);
  }
  double total = 0.0;
  for (double v : per_query) total += v;
  return total;
}

double sym_kl_grad(const std::vector<double>& p, const std::vector<double>& q,
                   double eps, std::vector<double>* gp, std::vector<double>* gq) {
  const size_t n = p.size();
  double value = 0.0;
  for (size_t k = 0; k < n; ++k) {
    double lp = std::log(std::max(p[k], eps));
    double lq = std::log(std::max(q[k], eps));
    value += 0.5 * ((p[k] - q[k]) * (lp - lq));
    if (gp) {
      double dp = 0.5 * (lp - lq);
      if (p[k] > eps) dp += 0.5 * (p[k] - q[k]) / p[k];
      (*gp)[k] = dp;
      double dq = 0.5 * (lq - lp);
      if (q[k] > eps) dq += 0.5 * (q[k] - p[k]) / q[k];
      (*gq)[k] = dq;
    }
  }
  return value;
}

// Softmax-jacobian backprop: adds scale * d(sym_kl-ish term)/dS to the
// coefficient row of query `qi`, given the distribution and its upstream
// gradient g.
void softmax_backprop_row(const std::vector<double>& dist,
                          const std::vector<double>& g, double tau, double scale,
                          double* coeff_row) {
  const int n = static_cast<int>(dist.size());
  double inner = 0.0;
  for (int k = 0; k < n; ++k) inner += g[static_cast<size_t>(k)] * dist[static_cast<size_t>(k)];
  for (int k = 0; k < n; ++k) {
    coeff_row[k] += scale * dist[static_cast<size_t>(k)] *
                    (g[static_cast<size_t>(k)] - inner) / tau;
  }
}

double exclusion_coeffs(const std::vector<double>& sims, int n_queries, int n_docs,
                        const std::vector<RelationEdge>& edges, double gamma,
                        double dist_tau, double eps, double weight,
                        std::vector<double>* coeff, int* n_edges_out) {
  (void)n_queries;
  int n_edges = 0;
  for (const auto& e : edges) {
    if (e.kind == RelationKind::Exclusion) ++n_edges;
  }
  if (n_edges_out) *n_edges_out = n_edges;
  if (n_edges == 0) return 0.0;

  // Distributions are shared across edges touching the same query.
  std::map<int, std::vector<double>> dists;
  auto dist_of = [&](int qi) -> const std::vector<double>& {
    auto it = dists.find(qi);
    if (it == dists.end()) {
      it = dists.emplace(qi, softmax_scaled(sims.data() + static_cast<size_t>(qi) * n_docs,
                                            n_docs, dist_tau))
               .first;
    }
    return it->second;
  };

  const double per_edge = 1.0 / static_cast<double>(n_edges);
  double total = 0.0;
  std::vector<double> gp(static_cast<size_t>(n_docs)), gq(static_cast<size_t>(n_docs));
  for (const auto& e : edges) {
    if (e.kind != RelationKind::Exclusion) continue;
    const auto& p = dist_of(e.src);
    const auto& q = dist_of(e.dst);
    double kl = sym_kl_grad(p, q, eps, coeff ? &gp : nullptr, coeff ? &gq : nullptr);
    if (kl >= gamma) continue;  // hinge inactive
    total += (gamma - kl) * per_edge;
    if (coeff) {
      const double scale = -weight * per_edge;  // d/dkl of (gamma - kl) is -1
      softmax_backprop_row(p, gp, dist_tau, scale,
                           coeff->data() + static_cast<size_t>(e.src) * n_docs);
      softmax_backprop_row(q, gq, dist_tau, scale,
                           coeff->data() + static_cast<size_t>(e.dst) * n_docs);
    }
  }
  return total;
}

double subset_coeffs(const std::vector<double>& sims, int n_queries, int n_docs,
                     const std::vector<RelationEdge>& edges, double gamma,
                     double eps, bool mean_normalize, double weight,
                     std::vector<double>* coeff, int* n_edges_out,
                     double* mean_per_term) {
  (void)n_queries;
  int n_edges = 0;
  for (const auto& e : edges) {
    if (e.kind == RelationKind::Subset) ++n_edges;
  }
  if (n_edges_out) *n_edges_out = n_edges;
  if (mean_per_term) *mean_per_term = 0.0;
  if (n_edges == 0) return 0.0;

  const double scale =
      mean_normalize ? 1.0 / (static_cast<double>(n_edges) * n_docs) : 1.0;
  auto mapped = [&](double s) { return std::clamp((s + 1.0) * 0.5, eps, 1.0); };
  double total = 0.0;
  for (const auto& e : edges) {
    if (e.kind != RelationKind::Subset) continue;
    const double* row_src = sims.data() + static_cast<size_t>(e.src) * n_docs;
    const double* row_dst = sims.data() + static_cast<size_t>(e.dst) * n_docs;
    for (int k = 0; k < n_docs; ++k) {
      double sim_src = mapped(row_src[k]);
      double sim_dst = mapped(row_dst[k]);
      double term = std::log(sim_src) - std::log(sim_dst) + gamma;
      if (term <= 0.0) continue;
      total += scale * term;
      if (coeff) {
        // d sim / d cos is 1/2 inside the clamp, 0 at the rails.
        double raw_src = (row_src[k] + 1.0) * 0.5;
        double raw_dst = (row_dst[k] + 1.0) * 0.5;
        if (raw_src > eps && raw_src < 1.0) {
          (*coeff)[static_cast<size_t>(e.src) * n_docs + k] +=
              weight * scale * 0.5 / sim_src;
        }
        if (raw_dst > eps && raw_dst < 1.0) {
          (*coeff)[static_cast<size_t>(e.dst) * n_docs + k] -=
              weight * scale * 0.5 / sim_dst;
        }
      }
    }
  }
  if (mean_per_term) {
    double sum = mean_normalize ? total * static_cast<double>(n_edges) * n_docs : total;
    *mean_per_term = sum / (static_cast<double>(n_edges) * n_docs);
  }
  return total;
}

void apply_coeffs(const std::vector<double>& coeff, std::span<const double> queries,
                  int n_queries, std::span<const double> docs, int n_docs, int dim,
                  LossGrads& grads, ExecPolicy policy) {
  kernels::coeff_rows(coeff, n_queries, docs, n_docs, dim, grads.d_queries, policy);
  kernels::coeff_cols(coeff, n_queries, queries, n_docs, dim, grads.d_docs, policy);
}

}  // namespace

double supcon_loss(std::span<const double> queries, int n_queries,
                   std::span<const double> docs, int n_docs, int dim,
                   const std::vector<std::vector<int>>& positives, double tau,
                   LossGrads* grads, ExecPolicy policy) {
  auto sims = dot_rows(queries, n_queries, docs, n_docs, dim, policy);
  std::vector<double> coeff;
  if (grads) coeff.assign(static_cast<size_t>(n_queries) * n_docs, 0.0);
  double value = supcon_coeffs(sims, n_queries, n_docs, positives, tau, 1.0,
                               grads ? &coeff : nullptr, policy);
  if (grads) {
    grads->reset(n_queries, n_docs, dim);
    apply_coeffs(coeff, queries, n_queries, docs, n_docs, dim, *grads, policy);
  }
  return value;
}

std::vector<double> similarity_distribution(std::span<const double> query,
                                            std::span<const double> docs,
                                            int n_docs, int dim, double tau) {
  std::vector<double> sims(static_cast<size_t>(n_docs));
  for (int j = 0; j < n_docs; ++j) {
    double s = 0.0;
    const double* dj = docs.data() + static_cast<size_t>(j) * dim;
    for (int t = 0; t < dim; ++t) s += query[static_cast<size_t>(t)] * dj[t];
    sims[static_cast<size_t>(j)] = s;
  }
  return softmax_scaled(sims.data(), n_docs, tau);
}

double sym_kl(std::span<const double> p, std::span<const double> q, double eps) {
  if (p.size() != q.size()) {
    throw ConfigError("sym_kl: distribution lengths differ (" +
                      std::to_string(p.size()) + " vs " + std::to_string(q.size()) + ")");
  }
  std::vector<double> pv(p.begin(), p.end());
  std::vector<double> qv(q.begin(), q.end());
  return sym_kl_grad(pv, qv, eps, nullptr, nullptr);
}

double exclusion_loss(std::span<const double> queries, int n_queries,
                      std::span<const double> docs, int n_docs, int dim,
                      const std::vector<RelationEdge>& edges, double gamma_excl,
                      double dist_tau, double eps, LossGrads* grads,
                      ExecPolicy policy) {
  auto sims = dot_rows(queries, n_queries, docs, n_docs, dim, policy);
  std::vector<double> coeff;
  if (grads) coeff.assign(static_cast<size_t>(n_queries) * n_docs, 0.0);
  double value = exclusion_coeffs(sims, n_queries, n_docs, edges, gamma_excl,
                                  dist_tau, eps, 1.0, grads ? &coeff : nullptr,
                                  nullptr);
  if (grads) {
    grads->reset(n_queries, n_docs, dim);
    apply_coeffs(coeff, queries, n_queries, docs, n_docs, dim, *grads, policy);
  }
  return value;
}

double subset_loss(std::span<const double> queries, int n_queries,
                   std::span<const double> docs, int n_docs, int dim,
                   const std::vector<RelationEdge>& edges, double gamma_subset,
                   double eps, bool mean_normalize, LossGrads* grads,
                   ExecPolicy policy) {
  auto sims = dot_rows(queries, n_queries, docs, n_docs, dim, policy);
  std::vector<double> coeff;
  if (grads) coeff.assign(static_cast<size_t>(n_queries) * n_docs, 0.0);
  double value = subset_coeffs(sims, n_queries, n_docs, edges, gamma_subset, eps,
                               mean_normalize, 1.0, grads ? &coeff : nullptr,
                               nullptr, nullptr);
  if (grads) {
    grads->reset(n_queries, n_docs, dim);
    apply_coeffs(coeff, queries, n_queries, docs, n_docs, dim, *grads, policy);
  }
  return value;
}

LossBreakdown joint_loss(std::span<const double> queries, int n_queries,
                         std::span<const double> docs, int n_docs, int dim,
                         const std::vector<std::vector<int>>& positives,
                         const std::vector<RelationEdge>& edges,
                         const LossConfig& config, LossGrads* grads,
                         ExecPolicy policy) {
  config.validate();
  auto sims = dot_rows(queries, n_queries, docs, n_docs, dim, policy);
  std::vector<double> coeff;
  if (grads) coeff.assign(static_cast<size_t>(n_queries) * n_docs, 0.0);
  auto* cptr = grads ? &coeff : nullptr;

  LossBreakdown out;
  out.supcon = supcon_coeffs(sims, n_queries, n_docs, positives, config.tau, 1.0,
                             cptr, policy);
  out.exclusion = exclusion_coeffs(sims, n_queries, n_docs, edges,
                                   config.gamma_excl, config.distribution_tau(),
                                   config.eps, config.lambda_excl, cptr,
                                   &out.n_exclusion_edges);
  out.subset = subset_coeffs(sims, n_queries, n_docs, edges, config.gamma_subset,
                             config.eps, config.subset_mean, config.lambda_subset,
                             cptr, &out.n_subset_edges, &out.subset_mean_per_term);
  out.joint = out.supcon + config.lambda_excl * out.exclusion +
              config.lambda_subset * out.subset;

  if (!std::isfinite(out.supcon)) throw TrainError("supcon loss is non-finite");
  if (!std::isfinite(out.exclusion)) throw TrainError("exclusion loss is non-finite");
  if (!std::isfinite(out.subset)) throw TrainError("subset loss is non-finite");

  if (grads) {
    grads->reset(n_queries, n_docs, dim);
    apply_coeffs(coeff, queries, n_queries, docs, n_docs, dim, *grads, policy);
  }
  return out;
}

}  // namespace logicol
