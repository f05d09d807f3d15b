// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "logicol/batch.hpp"
#include "logicol/kernels.hpp"

namespace logicol {

struct LossConfig {
  double tau = 0.05;           // softmax temperature
  double gamma_excl = 0.2;     // exclusion margin
  double gamma_subset = 0.2;   // subset margin
  double lambda_excl = 0.1;
  double lambda_subset = 0.1;
  double eps = 1e-8;           // log-domain floor
  // Softmax temperature for similarity distributions; negative means reuse
  // tau.
  double dist_tau = -1.0;
  // The subset loss is a raw double sum over (edge, doc); this switches it
  // to the mean for batch-size robustness.
  bool subset_mean = false;

  double distribution_tau() const { return dist_tau > 0.0 ? dist_tau : tau; }
  void validate() const;
};

// Gradients with respect to the unit query/document embeddings.
struct LossGrads {
  std::vector<double> d_queries;  // n_queries x dim
  std::vector<double> d_docs;     // n_docs x dim

  void reset(int n_queries, int n_docs, int dim);
};

struct LossBreakdown {
  double supcon = 0.0;
  double exclusion = 0.0;
  double subset = 0.0;
  double joint = 0.0;
  int n_subset_edges = 0;
  int n_exclusion_edges = 0;
  double subset_mean_per_term = 0.0;
};

// Embeddings are row-major: queries (n_queries x dim), docs (n_docs x dim),
// all rows unit-norm. positives[i] lists in-batch doc positions of query i's
// ground truth and must be non-empty.

// Supervised contrastive loss; the softmax denominator ranges over all
// in-batch documents. Returns the summed-over-queries value.
double supcon_loss(std::span<const double> queries, int n_queries,
                   std::span<const double> docs, int n_docs, int dim,
                   const std::vector<std::vector<int>>& positives, double tau,
                   LossGrads* grads = nullptr,
                   ExecPolicy policy = ExecPolicy::Parallel);

// softmax of cosine similarities / tau over the in-batch documents.
std::vector<double> similarity_distribution(std::span<const double> query,
                                            std::span<const double> docs,
                                            int n_docs, int dim, double tau);

// 0.5 (KL(p||q) + KL(q||p)), natural log, entries floored at eps inside the
// logs. Throws on length mismatch.
double sym_kl(std::span<const double> p, std::span<const double> q, double eps);

// Mean over Exclusion edges of max(gamma_e - SymKL(s_i, s_j), 0); zero when
// no such edges exist.
double exclusion_loss(std::span<const double> queries, int n_queries,
                      std::span<const double> docs, int n_docs, int dim,
                      const std::vector<RelationEdge>& edges, double gamma_excl,
                      double dist_tau, double eps, LossGrads* grads = nullptr,
                      ExecPolicy policy = ExecPolicy::Parallel);

// Sum over Subset edges and all in-batch documents of
// max(log sim(src,d) - log sim(dst,d) + gamma_s, 0) with
// sim = clamp((cos+1)/2, eps, 1).
double subset_loss(std::span<const double> queries, int n_queries,
                   std::span<const double> docs, int n_docs, int dim,
                   const std::vector<RelationEdge>& edges, double gamma_subset,
                   double eps, bool mean_normalize, LossGrads* grads = nullptr,
                   ExecPolicy policy = ExecPolicy::Parallel);

// supcon + lambda_E * exclusion + lambda_S * subset, with the gradient being
// the same weighted sum. Throws TrainError naming the component if any value
// comes out non-finite.
LossBreakdown joint_loss(std::span<const double> queries, int n_queries,
                         std::span<const double> docs, int n_docs, int dim,
                         const std::vector<std::vector<int>>& positives,
                         const std::vector<RelationEdge>& edges,
                         const LossConfig& config, LossGrads* grads = nullptr,
                         ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace logicol
