// SPDX-License-Identifier: Apache-2.0
#include "logicol/trainer.hpp"

#include <algorithm>
#include <ostream>

#include "logicol/util.hpp"

namespace logicol {

const char* const kLossCsvHeader =
    "step,epoch,supcon,exclusion,subset,joint,n_exclusion_edges,"
    "n_subset_edges,n_queries,n_docs,fallback_slots\n";

void TrainConfig::validate() const {
  loss.validate();
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (embed_dim < 2) throw ConfigError("embed_dim must be >= 2");
  if (optim.learning_rate <= 0.0) throw ConfigError("learning_rate must be positive");
}

namespace {

// Groups restricted to trainable members (train split, non-empty gt).
std::vector<QueryGroup> training_groups(const Dataset& dataset) {
  std::vector<QueryGroup> groups = build_groups(dataset);
  std::vector<QueryGroup> out;
  for (auto& g : groups) {
    QueryGroup filtered;
    filtered.atom_ids = g.atom_ids;
    for (int m : g.members) {
      const auto& q = dataset.queries[static_cast<size_t>(m)];
      if (q.split == "train" && !q.gt_docs.empty()) filtered.members.push_back(m);
    }
    if (filtered.members.size() >= 2) out.push_back(std::move(filtered));
  }
  return out;
}

std::vector<FeatureVector> featurize_all(const std::vector<std::string>& texts,
                                         const HashConfig& hash, ExecPolicy policy) {
  std::vector<FeatureVector> fvs(texts.size());
  const int n = static_cast<int>(texts.size());
  if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) fvs[static_cast<size_t>(i)] = featurize(texts[static_cast<size_t>(i)], hash);
  } else {
    for (int i = 0; i < n; ++i) fvs[static_cast<size_t>(i)] = featurize(texts[static_cast<size_t>(i)], hash);
  }
  return fvs;
}

}  // namespace

TrainResult train_model(const Dataset& dataset, const TrainConfig& config,
                        std::ostream* loss_csv,
                        const std::filesystem::path* checkpoint_dir) {
  config.validate();
  const ExecPolicy policy = config.policy;

  std::vector<std::string> query_texts, doc_texts;
  query_texts.reserve(dataset.queries.size());
  for (const auto& q : dataset.queries) query_texts.push_back(q.text);
  doc_texts.reserve(dataset.documents.size());
  for (const auto& d : dataset.documents) doc_texts.push_back(d.text);
  auto query_fvs = featurize_all(query_texts, config.hash, policy);
  auto doc_fvs = featurize_all(doc_texts, config.hash, policy);

  TrainResult result;
  result.model = EncoderModel::init(config.hash, config.embed_dim,
                                    derive_seed(config.seed, "init"));
  AdamState adam = AdamState::init(result.model.param_count());
  BatchSampler sampler(dataset, training_groups(dataset), config.batch,
                       derive_seed(config.seed, "batching"));

  std::vector<double> grad_w(result.model.param_count(), 0.0);
  LossGrads grads;
  MiniBatch batch;
  int step = 0;

  if (loss_csv) *loss_csv << kLossCsvHeader;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    EpochStats stats;
    while (sampler.next(batch)) {
      const int nq = static_cast<int>(batch.queries.size());
      const int nd = static_cast<int>(batch.docs.size());
      std::vector<FeatureVector> q_fvs(static_cast<size_t>(nq));
      for (int i = 0; i < nq; ++i) q_fvs[static_cast<size_t>(i)] = query_fvs[static_cast<size_t>(batch.queries[static_cast<size_t>(i)])];
      std::vector<FeatureVector> d_fvs(static_cast<size_t>(nd));
      for (int j = 0; j < nd; ++j) d_fvs[static_cast<size_t>(j)] = doc_fvs[static_cast<size_t>(batch.docs[static_cast<size_t>(j)])];

      BatchEmbeddings q_emb = embed_batch(result.model, q_fvs, policy);
      BatchEmbeddings d_emb = embed_batch(result.model, d_fvs, policy);
      for (uint8_t f : q_emb.fallback) result.fallback_embeddings += f;
      for (uint8_t f : d_emb.fallback) result.fallback_embeddings += f;

      LossBreakdown loss =
          joint_loss(q_emb.vectors, nq, d_emb.vectors, nd, config.embed_dim,
                     batch.positives, batch.edges, config.loss, &grads, policy);

      std::fill(grad_w.begin(), grad_w.end(), 0.0);
      accumulate_weight_grad(result.model, q_fvs, q_emb, grads.d_queries, grad_w,
                             policy);
      accumulate_weight_grad(result.model, d_fvs, d_emb, grads.d_docs, grad_w,
                             policy);
      adam_step(adam, result.model.weights, grad_w, config.optim, policy);

      ++step;
      stats.supcon += loss.supcon;
      stats.exclusion += loss.exclusion;
      stats.subset += loss.subset;
      stats.joint += loss.joint;
      ++stats.steps;

      if (loss_csv) {
        *loss_csv << step << ',' << epoch << ',' << format_double(loss.supcon)
                  << ',' << format_double(loss.exclusion) << ','
                  << format_double(loss.subset) << ',' << format_double(loss.joint)
                  << ',' << loss.n_exclusion_edges << ',' << loss.n_subset_edges
                  << ',' << nq << ',' << nd << ',' << batch.fallback_slots << '\n';
      }
    }
    result.epochs.push_back(stats);
    if (checkpoint_dir && config.checkpoint_every > 0 &&
        epoch % config.checkpoint_every == 0 && epoch != config.epochs) {
      result.model.version_tag = model_tag(result.model);
      save_model(*checkpoint_dir / ("checkpoint_epoch" + std::to_string(epoch) + ".bin"),
                 result.model);
    }
  }

  result.total_steps = step;
  result.fallback_slots = sampler.fallback_total();
  result.model.version_tag = model_tag(result.model);
  return result;
}

}  // namespace logicol
