// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Each criterion prints one [PASS]/[FAIL] line; the
// process exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "logicol/experiment.hpp"
#include "logicol/synth.hpp"
#include "oracles.hpp"

using namespace logicol;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name, bool pass,
               const std::string& details) {
  std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", number,
              name.c_str(), details.empty() ? "" : " — ", details.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) { return format_double(v); }

// ---------------------------------------------------------------------------
// Criterion 1: loss oracles on 100 random batches, abs err <= 1e-9, < 10 s.
// ---------------------------------------------------------------------------
void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  Rng rng(20240);
  double max_err = 0.0;
  LossConfig cfg;  // tau 0.05, gammas 0.2, lambdas 0.1
  for (int round = 0; round < 100; ++round) {
    int nq = 3 + static_cast<int>(rng.index(6));
    int nd = 4 + static_cast<int>(rng.index(9));
    int dim = 16;
    auto q = oracle::random_unit_rows(rng, nq, dim);
    auto d = oracle::random_unit_rows(rng, nd, dim);
    std::vector<std::vector<int>> positives(static_cast<size_t>(nq));
    for (int i = 0; i < nq; ++i) {
      auto picks = rng.sample_indices(static_cast<size_t>(nd), 1 + rng.index(2));
      for (size_t p : picks) positives[static_cast<size_t>(i)].push_back(static_cast<int>(p));
      std::sort(positives[static_cast<size_t>(i)].begin(), positives[static_cast<size_t>(i)].end());
    }
    std::vector<RelationEdge> edges;
    edges.push_back({0, 1, RelationKind::Exclusion});
    edges.push_back({2, 0, RelationKind::Subset});
    if (nq > 3) edges.push_back({3, 2, RelationKind::Subset});

    auto table = oracle::sim_table(q, nq, d, nd, dim);

    double sup = supcon_loss(q, nq, d, nd, dim, positives, cfg.tau);
    max_err = std::max(max_err, std::abs(sup - oracle::supcon(table, positives, cfg.tau)));

    // sym_kl on this batch's similarity distributions.
    auto p1 = similarity_distribution(std::span<const double>(q.data(), static_cast<size_t>(dim)),
                                      d, nd, dim, cfg.distribution_tau());
    auto p2 = similarity_distribution(
        std::span<const double>(q.data() + dim, static_cast<size_t>(dim)), d, nd, dim,
        cfg.distribution_tau());
    max_err = std::max(max_err, std::abs(sym_kl(p1, p2, cfg.eps) -
                                         oracle::sym_kl(p1, p2, cfg.eps)));

    double exc = exclusion_loss(q, nq, d, nd, dim, edges, cfg.gamma_excl,
                                cfg.distribution_tau(), cfg.eps);
    max_err = std::max(max_err, std::abs(exc - oracle::exclusion(table, edges, cfg.gamma_excl,
                                                                 cfg.distribution_tau(), cfg.eps)));

    double sub = subset_loss(q, nq, d, nd, dim, edges, cfg.gamma_subset, cfg.eps, false);
    max_err = std::max(max_err,
                       std::abs(sub - oracle::subset(table, edges, cfg.gamma_subset, cfg.eps, false)));

    auto joint = joint_loss(q, nq, d, nd, dim, positives, edges, cfg);
    double joint_oracle = oracle::supcon(table, positives, cfg.tau) +
                          cfg.lambda_excl * oracle::exclusion(table, edges, cfg.gamma_excl,
                                                              cfg.distribution_tau(), cfg.eps) +
                          cfg.lambda_subset * oracle::subset(table, edges, cfg.gamma_subset,
                                                             cfg.eps, cfg.subset_mean);
    max_err = std::max(max_err, std::abs(joint.joint - joint_oracle));
  }
  double elapsed = seconds_since(t0);
  criterion(1, "loss oracles on 100 random batches", max_err <= 1e-9 && elapsed < 10.0,
            "max abs err " + fmt(max_err) + ", " + fmt(elapsed) + " s");
}

// ---------------------------------------------------------------------------
// Criterion 2: finite-difference gradient checks, >= 20 params per loss
// component, h = 1e-4, rel err < 1e-4, < 30 s.
// ---------------------------------------------------------------------------
void criterion_2() {
  auto t0 = std::chrono::steady_clock::now();
  HashConfig hash;
  hash.feature_dim = 1u << 12;
  const int dim = 16;
  EncoderModel model = EncoderModel::init(hash, dim, 4242);
  Rng rng(515);

  const int nq = 4, nd = 6;
  auto make_fvs = [&](int n) {
    std::vector<FeatureVector> fvs(static_cast<size_t>(n));
    for (auto& fv : fvs) {
      for (int i = 0; i < 6; ++i) {
        fv.entries.emplace_back(static_cast<uint32_t>(rng.index(hash.feature_dim)), 1.0f);
      }
      std::sort(fv.entries.begin(), fv.entries.end());
      fv.entries.erase(std::unique(fv.entries.begin(), fv.entries.end(),
                                   [](auto& a, auto& b) { return a.first == b.first; }),
                       fv.entries.end());
    }
    return fvs;
  };
  auto q_fvs = make_fvs(nq);
  auto d_fvs = make_fvs(nd);
  std::vector<std::vector<int>> positives{{0, 3}, {1}, {2}, {4}};
  std::vector<RelationEdge> edges{{0, 1, RelationKind::Exclusion},
                                  {2, 0, RelationKind::Subset},
                                  {3, 1, RelationKind::Subset}};

  // Margins chosen to keep every hinge active and far from its kink, so the
  // finite differences probe smooth regions of each component.
  LossConfig cfg;
  cfg.tau = 0.05;
  cfg.dist_tau = 1.0;
  cfg.gamma_excl = 5.0;
  cfg.gamma_subset = 3.0;

  enum Component { Supcon, Exclusion, Subset, Joint };
  const char* names[] = {"supcon", "exclusion", "subset", "joint"};
  auto eval_component = [&](const EncoderModel& m, Component c, LossGrads* grads) {
    auto qe = embed_batch(m, q_fvs, ExecPolicy::Serial);
    auto de = embed_batch(m, d_fvs, ExecPolicy::Serial);
    switch (c) {
      case Supcon:
        return supcon_loss(qe.vectors, nq, de.vectors, nd, dim, positives, cfg.tau,
                           grads, ExecPolicy::Serial);
      case Exclusion:
        return exclusion_loss(qe.vectors, nq, de.vectors, nd, dim, edges,
                              cfg.gamma_excl, cfg.distribution_tau(), cfg.eps, grads,
                              ExecPolicy::Serial);
      case Subset:
        return subset_loss(qe.vectors, nq, de.vectors, nd, dim, edges,
                           cfg.gamma_subset, cfg.eps, false, grads, ExecPolicy::Serial);
      case Joint:
        return joint_loss(qe.vectors, nq, de.vectors, nd, dim, positives, edges, cfg,
                          grads, ExecPolicy::Serial)
            .joint;
    }
    return 0.0;
  };

  // Probe only rows the batch can reach; elsewhere the gradient is zero by
  // construction.
  std::vector<size_t> reachable;
  for (const auto& fvs : {std::cref(q_fvs), std::cref(d_fvs)}) {
    for (const auto& fv : fvs.get()) {
      for (const auto& [idx, c] : fv.entries) {
        (void)c;
        for (int t = 0; t < dim; ++t) reachable.push_back(static_cast<size_t>(idx) * dim + t);
      }
    }
  }
  std::sort(reachable.begin(), reachable.end());
  reachable.erase(std::unique(reachable.begin(), reachable.end()), reachable.end());

  bool all_pass = true;
  std::string detail;
  const double h = 1e-4;
  for (Component c : {Supcon, Exclusion, Subset, Joint}) {
    LossGrads grads;
    eval_component(model, c, &grads);
    auto qe = embed_batch(model, q_fvs, ExecPolicy::Serial);
    auto de = embed_batch(model, d_fvs, ExecPolicy::Serial);
    std::vector<double> grad_w(model.param_count(), 0.0);
    accumulate_weight_grad(model, q_fvs, qe, grads.d_queries, grad_w, ExecPolicy::Serial);
    accumulate_weight_grad(model, d_fvs, de, grads.d_docs, grad_w, ExecPolicy::Serial);

    int checked = 0;
    double worst = 0.0;
    for (size_t probe = 0; probe < reachable.size() * 4 && checked < 20; ++probe) {
      size_t k = reachable[rng.index(reachable.size())];
      EncoderModel up = model, down = model;
      up.weights[k] += h;
      down.weights[k] -= h;
      double fd = (eval_component(up, c, nullptr) - eval_component(down, c, nullptr)) / (2 * h);
      if (std::abs(fd) < 1e-7) continue;
      double rel = std::abs(grad_w[k] - fd) / std::max(std::abs(fd), 1e-12);
      worst = std::max(worst, rel);
      ++checked;
    }
    bool ok = checked >= 20 && worst < 1e-4;
    all_pass = all_pass && ok;
    detail += std::string(names[c]) + " rel " + fmt(worst) + " (" +
              std::to_string(checked) + " params); ";
  }
  double elapsed = seconds_since(t0);
  criterion(2, "finite-difference gradient checks", all_pass && elapsed < 30.0,
            detail + fmt(elapsed) + " s");
}

// ---------------------------------------------------------------------------
// Criterion 3: derive_relation vs brute-force set semantics over 200 random
// universes of <= 50 docs; exact agreement on all template pairs.
// ---------------------------------------------------------------------------
void criterion_3() {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> pool{"A", "B", "C"};

  std::vector<QueryExpr> exprs;
  for (Template t : kAllTemplates) {
    int arity = template_arity(t);
    std::vector<std::string> chosen;
    std::function<void()> rec = [&]() {
      if (static_cast<int>(chosen.size()) == arity) {
        exprs.push_back(QueryExpr{t, chosen});
        return;
      }
      for (const auto& a : pool) {
        if (std::find(chosen.begin(), chosen.end(), a) != chosen.end()) continue;
        chosen.push_back(a);
        rec();
        chosen.pop_back();
      }
    };
    rec();
  }

  // Universe 0 is designed to realize all eight membership cells; the rest
  // are random with at most 50 documents each.
  Rng rng(606);
  std::vector<std::map<std::string, std::vector<std::string>>> universes;
  {
    std::map<std::string, std::vector<std::string>> cells;
    for (const auto& a : pool) cells[a] = {};
    for (int mask = 0; mask < 8; ++mask) {
      std::string doc = "c" + std::to_string(mask);
      for (size_t ai = 0; ai < pool.size(); ++ai) {
        if ((mask >> ai) & 1) cells[pool[ai]].push_back(doc);
      }
    }
    for (auto& [a, docs] : cells) std::sort(docs.begin(), docs.end());
    universes.push_back(std::move(cells));
  }
  while (universes.size() < 200) {
    int n_docs = 1 + static_cast<int>(rng.index(50));
    std::map<std::string, std::vector<std::string>> sets;
    for (const auto& a : pool) sets[a] = {};
    for (int d = 0; d < n_docs; ++d) {
      std::string doc = "d" + std::to_string(d);
      for (const auto& a : pool) {
        if (rng.chance(0.5)) sets[a].push_back(doc);
      }
    }
    for (auto& [a, docs] : sets) std::sort(docs.begin(), docs.end());
    universes.push_back(std::move(sets));
  }

  // Ground truths per (expression, universe).
  std::vector<std::vector<std::vector<std::string>>> gt(exprs.size());
  for (size_t e = 0; e < exprs.size(); ++e) {
    gt[e].reserve(universes.size());
    for (const auto& u : universes) gt[e].push_back(derive_ground_truth(exprs[e], u));
  }

  int disagreements = 0;
  int pairs = 0;
  for (size_t i = 0; i < exprs.size(); ++i) {
    for (size_t j = 0; j < exprs.size(); ++j) {
      if (i == j) continue;
      ++pairs;
      bool subset_all = true, disjoint_all = true;
      for (size_t u = 0; u < universes.size(); ++u) {
        if (!std::includes(gt[j][u].begin(), gt[j][u].end(), gt[i][u].begin(),
                           gt[i][u].end())) {
          subset_all = false;
        }
        if (!set_intersection(gt[i][u], gt[j][u]).empty()) disjoint_all = false;
        if (!subset_all && !disjoint_all) break;
      }
      Relation brute = subset_all   ? Relation::Subset
                       : disjoint_all ? Relation::Exclusion
                                      : Relation::None;
      if (derive_relation(exprs[i], exprs[j]) != brute) ++disagreements;
    }
  }
  double elapsed = seconds_since(t0);
  criterion(3, "relation derivation vs brute-force set semantics", disagreements == 0,
            std::to_string(pairs) + " ordered pairs x 200 universes, " +
                std::to_string(disagreements) + " disagreements, " + fmt(elapsed) + " s");
}

// ---------------------------------------------------------------------------
// Criteria 4-7: directional claims on the desk dataset, seeds {0,1,2}.
// ---------------------------------------------------------------------------
struct VariantMeans {
  double r100 = 0.0;
  double violation = 0.0;
  double corr_r = 0.0;
  double corr_overlap = 0.0;
  double r100_intersection = 0.0;
  double r100_negation = 0.0;
};

void criteria_4_to_7(const fs::path& work) {
  auto t0 = std::chrono::steady_clock::now();

  SynthConfig synth_config;  // the desk defaults: 2000 docs, 60 atoms
  SynthOutput data = synthesize(synth_config, 0);
  save_dataset(work / "data" / "variants", data.variants);
  save_dataset(work / "data" / "baseline", data.baseline);

  const std::vector<Variant> variants{Variant::SupCon, Variant::NoGroupNoConstraints,
                                      Variant::NoConstraints, Variant::Full};
  const std::vector<uint64_t> seeds{0, 1, 2};

  std::map<Variant, VariantMeans> means;
  for (Variant v : variants) {
    VariantMeans m;
    for (uint64_t seed : seeds) {
      ExperimentConfig config;
      config.data_root = work / "data";
      config.train.epochs = 30;
      config.train.seed = seed;
      config.eval.split = "test";
      config.eval.ks = {5, 20, 100, 1000};
      config.eval.correlation_k = 100;
      apply_variant(v, config);
      fs::path out = work / (std::string(variant_name(v)) + "_seed" + std::to_string(seed));
      ExperimentResult run = run_experiment(config, out);
      const EvalReport& r = run.report;
      m.r100 += r.overall_recall(100);
      m.violation += r.violation.rate;
      m.corr_r += r.correlation_mean_r;
      m.corr_overlap += r.correlation_mean_overlap;
      m.r100_intersection += r.category_recall("intersection", 100);
      m.r100_negation += r.category_recall("negation", 100);
    }
    double n = static_cast<double>(seeds.size());
    m.r100 /= n;
    m.violation /= n;
    m.corr_r /= n;
    m.corr_overlap /= n;
    m.r100_intersection /= n;
    m.r100_negation /= n;
    means[v] = m;
  }
  double elapsed = seconds_since(t0);

  const VariantMeans& full = means[Variant::Full];
  const VariantMeans& supcon = means[Variant::SupCon];
  const VariantMeans& no_constraints = means[Variant::NoConstraints];
  const VariantMeans& no_group = means[Variant::NoGroupNoConstraints];

  criterion(4, "violation rate drops by >= 10 points vs SupCon",
            full.violation <= supcon.violation - 0.10 && elapsed < 1800.0,
            "Full " + fmt(full.violation) + " vs SupCon " + fmt(supcon.violation) +
                " (runs took " + fmt(elapsed) + " s)");

  bool crit5 = full.corr_r <= supcon.corr_r - 0.2 &&
               full.corr_overlap < supcon.corr_overlap;
  criterion(5, "intersection-vs-negation correlation drops by >= 0.2",
            crit5,
            "mean r " + fmt(full.corr_r) + " vs " + fmt(supcon.corr_r) +
                ", mean top-100 overlap " + fmt(full.corr_overlap) + " vs " +
                fmt(supcon.corr_overlap));

  bool crit6 = full.r100_intersection >= supcon.r100_intersection &&
               full.r100_negation >= supcon.r100_negation;
  criterion(6, "R@100 gains on intersection and negation templates", crit6,
            "intersection " + fmt(full.r100_intersection) + " vs " +
                fmt(supcon.r100_intersection) + ", negation " + fmt(full.r100_negation) +
                " vs " + fmt(supcon.r100_negation));

  const double tie = 0.005;  // half a point on the percent scale
  bool crit7 = full.r100 >= no_constraints.r100 - tie &&
               no_constraints.r100 >= no_group.r100 - tie;
  criterion(7, "ablation ordering on overall R@100", crit7,
            "Full " + fmt(full.r100) + ", NoConstraints " + fmt(no_constraints.r100) +
                ", NoGroupNoConstraints " + fmt(no_group.r100) + " (ties within 0.5 pt)");
}

// ---------------------------------------------------------------------------
// Criterion 8: metric fixtures reproduce hand-computed values.
// ---------------------------------------------------------------------------
void criterion_8() {
  bool ok = true;
  std::string detail;

  // Violation rate: constructed 10-query fixture, 4 violations.
  {
    std::vector<ViolationCase> cases;
    for (int i = 0; i < 4; ++i) cases.push_back({{10, 20}, {1, 2}});
    for (int i = 0; i < 6; ++i) cases.push_back({{1, 2}, {30, 40}});
    auto stats = violation_rate(cases, 0);
    bool here = stats.rate == 0.4 && !is_violation({{2, 5}, {1, 10}}) &&
                is_violation({{2, 3}, {1}});
    ok = ok && here;
    detail += std::string("violation ") + (here ? "ok" : "BAD") + "; ";
  }

  // Precision/recall hand trace: gt {d1,d3}, ranking (d3,d9,d1,d4).
  {
    std::vector<std::string> ids{"d1", "d3", "d4", "d9"};
    Ranking r;
    r.positions = {1, 3, 0, 2};
    auto m = precision_recall(r, ids, {"d1", "d3"}, {1, 2, 3});
    bool here = m.p_at_1 == 1.0 && m.recall_at.at(1) == 0.5 && m.recall_at.at(2) == 0.5 &&
                m.recall_at.at(3) == 1.0;
    ok = ok && here;
    detail += std::string("precision_recall ") + (here ? "ok" : "BAD") + "; ";
  }

  // Group similarity: identical pair, 0.8 pair, (0.9, 0.6, 0.3) triple.
  {
    std::vector<double> same{1, 0, 1, 0};
    std::vector<double> pair{1, 0, 0.8, 0.6};
    double l21 = 0.9, l22 = std::sqrt(1 - 0.81);
    double l31 = 0.6, l32 = (0.3 - l21 * l31) / l22;
    double l33 = std::sqrt(1 - l31 * l31 - l32 * l32);
    std::vector<double> triple{1, 0, 0, l21, l22, 0, l31, l32, l33};
    bool here = avg_group_sim(same, 2, 2) == 1.0 &&
                std::abs(avg_group_sim(pair, 2, 2) - 0.8) < 1e-12 &&
                std::abs(avg_group_sim(triple, 3, 3) - 0.6) < 1e-12;
    ok = ok && here;
    detail += std::string("avg_group_sim ") + (here ? "ok" : "BAD") + "; ";
  }

  // Correlation: identical queries give r = 1 with full overlap; scores
  // against a constructed pool match the covariance-formula oracle.
  {
    Rng rng(32);
    auto emb = oracle::random_unit_rows(rng, 40, 8);
    CorpusIndex index;
    index.dim = 8;
    index.embeddings = emb;
    for (int i = 0; i < 40; ++i) index.doc_ids.push_back("d" + std::to_string(i));
    index.model_tag = "fixture";
    auto q = oracle::random_unit_rows(rng, 1, 8);
    auto rec = similarity_correlation(index, q, q, 10);
    bool here = rec.r_defined && std::abs(rec.pearson_r - 1.0) < 1e-12 &&
                rec.topk_overlap == 10 && rec.pool_size == 10;

    auto q2 = oracle::random_unit_rows(rng, 1, 8);
    auto rec2 = similarity_correlation(index, q, q2, 15);
    // Recompute both score vectors over the same pool and feed the oracle.
    Ranking r1 = rank(index, q, 15), r2 = rank(index, q2, 15);
    std::vector<int> pool(r1.positions.begin(), r1.positions.end());
    pool.insert(pool.end(), r2.positions.begin(), r2.positions.end());
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    std::vector<double> s1, s2;
    for (int posn : pool) {
      double a = 0, b = 0;
      for (int t = 0; t < 8; ++t) {
        a += q[static_cast<size_t>(t)] * emb[static_cast<size_t>(posn) * 8 + t];
        b += q2[static_cast<size_t>(t)] * emb[static_cast<size_t>(posn) * 8 + t];
      }
      s1.push_back(a);
      s2.push_back(b);
    }
    here = here && std::abs(rec2.pearson_r - oracle::pearson(s1, s2)) <= 1e-9;
    ok = ok && here;
    detail += std::string("similarity_correlation ") + (here ? "ok" : "BAD");
  }

  criterion(8, "metric fixtures match hand-computed values", ok, detail);
}

// ---------------------------------------------------------------------------
// Criterion 9: byte-identical reproduction of every artifact kind.
// ---------------------------------------------------------------------------
void criterion_9(const fs::path& work) {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;

  SynthConfig small;
  small.n_entities = 250;
  small.n_atoms = 12;
  small.n_classes = 3;
  small.n_pools = 18;

  // synthesize twice
  {
    SynthOutput a = synthesize(small, 3);
    SynthOutput b = synthesize(small, 3);
    save_dataset(work / "synth_a" / "variants", a.variants);
    save_dataset(work / "synth_a" / "baseline", a.baseline);
    save_dataset(work / "synth_b" / "variants", b.variants);
    save_dataset(work / "synth_b" / "baseline", b.baseline);
    bool here = true;
    for (const char* ds : {"variants", "baseline"}) {
      for (const char* name : {"documents.jsonl", "atoms.jsonl", "queries.jsonl"}) {
        here = here && read_file(work / "synth_a" / ds / name) ==
                           read_file(work / "synth_b" / ds / name);
      }
    }
    ok = ok && here;
    detail += std::string("synthesize ") + (here ? "ok" : "BAD") + "; ";
  }

  // train twice, then once more from the manifest
  {
    ExperimentConfig config;
    config.data_root = work / "synth_a";
    config.train.epochs = 2;
    config.train.hash.feature_dim = 1u << 12;
    config.train.embed_dim = 16;
    config.train.seed = 7;
    config.eval.ks = {5, 20, 100};
    config.eval.correlation_k = 20;
    apply_variant(Variant::Full, config);
    ExperimentResult a = run_experiment(config, work / "train_a");
    ExperimentResult b = run_experiment(config, work / "train_b");
    ExperimentConfig from_manifest = experiment_config_from_json(read_file(a.manifest_path));
    ExperimentResult c = run_experiment(from_manifest, work / "train_c");
    bool here = read_file(a.checkpoint_path) == read_file(b.checkpoint_path) &&
                read_file(a.report_path) == read_file(b.report_path) &&
                read_file(a.loss_csv_path) == read_file(b.loss_csv_path) &&
                read_file(a.checkpoint_path) == read_file(c.checkpoint_path) &&
                read_file(a.report_path) == read_file(c.report_path) &&
                read_file(a.loss_csv_path) == read_file(c.loss_csv_path);
    ok = ok && here;
    detail += std::string("train+manifest ") + (here ? "ok" : "BAD") + "; ";

    // standalone eval twice on the trained checkpoint
    EncoderModel model = load_model(a.checkpoint_path);
    Dataset dataset = load_dataset(work / "synth_a" / "variants");
    EvalOptions options;
    options.ks = {5, 20, 100};
    options.correlation_k = 20;
    std::string r1 = report_to_json(evaluate(model, dataset, options));
    std::string r2 = report_to_json(evaluate(model, dataset, options));
    bool eval_ok = r1 == r2;
    ok = ok && eval_ok;
    detail += std::string("eval ") + (eval_ok ? "ok" : "BAD") + "; ";
  }

  // sweep twice
  {
    ExperimentConfig config;
    config.data_root = work / "synth_a";
    config.train.epochs = 1;
    config.train.hash.feature_dim = 1u << 12;
    config.train.embed_dim = 16;
    config.train.seed = 7;
    config.eval.ks = {20};
    config.eval.correlation_k = 10;
    fs::path s1 = alpha_sweep({0.0, 1.0}, config, work / "sweep_a");
    fs::path s2 = alpha_sweep({0.0, 1.0}, config, work / "sweep_b");
    bool here = read_file(s1) == read_file(s2);
    ok = ok && here;
    detail += std::string("sweep ") + (here ? "ok" : "BAD");
  }

  criterion(9, "byte-identical re-runs", ok, detail + ", " + fmt(seconds_since(t0)) + " s");
}

}  // namespace

int main() {
  fs::path work = fs::current_path() / "acceptance_runs";
  fs::remove_all(work);
  fs::create_directories(work);

  criterion_1();
  criterion_2();
  criterion_3();
  criteria_4_to_7(work);
  criterion_8();
  criterion_9(work);

  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return 1;
}
