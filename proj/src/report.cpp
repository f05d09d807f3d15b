// SPDX-License-Identifier: Apache-2.0
#include "logicol/report.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "logicol/util.hpp"

namespace logicol {

using nlohmann::json;

std::string template_category(Template t) {
  switch (t) {
    case Template::Atom:
      return "none";
    case Template::And:
    case Template::And3:
      return "intersection";
    case Template::Diff:
    case Template::AndDiff:
      return "negation";
    case Template::Or:
    case Template::Or3:
      return "union";
  }
  return "none";
}

std::vector<int> adjust_ks(const std::vector<int>& ks, int corpus_size) {
  std::vector<int> out;
  for (int k : ks) {
    int adjusted = k;
    if (k > corpus_size) adjusted = (corpus_size + 2) / 3;
    if (adjusted >= 1) out.push_back(adjusted);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double EvalReport::overall_recall(int k) const {
  auto it = overall.recall_at.find(k);
  return it == overall.recall_at.end() ? 0.0 : it->second;
}

double EvalReport::category_recall(const std::string& category, int k) const {
  auto it = by_category.find(category);
  if (it == by_category.end()) return 0.0;
  auto kt = it->second.recall_at.find(k);
  return kt == it->second.recall_at.end() ? 0.0 : kt->second;
}

std::vector<std::pair<int, int>> and_not_pairs(const Dataset& dataset,
                                               const std::string& split) {
  std::map<std::vector<std::string>, std::map<Template, int>> by_pool;
  for (size_t i = 0; i < dataset.queries.size(); ++i) {
    const auto& q = dataset.queries[i];
    if (q.split != split) continue;
    if (q.expr.tmpl == Template::Atom) continue;
    std::vector<std::string> key = q.expr.atoms;
    std::sort(key.begin(), key.end());
    by_pool[key][q.expr.tmpl] = static_cast<int>(i);
  }
  std::vector<std::pair<int, int>> pairs;
  for (const auto& [key, members] : by_pool) {
    auto a2 = members.find(Template::And);
    auto d2 = members.find(Template::Diff);
    if (a2 != members.end() && d2 != members.end()) {
      pairs.emplace_back(a2->second, d2->second);
    }
    auto a3 = members.find(Template::And3);
    auto d3 = members.find(Template::AndDiff);
    if (a3 != members.end() && d3 != members.end()) {
      pairs.emplace_back(a3->second, d3->second);
    }
  }
  return pairs;
}

namespace {

struct Accumulator {
  int n = 0;
  double p1 = 0.0;
  std::map<int, double> recall;

  void add(const PrMetrics& m, const std::vector<int>& ks) {
    ++n;
    p1 += m.p_at_1;
    for (int k : ks) recall[k] += m.recall_at.at(k);
  }

  TemplateMetrics finish(const std::vector<int>& ks) const {
    TemplateMetrics out;
    out.n_queries = n;
    if (n == 0) return out;
    out.p_at_1 = p1 / n;
    for (int k : ks) {
      auto it = recall.find(k);
      out.recall_at[k] = it == recall.end() ? 0.0 : it->second / n;
    }
    return out;
  }
};

}  // namespace

EvalReport evaluate(const EncoderModel& model, const Dataset& dataset,
                    const EvalOptions& options,
                    const CorpusIndex* prebuilt_index) {
  if (!valid_split_name(options.split)) {
    throw ConfigError("evaluate: unknown split '" + options.split + "'");
  }
  EvalReport report;
  report.split = options.split;
  report.model_tag = model_tag(model);

  CorpusIndex built;
  if (prebuilt_index) {
    if (prebuilt_index->model_tag != report.model_tag) {
      throw IoError("evaluate: index model tag " + prebuilt_index->model_tag +
                    " does not match model " + report.model_tag);
    }
  } else {
    built = build_index(model, dataset.documents, options.policy);
  }
  const CorpusIndex& index = prebuilt_index ? *prebuilt_index : built;
  report.corpus_size = index.size();
  report.ks = adjust_ks(options.ks, index.size());

  // Embeddings for every query record; group and correlation metrics reach
  // across splits for the pool atoms.
  const int n_all = static_cast<int>(dataset.queries.size());
  std::vector<FeatureVector> fvs(static_cast<size_t>(n_all));
  if (options.policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_all; ++i) {
      fvs[static_cast<size_t>(i)] = featurize(dataset.queries[static_cast<size_t>(i)].text, model.hash);
    }
  } else {
    for (int i = 0; i < n_all; ++i) {
      fvs[static_cast<size_t>(i)] = featurize(dataset.queries[static_cast<size_t>(i)].text, model.hash);
    }
  }
  BatchEmbeddings emb = embed_batch(model, fvs, options.policy);
  const int dim = model.embed_dim;
  auto emb_of = [&](int qi) {
    return std::span<const double>(emb.vectors.data() + static_cast<size_t>(qi) * dim,
                                   static_cast<size_t>(dim));
  };

  // Eval-split queries with non-empty ground truth.
  std::vector<int> eval_queries;
  for (int i = 0; i < n_all; ++i) {
    const auto& q = dataset.queries[static_cast<size_t>(i)];
    if (q.split != options.split) continue;
    if (q.gt_docs.empty()) {
      ++report.skipped_empty_gt;
      continue;
    }
    eval_queries.push_back(i);
  }

  // Full corpus ordering per query: prefix for P/R, whole order for ranks.
  std::vector<double> eval_emb(eval_queries.size() * static_cast<size_t>(dim));
  for (size_t i = 0; i < eval_queries.size(); ++i) {
    auto src = emb_of(eval_queries[i]);
    std::copy(src.begin(), src.end(), eval_emb.begin() + i * static_cast<size_t>(dim));
  }
  std::vector<Ranking> rankings =
      rank_all(index, eval_emb, static_cast<int>(eval_queries.size()), index.size(),
               options.policy);

  Accumulator overall;
  std::map<std::string, Accumulator> by_template, by_category;
  for (size_t i = 0; i < eval_queries.size(); ++i) {
    const auto& q = dataset.queries[static_cast<size_t>(eval_queries[i])];
    PrMetrics m = precision_recall(rankings[i], index.doc_ids, q.gt_docs, report.ks);
    overall.add(m, report.ks);
    by_template[std::string(template_code(q.expr.tmpl))].add(m, report.ks);
    by_category[template_category(q.expr.tmpl)].add(m, report.ks);
  }
  report.overall = overall.finish(report.ks);
  for (const auto& [code, acc] : by_template) {
    report.by_template[code] = acc.finish(report.ks);
  }
  for (const auto& [cat, acc] : by_category) {
    report.by_category[cat] = acc.finish(report.ks);
  }

  // Violation rate over the split's negation queries.
  auto atom_sets = dataset.atom_sets();
  std::vector<ViolationCase> cases;
  int skipped_excluded = 0;
  for (size_t i = 0; i < eval_queries.size(); ++i) {
    const auto& q = dataset.queries[static_cast<size_t>(eval_queries[i])];
    if (q.expr.tmpl != Template::Diff && q.expr.tmpl != Template::AndDiff) continue;
    const std::string& negated = q.expr.atoms.back();
    std::vector<std::string> excluded =
        set_difference(atom_sets.at(negated), q.gt_docs);
    if (excluded.empty()) {
      ++skipped_excluded;
      continue;
    }
    // positions -> 1-based ranks
    std::vector<int> rank_of(static_cast<size_t>(index.size()), 0);
    const auto& order = rankings[i].positions;
    for (size_t r = 0; r < order.size(); ++r) {
      rank_of[static_cast<size_t>(order[r])] = static_cast<int>(r) + 1;
    }
    ViolationCase vc;
    for (const auto& doc : q.gt_docs) {
      vc.gt_ranks.push_back(rank_of[static_cast<size_t>(dataset.doc_index.at(doc))]);
    }
    for (const auto& doc : excluded) {
      vc.excluded_ranks.push_back(rank_of[static_cast<size_t>(dataset.doc_index.at(doc))]);
    }
    cases.push_back(std::move(vc));
  }
  report.violation = violation_rate(cases, skipped_excluded);

  // Embedding coherence per group of the split.
  std::vector<QueryGroup> groups = build_groups(dataset);
  double sim_sum = 0.0;
  for (const auto& g : groups) {
    std::vector<int> members;
    bool in_split = false;
    for (int m : g.members) {
      const auto& q = dataset.queries[static_cast<size_t>(m)];
      if (q.expr.tmpl == Template::Atom) {
        members.push_back(m);
      } else if (q.split == options.split) {
        members.push_back(m);
        in_split = true;
      }
    }
    if (!in_split || members.size() < 2) continue;
    std::vector<double> member_emb(members.size() * static_cast<size_t>(dim));
    for (size_t i = 0; i < members.size(); ++i) {
      auto src = emb_of(members[i]);
      std::copy(src.begin(), src.end(), member_emb.begin() + i * static_cast<size_t>(dim));
    }
    GroupSim gs;
    for (size_t i = 0; i < g.atom_ids.size(); ++i) {
      if (i) gs.pool += ",";
      gs.pool += g.atom_ids[i];
    }
    gs.members = static_cast<int>(members.size());
    gs.value = avg_group_sim(member_emb, static_cast<int>(members.size()), dim);
    sim_sum += gs.value;
    report.group_sims.push_back(std::move(gs));
  }
  if (!report.group_sims.empty()) {
    report.group_sim_mean = sim_sum / static_cast<double>(report.group_sims.size());
  }

  // Intersection-vs-negation similarity correlation.
  if (options.correlation_k > 0) {
    double r_sum = 0.0;
    int r_count = 0;
    double overlap_sum = 0.0;
    for (auto [qa, qn] : and_not_pairs(dataset, options.split)) {
      CorrelationRecord rec =
          similarity_correlation(index, emb_of(qa), emb_of(qn), options.correlation_k);
      rec.query1 = dataset.queries[static_cast<size_t>(qa)].id;
      rec.query2 = dataset.queries[static_cast<size_t>(qn)].id;
      if (rec.r_defined) {
        r_sum += rec.pearson_r;
        ++r_count;
      } else {
        ++report.correlation_undefined;
      }
      overlap_sum += rec.topk_overlap;
      report.correlations.push_back(std::move(rec));
    }
    if (r_count > 0) report.correlation_mean_r = r_sum / r_count;
    if (!report.correlations.empty()) {
      report.correlation_mean_overlap =
          overlap_sum / static_cast<double>(report.correlations.size());
    }
  }

  return report;
}

namespace {

json metrics_to_json(const TemplateMetrics& m) {
  json recall = json::object();
  for (const auto& [k, v] : m.recall_at) recall[std::to_string(k)] = v;
  return json{{"n_queries", m.n_queries}, {"p_at_1", m.p_at_1}, {"recall", recall}};
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
  json by_template = json::object();
  for (const auto& [code, m] : report.by_template) by_template[code] = metrics_to_json(m);
  json by_category = json::object();
  for (const auto& [cat, m] : report.by_category) by_category[cat] = metrics_to_json(m);

  json groups = json::array();
  for (const auto& g : report.group_sims) {
    groups.push_back(json{{"pool", g.pool}, {"members", g.members}, {"value", g.value}});
  }
  json pairs = json::array();
  for (const auto& rec : report.correlations) {
    json r = rec.r_defined ? json(rec.pearson_r) : json(nullptr);
    pairs.push_back(json{{"q1", rec.query1},
                         {"q2", rec.query2},
                         {"r", r},
                         {"overlap", rec.topk_overlap},
                         {"pool_size", rec.pool_size}});
  }

  json obj{
      {"split", report.split},
      {"model_tag", report.model_tag},
      {"corpus_size", report.corpus_size},
      {"ks", report.ks},
      {"overall", metrics_to_json(report.overall)},
      {"by_template", by_template},
      {"by_category", by_category},
      {"violation",
       json{{"rate", report.violation.rate},
            {"eligible", report.violation.eligible},
            {"skipped_empty_excluded", report.violation.skipped_empty}}},
      {"group_sim", json{{"mean", report.group_sim_mean}, {"groups", groups}}},
      {"correlation",
       json{{"mean_r", report.correlation_mean_r},
            {"mean_overlap", report.correlation_mean_overlap},
            {"n_pairs", static_cast<int>(report.correlations.size())},
            {"n_undefined", report.correlation_undefined},
            {"pairs", pairs}}},
      {"skipped_empty_gt", report.skipped_empty_gt},
  };
  return obj.dump(2) + "\n";
}

}  // namespace logicol
