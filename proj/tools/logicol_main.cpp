// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver: synthesize | train | eval | analyze | sweep.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "logicol/experiment.hpp"
#include "logicol/synth.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace logicol;

namespace {

void set_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

int cmd_synthesize(const std::string& config_path, const std::string& out_dir,
                   uint64_t seed) {
  SynthConfig config;
  if (!config_path.empty()) config = synth_config_from_json_file(config_path);
  SynthOutput output = synthesize(config, seed);

  fs::path root(out_dir);
  save_dataset(root / "variants", output.variants);
  save_dataset(root / "baseline", output.baseline);

  json counts_v = json::object(), counts_b = json::object();
  for (const auto& [split, by_template] : output.report.variant_counts) {
    for (const auto& [code, n] : by_template) counts_v[split][code] = n;
  }
  for (const auto& [split, by_template] : output.report.baseline_counts) {
    for (const auto& [code, n] : by_template) counts_b[split][code] = n;
  }
  json report{{"atoms_dropped_empty", output.report.atoms_dropped_empty},
              {"variants_dropped_empty", output.report.variants_dropped_empty},
              {"pools_generated", output.report.pools_generated},
              {"variant_counts", counts_v},
              {"baseline_counts", counts_b},
              {"n_documents", output.variants.documents.size()},
              {"n_atoms", output.variants.atoms.size()},
              {"n_queries_variants", output.variants.queries.size()},
              {"n_queries_baseline", output.baseline.queries.size()}};
  atomic_write_file(root / "synth_report.json", report.dump(2) + "\n");

  json files = json::object();
  for (const char* ds : {"variants", "baseline"}) {
    for (const char* name : {"documents.jsonl", "atoms.jsonl", "queries.jsonl"}) {
      files[std::string(ds) + "/" + name] = file_checksum(root / ds / name);
    }
  }
  json manifest{{"tool", "logicol"},
                {"tool_version", kToolVersion},
                {"kind", "synthesize"},
                {"seed", seed},
                {"config", json::parse(synth_config_to_json(config))},
                {"outputs", files}};
  atomic_write_file(root / "manifest.json", manifest.dump(2) + "\n");

  std::cout << "synthesized " << output.variants.documents.size() << " documents, "
            << output.variants.atoms.size() << " atoms, "
            << output.variants.queries.size() << " variant queries ("
            << output.baseline.queries.size() << " baseline) -> " << out_dir
            << "\n";
  if (output.report.atoms_dropped_empty > 0) {
    std::cout << "warning: dropped " << output.report.atoms_dropped_empty
              << " atoms with empty document sets\n";
  }
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& data_root,
              const std::string& variant, const std::string& out_dir,
              uint64_t seed, bool seed_given) {
  ExperimentConfig config;
  if (!config_path.empty()) {
    std::string text = read_file(config_path);
    config = experiment_config_from_json(text);
    // Reproducing a manifest without redirecting --data re-verifies the
    // recorded dataset checksums.
    if (data_root.empty()) verify_manifest_checksums(text);
  }
  if (!data_root.empty()) config.data_root = data_root;
  if (config.data_root.empty()) {
    throw ConfigError("no dataset root given (--data or config data_root)");
  }
  if (!variant.empty()) {
    auto v = variant_from_name(variant);
    if (!v) throw ConfigError("unknown variant '" + variant + "'");
    apply_variant(*v, config);
  }
  if (seed_given) config.train.seed = seed;

  ExperimentResult result = run_experiment(config, out_dir);
  const EvalReport& r = result.report;
  std::cout << "trained";
  if (config.variant) std::cout << " " << variant_name(*config.variant);
  std::cout << " -> " << out_dir << "\n";
  std::cout << "  split=" << r.split << " P@1=" << format_double(r.overall.p_at_1);
  for (int k : r.ks) {
    std::cout << " R@" << k << "=" << format_double(r.overall_recall(k));
  }
  std::cout << "\n  violation_rate=" << format_double(r.violation.rate)
            << " avg_group_sim=" << format_double(r.group_sim_mean)
            << " corr_mean_r=" << format_double(r.correlation_mean_r) << "\n";
  return 0;
}

int cmd_eval(const std::string& model_path, const std::string& data_dir,
             const std::string& ks, const std::string& split,
             int correlation_k, const std::string& index_path,
             const std::string& out_path) {
  EncoderModel model = load_model(model_path);
  LoadStats stats;
  Dataset dataset = load_dataset(data_dir, &stats);
  if (stats.integrity_warnings > 0) {
    throw DatasetError("dataset " + data_dir + " failed integrity check: " +
                       std::to_string(stats.integrity_warnings) +
                       " queries disagree with their derived ground truth");
  }
  CorpusIndex index;
  bool have_index = false;
  if (!index_path.empty()) {
    // Cache the corpus index; a stale cache (different model tag) is an error.
    if (fs::exists(index_path)) {
      index = load_index(index_path, model_tag(model));
    } else {
      index = build_index(model, dataset.documents);
      save_index(index_path, index);
      std::cout << "wrote corpus index -> " << index_path << "\n";
    }
    if (index.size() != static_cast<int>(dataset.documents.size())) {
      throw IoError("index " + index_path + " covers " + std::to_string(index.size()) +
                    " documents but the dataset has " +
                    std::to_string(dataset.documents.size()));
    }
    have_index = true;
  }
  EvalOptions options;
  options.split = split;
  if (!ks.empty()) options.ks = parse_int_list(ks);
  options.correlation_k = correlation_k;
  EvalReport report = evaluate(model, dataset, options, have_index ? &index : nullptr);
  atomic_write_file(out_path, report_to_json(report));
  std::cout << "eval split=" << report.split
            << " queries=" << report.overall.n_queries
            << " P@1=" << format_double(report.overall.p_at_1);
  for (int k : report.ks) {
    std::cout << " R@" << k << "=" << format_double(report.overall_recall(k));
  }
  std::cout << " -> " << out_path << "\n";
  return 0;
}

int cmd_analyze_correlation(const std::string& model_path,
                            const std::string& data_dir,
                            const std::string& pairs_path, int k,
                            const std::string& split,
                            const std::string& out_path) {
  EncoderModel model = load_model(model_path);
  LoadStats stats;
  Dataset dataset = load_dataset(data_dir, &stats);
  if (stats.integrity_warnings > 0) {
    throw DatasetError("dataset " + data_dir + " failed integrity check");
  }

  // Pairs come from a file of "query_id,query_id" lines, or default to the
  // split's intersection-vs-negation pairs.
  std::vector<std::pair<int, int>> pairs;
  if (!pairs_path.empty()) {
    std::ifstream in(pairs_path);
    if (!in) throw IoError("cannot open pairs file: " + pairs_path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      auto comma = line.find(',');
      if (comma == std::string::npos) {
        throw DatasetError(pairs_path + " line " + std::to_string(line_no) +
                           ": expected 'query_id,query_id'");
      }
      std::string id1 = line.substr(0, comma);
      std::string id2 = line.substr(comma + 1);
      auto it1 = dataset.query_index.find(id1);
      auto it2 = dataset.query_index.find(id2);
      if (it1 == dataset.query_index.end() || it2 == dataset.query_index.end()) {
        throw DatasetError(pairs_path + " line " + std::to_string(line_no) +
                           ": unknown query id");
      }
      const auto& e1 = dataset.queries[static_cast<size_t>(it1->second)].expr;
      const auto& e2 = dataset.queries[static_cast<size_t>(it2->second)].expr;
      std::vector<std::string> a1 = e1.atoms, a2 = e2.atoms;
      std::sort(a1.begin(), a1.end());
      std::sort(a2.begin(), a2.end());
      if (a1 != a2 || e1.tmpl == e2.tmpl) {
        throw DatasetError(pairs_path + " line " + std::to_string(line_no) +
                           ": pair must share atoms and differ in connectives");
      }
      pairs.emplace_back(it1->second, it2->second);
    }
  } else {
    pairs = and_not_pairs(dataset, split);
  }

  CorpusIndex index = build_index(model, dataset.documents);
  std::ostringstream csv;
  csv << "q1,q2,template1,template2,pearson_r,topk_overlap,pool_size\n";
  for (auto [i1, i2] : pairs) {
    const auto& q1 = dataset.queries[static_cast<size_t>(i1)];
    const auto& q2 = dataset.queries[static_cast<size_t>(i2)];
    std::vector<double> e1(static_cast<size_t>(model.embed_dim));
    std::vector<double> e2(static_cast<size_t>(model.embed_dim));
    embed(model, featurize(q1.text, model.hash), e1);
    embed(model, featurize(q2.text, model.hash), e2);
    CorrelationRecord rec = similarity_correlation(index, e1, e2, k);
    csv << q1.id << ',' << q2.id << ',' << template_code(q1.expr.tmpl) << ','
        << template_code(q2.expr.tmpl) << ','
        << (rec.r_defined ? format_double(rec.pearson_r) : "undefined") << ','
        << rec.topk_overlap << ',' << rec.pool_size << '\n';
  }
  atomic_write_file(out_path, csv.str());
  std::cout << "analyzed " << pairs.size() << " pairs -> " << out_path << "\n";
  return 0;
}

int cmd_sweep(const std::string& alphas, const std::string& config_path,
              const std::string& data_root, const std::string& out_dir,
              uint64_t seed, bool seed_given) {
  ExperimentConfig config;
  if (!config_path.empty()) {
    config = experiment_config_from_json(read_file(config_path));
  }
  if (!data_root.empty()) config.data_root = data_root;
  if (config.data_root.empty()) {
    throw ConfigError("no dataset root given (--data or config data_root)");
  }
  if (seed_given) config.train.seed = seed;
  auto values = parse_double_list(alphas);
  if (values.empty()) throw ConfigError("--alphas list is empty");
  fs::path csv = alpha_sweep(values, config, out_dir);
  std::cout << "sweep over " << values.size() << " alpha values -> " << csv << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dense retriever training with subset/exclusion consistency constraints"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "OpenMP thread count (0 = library default)");

  std::string config_path, out_dir, data_root, variant;
  uint64_t seed = 0;

  auto* synth = app.add_subcommand("synthesize", "generate a synthetic corpus and query sets");
  synth->add_option("--config", config_path, "synthesis config JSON");
  synth->add_option("--out", out_dir, "output directory")->required();
  synth->add_option("--seed", seed, "rng seed");

  auto* train = app.add_subcommand("train", "train a model and evaluate it");
  train->add_option("--config", config_path, "experiment config JSON (or a manifest)");
  train->add_option("--data", data_root, "dataset root (contains variants/ and baseline/)");
  train->add_option("--variant", variant,
                    "ablation variant: SupCon | NoGroupNoConstraints | "
                    "NoMixNoConstraints | NoConstraints | Full");
  train->add_option("--out", out_dir, "output directory")->required();
  auto* train_seed = train->add_option("--seed", seed, "master seed");

  std::string model_path, ks = "5,20,100,1000", split = "test", out_path, index_path;
  int correlation_k = 100;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
  eval_cmd->add_option("--model", model_path, "checkpoint path")->required();
  eval_cmd->add_option("--data", data_root, "dataset directory")->required();
  eval_cmd->add_option("--ks", ks, "comma-separated recall cutoffs");
  eval_cmd->add_option("--split", split, "dataset split to evaluate");
  eval_cmd->add_option("--correlation-k", correlation_k,
                       "top-k pool for the correlation analysis (0 disables)");
  eval_cmd->add_option("--index", index_path,
                       "corpus index cache: loaded if present (model tag must "
                       "match), otherwise built and saved");
  eval_cmd->add_option("--out", out_path, "report JSON path")->required();

  std::string pairs_path;
  int analyze_k = 100;
  auto* analyze = app.add_subcommand("analyze", "similarity analyses");
  auto* corr = analyze->add_subcommand("correlation",
                                       "pairwise score correlation between related queries");
  corr->add_option("--model", model_path, "checkpoint path")->required();
  corr->add_option("--data", data_root, "dataset directory")->required();
  corr->add_option("--pairs", pairs_path, "file of 'query_id,query_id' lines");
  corr->add_option("--k", analyze_k, "top-k pool size");
  corr->add_option("--split", split, "split for auto-generated pairs");
  corr->add_option("--out", out_path, "output CSV path")->required();

  std::string alphas;
  auto* sweep = app.add_subcommand("sweep", "alpha sweep of Full-variant runs");
  sweep->add_option("--alphas", alphas, "comma-separated alpha values")->required();
  sweep->add_option("--config", config_path, "experiment config JSON");
  sweep->add_option("--data", data_root, "dataset root");
  sweep->add_option("--out", out_dir, "output directory")->required();
  auto* sweep_seed = sweep->add_option("--seed", seed, "master seed");

  CLI11_PARSE(app, argc, argv);
  set_threads(threads);

  try {
    if (synth->parsed()) return cmd_synthesize(config_path, out_dir, seed);
    if (train->parsed()) {
      return cmd_train(config_path, data_root, variant, out_dir, seed,
                       train_seed->count() > 0);
    }
    if (eval_cmd->parsed()) {
      return cmd_eval(model_path, data_root, ks, split, correlation_k, index_path,
                      out_path);
    }
    if (analyze->parsed()) {
      if (!corr->parsed()) {
        std::cerr << "analyze: expected a subcommand (correlation)\n";
        return 1;
      }
      return cmd_analyze_correlation(model_path, data_root, pairs_path, analyze_k,
                                     split, out_path);
    }
    if (sweep->parsed()) {
      return cmd_sweep(alphas, config_path, data_root, out_dir, seed,
                       sweep_seed->count() > 0);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
