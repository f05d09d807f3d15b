// SPDX-License-Identifier: Apache-2.0
#include "logicol/experiment.hpp"

#include <chrono>
#include <sstream>

#include <json.hpp>

#include "logicol/util.hpp"

namespace logicol {

using nlohmann::json;

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::SupCon:
      return "SupCon";
    case Variant::NoGroupNoConstraints:
      return "NoGroupNoConstraints";
    case Variant::NoMixNoConstraints:
      return "NoMixNoConstraints";
    case Variant::NoConstraints:
      return "NoConstraints";
    case Variant::Full:
      return "Full";
  }
  return "?";
}

std::optional<Variant> variant_from_name(std::string_view name) {
  for (Variant v : {Variant::SupCon, Variant::NoGroupNoConstraints,
                    Variant::NoMixNoConstraints, Variant::NoConstraints,
                    Variant::Full}) {
    if (variant_name(v) == name) return v;
  }
  return std::nullopt;
}

void apply_variant(Variant v, ExperimentConfig& config) {
  config.variant = v;
  switch (v) {
    case Variant::SupCon:
      config.train_dataset = "baseline";
      config.train.batch.strategy = BatchStrategy::Random;
      config.train.loss.lambda_excl = 0.0;
      config.train.loss.lambda_subset = 0.0;
      break;
    case Variant::NoGroupNoConstraints:
      config.train_dataset = "variants";
      config.train.batch.strategy = BatchStrategy::Random;
      config.train.loss.lambda_excl = 0.0;
      config.train.loss.lambda_subset = 0.0;
      break;
    case Variant::NoMixNoConstraints:
      config.train_dataset = "variants";
      config.train.batch.strategy = BatchStrategy::Mixed;
      config.train.batch.alpha = 0.0;
      config.train.loss.lambda_excl = 0.0;
      config.train.loss.lambda_subset = 0.0;
      break;
    case Variant::NoConstraints:
      config.train_dataset = "variants";
      config.train.batch.strategy = BatchStrategy::Mixed;
      config.train.loss.lambda_excl = 0.0;
      config.train.loss.lambda_subset = 0.0;
      break;
    case Variant::Full:
      config.train_dataset = "variants";
      config.train.batch.strategy = BatchStrategy::Mixed;
      break;
  }
}

namespace {

json train_config_to_json(const TrainConfig& c) {
  return json{{"strategy", std::string(strategy_name(c.batch.strategy))},
              {"alpha", c.batch.alpha},
              {"batch_size", c.batch.batch_size},
              {"epochs", c.epochs},
              {"seed", c.seed},
              {"checkpoint_every", c.checkpoint_every},
              {"tau", c.loss.tau},
              {"dist_tau", c.loss.dist_tau},
              {"gamma_excl", c.loss.gamma_excl},
              {"gamma_subset", c.loss.gamma_subset},
              {"lambda_excl", c.loss.lambda_excl},
              {"lambda_subset", c.loss.lambda_subset},
              {"eps", c.loss.eps},
              {"subset_mean", c.loss.subset_mean},
              {"learning_rate", c.optim.learning_rate},
              {"beta1", c.optim.beta1},
              {"beta2", c.optim.beta2},
              {"adam_epsilon", c.optim.epsilon},
              {"feature_dim", c.hash.feature_dim},
              {"max_ngram", c.hash.max_ngram},
              {"hash_seed", c.hash.seed},
              {"embed_dim", c.embed_dim}};
}

void train_config_from_json(const json& obj, TrainConfig& c) {
  if (obj.contains("strategy")) {
    auto s = strategy_from_name(obj.at("strategy").get<std::string>());
    if (!s) throw ConfigError("unknown strategy '" + obj.at("strategy").get<std::string>() + "'");
    c.batch.strategy = *s;
  }
  auto opt = [&obj](const char* key, auto& out) {
    if (obj.contains(key)) out = obj.at(key).get<std::decay_t<decltype(out)>>();
  };
  opt("alpha", c.batch.alpha);
  opt("batch_size", c.batch.batch_size);
  opt("epochs", c.epochs);
  opt("seed", c.seed);
  opt("checkpoint_every", c.checkpoint_every);
  opt("tau", c.loss.tau);
  opt("dist_tau", c.loss.dist_tau);
  opt("gamma_excl", c.loss.gamma_excl);
  opt("gamma_subset", c.loss.gamma_subset);
  opt("lambda_excl", c.loss.lambda_excl);
  opt("lambda_subset", c.loss.lambda_subset);
  opt("eps", c.loss.eps);
  opt("subset_mean", c.loss.subset_mean);
  opt("learning_rate", c.optim.learning_rate);
  opt("beta1", c.optim.beta1);
  opt("beta2", c.optim.beta2);
  opt("adam_epsilon", c.optim.epsilon);
  opt("feature_dim", c.hash.feature_dim);
  opt("max_ngram", c.hash.max_ngram);
  opt("hash_seed", c.hash.seed);
  opt("embed_dim", c.embed_dim);
}

json eval_options_to_json(const EvalOptions& e) {
  return json{{"split", e.split}, {"ks", e.ks}, {"correlation_k", e.correlation_k}};
}

void eval_options_from_json(const json& obj, EvalOptions& e) {
  if (obj.contains("split")) e.split = obj.at("split").get<std::string>();
  if (obj.contains("ks")) e.ks = obj.at("ks").get<std::vector<int>>();
  if (obj.contains("correlation_k")) e.correlation_k = obj.at("correlation_k").get<int>();
}

json dataset_checksums(const std::filesystem::path& dir) {
  json files = json::object();
  for (const char* name : {"documents.jsonl", "atoms.jsonl", "queries.jsonl"}) {
    files[name] = file_checksum(dir / name);
  }
  return files;
}

}  // namespace

ExperimentConfig experiment_config_from_json(const std::string& text) {
  json obj = json::parse(text, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    throw ConfigError("experiment config is not a JSON object");
  }
  // A manifest embeds the resolved config; accept it directly.
  if (obj.contains("config") && obj.at("config").is_object()) {
    obj = obj.at("config");
  }
  ExperimentConfig c;
  if (obj.contains("data_root")) {
    c.data_root = obj.at("data_root").get<std::string>();
  }
  if (obj.contains("variant") && !obj.at("variant").is_null()) {
    auto v = variant_from_name(obj.at("variant").get<std::string>());
    if (!v) throw ConfigError("unknown variant '" + obj.at("variant").get<std::string>() + "'");
    c.variant = v;
  }
  if (obj.contains("train_dataset")) c.train_dataset = obj.at("train_dataset").get<std::string>();
  if (obj.contains("eval_dataset")) c.eval_dataset = obj.at("eval_dataset").get<std::string>();
  if (obj.contains("train")) train_config_from_json(obj.at("train"), c.train);
  if (obj.contains("eval")) eval_options_from_json(obj.at("eval"), c.eval);
  if (c.variant) apply_variant(*c.variant, c);
  return c;
}

void verify_manifest_checksums(const std::string& config_text) {
  json obj = json::parse(config_text, nullptr, false);
  if (obj.is_discarded() || !obj.is_object() || !obj.contains("datasets")) return;
  for (const auto& [role, entry] : obj.at("datasets").items()) {
    if (!entry.contains("dir") || !entry.contains("files")) continue;
    std::filesystem::path dir = entry.at("dir").get<std::string>();
    for (const auto& [name, hash] : entry.at("files").items()) {
      std::string actual = file_checksum(dir / name);
      if (actual != hash.get<std::string>()) {
        throw DatasetError("manifest checksum mismatch for " + role + " dataset file " +
                           (dir / name).string() + ": recorded " +
                           hash.get<std::string>() + ", found " + actual);
      }
    }
  }
}

std::string experiment_config_to_json(const ExperimentConfig& config) {
  json obj{{"data_root", config.data_root.string()},
           {"variant", config.variant ? json(std::string(variant_name(*config.variant))) : json(nullptr)},
           {"train_dataset", config.train_dataset},
           {"eval_dataset", config.eval_dataset},
           {"train", train_config_to_json(config.train)},
           {"eval", eval_options_to_json(config.eval)}};
  return obj.dump(2);
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  using clock = std::chrono::steady_clock;
  fs::create_directories(out_dir);

  const fs::path train_dir = config.data_root / config.train_dataset;
  const fs::path eval_dir = config.data_root / config.eval_dataset;

  LoadStats train_stats;
  Dataset train_data = load_dataset(train_dir, &train_stats);
  if (train_stats.integrity_warnings > 0) {
    throw DatasetError("dataset " + train_dir.string() + " failed integrity check: " +
                       std::to_string(train_stats.integrity_warnings) +
                       " queries disagree with their derived ground truth");
  }
  LoadStats eval_stats;
  Dataset eval_data = load_dataset(eval_dir, &eval_stats);
  if (eval_stats.integrity_warnings > 0) {
    throw DatasetError("dataset " + eval_dir.string() + " failed integrity check: " +
                       std::to_string(eval_stats.integrity_warnings) +
                       " queries disagree with their derived ground truth");
  }

  ExperimentResult result;
  result.checkpoint_path = out_dir / "checkpoint.bin";
  result.report_path = out_dir / "report.json";
  result.loss_csv_path = out_dir / "loss.csv";
  result.manifest_path = out_dir / "manifest.json";

  auto t0 = clock::now();
  std::ostringstream loss_csv;
  TrainResult trained = train_model(train_data, config.train, &loss_csv, &out_dir);
  atomic_write_file(result.loss_csv_path, loss_csv.str());
  save_model(result.checkpoint_path, trained.model);
  auto t1 = clock::now();

  result.report = evaluate(trained.model, eval_data, config.eval);
  atomic_write_file(result.report_path, report_to_json(result.report));
  auto t2 = clock::now();

  json epoch_losses = json::array();
  for (const auto& e : trained.epochs) {
    epoch_losses.push_back(json{{"supcon", e.supcon},
                                {"exclusion", e.exclusion},
                                {"subset", e.subset},
                                {"joint", e.joint},
                                {"steps", e.steps}});
  }

  ExperimentConfig resolved = config;
  json manifest{
      {"tool", "logicol"},
      {"tool_version", kToolVersion},
      {"kind", "train"},
      {"config", json::parse(experiment_config_to_json(resolved))},
      {"seeds",
       json{{"master", config.train.seed},
            {"init", derive_seed(config.train.seed, "init")},
            {"batching", derive_seed(config.train.seed, "batching")}}},
      {"datasets",
       json{{"train", json{{"dir", train_dir.string()}, {"files", dataset_checksums(train_dir)}}},
            {"eval", json{{"dir", eval_dir.string()}, {"files", dataset_checksums(eval_dir)}}}}},
      {"outputs",
       json{{"checkpoint.bin", file_checksum(result.checkpoint_path)},
            {"report.json", file_checksum(result.report_path)},
            {"loss.csv", file_checksum(result.loss_csv_path)}}},
      {"training",
       json{{"total_steps", trained.total_steps},
            {"fallback_slots", trained.fallback_slots},
            {"fallback_embeddings", trained.fallback_embeddings},
            {"epoch_losses", epoch_losses}}},
      // Wall-clock timings are informational and the one non-reproducible
      // part of a run's outputs.
      {"timings_ms",
       json{{"train", std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()},
            {"eval", std::chrono::duration_cast<std::chrono::milliseconds>(t2 - t1).count()}}},
  };
  atomic_write_file(result.manifest_path, manifest.dump(2) + "\n");
  return result;
}

std::filesystem::path alpha_sweep(const std::vector<double>& alphas,
                                  ExperimentConfig base,
                                  const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  apply_variant(Variant::Full, base);

  std::ostringstream csv;
  bool header_written = false;
  for (double alpha : alphas) {
    if (alpha < 0.0 || alpha > 1.0) {
      throw ConfigError("alpha_sweep: alpha values must lie in [0, 1]");
    }
    ExperimentConfig run_config = base;
    run_config.train.batch.alpha = alpha;
    std::string label = format_double(alpha);
    ExperimentResult run =
        run_experiment(run_config, out_dir / ("alpha_" + label));
    const EvalReport& r = run.report;

    int k_template = r.ks.empty() ? 0 : r.ks.back();
    for (int k : r.ks) {
      if (k <= 100) k_template = k;  // the 100-equivalent cut
    }
    if (!header_written) {
      csv << "alpha,p_at_1";
      for (int k : r.ks) csv << ",r_at_" << k;
      for (Template t : kAllTemplates) {
        csv << ",r" << k_template << "_" << template_code(t);
      }
      csv << ",avg_group_sim,violation_rate\n";
      header_written = true;
    }
    csv << format_double(alpha) << ',' << format_double(r.overall.p_at_1);
    for (int k : r.ks) csv << ',' << format_double(r.overall_recall(k));
    for (Template t : kAllTemplates) {
      auto it = r.by_template.find(std::string(template_code(t)));
      double v = 0.0;
      if (it != r.by_template.end()) {
        auto kt = it->second.recall_at.find(k_template);
        if (kt != it->second.recall_at.end()) v = kt->second;
      }
      csv << ',' << format_double(v);
    }
    csv << ',' << format_double(r.group_sim_mean) << ','
        << format_double(r.violation.rate) << '\n';
  }
  fs::path csv_path = out_dir / "sweep.csv";
  atomic_write_file(csv_path, csv.str());
  return csv_path;
}

}  // namespace logicol
