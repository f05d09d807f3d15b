// SPDX-License-Identifier: Apache-2.0
#include "logicol/synth.hpp"

#include <algorithm>
#include <array>
#include <set>

#include <json.hpp>

namespace logicol {

using nlohmann::json;

namespace {

constexpr std::array<const char*, 16> kClasses = {
    "ferns",   "orchids", "beetles", "moths",   "finches", "frogs",
    "novels",  "films",   "ballads", "shrubs",  "mosses",  "snails",
    "lizards", "grasses", "weevils", "lichens",
};

constexpr std::array<const char*, 26> kRegions = {
    "peru",    "chile",   "kenya",      "norway", "java",       "tibet",
    "laos",    "cuba",    "malta",      "fiji",   "togo",       "nepal",
    "oman",    "chad",    "iceland",    "bolivia", "ghana",     "sumatra",
    "crete",   "bhutan",  "patagonia",  "borneo", "madagascar", "samoa",
    "galicia", "armenia",
};

constexpr std::array<const char*, 40> kTitleFirst = {
    "Alvena",  "Borin",   "Cresta",  "Dorval",  "Elunia",  "Farel",
    "Galdra",  "Hestin",  "Ilvara",  "Jorath",  "Kelwin",  "Lorneth",
    "Mavira",  "Nolden",  "Orsella", "Pravin",  "Quendra", "Rostam",
    "Selvane", "Tormund", "Ulvina",  "Vorreth", "Welda",   "Xandor",
    "Yselle",  "Zorvan",  "Amberic", "Brellan", "Corvina", "Drusel",
    "Emberon", "Faluna",  "Gresham", "Halvora", "Ironde",  "Jassel",
    "Kovanna", "Lurneth", "Morvale", "Nystra",
};

constexpr std::array<const char*, 40> kTitleSecond = {
    "Arval",    "Brightel", "Calder",  "Dunmore",  "Eastvale", "Fenwick",
    "Garrow",   "Hollis",   "Ingram",  "Jesper",   "Kestrel",  "Lindow",
    "Marrow",   "Norwick",  "Oakhart", "Pemberly", "Quill",    "Rathbone",
    "Selwyn",   "Thistle",  "Umber",   "Vexley",   "Winslow",  "Yardley",
    "Zephram",  "Ashdown",  "Birchall", "Cobble",  "Dapple",   "Elmsworth",
    "Foxglove", "Grimsby",  "Harrow",  "Ivorra",   "Juneberry", "Kilbride",
    "Larkspur", "Mosswood", "Nettle",  "Oxbow",
};

const std::vector<std::string>& surface_templates(Template t) {
  static const std::vector<std::string> kAnd = {
      "{a} and {b}",
      "{a} that are also {b}",
      "{a} and likewise {b}",
  };
  static const std::vector<std::string> kOr = {
      "{a} or {b}",
      "either {a} or {b}",
      "{a} or else {b}",
  };
  static const std::vector<std::string> kDiff = {
      "{a}, but not {b}",
      "{a} excluding {b}",
      "{a} that are not {b}",
  };
  static const std::vector<std::string> kAnd3 = {
      "{a} and {b} and {c}",
      "{a} that are also {b} and {c}",
      "{a}, {b}, and likewise {c}",
  };
  static const std::vector<std::string> kAndDiff = {
      "{a} and {b}, but not {c}",
      "{a} that are also {b}, excluding {c}",
      "{a} and {b} yet not {c}",
  };
  static const std::vector<std::string> kOr3 = {
      "{a} or {b} or {c}",
      "either {a}, {b}, or {c}",
      "{a}, {b}, or else {c}",
  };
  static const std::vector<std::string> kAtom = {"{a}"};
  switch (t) {
    case Template::Atom:
      return kAtom;
    case Template::And:
      return kAnd;
    case Template::Or:
      return kOr;
    case Template::Diff:
      return kDiff;
    case Template::And3:
      return kAnd3;
    case Template::AndDiff:
      return kAndDiff;
    case Template::Or3:
      return kOr3;
  }
  return kAtom;
}

std::string render_text(Template t, const std::vector<std::string>& atom_texts,
                        int surface_variety, Rng& rng) {
  const auto& pool = surface_templates(t);
  size_t n = std::min<size_t>(pool.size(), std::max(1, surface_variety));
  std::string out = pool[rng.index(n)];
  const char* keys[3] = {"{a}", "{b}", "{c}"};
  for (size_t i = 0; i < atom_texts.size(); ++i) {
    size_t pos = out.find(keys[i]);
    if (pos != std::string::npos) out.replace(pos, 3, atom_texts[i]);
  }
  return out;
}

int sample_category_count(Rng& rng, double mean, int available) {
  // 1 + Binomial(available-1, p) with p chosen so the mean lands on target.
  if (available <= 1) return 1;
  double p = (mean - 1.0) / static_cast<double>(available - 1);
  p = std::clamp(p, 0.0, 1.0);
  int k = 1;
  for (int i = 0; i < available - 1; ++i) {
    if (rng.chance(p)) ++k;
  }
  return k;
}

std::string zero_pad(int v, int width) {
  std::string s = std::to_string(v);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

}  // namespace

SynthConfig synth_config_from_json_file(const std::filesystem::path& path) {
  json obj = json::parse(read_file(path), nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    throw ConfigError("synth config is not a JSON object: " + path.string());
  }
  // A run manifest embeds its resolved config; accept it directly.
  if (obj.contains("config") && obj.at("config").is_object()) {
    obj = obj.at("config");
  }
  SynthConfig c;
  auto get_int = [&](const char* key, int& out) {
    if (obj.contains(key)) out = obj.at(key).get<int>();
  };
  auto get_double = [&](const char* key, double& out) {
    if (obj.contains(key)) out = obj.at(key).get<double>();
  };
  get_int("n_entities", c.n_entities);
  get_int("n_atoms", c.n_atoms);
  get_int("n_classes", c.n_classes);
  get_double("mean_categories", c.mean_categories);
  get_int("n_pools", c.n_pools);
  get_double("pool3_fraction", c.pool3_fraction);
  get_double("train_fraction", c.train_fraction);
  get_double("validation_fraction", c.validation_fraction);
  get_int("baseline_variants_per_pool", c.baseline_variants_per_pool);
  get_int("surface_variety", c.surface_variety);
  return c;
}

std::string synth_config_to_json(const SynthConfig& c) {
  json obj{{"n_entities", c.n_entities},
           {"n_atoms", c.n_atoms},
           {"n_classes", c.n_classes},
           {"mean_categories", c.mean_categories},
           {"n_pools", c.n_pools},
           {"pool3_fraction", c.pool3_fraction},
           {"train_fraction", c.train_fraction},
           {"validation_fraction", c.validation_fraction},
           {"baseline_variants_per_pool", c.baseline_variants_per_pool},
           {"surface_variety", c.surface_variety}};
  return obj.dump(2);
}

std::vector<ComposedQuery> compose_variants(
    const std::vector<std::string>& pool_atom_ids,
    const std::map<std::string, std::string>& atom_texts,
    const std::map<std::string, std::vector<std::string>>& atom_sets,
    int surface_variety, Rng& rng, int* dropped_empty) {
  std::vector<Template> templates;
  if (pool_atom_ids.size() == 2) {
    templates = {Template::And, Template::Or, Template::Diff};
  } else if (pool_atom_ids.size() == 3) {
    templates = {Template::And3, Template::AndDiff, Template::Or3};
  } else {
    throw DatasetError("compose_variants: pool must have 2 or 3 atoms");
  }

  std::vector<ComposedQuery> out;
  // The individual sub-queries come first.
  for (const auto& atom : pool_atom_ids) {
    ComposedQuery q;
    q.expr = QueryExpr{Template::Atom, {atom}};
    q.text = atom_texts.at(atom);
    q.gt_docs = derive_ground_truth(q.expr, atom_sets);
    out.push_back(std::move(q));
  }
  for (Template t : templates) {
    ComposedQuery q;
    q.expr.tmpl = t;
    q.expr.atoms = pool_atom_ids;
    q.gt_docs = derive_ground_truth(q.expr, atom_sets);
    if (q.gt_docs.empty()) {
      if (dropped_empty) ++*dropped_empty;
      continue;
    }
    std::vector<std::string> texts;
    for (const auto& atom : pool_atom_ids) texts.push_back(atom_texts.at(atom));
    q.text = render_text(t, texts, surface_variety, rng);
    out.push_back(std::move(q));
  }
  return out;
}

SynthOutput synthesize(const SynthConfig& config, uint64_t seed) {
  if (config.n_atoms < 3) throw ConfigError("synthesize: n_atoms must be >= 3");
  if (config.n_classes < 1 || config.n_classes > static_cast<int>(kClasses.size())) {
    throw ConfigError("synthesize: n_classes out of range");
  }
  if (config.train_fraction < 0 || config.validation_fraction < 0 ||
      config.train_fraction + config.validation_fraction > 1.0) {
    throw ConfigError("synthesize: invalid split fractions");
  }

  SynthOutput out;
  SynthReport& report = out.report;
  Rng rng(derive_seed(seed, "synthesize"));

  // --- atoms: "<class> of <region>", classes get a region sample each ---
  int per_class = (config.n_atoms + config.n_classes - 1) / config.n_classes;
  if (per_class > static_cast<int>(kRegions.size())) {
    throw ConfigError("synthesize: n_atoms too large for the region inventory");
  }
  struct AtomSeed {
    std::string id;
    std::string text;
    int cls;
  };
  std::vector<AtomSeed> atom_seeds;
  std::vector<std::vector<int>> class_atoms(static_cast<size_t>(config.n_classes));
  for (int cls = 0; cls < config.n_classes && static_cast<int>(atom_seeds.size()) < config.n_atoms; ++cls) {
    auto regions = rng.sample_indices(kRegions.size(), static_cast<size_t>(per_class));
    for (size_t r : regions) {
      if (static_cast<int>(atom_seeds.size()) >= config.n_atoms) break;
      AtomSeed a;
      a.id = "a" + zero_pad(static_cast<int>(atom_seeds.size()), 3);
      a.text = std::string(kClasses[static_cast<size_t>(cls)]) + " of " + kRegions[r];
      a.cls = cls;
      class_atoms[static_cast<size_t>(cls)].push_back(static_cast<int>(atom_seeds.size()));
      atom_seeds.push_back(std::move(a));
    }
  }

  // --- entities: class-bound category sets ---
  Dataset& variants = out.variants;
  std::vector<std::vector<int>> atom_docs(atom_seeds.size());
  std::set<std::string> used_titles;
  for (int e = 0; e < config.n_entities; ++e) {
    int cls = static_cast<int>(rng.index(static_cast<size_t>(config.n_classes)));
    const auto& pool = class_atoms[static_cast<size_t>(cls)];
    if (pool.empty()) continue;
    int k = sample_category_count(rng, config.mean_categories,
                                  static_cast<int>(pool.size()));
    auto picks = rng.sample_indices(pool.size(), static_cast<size_t>(k));
    std::sort(picks.begin(), picks.end());

    std::string title;
    for (int attempt = 0;; ++attempt) {
      title = std::string(kTitleFirst[rng.index(kTitleFirst.size())]) + " " +
              kTitleSecond[rng.index(kTitleSecond.size())];
      if (attempt > 4) title += " " + zero_pad(e, 4);
      if (used_titles.insert(title).second) break;
    }

    Document d;
    d.id = "e" + zero_pad(e, 4);
    d.title = title;
    d.text = title + " is a catalogued entry. it is listed under: ";
    for (size_t i = 0; i < picks.size(); ++i) {
      int atom = pool[picks[i]];
      if (i) d.text += "; ";
      d.text += atom_seeds[static_cast<size_t>(atom)].text;
      atom_docs[static_cast<size_t>(atom)].push_back(e);
    }
    d.text += ".";
    variants.documents.push_back(std::move(d));
  }

  // --- atom records; empty ones are discarded with a warning count ---
  std::map<std::string, std::string> atom_texts;
  std::map<std::string, std::vector<std::string>> atom_sets;
  std::vector<std::vector<int>> retained_class_atoms(static_cast<size_t>(config.n_classes));
  for (size_t i = 0; i < atom_seeds.size(); ++i) {
    if (atom_docs[i].empty()) {
      ++report.atoms_dropped_empty;
      continue;
    }
    AtomicQuery a;
    a.id = atom_seeds[i].id;
    a.text = atom_seeds[i].text;
    for (int e : atom_docs[i]) a.doc_ids.push_back("e" + zero_pad(e, 4));
    std::sort(a.doc_ids.begin(), a.doc_ids.end());
    atom_texts[a.id] = a.text;
    atom_sets[a.id] = a.doc_ids;
    retained_class_atoms[static_cast<size_t>(atom_seeds[i].cls)].push_back(
        static_cast<int>(i));
    variants.atoms.push_back(std::move(a));
  }

  // --- candidate pools: all 2- and 3-subsets within a class ---
  std::vector<std::vector<int>> pools2, pools3;
  for (const auto& atoms : retained_class_atoms) {
    for (size_t i = 0; i < atoms.size(); ++i) {
      for (size_t j = i + 1; j < atoms.size(); ++j) {
        pools2.push_back({atoms[i], atoms[j]});
        for (size_t k = j + 1; k < atoms.size(); ++k) {
          pools3.push_back({atoms[i], atoms[j], atoms[k]});
        }
      }
    }
  }
  rng.shuffle(pools2);
  rng.shuffle(pools3);
  int want3 = std::min(static_cast<int>(pools3.size()),
                       static_cast<int>(config.n_pools * config.pool3_fraction + 0.5));
  int want2 = std::min(static_cast<int>(pools2.size()), config.n_pools - want3);
  std::vector<std::vector<int>> pools(pools2.begin(), pools2.begin() + want2);
  pools.insert(pools.end(), pools3.begin(), pools3.begin() + want3);
  // Randomize operand order so Diff orientation is not index-biased, then
  // shuffle pool order before split assignment.
  for (auto& p : pools) rng.shuffle(p);
  rng.shuffle(pools);
  report.pools_generated = static_cast<int>(pools.size());

  int n_train = static_cast<int>(pools.size() * config.train_fraction + 0.5);
  int n_valid = static_cast<int>(pools.size() * config.validation_fraction + 0.5);
  auto pool_split = [&](size_t pool_idx) -> std::string {
    if (static_cast<int>(pool_idx) < n_train) return "train";
    if (static_cast<int>(pool_idx) < n_train + n_valid) return "validation";
    return "test";
  };

  // --- query records: atoms (train split) first, then pool variants ---
  int next_query = 0;
  auto make_id = [&]() { return "q" + zero_pad(next_query++, 4); };
  std::set<std::string> seen_exprs;
  for (const auto& a : variants.atoms) {
    QueryRecord q;
    q.id = make_id();
    q.expr = QueryExpr{Template::Atom, {a.id}};
    q.text = a.text;
    q.gt_docs = a.doc_ids;
    q.split = "train";
    seen_exprs.insert(expr_key(q.expr));
    variants.queries.push_back(std::move(q));
    report.variant_counts["train"]["A"] += 1;
  }

  // Baseline keeps the atoms plus a sampled subset of each pool's variants.
  std::set<std::string> baseline_ids;
  for (const auto& q : variants.queries) baseline_ids.insert(q.id);

  for (size_t pi = 0; pi < pools.size(); ++pi) {
    std::vector<std::string> pool_ids;
    for (int a : pools[pi]) pool_ids.push_back(atom_seeds[static_cast<size_t>(a)].id);
    std::string split = pool_split(pi);

    auto composed = compose_variants(pool_ids, atom_texts, atom_sets,
                                     config.surface_variety, rng,
                                     &report.variants_dropped_empty);
    std::vector<std::string> pool_query_ids;
    for (auto& c : composed) {
      if (c.expr.tmpl == Template::Atom) continue;  // already registered
      std::string key = expr_key(c.expr);
      if (!seen_exprs.insert(key).second) continue;  // duplicate pool
      QueryRecord q;
      q.id = make_id();
      q.expr = std::move(c.expr);
      q.text = std::move(c.text);
      q.gt_docs = std::move(c.gt_docs);
      q.split = split;
      pool_query_ids.push_back(q.id);
      report.variant_counts[split][std::string(template_code(q.expr.tmpl))] += 1;
      variants.queries.push_back(std::move(q));
    }

    int keep = std::min<int>(config.baseline_variants_per_pool,
                             static_cast<int>(pool_query_ids.size()));
    auto picks = rng.sample_indices(pool_query_ids.size(), static_cast<size_t>(keep));
    std::sort(picks.begin(), picks.end());
    for (size_t p : picks) baseline_ids.insert(pool_query_ids[p]);
  }

  variants.rebuild_indexes();

  out.baseline.documents = variants.documents;
  out.baseline.atoms = variants.atoms;
  for (const auto& q : variants.queries) {
    if (baseline_ids.count(q.id)) {
      out.baseline.queries.push_back(q);
      report.baseline_counts[q.split][std::string(template_code(q.expr.tmpl))] += 1;
    }
  }
  out.baseline.rebuild_indexes();
  return out;
}

}  // namespace logicol
