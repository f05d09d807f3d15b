// SPDX-License-Identifier: Apache-2.0
#include "logicol/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "logicol/util.hpp"

namespace logicol {

using nlohmann::json;

void Dataset::rebuild_indexes() {
  doc_index.clear();
  atom_index.clear();
  query_index.clear();
  for (size_t i = 0; i < documents.size(); ++i) {
    if (!doc_index.emplace(documents[i].id, static_cast<int>(i)).second) {
      throw DatasetError("duplicate document id: " + documents[i].id);
    }
  }
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (!atom_index.emplace(atoms[i].id, static_cast<int>(i)).second) {
      throw DatasetError("duplicate atom id: " + atoms[i].id);
    }
  }
  for (size_t i = 0; i < queries.size(); ++i) {
    if (!query_index.emplace(queries[i].id, static_cast<int>(i)).second) {
      throw DatasetError("duplicate query id: " + queries[i].id);
    }
  }
}

std::map<std::string, std::vector<std::string>> Dataset::atom_sets() const {
  std::map<std::string, std::vector<std::string>> sets;
  for (const auto& a : atoms) sets[a.id] = a.doc_ids;
  return sets;
}

bool valid_split_name(const std::string& s) {
  return s == "train" || s == "validation" || s == "test";
}

namespace {

[[noreturn]] void line_error(const std::string& file, int line,
                             const std::string& what) {
  throw DatasetError(file + " line " + std::to_string(line) + ": " + what);
}

json parse_line(const std::string& file, int line, const std::string& text) {
  json obj = json::parse(text, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    line_error(file, line, "not a JSON object");
  }
  return obj;
}

std::string get_string(const json& obj, const std::string& file, int line,
                       const char* field) {
  auto it = obj.find(field);
  if (it == obj.end() || !it->is_string()) {
    line_error(file, line, std::string("missing or non-string field '") + field + "'");
  }
  return it->get<std::string>();
}

std::vector<std::string> get_string_array(const json& obj, const std::string& file,
                                          int line, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end() || !it->is_array()) {
    line_error(file, line, std::string("missing or non-array field '") + field + "'");
  }
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) {
      line_error(file, line, std::string("non-string entry in field '") + field + "'");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

void for_each_line(const std::filesystem::path& path,
                   const std::function<void(int, const std::string&)>& fn) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    fn(number, line);
  }
}

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& dir, LoadStats* stats) {
  Dataset ds;

  const std::string docs_file = (dir / "documents.jsonl").string();
  for_each_line(docs_file, [&](int n, const std::string& text) {
    json obj = parse_line(docs_file, n, text);
    Document d;
    d.id = get_string(obj, docs_file, n, "id");
    d.title = get_string(obj, docs_file, n, "title");
    d.text = get_string(obj, docs_file, n, "text");
    if (d.text.empty()) line_error(docs_file, n, "field 'text' must be non-empty");
    ds.documents.push_back(std::move(d));
  });

  const std::string atoms_file = (dir / "atoms.jsonl").string();
  for_each_line(atoms_file, [&](int n, const std::string& text) {
    json obj = parse_line(atoms_file, n, text);
    AtomicQuery a;
    a.id = get_string(obj, atoms_file, n, "id");
    a.text = get_string(obj, atoms_file, n, "text");
    a.doc_ids = sorted_unique(get_string_array(obj, atoms_file, n, "doc_ids"));
    ds.atoms.push_back(std::move(a));
  });

  const std::string queries_file = (dir / "queries.jsonl").string();
  for_each_line(queries_file, [&](int n, const std::string& text) {
    json obj = parse_line(queries_file, n, text);
    QueryRecord q;
    q.id = get_string(obj, queries_file, n, "id");
    std::string code = get_string(obj, queries_file, n, "template");
    auto tmpl = template_from_code(code);
    if (!tmpl) line_error(queries_file, n, "unknown template '" + code + "'");
    q.expr.tmpl = *tmpl;
    q.expr.atoms = get_string_array(obj, queries_file, n, "atoms");
    try {
      validate_expr(q.expr);
    } catch (const DatasetError& e) {
      line_error(queries_file, n, e.what());
    }
    q.text = get_string(obj, queries_file, n, "text");
    if (q.text.empty()) line_error(queries_file, n, "field 'text' must be non-empty");
    q.gt_docs = sorted_unique(get_string_array(obj, queries_file, n, "gt_docs"));
    q.split = get_string(obj, queries_file, n, "split");
    if (!valid_split_name(q.split)) {
      line_error(queries_file, n, "unknown split '" + q.split + "'");
    }
    ds.queries.push_back(std::move(q));
  });

  ds.rebuild_indexes();

  // Referential integrity is an error; a gt_docs/derivation disagreement is
  // counted as a warning for the caller to act on.
  for (const auto& a : ds.atoms) {
    for (const auto& doc : a.doc_ids) {
      if (!ds.doc_index.count(doc)) {
        throw DatasetError("atom " + a.id + " references unknown document " + doc);
      }
    }
  }
  auto sets = ds.atom_sets();
  int warnings = 0;
  for (const auto& q : ds.queries) {
    for (const auto& atom : q.expr.atoms) {
      if (!ds.atom_index.count(atom)) {
        throw DatasetError("query " + q.id + " references unknown atom " + atom);
      }
    }
    if (derive_ground_truth(q.expr, sets) != q.gt_docs) ++warnings;
  }
  if (stats) stats->integrity_warnings = warnings;
  return ds;
}

void save_dataset(const std::filesystem::path& dir, const Dataset& dataset) {
  std::filesystem::create_directories(dir);

  std::ostringstream docs;
  for (const auto& d : dataset.documents) {
    json obj{{"id", d.id}, {"title", d.title}, {"text", d.text}};
    docs << obj.dump() << '\n';
  }
  atomic_write_file(dir / "documents.jsonl", docs.str());

  std::ostringstream atoms;
  for (const auto& a : dataset.atoms) {
    json obj{{"id", a.id}, {"text", a.text}, {"doc_ids", a.doc_ids}};
    atoms << obj.dump() << '\n';
  }
  atomic_write_file(dir / "atoms.jsonl", atoms.str());

  std::ostringstream queries;
  for (const auto& q : dataset.queries) {
    json obj{{"id", q.id},
             {"template", std::string(template_code(q.expr.tmpl))},
             {"atoms", q.expr.atoms},
             {"text", q.text},
             {"gt_docs", q.gt_docs},
             {"split", q.split}};
    queries << obj.dump() << '\n';
  }
  atomic_write_file(dir / "queries.jsonl", queries.str());
}

std::vector<QueryGroup> build_groups(const Dataset& dataset) {
  // Pool key -> member indices. std::map keeps group order deterministic.
  std::map<std::vector<std::string>, std::vector<int>> pools;
  for (size_t i = 0; i < dataset.queries.size(); ++i) {
    const auto& q = dataset.queries[i];
    if (q.expr.tmpl == Template::Atom) continue;
    std::vector<std::string> key = q.expr.atoms;
    std::sort(key.begin(), key.end());
    pools[key].push_back(static_cast<int>(i));
  }

  // Single-atom records by atom id, for pool membership.
  std::map<std::string, int> atom_queries;
  for (size_t i = 0; i < dataset.queries.size(); ++i) {
    const auto& q = dataset.queries[i];
    if (q.expr.tmpl == Template::Atom) {
      atom_queries.emplace(q.expr.atoms[0], static_cast<int>(i));
    }
  }

  std::vector<QueryGroup> groups;
  for (auto& [key, members] : pools) {
    QueryGroup g;
    g.atom_ids = key;
    for (const auto& atom : key) {
      auto it = atom_queries.find(atom);
      if (it != atom_queries.end()) g.members.push_back(it->second);
    }
    g.members.insert(g.members.end(), members.begin(), members.end());
    std::sort(g.members.begin(), g.members.end());
    if (g.members.size() >= 2) groups.push_back(std::move(g));
  }
  return groups;
}

}  // namespace logicol
