// SPDX-License-Identifier: Apache-2.0
#include "logicol/index.hpp"

#include <cstring>

#include "logicol/util.hpp"

namespace logicol {

namespace {

constexpr uint32_t kIndexMagic = 0x5849474cu;  // "LGIX"
constexpr uint32_t kIndexVersion = 1;

}  // namespace

CorpusIndex build_index(const EncoderModel& model,
                        const std::vector<Document>& documents,
                        ExecPolicy policy) {
  CorpusIndex index;
  index.dim = model.embed_dim;
  index.model_tag = model_tag(model);
  index.doc_ids.reserve(documents.size());
  std::vector<FeatureVector> fvs(documents.size());
  for (size_t i = 0; i < documents.size(); ++i) {
    index.doc_ids.push_back(documents[i].id);
  }
  const int n = static_cast<int>(documents.size());
  if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      fvs[static_cast<size_t>(i)] = featurize(documents[static_cast<size_t>(i)].text, model.hash);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      fvs[static_cast<size_t>(i)] = featurize(documents[static_cast<size_t>(i)].text, model.hash);
    }
  }
  BatchEmbeddings emb = embed_batch(model, fvs, policy);
  index.embeddings = std::move(emb.vectors);
  return index;
}

void save_index(const std::filesystem::path& path, const CorpusIndex& index) {
  std::string out;
  auto write_pod = [&out](const auto& v) {
    out.append(reinterpret_cast<const char*>(&v), sizeof(v));
  };
  write_pod(kIndexMagic);
  write_pod(kIndexVersion);
  write_pod(static_cast<uint32_t>(index.dim));
  write_pod(static_cast<uint32_t>(index.doc_ids.size()));
  uint32_t tag_len = static_cast<uint32_t>(index.model_tag.size());
  write_pod(tag_len);
  out += index.model_tag;
  for (const auto& id : index.doc_ids) {
    uint32_t len = static_cast<uint32_t>(id.size());
    write_pod(len);
    out += id;
  }
  out.append(reinterpret_cast<const char*>(index.embeddings.data()),
             index.embeddings.size() * sizeof(double));
  atomic_write_file(path, out);
}

CorpusIndex load_index(const std::filesystem::path& path,
                       const std::string& expect_tag) {
  std::string in = read_file(path);
  size_t off = 0;
  auto read_u32 = [&]() {
    if (off + 4 > in.size()) throw IoError("index file truncated: " + path.string());
    uint32_t v;
    std::memcpy(&v, in.data() + off, 4);
    off += 4;
    return v;
  };
  auto read_str = [&](size_t len) {
    if (off + len > in.size()) throw IoError("index file truncated: " + path.string());
    std::string s = in.substr(off, len);
    off += len;
    return s;
  };
  if (read_u32() != kIndexMagic) throw IoError("not an index file: " + path.string());
  uint32_t version = read_u32();
  if (version != kIndexVersion) {
    throw IoError("index format version mismatch in " + path.string());
  }
  CorpusIndex index;
  index.dim = static_cast<int>(read_u32());
  uint32_t n = read_u32();
  index.model_tag = read_str(read_u32());
  if (!expect_tag.empty() && expect_tag != index.model_tag) {
    throw IoError("index " + path.string() + " was built with model tag " +
                  index.model_tag + ", expected " + expect_tag);
  }
  index.doc_ids.reserve(n);
  for (uint32_t i = 0; i < n; ++i) index.doc_ids.push_back(read_str(read_u32()));
  size_t count = static_cast<size_t>(n) * index.dim;
  if (in.size() - off != count * sizeof(double)) {
    throw IoError("index payload size mismatch in " + path.string());
  }
  index.embeddings.resize(count);
  std::memcpy(index.embeddings.data(), in.data() + off, count * sizeof(double));
  return index;
}

Ranking rank(const CorpusIndex& index, std::span<const double> query_embedding,
             int k) {
  const int n = index.size();
  std::vector<double> scores(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double* dj = index.embeddings.data() + static_cast<size_t>(j) * index.dim;
    double s = 0.0;
    for (int t = 0; t < index.dim; ++t) s += query_embedding[static_cast<size_t>(t)] * dj[t];
    scores[static_cast<size_t>(j)] = s;
  }
  Ranking r;
  r.positions = kernels::top_k(scores, index.doc_ids, k);
  r.scores.reserve(r.positions.size());
  for (int pos : r.positions) r.scores.push_back(scores[static_cast<size_t>(pos)]);
  return r;
}

std::vector<Ranking> rank_all(const CorpusIndex& index,
                              std::span<const double> query_embeddings,
                              int n_queries, int k, ExecPolicy policy) {
  std::vector<Ranking> out(static_cast<size_t>(n_queries));
  auto one = [&](int i) {
    out[static_cast<size_t>(i)] =
        rank(index,
             query_embeddings.subspan(static_cast<size_t>(i) * index.dim,
                                      static_cast<size_t>(index.dim)),
             k);
  };
  if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n_queries; ++i) one(i);
  } else {
    for (int i = 0; i < n_queries; ++i) one(i);
  }
  return out;
}

}  // namespace logicol
