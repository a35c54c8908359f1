#include "lawsim/embedding.hpp"

#include <algorithm>
#include <fstream>

namespace lawsim {

std::string to_string(PairCategory category) {
  return category == PairCategory::same ? "same" : "diff";
}

PairCategory pair_category_from_string(std::string_view name) {
  if (name == "same") return PairCategory::same;
  if (name == "diff") return PairCategory::diff;
  throw DataError("unknown pair category: " + std::string(name));
}

// ---------------------------------------------------------------------------
// HashProjectionProvider
// ---------------------------------------------------------------------------

HashProjectionProvider::HashProjectionProvider(std::string backend_id, int dims,
                                               std::uint64_t seed, double mean)
    : backend_id_(std::move(backend_id)), dims_(dims), seed_(seed), mean_(mean) {
  if (dims_ <= 0) throw ConfigError("stub embedding dims must be positive");
}

std::string HashProjectionProvider::model_tag() const {
  std::string tag = "stub-" + backend_id_ + "-d" + std::to_string(dims_);
  if (tuned_) tag += "-ft";
  return tag;
}

std::vector<std::vector<double>> HashProjectionProvider::embed(
    const std::vector<std::string>& statements) {
  std::vector<std::vector<double>> vectors;
  vectors.reserve(statements.size());
  for (const std::string& statement : statements) {
    DetRng rng(mix_seed(seed_, fnv1a64(statement), tuned_ ? 1 : 0));
    std::vector<double> values(static_cast<std::size_t>(dims_));
    for (double& v : values) v = mean_ + rng.gauss();
    vectors.push_back(std::move(values));
  }
  return vectors;
}

std::string HashProjectionProvider::finetune_on(const std::vector<FinetunePair>& pairs) {
  if (pairs.empty()) throw EmptyTrainingSetError("finetune called with no pairs");
  tuned_ = true;
  return model_tag();
}

// ---------------------------------------------------------------------------
// VectorStore
// ---------------------------------------------------------------------------

namespace {
constexpr std::string_view kStoreMagic = "LSVS0001";
}

VectorStore::VectorStore(std::filesystem::path path) : path_(std::move(path)) {
  if (!std::filesystem::exists(path_)) return;
  std::string blob = read_file(path_);
  if (blob.size() < kStoreMagic.size() ||
      std::string_view(blob).substr(0, kStoreMagic.size()) != kStoreMagic)
    throw DataError("vector store has unknown format: " + path_.string());
  std::size_t offset = kStoreMagic.size();
  while (offset < blob.size()) {
    std::uint16_t tag_len = get_u16le(blob, offset);
    offset += 2;
    std::string tag = blob.substr(offset, tag_len);
    offset += tag_len;
    std::uint64_t hash = get_u64le(blob, offset);
    offset += 8;
    std::uint32_t dims = get_u32le(blob, offset);
    offset += 4;
    std::vector<double> values(dims);
    for (std::uint32_t d = 0; d < dims; ++d) {
      values[d] = get_f64le(blob, offset);
      offset += 8;
    }
    cache_[{std::move(tag), hash}] = std::move(values);
  }
}

std::optional<std::vector<double>> VectorStore::lookup(const std::string& model_tag,
                                                       std::uint64_t content_hash) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find({model_tag, content_hash});
  if (it == cache_.end()) return std::nullopt;
  return it->second;
}

void VectorStore::put(const std::string& model_tag, std::uint64_t content_hash,
                      const std::vector<double>& values) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto key = std::make_pair(model_tag, content_hash);
  if (cache_.contains(key)) return;
  cache_[key] = values;
  if (path_.empty()) return;
  bool fresh = !std::filesystem::exists(path_);
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw DataError("cannot append to vector store: " + path_.string());
  std::string record;
  if (fresh) record += kStoreMagic;
  put_u16le(record, static_cast<std::uint16_t>(model_tag.size()));
  record += model_tag;
  put_u64le(record, content_hash);
  put_u32le(record, static_cast<std::uint32_t>(values.size()));
  for (double v : values) put_f64le(record, v);
  out.write(record.data(), static_cast<std::streamsize>(record.size()));
}

std::size_t VectorStore::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.size();
}

// ---------------------------------------------------------------------------
// embed_batch
// ---------------------------------------------------------------------------

std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& statements,
                                         EmbeddingProvider& backend, VectorStore* store) {
  const std::string tag = backend.model_tag();
  std::vector<EmbeddingVector> out(statements.size());
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < statements.size(); ++i) {
    std::uint64_t hash = fnv1a64(statements[i]);
    if (store != nullptr) {
      if (auto cached = store->lookup(tag, hash)) {
        out[i] = {static_cast<int>(cached->size()), std::move(*cached), tag};
        continue;
      }
    }
    missing.push_back(i);
  }

  if (!missing.empty()) {
    std::vector<std::string> batch;
    batch.reserve(missing.size());
    for (std::size_t index : missing) batch.push_back(statements[index]);
    std::vector<std::vector<double>> vectors = backend.embed(batch);
    if (vectors.size() != batch.size())
      throw DimensionMismatchError("backend returned a different number of vectors");
    for (std::size_t k = 0; k < missing.size(); ++k) {
      out[missing[k]] = {static_cast<int>(vectors[k].size()), std::move(vectors[k]), tag};
    }
  }

  int dims = out.empty() ? 0 : out.front().dims;
  for (const EmbeddingVector& vec : out) {
    if (vec.dims != dims)
      throw DimensionMismatchError("backend returned vectors of varying dimension");
    for (double v : vec.values) {
      if (!std::isfinite(v)) throw DataError("embedding contains a non-finite value");
    }
  }

  if (store != nullptr) {
    for (std::size_t index : missing) {
      store->put(tag, fnv1a64(statements[index]), out[index].values);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fine-tuning dataset construction
// ---------------------------------------------------------------------------

HeldoutSplit heldout_split(const std::map<std::string, std::vector<std::string>>& per_case,
                           const std::set<std::string>& labeled_case_ids) {
  HeldoutSplit split;
  for (const auto& [case_id, statements] : per_case) {
    auto& bucket = labeled_case_ids.contains(case_id) ? split.reserved_sentences
                                                      : split.finetune_sentences;
    bucket.insert(bucket.end(), statements.begin(), statements.end());
  }
  return split;
}

std::vector<std::pair<std::string, int>> prune_small_clusters(
    const std::vector<std::pair<std::string, int>>& assignments, int min_size) {
  std::map<int, int> sizes;
  for (const auto& [sentence, code] : assignments) sizes[code] += 1;
  std::vector<std::pair<std::string, int>> surviving;
  for (const auto& entry : assignments) {
    if (entry.second == 0) continue;  // noise
    if (sizes[entry.second] >= min_size) surviving.push_back(entry);
  }
  return surviving;
}

PairCounts count_pairs(const std::vector<int>& codes) {
  std::map<int, std::uint64_t> sizes;
  for (int code : codes) sizes[code] += 1;
  auto choose2 = [](std::uint64_t n) { return n * (n - 1) / 2; };
  PairCounts counts;
  for (const auto& [code, size] : sizes) counts.same += choose2(size);
  counts.diff = choose2(static_cast<std::uint64_t>(codes.size())) - counts.same;
  return counts;
}

SampledPairs sample_pairs(const std::vector<std::string>& sentences,
                          const std::vector<int>& codes, int per_category, std::uint64_t seed) {
  if (sentences.size() != codes.size())
    throw DataError("sample_pairs: sentences and codes must align");
  if (sentences.size() < 2) throw DataError("sample_pairs needs at least two sentences");
  if (per_category <= 0) throw ConfigError("per_category must be positive");

  struct Reservoir {
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    std::uint64_t seen = 0;
    DetRng rng;
    std::size_t cap;
    Reservoir(std::uint64_t seed, std::size_t cap) : rng(seed), cap(cap) {}
    void offer(std::size_t a, std::size_t b) {
      ++seen;
      if (slots.size() < cap) {
        slots.emplace_back(a, b);
        return;
      }
      std::uint64_t pick = rng.below(seen);
      if (pick < cap) slots[static_cast<std::size_t>(pick)] = {a, b};
    }
  };

  std::size_t cap = static_cast<std::size_t>(per_category);
  Reservoir same(mix_seed(seed, 1), cap);
  Reservoir diff(mix_seed(seed, 2), cap);
  for_each_pair(codes, [&](std::size_t a, std::size_t b, PairCategory category) {
    (category == PairCategory::same ? same : diff).offer(a, b);
  });

  SampledPairs result;
  result.available = count_pairs(codes);
  result.same_truncated = same.seen < cap;
  result.diff_truncated = diff.seen < cap;
  for (const auto* reservoir : {&same, &diff}) {
    for (const auto& [a, b] : reservoir->slots) {
      result.pairs.push_back({sentences[a], sentences[b],
                              reservoir == &same ? PairCategory::same : PairCategory::diff});
    }
  }
  return result;
}

std::string finetune(EmbeddingProvider& backend, const std::vector<FinetunePair>& pairs) {
  if (pairs.empty()) throw EmptyTrainingSetError("finetune requires a non-empty pair set");
  return backend.finetune_on(pairs);
}

json finetune_pair_to_json(const FinetunePair& pair) {
  return json{{"sentence_a", pair.sentence_a},
              {"sentence_b", pair.sentence_b},
              {"category", to_string(pair.category)}};
}

FinetunePair finetune_pair_from_json(const json& record) {
  FinetunePair pair;
  pair.sentence_a = record.at("sentence_a").get<std::string>();
  pair.sentence_b = record.at("sentence_b").get<std::string>();
  pair.category = pair_category_from_string(record.at("category").get<std::string>());
  return pair;
}

}  // namespace lawsim
