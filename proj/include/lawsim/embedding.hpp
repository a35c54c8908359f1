#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lawsim/common.hpp"

namespace lawsim {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

struct EmbeddingVector {
  int dims = 0;
  std::vector<double> values;
  std::string model_tag;
};

enum class PairCategory { same, diff };

std::string to_string(PairCategory category);
PairCategory pair_category_from_string(std::string_view name);

struct FinetunePair {
  std::string sentence_a;
  std::string sentence_b;
  PairCategory category = PairCategory::diff;
};

struct BackendUnavailableError : DataError {
  using DataError::DataError;
};

struct DimensionMismatchError : DataError {
  using DataError::DataError;
};

struct EmptyTrainingSetError : DataError {
  using DataError::DataError;
};

// ---------------------------------------------------------------------------
// Providers
// ---------------------------------------------------------------------------

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string model_tag() const = 0;
  virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& statements) = 0;
  // Returns the tag of the tuned model; embed() must honour the new tag
  // afterwards. Throws BackendUnavailableError when training is unsupported.
  virtual std::string finetune_on(const std::vector<FinetunePair>& pairs) = 0;
};

// Deterministic offline stub: a statement's vector is derived from the hash
// of its text, with a positive mean component so unrelated statements sit at
// a stable mid-range cosine. finetune_on is a no-op that only renames the tag.
class HashProjectionProvider final : public EmbeddingProvider {
 public:
  HashProjectionProvider(std::string backend_id, int dims, std::uint64_t seed,
                         double mean = 1.0);

  std::string model_tag() const override;
  std::vector<std::vector<double>> embed(const std::vector<std::string>& statements) override;
  std::string finetune_on(const std::vector<FinetunePair>& pairs) override;

 private:
  std::string backend_id_;
  int dims_;
  std::uint64_t seed_;
  double mean_;
  bool tuned_ = false;
};

// ---------------------------------------------------------------------------
// Vector store: append-only binary file keyed by (model_tag, content hash).
// Doubles round-trip bit-exactly (IEEE-754 little-endian on disk).
// ---------------------------------------------------------------------------

class VectorStore {
 public:
  VectorStore() = default;
  explicit VectorStore(std::filesystem::path path);  // loads existing records

  std::optional<std::vector<double>> lookup(const std::string& model_tag,
                                            std::uint64_t content_hash) const;
  void put(const std::string& model_tag, std::uint64_t content_hash,
           const std::vector<double>& values);

  std::size_t size() const;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::map<std::pair<std::string, std::uint64_t>, std::vector<double>> cache_;
  mutable std::mutex mutex_;
};

// Embeds statements in input order, serving repeats from the store when one
// is attached. Throws DimensionMismatchError when the backend returns vectors
// of varying length.
std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& statements,
                                         EmbeddingProvider& backend,
                                         VectorStore* store = nullptr);

// ---------------------------------------------------------------------------
// Fine-tuning dataset construction
// ---------------------------------------------------------------------------

struct HeldoutSplit {
  std::vector<std::string> finetune_sentences;  // cases outside the labeled set
  std::vector<std::string> reserved_sentences;  // cases inside the labeled set
};

HeldoutSplit heldout_split(const std::map<std::string, std::vector<std::string>>& per_case,
                           const std::set<std::string>& labeled_case_ids);

// Keeps sentences whose cluster has >= min_size members. Noise (code 0) is a
// dropped pseudo-cluster regardless of its size.
std::vector<std::pair<std::string, int>> prune_small_clusters(
    const std::vector<std::pair<std::string, int>>& assignments, int min_size = 10);

struct PairCounts {
  std::uint64_t same = 0;
  std::uint64_t diff = 0;
};

// Closed-form counts: same = sum_c C(n_c, 2), same + diff = C(N, 2).
PairCounts count_pairs(const std::vector<int>& codes);

// Streams every unordered pair (i < j) without materializing the set.
template <typename Fn>
void for_each_pair(const std::vector<int>& codes, Fn&& fn) {
  for (std::size_t i = 0; i < codes.size(); ++i) {
    for (std::size_t j = i + 1; j < codes.size(); ++j) {
      fn(i, j, codes[i] == codes[j] ? PairCategory::same : PairCategory::diff);
    }
  }
}

struct SampledPairs {
  std::vector<FinetunePair> pairs;
  PairCounts available;
  bool same_truncated = false;  // fewer same pairs existed than requested
  bool diff_truncated = false;
};

// Uniform reservoir sample without replacement, per category, reproducible
// from the seed. When a category has fewer pairs than requested, all of them
// are returned and the truncation flag is set.
SampledPairs sample_pairs(const std::vector<std::string>& sentences,
                          const std::vector<int>& codes, int per_category, std::uint64_t seed);

std::string finetune(EmbeddingProvider& backend, const std::vector<FinetunePair>& pairs);

json finetune_pair_to_json(const FinetunePair& pair);
FinetunePair finetune_pair_from_json(const json& record);

}  // namespace lawsim
