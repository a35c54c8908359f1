#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lawsim/common.hpp"
#include "lawsim/corpus.hpp"

namespace lawsim {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

struct LlmProfile {
  std::string model_id;
  double temperature = 0.7;
  int token_budget = 11500;  // max prompt tokens per claim-bearing step
  int max_retries = 3;
};

void validate_profile(const LlmProfile& profile);  // ConfigError on bad values

enum class ChainStatus { ok, dropped_too_long, dropped_no_output };

std::string to_string(ChainStatus status);
ChainStatus chain_status_from_string(std::string_view name);

struct ChainOutcome {
  std::string case_id;
  ChainStatus status = ChainStatus::dropped_no_output;
  std::vector<std::string> p_points;
  std::vector<std::string> d_points;
  std::vector<std::string> disputes;
  int attempts = 0;  // attempts consumed at the most-retried step
};

json chain_outcome_to_json(const ChainOutcome& outcome);
ChainOutcome chain_outcome_from_json(const json& record);

struct ProviderError : DataError {
  using DataError::DataError;
};

struct MissingPriorError : DataError {
  using DataError::DataError;
};

// ---------------------------------------------------------------------------
// Providers
// ---------------------------------------------------------------------------

class LlmProvider {
 public:
  virtual ~LlmProvider() = default;
  // Returns the completion text; throws ProviderError on transport failure.
  virtual std::string complete(const std::string& prompt, double temperature) = 0;
};

class TokenCounter {
 public:
  virtual ~TokenCounter() = default;
  virtual int count(std::string_view text) const = 0;
};

// Counts one token per non-ASCII codepoint, one per ASCII alphanumeric run,
// one per other printable ASCII character.
class CharRunTokenCounter final : public TokenCounter {
 public:
  int count(std::string_view text) const override;
};

const TokenCounter& default_token_counter();

// Replays canned completions from a JSONL file of {"prompt_hash", "reply"}
// records, keyed by the FNV-1a hash of the prompt.
class ReplayFileProvider final : public LlmProvider {
 public:
  explicit ReplayFileProvider(const std::filesystem::path& replies_path);
  std::string complete(const std::string& prompt, double temperature) override;

 private:
  std::map<std::string, std::string> replies_;
};

// Chat-completion HTTP client. The API key is read from an environment
// variable at call time and never stored in config files.
class HttpChatProvider final : public LlmProvider {
 public:
  HttpChatProvider(std::string endpoint, std::string model_id, std::string api_key_env);
  std::string complete(const std::string& prompt, double temperature) override;

 private:
  std::string endpoint_;
  std::string model_id_;
  std::string api_key_env_;
};

// ---------------------------------------------------------------------------
// Prompt chain
// ---------------------------------------------------------------------------

enum class PointKey { p_point, d_point, dispute };

struct PriorPoints {
  std::vector<std::string> p_points;
  std::vector<std::string> d_points;
};

// Python-style list literal, e.g. ['a', 'b'].
std::string render_point_list(const std::vector<std::string>& items);

// Steps 1 and 2 embed the party claims; step 3 embeds the two point lists
// and requires `prior`.
std::string build_prompt(int step, const PartyClaims& claims,
                         const std::optional<PriorPoints>& prior = std::nullopt);

// Lenient reply parsing: object-literal form first, bulleted lines as a
// fallback, empty list when nothing is extractable.
std::vector<std::string> parse_point_list(std::string_view reply, PointKey key);

ChainOutcome run_chain(const PartyClaims& claims, const LlmProfile& profile,
                       LlmProvider& provider,
                       const TokenCounter& counter = default_token_counter());

// ---------------------------------------------------------------------------
// Outcome journal (append-only, keyed by case_id, resumable)
// ---------------------------------------------------------------------------

std::map<std::string, ChainOutcome> load_journal(const std::filesystem::path& path);
void append_journal(const std::filesystem::path& path, const ChainOutcome& outcome);

// Runs the chain for every claim not already journaled; returns outcomes for
// all input cases in input order.
std::vector<ChainOutcome> run_chain_batch(const std::vector<PartyClaims>& claims,
                                          const LlmProfile& profile, LlmProvider& provider,
                                          const std::filesystem::path& journal_path,
                                          const TokenCounter& counter = default_token_counter());

}  // namespace lawsim
