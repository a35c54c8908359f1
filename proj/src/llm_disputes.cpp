#include "lawsim/llm_disputes.hpp"

#include <algorithm>

namespace lawsim {

void validate_profile(const LlmProfile& profile) {
  if (profile.model_id.empty()) throw ConfigError("llm profile: model_id is empty");
  if (profile.temperature < 0.0 || profile.temperature > 2.0)
    throw ConfigError("llm profile: temperature must be in [0, 2]");
  if (profile.token_budget <= 0) throw ConfigError("llm profile: token_budget must be positive");
  if (profile.max_retries < 0) throw ConfigError("llm profile: max_retries must be >= 0");
}

std::string to_string(ChainStatus status) {
  switch (status) {
    case ChainStatus::ok: return "ok";
    case ChainStatus::dropped_too_long: return "dropped_too_long";
    case ChainStatus::dropped_no_output: return "dropped_no_output";
  }
  return "dropped_no_output";
}

ChainStatus chain_status_from_string(std::string_view name) {
  if (name == "ok") return ChainStatus::ok;
  if (name == "dropped_too_long") return ChainStatus::dropped_too_long;
  if (name == "dropped_no_output") return ChainStatus::dropped_no_output;
  throw DataError("unknown chain status: " + std::string(name));
}

json chain_outcome_to_json(const ChainOutcome& outcome) {
  return json{{"case_id", outcome.case_id},   {"status", to_string(outcome.status)},
              {"p_points", outcome.p_points}, {"d_points", outcome.d_points},
              {"disputes", outcome.disputes}, {"attempts", outcome.attempts}};
}

ChainOutcome chain_outcome_from_json(const json& record) {
  ChainOutcome outcome;
  outcome.case_id = record.at("case_id").get<std::string>();
  outcome.status = chain_status_from_string(record.at("status").get<std::string>());
  outcome.p_points = record.at("p_points").get<std::vector<std::string>>();
  outcome.d_points = record.at("d_points").get<std::vector<std::string>>();
  outcome.disputes = record.at("disputes").get<std::vector<std::string>>();
  outcome.attempts = record.at("attempts").get<int>();
  return outcome;
}

int CharRunTokenCounter::count(std::string_view text) const {
  int tokens = 0;
  std::size_t i = 0;
  bool in_run = false;
  while (i < text.size()) {
    Codepoint cp = decode_utf8(text, i);
    if (cp.length == 0) break;
    bool alnum = cp.value < 0x80 && (std::isalnum(static_cast<unsigned char>(cp.value)) != 0);
    if (alnum) {
      if (!in_run) {
        ++tokens;
        in_run = true;
      }
    } else {
      in_run = false;
      if (cp.value >= 0x80) {
        ++tokens;
      } else if (std::isgraph(static_cast<unsigned char>(cp.value)) != 0) {
        ++tokens;
      }
    }
    i += static_cast<std::size_t>(cp.length);
  }
  return tokens;
}

const TokenCounter& default_token_counter() {
  static const CharRunTokenCounter instance;
  return instance;
}

// ---------------------------------------------------------------------------
// Prompts
// ---------------------------------------------------------------------------

std::string render_point_list(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += '\'';
    for (char c : items[i]) {
      if (c == '\\' || c == '\'') out += '\\';
      out += c;
    }
    out += '\'';
  }
  out += "]";
  return out;
}

std::string build_prompt(int step, const PartyClaims& claims,
                         const std::optional<PriorPoints>& prior) {
  switch (step) {
    case 1:
      return "List the key points of the following article using {'p_point': []} as the "
             "template\n :" +
             claims.plaintiff_claim;
    case 2:
      return "List the key points of the following article using {'d_point': []} as the "
             "template\n :" +
             claims.defendant_claim;
    case 3: {
      if (!prior.has_value())
        throw MissingPriorError("step 3 requires the point lists from steps 1 and 2");
      return "The following are the main points argued by the claimant and the counterparty. "
             "Based on this, list the dispute points between the two parties, and use "
             "{'dispute': []} as the template\n The following is the plaintiff's claim:\n " +
             render_point_list(prior->p_points) +
             " \n The following is the defendant's claim:\n " +
             render_point_list(prior->d_points) + " ";
    }
    default:
      throw ConfigError("prompt chain has steps 1..3");
  }
}

// ---------------------------------------------------------------------------
// Reply parsing
// ---------------------------------------------------------------------------

namespace {

const char* key_name(PointKey key) {
  switch (key) {
    case PointKey::p_point: return "p_point";
    case PointKey::d_point: return "d_point";
    case PointKey::dispute: return "dispute";
  }
  return "dispute";
}

// Parses a bracketed list starting at `open` (the '[' position). Quoted items
// are preferred; unquoted comma-separated runs are accepted as a fallback.
std::vector<std::string> parse_bracket_list(std::string_view text, std::size_t open,
                                            std::size_t* close_out) {
  std::vector<std::string> items;
  std::string unquoted;
  std::size_t i = open + 1;
  bool in_string = false;
  char quote = '\0';
  std::string current;
  auto flush_unquoted = [&]() {
    std::string piece = trim(unquoted);
    while (!piece.empty() && (piece.front() == ',' || piece.front() == ' ')) piece.erase(0, 1);
    if (!piece.empty()) {
      for (const auto& part_view : {piece}) {
        // split on ASCII and fullwidth commas
        std::string part = part_view;
        std::size_t start = 0;
        while (start <= part.size()) {
          std::size_t ascii = part.find(',', start);
          std::size_t wide = part.find("，", start);
          std::size_t cut = std::min(ascii == std::string::npos ? part.size() : ascii,
                                     wide == std::string::npos ? part.size() : wide);
          std::string item = trim(part.substr(start, cut - start));
          if (!item.empty()) items.push_back(item);
          if (cut >= part.size()) break;
          start = cut + (cut == wide ? 3 : 1);
        }
        break;
      }
    }
    unquoted.clear();
  };
  while (i < text.size()) {
    char c = text[i];
    if (in_string) {
      if (c == '\\' && i + 1 < text.size()) {
        current += text[i + 1];
        i += 2;
        continue;
      }
      if (c == quote) {
        in_string = false;
        std::string item = trim(current);
        if (!item.empty()) items.push_back(item);
        current.clear();
      } else {
        current += c;
      }
      ++i;
      continue;
    }
    if (c == '\'' || c == '"') {
      in_string = true;
      quote = c;
      ++i;
      continue;
    }
    if (c == ']') {
      if (close_out != nullptr) *close_out = i;
      if (items.empty()) flush_unquoted();
      return items;
    }
    unquoted += c;
    ++i;
  }
  if (close_out != nullptr) *close_out = text.size();
  return {};  // unterminated list
}

std::vector<std::string> strip_bullets(std::string_view reply) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= reply.size()) {
    std::size_t eol = reply.find('\n', start);
    std::string_view line = reply.substr(start, (eol == std::string_view::npos ? reply.size() : eol) - start);
    std::string trimmed = trim(line);
    if (!trimmed.empty()) {
      std::size_t body = std::string::npos;
      if (trimmed[0] == '-' || trimmed[0] == '*') {
        body = 1;
      } else if (static_cast<unsigned char>(trimmed[0]) == 0xE2 &&
                 trimmed.compare(0, 3, "\xE2\x80\xA2") == 0) {  // •
        body = 3;
      } else {
        std::size_t d = 0;
        while (d < trimmed.size() && std::isdigit(static_cast<unsigned char>(trimmed[d]))) ++d;
        if (d > 0 && d < trimmed.size()) {
          if (trimmed[d] == '.' || trimmed[d] == ')') body = d + 1;
          else if (trimmed.compare(d, 3, "、") == 0 || trimmed.compare(d, 3, "．") == 0)
            body = d + 3;
        }
      }
      if (body != std::string::npos) {
        std::string item = trim(trimmed.substr(body));
        if (!item.empty()) items.push_back(item);
      }
    }
    if (eol == std::string_view::npos) break;
    start = eol + 1;
  }
  return items;
}

}  // namespace

std::vector<std::string> parse_point_list(std::string_view reply, PointKey key) {
  const std::string name = key_name(key);
  for (const std::string quoted : {"'" + name + "'", "\"" + name + "\""}) {
    std::size_t pos = reply.find(quoted);
    while (pos != std::string_view::npos) {
      std::size_t i = pos + quoted.size();
      while (i < reply.size() && (reply[i] == ' ' || reply[i] == '\t')) ++i;
      if (i < reply.size() && reply[i] == ':') {
        ++i;
        while (i < reply.size() && (reply[i] == ' ' || reply[i] == '\t' || reply[i] == '\n')) ++i;
        if (i < reply.size() && reply[i] == '[') {
          std::vector<std::string> items = parse_bracket_list(reply, i, nullptr);
          if (!items.empty()) return items;
        }
      }
      pos = reply.find(quoted, pos + quoted.size());
    }
  }
  return strip_bullets(reply);
}

// ---------------------------------------------------------------------------
// Chain execution
// ---------------------------------------------------------------------------

ChainOutcome run_chain(const PartyClaims& claims, const LlmProfile& profile,
                       LlmProvider& provider, const TokenCounter& counter) {
  validate_profile(profile);
  ChainOutcome outcome;
  outcome.case_id = claims.case_id;

  // Both claim-bearing prompts are budget-checked before any provider call.
  std::string prompt1 = build_prompt(1, claims);
  std::string prompt2 = build_prompt(2, claims);
  if (counter.count(prompt1) > profile.token_budget ||
      counter.count(prompt2) > profile.token_budget) {
    outcome.status = ChainStatus::dropped_too_long;
    outcome.attempts = 0;
    return outcome;
  }

  auto run_step = [&](const std::string& prompt, PointKey key,
                      std::vector<std::string>* points) -> int {
    int attempts = 0;
    for (int attempt = 0; attempt <= profile.max_retries; ++attempt) {
      ++attempts;
      std::string reply = provider.complete(prompt, profile.temperature);
      std::vector<std::string> items = parse_point_list(reply, key);
      if (!items.empty()) {
        *points = std::move(items);
        return attempts;
      }
    }
    return -attempts;  // exhausted
  };

  int used = run_step(prompt1, PointKey::p_point, &outcome.p_points);
  outcome.attempts = std::abs(used);
  if (used < 0) {
    outcome.status = ChainStatus::dropped_no_output;
    return outcome;
  }

  used = run_step(prompt2, PointKey::d_point, &outcome.d_points);
  outcome.attempts = std::max(outcome.attempts, std::abs(used));
  if (used < 0) {
    outcome.status = ChainStatus::dropped_no_output;
    return outcome;
  }

  PriorPoints prior{outcome.p_points, outcome.d_points};
  std::string prompt3 = build_prompt(3, claims, prior);
  used = run_step(prompt3, PointKey::dispute, &outcome.disputes);
  outcome.attempts = std::max(outcome.attempts, std::abs(used));
  if (used < 0) {
    outcome.status = ChainStatus::dropped_no_output;
    return outcome;
  }

  outcome.status = ChainStatus::ok;
  return outcome;
}

// ---------------------------------------------------------------------------
// Journal
// ---------------------------------------------------------------------------

std::map<std::string, ChainOutcome> load_journal(const std::filesystem::path& path) {
  std::map<std::string, ChainOutcome> outcomes;
  if (!std::filesystem::exists(path)) return outcomes;
  for (const json& record : read_jsonl(path)) {
    ChainOutcome outcome = chain_outcome_from_json(record);
    outcomes[outcome.case_id] = std::move(outcome);
  }
  return outcomes;
}

void append_journal(const std::filesystem::path& path, const ChainOutcome& outcome) {
  append_line(path, chain_outcome_to_json(outcome).dump());
}

std::vector<ChainOutcome> run_chain_batch(const std::vector<PartyClaims>& claims,
                                          const LlmProfile& profile, LlmProvider& provider,
                                          const std::filesystem::path& journal_path,
                                          const TokenCounter& counter) {
  std::map<std::string, ChainOutcome> done = load_journal(journal_path);
  std::vector<ChainOutcome> outcomes;
  outcomes.reserve(claims.size());
  for (const PartyClaims& one : claims) {
    auto it = done.find(one.case_id);
    if (it != done.end()) {
      outcomes.push_back(it->second);
      continue;
    }
    ChainOutcome outcome = run_chain(one, profile, provider, counter);
    append_journal(journal_path, outcome);
    outcomes.push_back(std::move(outcome));
  }
  return outcomes;
}

}  // namespace lawsim
