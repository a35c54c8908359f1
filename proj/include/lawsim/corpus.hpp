#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lawsim/common.hpp"

namespace lawsim {

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

struct Date {
  int year = 0;
  int month = 0;
  int day = 0;
};

// One parsed judgment. jyear is in the Taiwan calendar, jdate in the Western
// calendar, both as recorded in the source file.
struct JudgmentDoc {
  std::string jid;
  int jyear = 0;
  std::string jcase;
  std::string jno;
  Date jdate;
  std::string jtitle;
  std::string jfull;
};

struct DisputeSet {
  std::string case_id;                  // = jid
  std::string source;                   // "court" or "llm:<model-id>"
  std::vector<std::string> items;       // blurred statements
  std::vector<std::string> raw_items;   // pre-blur, kept for audit
};

json dispute_set_to_json(const DisputeSet& set);
DisputeSet dispute_set_from_json(const json& record);

struct PartyClaims {
  std::string case_id;
  std::string plaintiff_claim;
  std::string defendant_claim;
};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct MissingFieldError : DataError {
  std::string field;
  explicit MissingFieldError(std::string name)
      : DataError("missing field: " + name), field(std::move(name)) {}
};

struct MalformedRecordError : DataError {
  using DataError::DataError;
};

struct AmbiguousSectionError : DataError {
  using DataError::DataError;
};

struct OverlappingSpansError : DataError {
  using DataError::DataError;
};

// ---------------------------------------------------------------------------
// Parsing and filtering
// ---------------------------------------------------------------------------

JudgmentDoc parse_document(std::string_view raw);

// Court code is the leading segment of the JID ("CHDV,92,..." -> "CHDV").
std::string court_code(std::string_view jid);

struct CaseFilter {
  std::vector<std::string> jcase_allow = {"勞訴"};
  // Appeal and retrial case codes carry these markers.
  std::vector<std::string> jcase_exclude_substrings = {"上", "抗", "再"};
  std::vector<std::string> jtitle_include;  // empty = accept any title
  std::vector<std::string> jtitle_exclude;
  // District-court civil divisions; high/supreme court codes do not match.
  std::string court_code_regex = "^[A-Z]{2}DV$";
};

struct SectionRules {
  std::vector<std::string> header_patterns;  // ordered, first match wins
  std::vector<std::string> end_markers;      // literal substrings ending the section
};

SectionRules default_section_rules();

bool is_eligible(const JudgmentDoc& doc, const CaseFilter& filter,
                 const SectionRules& rules = default_section_rules());

// Returns one statement per itemized dispute, enumeration markers stripped.
// Empty when no dispute-section header matches.
std::vector<std::string> extract_disputes(const JudgmentDoc& doc,
                                          const SectionRules& rules = default_section_rules());

struct ClaimRules {
  std::vector<std::string> plaintiff_markers;
  std::vector<std::string> defendant_markers;
  std::vector<std::string> end_markers;
};

ClaimRules default_claim_rules();

std::optional<PartyClaims> extract_party_claims(const JudgmentDoc& doc,
                                                const ClaimRules& rules = default_claim_rules());

// ---------------------------------------------------------------------------
// Named-entity blurring
// ---------------------------------------------------------------------------

enum class EntityClass { person, place, time };

struct EntitySpan {
  std::size_t begin = 0;  // byte offsets into the statement
  std::size_t end = 0;
  EntityClass entity_class = EntityClass::person;
};

struct BlurRules {
  std::string person = "某人";
  std::string place = "某地";
  std::string time = "某時";
};

class NerProvider {
 public:
  virtual ~NerProvider() = default;
  virtual std::vector<EntitySpan> detect(std::string_view statement) const = 0;
};

// Offline fallback: anonymization circles after a surname, Taiwan-calendar
// dates, and organization suffixes.
class RuleBasedNer final : public NerProvider {
 public:
  RuleBasedNer();
  explicit RuleBasedNer(std::vector<std::string> place_suffixes);
  std::vector<EntitySpan> detect(std::string_view statement) const override;

 private:
  std::vector<std::string> place_suffixes_;
};

const NerProvider& default_ner();

std::vector<EntitySpan> detect_entities(std::string_view statement,
                                        const NerProvider& ner = default_ner());

std::string blur(std::string_view statement, const std::vector<EntitySpan>& entities,
                 const BlurRules& rules = {});

std::string blur_statement(std::string_view statement, const NerProvider& ner = default_ner(),
                           const BlurRules& rules = {});

// ---------------------------------------------------------------------------
// Corpus statistics and loading
// ---------------------------------------------------------------------------

struct CorpusStats {
  std::map<int, int> per_year;
  std::map<std::string, int> per_court;
  int total_cases = 0;
  int total_statements = 0;
};

CorpusStats corpus_stats(const std::vector<JudgmentDoc>& corpus,
                         const SectionRules& rules = default_section_rules());

json corpus_stats_to_json(const CorpusStats& stats);

// Reads (filename, content) pairs from a directory of .json files or from a
// .tar / .tar.gz archive. Entries are returned sorted by filename.
std::vector<std::pair<std::string, std::string>> read_corpus_files(
    const std::filesystem::path& input);

}  // namespace lawsim
