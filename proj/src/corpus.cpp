#include "lawsim/corpus.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cstring>
#include <regex>

namespace lawsim {

namespace {

constexpr char32_t kCircle = 0x25CB;            // ○ anonymization mark
constexpr char32_t kIdeographicSpace = 0x3000;  //

bool starts_with_at(std::string_view text, std::size_t offset, std::string_view needle) {
  return text.size() - offset >= needle.size() &&
         text.compare(offset, needle.size(), needle) == 0;
}

bool is_digit_cp(char32_t cp) {
  return (cp >= '0' && cp <= '9') || (cp >= 0xFF10 && cp <= 0xFF19);
}

std::string trim_item(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  auto skip = [&](std::size_t pos, bool forward) -> std::size_t {
    while (forward ? pos < end : pos > begin) {
      std::size_t at = forward ? pos : pos - 1;
      unsigned char c = static_cast<unsigned char>(text[at]);
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
        pos = forward ? pos + 1 : pos - 1;
        continue;
      }
      if (!forward && at >= 2) {
        Codepoint cp = decode_utf8(text, at - 2);
        if (cp.length == 3 && cp.value == kIdeographicSpace) {
          pos -= 3;
          continue;
        }
      }
      if (forward) {
        Codepoint cp = decode_utf8(text, pos);
        if (cp.value == kIdeographicSpace) {
          pos += cp.length;
          continue;
        }
      }
      break;
    }
    return pos;
  };
  begin = skip(begin, true);
  end = skip(end, false);
  return std::string(text.substr(begin, end - begin));
}

}  // namespace

// ---------------------------------------------------------------------------
// Document parsing
// ---------------------------------------------------------------------------

JudgmentDoc parse_document(std::string_view raw) {
  json record;
  try {
    record = json::parse(raw);
  } catch (const json::exception&) {
    throw MalformedRecordError("document is not a valid JSON object");
  }
  if (!record.is_object()) throw MalformedRecordError("document is not a JSON object");

  static const std::array<const char*, 7> kFields = {"JID",   "JYEAR", "JCASE", "JNO",
                                                     "JDATE", "JTITLE", "JFULL"};
  for (const char* field : kFields) {
    if (!record.contains(field)) throw MissingFieldError(field);
  }

  auto as_string = [&](const char* key) -> std::string {
    const json& value = record.at(key);
    if (value.is_string()) return value.get<std::string>();
    if (value.is_number_integer()) return std::to_string(value.get<long long>());
    throw MalformedRecordError(std::string(key) + " has unsupported type");
  };

  JudgmentDoc doc;
  doc.jid = as_string("JID");
  doc.jcase = as_string("JCASE");
  doc.jno = as_string("JNO");
  doc.jtitle = as_string("JTITLE");
  doc.jfull = as_string("JFULL");

  std::string year = as_string("JYEAR");
  try {
    doc.jyear = std::stoi(year);
  } catch (const std::exception&) {
    throw MalformedRecordError("JYEAR is not numeric: " + year);
  }

  std::string date = as_string("JDATE");
  std::string digits;
  for (char c : date) {
    if (c >= '0' && c <= '9') digits.push_back(c);
  }
  if (digits.size() != 8) throw MalformedRecordError("JDATE is not a yyyymmdd date: " + date);
  doc.jdate.year = std::stoi(digits.substr(0, 4));
  doc.jdate.month = std::stoi(digits.substr(4, 2));
  doc.jdate.day = std::stoi(digits.substr(6, 2));
  if (doc.jdate.month < 1 || doc.jdate.month > 12 || doc.jdate.day < 1 || doc.jdate.day > 31)
    throw MalformedRecordError("JDATE out of range: " + date);

  if (doc.jid.empty()) throw MalformedRecordError("JID is empty");
  if (doc.jfull.empty()) throw MalformedRecordError("JFULL is empty");
  return doc;
}

std::string court_code(std::string_view jid) {
  std::size_t comma = jid.find(',');
  return std::string(jid.substr(0, comma == std::string_view::npos ? jid.size() : comma));
}

// ---------------------------------------------------------------------------
// Dispute-section extraction
// ---------------------------------------------------------------------------

SectionRules default_section_rules() {
  SectionRules rules;
  rules.header_patterns = {
      "兩造爭執(?:之)?事項",
      "爭執(?:之)?事項",
      "本件(?:之)?爭點",
      "兩造(?:之)?爭點",
      "爭點",
  };
  rules.end_markers = {"得心證之理由", "本院之判斷", "法院之判斷", "本院判斷"};
  return rules;
}

namespace {

struct HeaderMatch {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Finds occurrences of one header pattern, skipping matches negated by a
// preceding 不 (e.g. 不爭執事項).
std::vector<HeaderMatch> find_pattern(const std::string& text, const std::string& pattern) {
  std::vector<HeaderMatch> out;
  std::regex re(pattern);
  auto begin = std::sregex_iterator(text.begin(), text.end(), re);
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    std::size_t pos = static_cast<std::size_t>(it->position());
    static const std::string kNot = "不";
    if (pos >= kNot.size() && text.compare(pos - kNot.size(), kNot.size(), kNot) == 0) continue;
    out.push_back({pos, pos + static_cast<std::size_t>(it->length())});
  }
  return out;
}

// A match only counts as a section header when a colon follows within a few
// codepoints; this keeps incidental mentions inside statements from
// truncating the section.
bool looks_like_header(const std::string& text, std::size_t match_end) {
  std::size_t i = match_end;
  for (int steps = 0; steps < 6 && i < text.size(); ++steps) {
    Codepoint cp = decode_utf8(text, i);
    if (cp.length == 0) break;
    if (cp.value == U'：' || cp.value == ':' || cp.value == '\n') return true;
    i += static_cast<std::size_t>(cp.length);
  }
  return false;
}

enum class MarkerFamily { arabic, chinese, paren };

struct Marker {
  MarkerFamily family;
  std::size_t begin = 0;
  std::size_t end = 0;
};

bool is_chinese_numeral(char32_t cp) {
  static const std::u32string kNumerals = U"一二三四五六七八九十";
  return kNumerals.find(cp) != std::u32string::npos;
}

bool at_marker_boundary(std::string_view text, std::size_t pos) {
  if (pos == 0) return true;
  // decode the codepoint ending at pos
  for (int back = 1; back <= 4 && back <= static_cast<int>(pos); ++back) {
    Codepoint cp = decode_utf8(text, pos - static_cast<std::size_t>(back));
    if (cp.length == back) {
      static const std::u32string kBoundary = U" \t\r\n。？！；：，.?!;:,　）)」】";
      return kBoundary.find(cp.value) != std::u32string::npos;
    }
  }
  return false;
}

// Matches one enumeration marker starting at `pos`; returns byte length or 0.
std::size_t match_marker(std::string_view text, std::size_t pos, MarkerFamily family) {
  std::size_t i = pos;
  Codepoint cp = decode_utf8(text, i);
  if (cp.length == 0) return 0;
  switch (family) {
    case MarkerFamily::arabic: {
      int digits = 0;
      while (digits < 2) {
        Codepoint d = decode_utf8(text, i);
        if (d.length == 0 || !is_digit_cp(d.value)) break;
        i += static_cast<std::size_t>(d.length);
        ++digits;
      }
      if (digits == 0) return 0;
      Codepoint sep = decode_utf8(text, i);
      if (sep.length == 0) return 0;
      if (sep.value != '.' && sep.value != U'、' && sep.value != U'．') return 0;
      i += static_cast<std::size_t>(sep.length);
      Codepoint next = decode_utf8(text, i);
      if (sep.value == '.' && next.length > 0 && is_digit_cp(next.value)) return 0;  // "1.5"
      return i - pos;
    }
    case MarkerFamily::chinese: {
      int numerals = 0;
      while (numerals < 3) {
        Codepoint n = decode_utf8(text, i);
        if (n.length == 0 || !is_chinese_numeral(n.value)) break;
        i += static_cast<std::size_t>(n.length);
        ++numerals;
      }
      if (numerals == 0) return 0;
      Codepoint sep = decode_utf8(text, i);
      if (sep.length == 0 || sep.value != U'、') return 0;
      return i + static_cast<std::size_t>(sep.length) - pos;
    }
    case MarkerFamily::paren: {
      if (cp.value >= 0x3220 && cp.value <= 0x3229)  // ㈠..㈩
        return static_cast<std::size_t>(cp.length);
      if (cp.value != '(' && cp.value != U'（') return 0;
      i += static_cast<std::size_t>(cp.length);
      int numerals = 0;
      while (numerals < 3) {
        Codepoint n = decode_utf8(text, i);
        if (n.length == 0 || !is_chinese_numeral(n.value)) break;
        i += static_cast<std::size_t>(n.length);
        ++numerals;
      }
      if (numerals == 0) return 0;
      Codepoint close = decode_utf8(text, i);
      if (close.length == 0 || (close.value != ')' && close.value != U'）')) return 0;
      return i + static_cast<std::size_t>(close.length) - pos;
    }
  }
  return 0;
}

std::vector<Marker> scan_markers(std::string_view slice, MarkerFamily family) {
  std::vector<Marker> out;
  std::size_t i = 0;
  while (i < slice.size()) {
    if (at_marker_boundary(slice, i)) {
      std::size_t len = match_marker(slice, i, family);
      if (len > 0) {
        out.push_back({family, i, i + len});
        i += len;
        continue;
      }
    }
    Codepoint cp = decode_utf8(slice, i);
    i += cp.length > 0 ? static_cast<std::size_t>(cp.length) : 1;
  }
  return out;
}

void split_items(std::string_view slice, int depth, std::vector<std::string>& out) {
  constexpr int kMaxDepth = 3;
  std::vector<Marker> chosen;
  if (depth < kMaxDepth) {
    for (MarkerFamily family :
         {MarkerFamily::arabic, MarkerFamily::chinese, MarkerFamily::paren}) {
      std::vector<Marker> markers = scan_markers(slice, family);
      bool eligible = markers.size() >= 2 ||
                      (markers.size() == 1 && depth == 0 && markers.front().begin <= 12);
      if (!eligible) continue;
      if (chosen.empty() || markers.front().begin < chosen.front().begin) chosen = markers;
    }
  }
  if (chosen.empty()) {
    std::string item = trim_item(slice);
    if (!item.empty()) out.push_back(std::move(item));
    return;
  }
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    std::size_t begin = chosen[k].end;
    std::size_t end = (k + 1 < chosen.size()) ? chosen[k + 1].begin : slice.size();
    split_items(slice.substr(begin, end - begin), depth + 1, out);
  }
}

}  // namespace

std::vector<std::string> extract_disputes(const JudgmentDoc& doc, const SectionRules& rules) {
  const std::string& text = doc.jfull;
  std::size_t header_end = std::string::npos;
  for (const std::string& pattern : rules.header_patterns) {
    std::vector<HeaderMatch> matches = find_pattern(text, pattern);
    if (!matches.empty()) {
      header_end = matches.front().end;
      break;
    }
  }
  if (header_end == std::string::npos) return {};

  std::size_t slice_end = text.size();
  for (const std::string& marker : rules.end_markers) {
    std::size_t pos = text.find(marker, header_end);
    if (pos != std::string::npos) slice_end = std::min(slice_end, pos);
  }

  // A second header before any item marker means the items cannot be
  // attributed to one section; a later one just ends this section.
  std::size_t next_header = std::string::npos;
  for (const std::string& pattern : rules.header_patterns) {
    for (const HeaderMatch& match : find_pattern(text, pattern)) {
      if (match.begin >= header_end && match.begin < slice_end &&
          looks_like_header(text, match.end)) {
        next_header = std::min(next_header == std::string::npos ? text.size() : next_header,
                               match.begin);
      }
    }
  }

  std::string_view slice(text.data() + header_end, slice_end - header_end);
  std::size_t first_marker = slice.size();
  for (MarkerFamily family : {MarkerFamily::arabic, MarkerFamily::chinese, MarkerFamily::paren}) {
    std::vector<Marker> markers = scan_markers(slice, family);
    if (!markers.empty()) first_marker = std::min(first_marker, markers.front().begin);
  }
  if (next_header != std::string::npos && next_header < slice_end) {
    if (next_header - header_end <= first_marker)
      throw AmbiguousSectionError("multiple dispute-section headers in " + doc.jid);
    slice = std::string_view(text.data() + header_end, next_header - header_end);
  }

  std::vector<std::string> items;
  split_items(slice, 0, items);
  return items;
}

bool is_eligible(const JudgmentDoc& doc, const CaseFilter& filter, const SectionRules& rules) {
  bool jcase_ok = false;
  for (const std::string& code : filter.jcase_allow) {
    if (doc.jcase == code) {
      jcase_ok = true;
      break;
    }
  }
  if (!jcase_ok) return false;
  for (const std::string& mark : filter.jcase_exclude_substrings) {
    if (doc.jcase.find(mark) != std::string::npos) return false;
  }
  if (!filter.jtitle_include.empty()) {
    bool hit = false;
    for (const std::string& keyword : filter.jtitle_include) {
      if (doc.jtitle.find(keyword) != std::string::npos) {
        hit = true;
        break;
      }
    }
    if (!hit) return false;
  }
  for (const std::string& keyword : filter.jtitle_exclude) {
    if (doc.jtitle.find(keyword) != std::string::npos) return false;
  }
  if (!filter.court_code_regex.empty()) {
    std::regex court_re(filter.court_code_regex);
    if (!std::regex_search(court_code(doc.jid), court_re)) return false;
  }
  try {
    return !extract_disputes(doc, rules).empty();
  } catch (const AmbiguousSectionError&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Party claims (inputs to the summarization chain)
// ---------------------------------------------------------------------------

ClaimRules default_claim_rules() {
  ClaimRules rules;
  rules.plaintiff_markers = {"原告主張", "原告起訴主張", "原告起訴意旨", "原告方面"};
  rules.defendant_markers = {"被告則以", "被告抗辯", "被告答辯", "被告方面"};
  rules.end_markers = {"兩造爭執",     "不爭執事項",   "爭執事項", "本院之判斷",
                       "得心證之理由", "法院之判斷", "爭點"};
  return rules;
}

namespace {

struct MarkerHit {
  std::size_t begin = std::string::npos;
  std::size_t end = std::string::npos;
};

MarkerHit find_first_marker(const std::string& text, const std::vector<std::string>& markers,
                            std::size_t from) {
  MarkerHit hit;
  for (const std::string& marker : markers) {
    std::size_t pos = text.find(marker, from);
    if (pos != std::string::npos && (hit.begin == std::string::npos || pos < hit.begin)) {
      hit.begin = pos;
      hit.end = pos + marker.size();
    }
  }
  return hit;
}

std::string clean_claim(std::string_view raw) {
  std::string text = trim_item(raw);
  while (!text.empty()) {
    Codepoint cp = decode_utf8(text, 0);
    if (cp.value == U'：' || cp.value == ':' || cp.value == U'，') {
      text = trim_item(std::string_view(text).substr(static_cast<std::size_t>(cp.length)));
      continue;
    }
    break;
  }
  return text;
}

}  // namespace

std::optional<PartyClaims> extract_party_claims(const JudgmentDoc& doc, const ClaimRules& rules) {
  const std::string& text = doc.jfull;
  MarkerHit plaintiff = find_first_marker(text, rules.plaintiff_markers, 0);
  if (plaintiff.begin == std::string::npos) return std::nullopt;
  MarkerHit defendant = find_first_marker(text, rules.defendant_markers, plaintiff.end);
  if (defendant.begin == std::string::npos) return std::nullopt;

  std::size_t plaintiff_end = defendant.begin;
  MarkerHit stop = find_first_marker(text, rules.end_markers, plaintiff.end);
  if (stop.begin != std::string::npos) plaintiff_end = std::min(plaintiff_end, stop.begin);

  std::size_t defendant_end = text.size();
  stop = find_first_marker(text, rules.end_markers, defendant.end);
  if (stop.begin != std::string::npos) defendant_end = stop.begin;

  PartyClaims claims;
  claims.case_id = doc.jid;
  claims.plaintiff_claim =
      clean_claim(std::string_view(text).substr(plaintiff.end, plaintiff_end - plaintiff.end));
  claims.defendant_claim =
      clean_claim(std::string_view(text).substr(defendant.end, defendant_end - defendant.end));
  if (claims.plaintiff_claim.empty() || claims.defendant_claim.empty()) return std::nullopt;
  return claims;
}

// ---------------------------------------------------------------------------
// Named-entity blurring
// ---------------------------------------------------------------------------

RuleBasedNer::RuleBasedNer()
    : RuleBasedNer(std::vector<std::string>{"醫院", "分公司", "公司", "工廠", "銀行", "診所",
                                            "學校", "事務所"}) {}

RuleBasedNer::RuleBasedNer(std::vector<std::string> place_suffixes)
    : place_suffixes_(std::move(place_suffixes)) {}

namespace {

bool is_place_stopword(char32_t cp) {
  static const std::u32string kStops =
      U"於在之的等與及或並因由經向對自往為以係該本上開前揭按呈稱謂即原被告兩造某";
  return kStops.find(cp) != std::u32string::npos;
}

// Taiwan-calendar date expression starting at `pos`; returns end offset or 0.
std::size_t match_time(std::string_view text, std::size_t pos) {
  std::size_t i = pos;
  if (starts_with_at(text, i, "民國")) i += std::string("民國").size();

  auto skip_spaces = [&](std::size_t at) {
    while (at < text.size() && text[at] == ' ') ++at;
    return at;
  };
  auto consume_digits = [&](std::size_t at, int max_digits, std::size_t* end) {
    int count = 0;
    while (count < max_digits) {
      Codepoint cp = decode_utf8(text, at);
      if (cp.length == 0 || !is_digit_cp(cp.value)) break;
      at += static_cast<std::size_t>(cp.length);
      ++count;
    }
    *end = at;
    return count > 0;
  };
  auto consume_unit = [&](std::size_t at, std::string_view unit, std::size_t* end) {
    at = skip_spaces(at);
    if (!starts_with_at(text, at, unit)) return false;
    *end = at + unit.size();
    return true;
  };

  std::size_t after;
  if (!consume_digits(i, 4, &after)) return 0;
  std::size_t unit_end;
  if (!consume_unit(after, "年", &unit_end)) return 0;
  if (starts_with_at(text, unit_end, "度")) return 0;  // 年度: case-number idiom, not a date
  std::size_t matched = unit_end;

  std::size_t probe = skip_spaces(matched);
  if (consume_digits(probe, 2, &after) && consume_unit(after, "月", &unit_end)) {
    matched = unit_end;
    probe = skip_spaces(matched);
    if (consume_digits(probe, 2, &after) && consume_unit(after, "日", &unit_end)) {
      matched = unit_end;
    }
  }
  return matched;
}

}  // namespace

std::vector<EntitySpan> RuleBasedNer::detect(std::string_view statement) const {
  std::vector<EntitySpan> candidates;

  // person: a Han surname followed by one or more ○, or a bare ○○ run
  std::size_t i = 0;
  while (i < statement.size()) {
    Codepoint cp = decode_utf8(statement, i);
    if (cp.length == 0) break;
    std::size_t next = i + static_cast<std::size_t>(cp.length);
    if (is_han(cp.value) || cp.value == kCircle) {
      std::size_t circles_begin = is_han(cp.value) ? next : i;
      std::size_t j = circles_begin;
      int circles = 0;
      while (j < statement.size()) {
        Codepoint c = decode_utf8(statement, j);
        if (c.length == 0 || c.value != kCircle) break;
        j += static_cast<std::size_t>(c.length);
        ++circles;
      }
      bool match = is_han(cp.value) ? circles >= 1 : circles >= 2;
      if (match) {
        candidates.push_back({i, j, EntityClass::person});
        i = j;
        continue;
      }
    }
    i = next;
  }

  // time
  i = 0;
  while (i < statement.size()) {
    Codepoint cp = decode_utf8(statement, i);
    if (cp.length == 0) break;
    if (is_digit_cp(cp.value) || starts_with_at(statement, i, "民國")) {
      std::size_t end = match_time(statement, i);
      if (end > i) {
        candidates.push_back({i, end, EntityClass::time});
        i = end;
        continue;
      }
    }
    i += static_cast<std::size_t>(cp.length);
  }

  // place: walk back over name characters from an organization suffix
  for (const std::string& suffix : place_suffixes_) {
    std::size_t pos = statement.find(suffix);
    while (pos != std::string::npos) {
      std::size_t name_begin = pos;
      int name_chars = 0;
      while (name_chars < 6 && name_begin > 0) {
        std::size_t prev = name_begin;
        bool stepped = false;
        for (int back = 1; back <= 4 && back <= static_cast<int>(prev); ++back) {
          Codepoint cp = decode_utf8(statement, prev - static_cast<std::size_t>(back));
          if (cp.length == back) {
            if (is_han(cp.value) && !is_place_stopword(cp.value) &&
                !is_chinese_numeral(cp.value)) {
              name_begin = prev - static_cast<std::size_t>(back);
              ++name_chars;
              stepped = true;
            }
            break;
          }
        }
        if (!stepped) break;
      }
      if (name_chars >= 1)
        candidates.push_back({name_begin, pos + suffix.size(), EntityClass::place});
      pos = statement.find(suffix, pos + suffix.size());
    }
  }

  std::sort(candidates.begin(), candidates.end(), [](const EntitySpan& a, const EntitySpan& b) {
    if (a.begin != b.begin) return a.begin < b.begin;
    return (a.end - a.begin) > (b.end - b.begin);
  });
  std::vector<EntitySpan> accepted;
  for (const EntitySpan& span : candidates) {
    if (accepted.empty() || span.begin >= accepted.back().end) accepted.push_back(span);
  }
  return accepted;
}

const NerProvider& default_ner() {
  static const RuleBasedNer instance;
  return instance;
}

std::vector<EntitySpan> detect_entities(std::string_view statement, const NerProvider& ner) {
  return ner.detect(statement);
}

std::string blur(std::string_view statement, const std::vector<EntitySpan>& entities,
                 const BlurRules& rules) {
  std::size_t cursor = 0;
  std::string out;
  for (const EntitySpan& span : entities) {
    if (span.begin < cursor || span.end < span.begin || span.end > statement.size())
      throw OverlappingSpansError("entity spans must be sorted, disjoint and in bounds");
    out.append(statement.substr(cursor, span.begin - cursor));
    switch (span.entity_class) {
      case EntityClass::person: out += rules.person; break;
      case EntityClass::place: out += rules.place; break;
      case EntityClass::time: out += rules.time; break;
    }
    cursor = span.end;
  }
  out.append(statement.substr(cursor));
  return out;
}

std::string blur_statement(std::string_view statement, const NerProvider& ner,
                           const BlurRules& rules) {
  return blur(statement, ner.detect(statement), rules);
}

// ---------------------------------------------------------------------------
// Statistics and serialization
// ---------------------------------------------------------------------------

CorpusStats corpus_stats(const std::vector<JudgmentDoc>& corpus, const SectionRules& rules) {
  CorpusStats stats;
  for (const JudgmentDoc& doc : corpus) {
    stats.per_year[doc.jyear] += 1;
    stats.per_court[court_code(doc.jid)] += 1;
    stats.total_cases += 1;
    try {
      stats.total_statements += static_cast<int>(extract_disputes(doc, rules).size());
    } catch (const AmbiguousSectionError&) {
      // counted as zero statements
    }
  }
  return stats;
}

json corpus_stats_to_json(const CorpusStats& stats) {
  json per_year = json::object();
  for (const auto& [year, count] : stats.per_year) per_year[std::to_string(year)] = count;
  json per_court = json::object();
  for (const auto& [court, count] : stats.per_court) per_court[court] = count;
  return json{{"per_year", per_year},
              {"per_court", per_court},
              {"total_cases", stats.total_cases},
              {"total_statements", stats.total_statements}};
}

json dispute_set_to_json(const DisputeSet& set) {
  return json{{"case_id", set.case_id},
              {"source", set.source},
              {"items", set.items},
              {"raw_items", set.raw_items}};
}

DisputeSet dispute_set_from_json(const json& record) {
  DisputeSet set;
  set.case_id = record.at("case_id").get<std::string>();
  set.source = record.at("source").get<std::string>();
  set.items = record.at("items").get<std::vector<std::string>>();
  set.raw_items = record.at("raw_items").get<std::vector<std::string>>();
  return set;
}

// ---------------------------------------------------------------------------
// Corpus loading (directory, .tar, .tar.gz)
// ---------------------------------------------------------------------------

namespace {

std::string gunzip(const std::string& compressed) {
  z_stream strm{};
  if (inflateInit2(&strm, 15 + 32) != Z_OK) throw DataError("zlib init failed");
  std::string out;
  std::array<unsigned char, 1 << 16> buffer;
  strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
  strm.avail_in = static_cast<uInt>(compressed.size());
  int status = Z_OK;
  while (status != Z_STREAM_END) {
    strm.next_out = buffer.data();
    strm.avail_out = static_cast<uInt>(buffer.size());
    status = inflate(&strm, Z_NO_FLUSH);
    if (status != Z_OK && status != Z_STREAM_END) {
      inflateEnd(&strm);
      throw DataError("gzip inflate failed");
    }
    out.append(reinterpret_cast<char*>(buffer.data()), buffer.size() - strm.avail_out);
  }
  inflateEnd(&strm);
  return out;
}

std::vector<std::pair<std::string, std::string>> read_tar(const std::string& archive) {
  std::vector<std::pair<std::string, std::string>> files;
  std::size_t offset = 0;
  while (offset + 512 <= archive.size()) {
    const char* header = archive.data() + offset;
    if (header[0] == '\0') break;  // end-of-archive blocks
    std::string name(header, strnlen(header, 100));
    std::string prefix(header + 345, strnlen(header + 345, 155));
    if (!prefix.empty()) name = prefix + "/" + name;
    char size_field[13] = {};
    std::memcpy(size_field, header + 124, 12);
    std::size_t size = static_cast<std::size_t>(std::strtoull(size_field, nullptr, 8));
    char typeflag = header[156];
    offset += 512;
    if ((typeflag == '0' || typeflag == '\0') && offset + size <= archive.size()) {
      if (name.size() > 5 && name.substr(name.size() - 5) == ".json")
        files.emplace_back(name, archive.substr(offset, size));
    }
    offset += (size + 511) / 512 * 512;
  }
  std::sort(files.begin(), files.end());
  return files;
}

bool ends_with(const std::string& text, std::string_view suffix) {
  return text.size() >= suffix.size() &&
         text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_corpus_files(
    const std::filesystem::path& input) {
  std::vector<std::pair<std::string, std::string>> files;
  if (std::filesystem::is_directory(input)) {
    for (const auto& entry : std::filesystem::recursive_directory_iterator(input)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json")
        files.emplace_back(entry.path().filename().string(), read_file(entry.path()));
    }
    std::sort(files.begin(), files.end());
    return files;
  }
  if (!std::filesystem::exists(input)) throw DataError("corpus input not found: " + input.string());
  std::string name = input.filename().string();
  std::string content = read_file(input);
  if (ends_with(name, ".tar.gz") || ends_with(name, ".tgz")) return read_tar(gunzip(content));
  if (ends_with(name, ".tar")) return read_tar(content);
  if (ends_with(name, ".json")) return {{name, content}};
  throw DataError("unsupported corpus input: " + input.string());
}

}  // namespace lawsim
