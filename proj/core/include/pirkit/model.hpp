#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pirkit {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Timestamp = std::int64_t;  // seconds since epoch

enum class Language { DE, EN };
enum class QueryType { Informational, Transactional, Navigational, Factual, Meta };
enum class Variant { A, B };
enum class Verdict { A, B, Equal };

std::string_view to_string(Language l);
std::string_view to_string(QueryType t);
std::string_view to_string(Variant v);
std::string_view to_string(Verdict v);

// Parsers accept the same spellings to_string produces (case-insensitive).
Language parse_language(std::string_view s);
QueryType parse_query_type(std::string_view s);
Variant parse_variant(std::string_view s);
Verdict parse_verdict(std::string_view s);

struct Query {
  std::string id;
  std::string text;
  std::string info_need;
  Language language = Language::EN;
  QueryType query_type = QueryType::Informational;
};

struct GradedJudgment {
  std::string query_id;
  std::string result_id;
  std::string rater_id;
  int grade = 6;  // 1 (best) .. 6
  std::optional<bool> snippet_relevant;
};

struct RankedListPair {
  std::string query_id;
  std::vector<std::string> variant_a;
  std::vector<std::string> variant_b;

  const std::vector<std::string>& list(Variant v) const {
    return v == Variant::A ? variant_a : variant_b;
  }
};

struct PreferenceJudgment {
  std::string query_id;
  std::string rater_id;
  Verdict verdict = Verdict::Equal;
};

struct Click {
  int rank = 1;
  Timestamp ts = 0;

  bool operator==(const Click&) const = default;
};

struct Session {
  std::string query_id;
  std::string rater_id;
  Variant variant = Variant::A;
  Timestamp start_ts = 0;
  Timestamp end_ts = 0;
  std::vector<Click> clicks;
  std::optional<bool> satisfied;
};

struct EvaluationDataset {
  std::vector<Query> queries;
  std::vector<GradedJudgment> judgments;
  std::vector<RankedListPair> list_pairs;
  std::vector<PreferenceJudgment> preferences;
  std::vector<Session> sessions;

  const Query* find_query(std::string_view id) const;
  const RankedListPair* find_list_pair(std::string_view query_id) const;
};

enum class ValidationMode { Strict, Lenient };

enum class IssueKind {
  DuplicateId,
  DanglingReference,
  DuplicateRecord,
  GradeOutOfRange,
  DuplicateResultInList,
  ListTooShort,
  MissingJudgment,
  MissingOtherUserJudgment,
  MissingListPair,
  TimestampOrder,
  ClickOutsideSession,
  ClickRankInvalid,
};

std::string_view to_string(IssueKind k);

struct ValidationIssue {
  IssueKind kind;
  std::string message;
  // Missing-judgment issues are warnings in lenient mode.
  bool fatal = true;

  bool operator==(const ValidationIssue&) const = default;
};

struct ValidationOptions {
  ValidationMode mode = ValidationMode::Strict;
  int max_cutoff = 10;
  // Which rating sources must be fully covered by judgments. Same-user
  // coverage means every preference rater judged every listed result of
  // their query; other-user coverage means some other rater did.
  bool require_same_user_coverage = true;
  bool require_other_user_coverage = false;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const;  // no fatal issues
  std::size_t count(IssueKind k) const;

  bool operator==(const ValidationReport&) const = default;
};

ValidationReport validate(const EvaluationDataset& dataset,
                          const ValidationOptions& options = {});

class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

}  // namespace pirkit
