#include "pirkit/model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace pirkit {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view s, const std::array<Enum, N>& values,
                const char* what) {
  const std::string key = lower(s);
  for (Enum v : values) {
    if (lower(to_string(v)) == key) return v;
  }
  throw Error(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

}  // namespace

std::string_view to_string(Language l) {
  return l == Language::DE ? "DE" : "EN";
}

std::string_view to_string(QueryType t) {
  switch (t) {
    case QueryType::Informational: return "informational";
    case QueryType::Transactional: return "transactional";
    case QueryType::Navigational: return "navigational";
    case QueryType::Factual: return "factual";
    case QueryType::Meta: return "meta";
  }
  return "?";
}

std::string_view to_string(Variant v) { return v == Variant::A ? "A" : "B"; }

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::A: return "A";
    case Verdict::B: return "B";
    case Verdict::Equal: return "EQUAL";
  }
  return "?";
}

Language parse_language(std::string_view s) {
  return parse_enum(s, std::array{Language::DE, Language::EN}, "language");
}

QueryType parse_query_type(std::string_view s) {
  return parse_enum(s,
                    std::array{QueryType::Informational, QueryType::Transactional,
                               QueryType::Navigational, QueryType::Factual,
                               QueryType::Meta},
                    "query type");
}

Variant parse_variant(std::string_view s) {
  return parse_enum(s, std::array{Variant::A, Variant::B}, "variant");
}

Verdict parse_verdict(std::string_view s) {
  return parse_enum(s, std::array{Verdict::A, Verdict::B, Verdict::Equal}, "verdict");
}

std::string_view to_string(IssueKind k) {
  switch (k) {
    case IssueKind::DuplicateId: return "duplicate-id";
    case IssueKind::DanglingReference: return "dangling-reference";
    case IssueKind::DuplicateRecord: return "duplicate-record";
    case IssueKind::GradeOutOfRange: return "grade-out-of-range";
    case IssueKind::DuplicateResultInList: return "duplicate-result-in-list";
    case IssueKind::ListTooShort: return "list-too-short";
    case IssueKind::MissingJudgment: return "missing-judgment";
    case IssueKind::MissingOtherUserJudgment: return "missing-other-user-judgment";
    case IssueKind::MissingListPair: return "missing-list-pair";
    case IssueKind::TimestampOrder: return "timestamp-order";
    case IssueKind::ClickOutsideSession: return "click-outside-session";
    case IssueKind::ClickRankInvalid: return "click-rank-invalid";
  }
  return "?";
}

const Query* EvaluationDataset::find_query(std::string_view id) const {
  for (const auto& q : queries) {
    if (q.id == id) return &q;
  }
  return nullptr;
}

const RankedListPair* EvaluationDataset::find_list_pair(std::string_view query_id) const {
  for (const auto& p : list_pairs) {
    if (p.query_id == query_id) return &p;
  }
  return nullptr;
}

bool ValidationReport::ok() const {
  return std::none_of(issues.begin(), issues.end(),
                      [](const ValidationIssue& i) { return i.fatal; });
}

std::size_t ValidationReport::count(IssueKind k) const {
  return static_cast<std::size_t>(std::count_if(
      issues.begin(), issues.end(), [k](const ValidationIssue& i) { return i.kind == k; }));
}

namespace {

std::string describe_report(const ValidationReport& report) {
  std::ostringstream os;
  os << "dataset validation failed";
  for (const auto& issue : report.issues) {
    if (!issue.fatal) continue;
    os << "\n  [" << to_string(issue.kind) << "] " << issue.message;
  }
  return os.str();
}

class Validator {
 public:
  Validator(const EvaluationDataset& ds, const ValidationOptions& opt) : ds_(ds), opt_(opt) {}

  ValidationReport run() {
    check_queries();
    check_judgments();
    check_lists();
    check_preferences();
    check_sessions();
    check_coverage();
    return std::move(report_);
  }

 private:
  void add(IssueKind kind, std::string message, bool fatal = true) {
    report_.issues.push_back({kind, std::move(message), fatal});
  }

  bool is_missing_kind_fatal() const { return opt_.mode == ValidationMode::Strict; }

  void check_queries() {
    for (const auto& q : ds_.queries) {
      if (!query_ids_.insert(q.id).second) {
        add(IssueKind::DuplicateId, "query '" + q.id + "' defined more than once");
      }
    }
  }

  bool known_query(const std::string& id, const char* where) {
    if (query_ids_.count(id)) return true;
    add(IssueKind::DanglingReference,
        std::string(where) + " references unknown query '" + id + "'");
    return false;
  }

  void check_judgments() {
    std::set<std::tuple<std::string, std::string, std::string>> seen;
    for (const auto& j : ds_.judgments) {
      known_query(j.query_id, "judgment");
      if (j.grade < 1 || j.grade > 6) {
        add(IssueKind::GradeOutOfRange,
            "judgment (" + j.query_id + ", " + j.result_id + ", " + j.rater_id +
                ") has grade " + std::to_string(j.grade));
      }
      if (!seen.emplace(j.query_id, j.result_id, j.rater_id).second) {
        add(IssueKind::DuplicateRecord, "more than one judgment for (" + j.query_id + ", " +
                                            j.result_id + ", " + j.rater_id + ")");
      }
      judged_[{j.query_id, j.result_id}].insert(j.rater_id);
      raters_.insert(j.rater_id);
    }
  }

  void check_lists() {
    for (const auto& p : ds_.list_pairs) {
      if (!known_query(p.query_id, "list pair")) continue;
      if (!listed_queries_.insert(p.query_id).second) {
        add(IssueKind::DuplicateRecord, "more than one list pair for query '" + p.query_id + "'");
      }
      for (Variant v : {Variant::A, Variant::B}) {
        const auto& list = p.list(v);
        std::set<std::string> ids;
        for (const auto& r : list) {
          if (!ids.insert(r).second) {
            add(IssueKind::DuplicateResultInList, "result '" + r + "' appears twice in variant " +
                                                      std::string(to_string(v)) + " of query '" +
                                                      p.query_id + "'");
          }
        }
        if (static_cast<int>(list.size()) < opt_.max_cutoff) {
          add(IssueKind::ListTooShort, "variant " + std::string(to_string(v)) + " of query '" +
                                           p.query_id + "' has " + std::to_string(list.size()) +
                                           " results, cut-off needs " +
                                           std::to_string(opt_.max_cutoff));
        }
        const std::size_t depth = std::min<std::size_t>(list.size(), opt_.max_cutoff);
        for (std::size_t i = 0; i < depth; ++i) {
          if (!judged_.count({p.query_id, list[i]})) {
            add(IssueKind::MissingJudgment,
                "result '" + list[i] + "' at rank " + std::to_string(i + 1) + " of variant " +
                    std::string(to_string(v)) + ", query '" + p.query_id + "' has no judgment",
                is_missing_kind_fatal());
          }
        }
      }
    }
  }

  void check_preferences() {
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& pref : ds_.preferences) {
      if (!known_query(pref.query_id, "preference")) continue;
      if (!seen.emplace(pref.query_id, pref.rater_id).second) {
        add(IssueKind::DuplicateRecord, "more than one preference for (" + pref.query_id + ", " +
                                            pref.rater_id + ")");
      }
      if (!listed_queries_.count(pref.query_id)) {
        add(IssueKind::MissingListPair,
            "preference for query '" + pref.query_id + "' but no list pair exists");
      }
    }
  }

  void check_sessions() {
    std::set<std::tuple<std::string, std::string, Variant>> seen;
    for (const auto& s : ds_.sessions) {
      known_query(s.query_id, "session");
      const std::string key = "(" + s.query_id + ", " + s.rater_id + ", " +
                              std::string(to_string(s.variant)) + ")";
      if (!seen.emplace(s.query_id, s.rater_id, s.variant).second) {
        add(IssueKind::DuplicateRecord, "more than one session for " + key);
      }
      if (s.start_ts > s.end_ts) {
        add(IssueKind::TimestampOrder, "session " + key + " ends before it starts");
      }
      for (const auto& c : s.clicks) {
        if (c.rank < 1) {
          add(IssueKind::ClickRankInvalid,
              "session " + key + " has a click at rank " + std::to_string(c.rank));
        }
        if (c.ts < s.start_ts || c.ts > s.end_ts) {
          add(IssueKind::ClickOutsideSession,
              "session " + key + " has a click at ts " + std::to_string(c.ts) +
                  " outside [" + std::to_string(s.start_ts) + ", " + std::to_string(s.end_ts) + "]");
        }
      }
    }
  }

  void check_coverage() {
    if (!opt_.require_same_user_coverage && !opt_.require_other_user_coverage) return;
    for (const auto& pref : ds_.preferences) {
      const RankedListPair* pair = ds_.find_list_pair(pref.query_id);
      if (pair == nullptr) continue;
      std::set<std::string> checked;
      for (Variant v : {Variant::A, Variant::B}) {
        const auto& list = pair->list(v);
        const std::size_t depth = std::min<std::size_t>(list.size(), opt_.max_cutoff);
        for (std::size_t i = 0; i < depth; ++i) {
          if (!checked.insert(list[i]).second) continue;
          auto it = judged_.find({pref.query_id, list[i]});
          if (it == judged_.end()) continue;  // already reported as missing
          const auto& raters = it->second;
          if (opt_.require_same_user_coverage && !raters.count(pref.rater_id)) {
            add(IssueKind::MissingJudgment,
                "preference rater '" + pref.rater_id + "' did not judge result '" + list[i] +
                    "' of query '" + pref.query_id + "'",
                is_missing_kind_fatal());
          }
          if (opt_.require_other_user_coverage &&
              raters.size() - raters.count(pref.rater_id) == 0) {
            add(IssueKind::MissingOtherUserJudgment,
                "result '" + list[i] + "' of query '" + pref.query_id +
                    "' was judged by no rater other than '" + pref.rater_id + "'",
                is_missing_kind_fatal());
          }
        }
      }
    }
  }

  const EvaluationDataset& ds_;
  const ValidationOptions& opt_;
  ValidationReport report_;
  std::set<std::string> query_ids_;
  std::set<std::string> listed_queries_;
  std::set<std::string> raters_;
  std::map<std::pair<std::string, std::string>, std::set<std::string>> judged_;
};

}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : Error(describe_report(report)), report_(std::move(report)) {}

ValidationReport validate(const EvaluationDataset& dataset, const ValidationOptions& options) {
  return Validator(dataset, options).run();
}

}  // namespace pirkit
