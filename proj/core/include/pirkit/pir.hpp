#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pirkit/metrics.hpp"
#include "pirkit/model.hpp"
#include "pirkit/scales.hpp"

namespace pirkit {

enum class Metric { Precision, Ndcg, Map, Err, Mrr, Esl };

inline constexpr Metric kAllMetrics[] = {Metric::Precision, Metric::Ndcg, Metric::Map,
                                         Metric::Err,       Metric::Mrr,  Metric::Esl};

std::string_view to_string(Metric m);
Metric parse_metric(std::string_view s);

/// Whose judgments feed the metric when scoring a preference rater's pair:
/// the rater's own grades, or the mean of every other rater's grades.
enum class RatingSource { SameUser, OtherUsers };

std::string_view to_string(RatingSource s);
RatingSource parse_rating_source(std::string_view s);

inline constexpr int kMaxCutoff = 10;

struct MetricConfig {
  Metric metric = Metric::Ndcg;
  DiscountFunction discount{DiscountKind::Log2};
  RelevanceScale scale = RelevanceScale::SixPoint;
  int cutoff = kMaxCutoff;
  std::optional<double> esl_n;  // required for ESL
  ApNorm ap_norm = ApNorm::ByEvaluatedCount;
  RatingSource rating_source = RatingSource::SameUser;
  std::optional<std::set<QueryType>> query_filter;
  // Reciprocal rank counts a result as relevant above this unit relevance.
  double relevant_above = 0.0;

  /// Throws Error on an inconsistent configuration.
  void check() const;
  /// Stable human-readable key, e.g. "ndcg/log2/six/same".
  std::string label() const;
};

/// Score differences within this distance of the threshold count as equal to
/// it, so that 0.6 - 0.4 is not judged larger than a threshold of 0.2.
inline constexpr double kPrefTolerance = 1e-9;

/// Metric preference: 1 if x > t, -1 if x < -t, 0 otherwise.
int pref(double x, double t);

struct PirCounts {
  std::size_t correct_pref = 0;   // user prefers a list, metric agrees
  std::size_t correct_equal = 0;  // user indifferent, metric too
  std::size_t false_pref = 0;     // user indifferent, metric prefers one
  std::size_t missed_pref = 0;    // user prefers a list, metric indifferent
  std::size_t reversed_pref = 0;  // metric prefers the list the user rejected

  std::size_t total() const {
    return correct_pref + correct_equal + false_pref + missed_pref + reversed_pref;
  }
  std::size_t preferring() const { return correct_pref + missed_pref + reversed_pref; }

  bool operator==(const PirCounts&) const = default;
};

struct PirCell {
  double threshold = 0.0;
  double pir = 0.5;
  PirCounts counts;
  std::size_t excluded = 0;        // pairs dropped because a score was undefined
  bool empty_denominator = false;  // no pair carried a preference

  bool operator==(const PirCell&) const = default;
};

/// One (query, preference rater) unit of analysis with both list scores.
struct ScoredPair {
  std::string query_id;
  std::string rater_id;
  double score_a = 0.0;
  double score_b = 0.0;
  Verdict verdict = Verdict::Equal;
};

PirCell pir(std::span<const ScoredPair> pairs, double t);

/// PIR with the threshold at zero: a lower bound next to the best-threshold
/// upper bound.
inline PirCell pir_zero_threshold(std::span<const ScoredPair> pairs) { return pir(pairs, 0.0); }

/// Grades for one (query, result) keyed by rater.
class JudgmentIndex {
 public:
  explicit JudgmentIndex(const EvaluationDataset& dataset);

  const std::map<std::string, int>* grades(const std::string& query_id,
                                           const std::string& result_id) const;

 private:
  std::map<std::pair<std::string, std::string>, std::map<std::string, int>> grades_;
};

/// Scores variants A and B of `query_id` for `rater_id` under `config`.
/// Missing judgments throw in strict mode and count as relevance 0 in lenient
/// mode. Returns nullopt when the metric is undefined for the query.
std::optional<std::pair<double, double>> score_pair(const JudgmentIndex& index,
                                                    const EvaluationDataset& dataset,
                                                    const MetricConfig& config,
                                                    const std::string& query_id,
                                                    const std::string& rater_id,
                                                    ValidationMode mode = ValidationMode::Strict);

std::optional<std::pair<double, double>> score_pair(const EvaluationDataset& dataset,
                                                    const MetricConfig& config,
                                                    const std::string& query_id,
                                                    const std::string& rater_id,
                                                    ValidationMode mode = ValidationMode::Strict);

/// Scores both variants of a query from the mean grade of every rater who
/// judged each result, or from one rater's grades when `rater` is set. The
/// config's rating source is ignored.
std::optional<std::pair<double, double>> score_query(const JudgmentIndex& index,
                                                     const EvaluationDataset& dataset,
                                                     const MetricConfig& config,
                                                     const std::string& query_id,
                                                     const std::optional<std::string>& rater,
                                                     ValidationMode mode = ValidationMode::Strict);

struct PairSet {
  std::vector<ScoredPair> pairs;
  std::size_t excluded = 0;
};

/// Scores every preference in the dataset that passes the query filter.
PairSet score_pairs(const JudgmentIndex& index, const EvaluationDataset& dataset,
                    const MetricConfig& config, ValidationMode mode = ValidationMode::Strict);

/// Thresholds lo, lo + step, ... up to hi inclusive, computed by index so
/// that 0.01 * 30 lands on 0.30 rather than drifting.
std::vector<double> threshold_grid(double lo, double hi, double step);
std::vector<double> default_thresholds();  // 0.00 .. 0.30 step 0.01
std::vector<int> default_cutoffs();        // 1 .. 10

class PirGrid {
 public:
  PirGrid() = default;
  PirGrid(std::vector<MetricConfig> configs, std::vector<int> cutoffs,
          std::vector<double> thresholds);

  const std::vector<MetricConfig>& configs() const { return configs_; }
  const std::vector<int>& cutoffs() const { return cutoffs_; }
  const std::vector<double>& thresholds() const { return thresholds_; }
  std::size_t size() const { return cells_.size(); }

  PirCell& at(std::size_t config, std::size_t cutoff_index, std::size_t threshold_index);
  const PirCell& at(std::size_t config, std::size_t cutoff_index,
                    std::size_t threshold_index) const;
  /// All threshold cells of one (config, cut-off) row.
  std::span<const PirCell> row(std::size_t config, std::size_t cutoff_index) const;
  std::span<PirCell> row(std::size_t config, std::size_t cutoff_index);
  std::size_t cutoff_index(int cutoff) const;

 private:
  std::size_t offset(std::size_t config, std::size_t cutoff_index) const;

  std::vector<MetricConfig> configs_;
  std::vector<int> cutoffs_;
  std::vector<double> thresholds_;
  std::vector<PirCell> cells_;
};

struct SweepOptions {
  ValidationMode mode = ValidationMode::Strict;
  unsigned jobs = 1;
};

/// One PirCell per (config, cut-off, threshold). Thresholds must start at 0
/// and increase strictly. Output is independent of `jobs`.
PirGrid pir_sweep(const EvaluationDataset& dataset, const std::vector<MetricConfig>& configs,
                  const std::vector<double>& thresholds, const std::vector<int>& cutoffs,
                  const SweepOptions& options = {});

struct BestThreshold {
  double threshold = 0.0;
  double pir = 0.5;
};

/// Maximal PIR in a threshold row; ties go to the smallest threshold.
BestThreshold best_threshold(std::span<const PirCell> row);
BestThreshold best_threshold(const PirGrid& grid, std::size_t config, int cutoff);

struct Breakdown {
  PirCounts counts;
  std::size_t excluded = 0;

  /// Shares over every evaluated pair, EQUAL verdicts included. Order:
  /// correct_pref, correct_equal, false_pref, missed_pref, reversed_pref.
  std::vector<double> shares() const;
};

Breakdown detailed_breakdown(const EvaluationDataset& dataset, const MetricConfig& config,
                             double t, int cutoff, ValidationMode mode = ValidationMode::Strict);

/// Category counts at each threshold for a fixed config and cut-off.
std::vector<PirCell> breakdown_series(const EvaluationDataset& dataset,
                                      const MetricConfig& config, int cutoff,
                                      const std::vector<double>& thresholds,
                                      ValidationMode mode = ValidationMode::Strict);

}  // namespace pirkit
