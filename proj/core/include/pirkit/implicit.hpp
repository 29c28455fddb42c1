#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "pirkit/model.hpp"
#include "pirkit/pir.hpp"

namespace pirkit {

/// Rank assigned to click-free sessions: one past the first twenty results,
/// so any click scores better.
inline constexpr int kNoClickRank = 21;

enum class DurationEndpoint { ExplicitEnd, LastClick };

/// Seconds from session start to the chosen endpoint; nullopt for LastClick
/// on a click-free session.
std::optional<Timestamp> session_duration(const Session& s, DurationEndpoint endpoint);

std::size_t click_count(const Session& s);
double mean_click_rank(const Session& s);
/// Rank of the earliest click by timestamp (not the best rank).
int first_click_rank(const Session& s);

enum class ImplicitMeasure { Duration, ClickCount, MeanClickRank, FirstClickRank };
enum class Direction { LowerBetter, HigherBetter };

std::string_view to_string(ImplicitMeasure m);
ImplicitMeasure parse_implicit_measure(std::string_view s);
std::string_view to_string(Direction d);
Direction parse_direction(std::string_view s);
std::string_view to_string(DurationEndpoint e);
DurationEndpoint parse_endpoint(std::string_view s);

struct ImplicitConfig {
  ImplicitMeasure measure = ImplicitMeasure::Duration;
  DurationEndpoint endpoint = DurationEndpoint::ExplicitEnd;
  Direction direction = Direction::LowerBetter;
  std::optional<std::set<QueryType>> query_filter;
  // Keep only sessions whose explicit-end duration lies in [lo, hi].
  std::optional<std::pair<Timestamp, Timestamp>> duration_band;
};

/// Measure value of one session; nullopt when the session is excluded.
std::optional<double> measure_session(const Session& s, const ImplicitConfig& config);

struct ImplicitPairs {
  PairSet scored;
  std::size_t excluded_queries = 0;  // preferences lacking usable sessions for a variant
};

/// Per-preference score pairs. Each variant's score is the mean measure over
/// all usable sessions of that (query, variant), negated when lower is better.
ImplicitPairs implicit_pairs(const EvaluationDataset& dataset, const ImplicitConfig& config);

std::vector<PirCell> implicit_pir(const EvaluationDataset& dataset, const ImplicitConfig& config,
                                  const std::vector<double>& thresholds);

/// Threshold axis used by default for each measure, in measure units.
std::vector<double> default_implicit_thresholds(ImplicitMeasure measure);

struct VariantStats {
  std::size_t sessions = 0;
  std::optional<double> zero_click_share;  // nullopt without sessions
  std::map<std::size_t, std::size_t> clicks_per_session;  // click count -> sessions
  std::map<int, std::size_t> clicks_by_rank;
  std::map<int, double> mean_relevance_by_rank;           // unit relevance, all raters
  std::map<int, std::array<std::size_t, 6>> grades_by_rank;  // index grade - 1
  std::optional<double> satisfaction_share;  // over sessions with a verdict
};

struct DescriptiveStats {
  VariantStats a;
  VariantStats b;
  std::map<QueryType, std::size_t> query_types;
  std::optional<double> mean_query_words;

  const VariantStats& variant(Variant v) const { return v == Variant::A ? a : b; }
};

DescriptiveStats descriptive_stats(const EvaluationDataset& dataset);

}  // namespace pirkit
