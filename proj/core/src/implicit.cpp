#include "pirkit/implicit.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>

namespace pirkit {

std::optional<Timestamp> session_duration(const Session& s, DurationEndpoint endpoint) {
  if (endpoint == DurationEndpoint::ExplicitEnd) return s.end_ts - s.start_ts;
  if (s.clicks.empty()) return std::nullopt;
  Timestamp last = s.clicks.front().ts;
  for (const auto& c : s.clicks) last = std::max(last, c.ts);
  return last - s.start_ts;
}

std::size_t click_count(const Session& s) { return s.clicks.size(); }

double mean_click_rank(const Session& s) {
  if (s.clicks.empty()) return kNoClickRank;
  double sum = 0.0;
  for (const auto& c : s.clicks) sum += c.rank;
  return sum / static_cast<double>(s.clicks.size());
}

int first_click_rank(const Session& s) {
  if (s.clicks.empty()) return kNoClickRank;
  // Earliest timestamp wins; ties keep log order.
  auto first = std::min_element(s.clicks.begin(), s.clicks.end(),
                                [](const Click& x, const Click& y) { return x.ts < y.ts; });
  return first->rank;
}

std::string_view to_string(ImplicitMeasure m) {
  switch (m) {
    case ImplicitMeasure::Duration: return "duration";
    case ImplicitMeasure::ClickCount: return "clicks";
    case ImplicitMeasure::MeanClickRank: return "mean-rank";
    case ImplicitMeasure::FirstClickRank: return "first-rank";
  }
  return "?";
}

ImplicitMeasure parse_implicit_measure(std::string_view s) {
  for (auto m : {ImplicitMeasure::Duration, ImplicitMeasure::ClickCount,
                 ImplicitMeasure::MeanClickRank, ImplicitMeasure::FirstClickRank}) {
    if (to_string(m) == s) return m;
  }
  throw Error("unknown implicit measure '" + std::string(s) + "'");
}

std::string_view to_string(Direction d) {
  return d == Direction::LowerBetter ? "lower" : "higher";
}

Direction parse_direction(std::string_view s) {
  if (s == "lower") return Direction::LowerBetter;
  if (s == "higher") return Direction::HigherBetter;
  throw Error("unknown direction '" + std::string(s) + "'");
}

std::string_view to_string(DurationEndpoint e) {
  return e == DurationEndpoint::ExplicitEnd ? "end" : "last-click";
}

DurationEndpoint parse_endpoint(std::string_view s) {
  if (s == "end") return DurationEndpoint::ExplicitEnd;
  if (s == "last-click") return DurationEndpoint::LastClick;
  throw Error("unknown duration endpoint '" + std::string(s) + "'");
}

std::optional<double> measure_session(const Session& s, const ImplicitConfig& config) {
  if (config.duration_band) {
    const Timestamp d = s.end_ts - s.start_ts;
    if (d < config.duration_band->first || d > config.duration_band->second) return std::nullopt;
  }
  switch (config.measure) {
    case ImplicitMeasure::Duration: {
      auto d = session_duration(s, config.endpoint);
      if (!d) return std::nullopt;
      return static_cast<double>(*d);
    }
    case ImplicitMeasure::ClickCount: return static_cast<double>(click_count(s));
    case ImplicitMeasure::MeanClickRank: return mean_click_rank(s);
    case ImplicitMeasure::FirstClickRank: return first_click_rank(s);
  }
  throw Error("unhandled implicit measure");
}

ImplicitPairs implicit_pairs(const EvaluationDataset& dataset, const ImplicitConfig& config) {
  // (query, variant) -> (sum, count) over usable sessions
  std::map<std::pair<std::string, Variant>, std::pair<double, std::size_t>> per_variant;
  for (const auto& s : dataset.sessions) {
    if (auto value = measure_session(s, config)) {
      auto& acc = per_variant[{s.query_id, s.variant}];
      acc.first += *value;
      ++acc.second;
    }
  }
  auto mean = [&](const std::string& q, Variant v) -> std::optional<double> {
    auto it = per_variant.find({q, v});
    if (it == per_variant.end()) return std::nullopt;
    return it->second.first / static_cast<double>(it->second.second);
  };

  const double sign = config.direction == Direction::LowerBetter ? -1.0 : 1.0;
  ImplicitPairs out;
  for (const auto& p : dataset.preferences) {
    if (config.query_filter) {
      const Query* q = dataset.find_query(p.query_id);
      if (q == nullptr || !config.query_filter->count(q->query_type)) continue;
    }
    auto a = mean(p.query_id, Variant::A);
    auto b = mean(p.query_id, Variant::B);
    if (!a || !b) {
      ++out.excluded_queries;
      continue;
    }
    out.scored.pairs.push_back({p.query_id, p.rater_id, sign * *a, sign * *b, p.verdict});
  }
  out.scored.excluded = out.excluded_queries;
  return out;
}

std::vector<PirCell> implicit_pir(const EvaluationDataset& dataset, const ImplicitConfig& config,
                                  const std::vector<double>& thresholds) {
  const auto pairs = implicit_pairs(dataset, config);
  std::vector<PirCell> row;
  row.reserve(thresholds.size());
  for (double t : thresholds) {
    row.push_back(pir(pairs.scored.pairs, t));
    row.back().excluded = pairs.scored.excluded;
  }
  return row;
}

std::vector<double> default_implicit_thresholds(ImplicitMeasure measure) {
  switch (measure) {
    case ImplicitMeasure::Duration: return threshold_grid(0, 120, 5);
    case ImplicitMeasure::ClickCount: return threshold_grid(0, 10, 1);
    case ImplicitMeasure::MeanClickRank:
    case ImplicitMeasure::FirstClickRank: return threshold_grid(0, 20, 1);
  }
  throw Error("unhandled implicit measure");
}

DescriptiveStats descriptive_stats(const EvaluationDataset& dataset) {
  DescriptiveStats stats;

  std::size_t zero_click[2] = {0, 0};
  std::size_t satisfied[2] = {0, 0};
  std::size_t with_verdict[2] = {0, 0};
  for (const auto& s : dataset.sessions) {
    const int vi = s.variant == Variant::A ? 0 : 1;
    auto& vs = vi == 0 ? stats.a : stats.b;
    ++vs.sessions;
    ++vs.clicks_per_session[s.clicks.size()];
    if (s.clicks.empty()) ++zero_click[vi];
    for (const auto& c : s.clicks) ++vs.clicks_by_rank[c.rank];
    if (s.satisfied) {
      ++with_verdict[vi];
      if (*s.satisfied) ++satisfied[vi];
    }
  }
  for (int vi = 0; vi < 2; ++vi) {
    auto& vs = vi == 0 ? stats.a : stats.b;
    if (vs.sessions > 0) {
      vs.zero_click_share = static_cast<double>(zero_click[vi]) / static_cast<double>(vs.sessions);
    }
    if (with_verdict[vi] > 0) {
      vs.satisfaction_share =
          static_cast<double>(satisfied[vi]) / static_cast<double>(with_verdict[vi]);
    }
  }

  const JudgmentIndex index(dataset);
  std::map<int, std::pair<double, std::size_t>> relevance[2];
  for (const auto& pair : dataset.list_pairs) {
    for (Variant v : {Variant::A, Variant::B}) {
      const int vi = v == Variant::A ? 0 : 1;
      auto& vs = vi == 0 ? stats.a : stats.b;
      const auto& ids = pair.list(v);
      for (std::size_t i = 0; i < ids.size(); ++i) {
        const int rank = static_cast<int>(i) + 1;
        const auto* grades = index.grades(pair.query_id, ids[i]);
        if (grades == nullptr) continue;
        for (const auto& [rater, grade] : *grades) {
          auto& dist = vs.grades_by_rank[rank];
          ++dist[static_cast<std::size_t>(grade - 1)];
          relevance[vi][rank].first += grade_to_unit(grade);
          ++relevance[vi][rank].second;
        }
      }
    }
  }
  for (int vi = 0; vi < 2; ++vi) {
    auto& vs = vi == 0 ? stats.a : stats.b;
    for (const auto& [rank, acc] : relevance[vi]) {
      vs.mean_relevance_by_rank[rank] = acc.first / static_cast<double>(acc.second);
    }
  }

  std::size_t words = 0;
  for (const auto& q : dataset.queries) {
    ++stats.query_types[q.query_type];
    std::istringstream in(q.text);
    std::string w;
    while (in >> w) ++words;
  }
  if (!dataset.queries.empty()) {
    stats.mean_query_words =
        static_cast<double>(words) / static_cast<double>(dataset.queries.size());
  }
  return stats;
}

}  // namespace pirkit
