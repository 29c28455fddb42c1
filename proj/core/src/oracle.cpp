#include "pirkit/oracle.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>

#include "pirkit/metrics.hpp"
#include "pirkit/scales.hpp"

namespace pirkit {

namespace {

struct OraclePair {
  double m1;
  double m2;
  int user;  // 1, -1, or 0 for no preference
};

std::optional<double> oracle_relevance(const std::vector<const GradedJudgment*>& judgments,
                                       const std::string& result, const std::string& rater,
                                       const MetricConfig& config) {
  if (config.rating_source == RatingSource::SameUser) {
    for (const auto* j : judgments) {
      if (j->result_id == result && j->rater_id == rater) return conflate(j->grade, config.scale);
    }
    return std::nullopt;
  }
  std::vector<double> others;
  for (const auto* j : judgments) {
    if (j->result_id == result && j->rater_id != rater) others.push_back(conflate(j->grade, config.scale));
  }
  if (others.empty()) return std::nullopt;
  double sum = 0.0;
  for (double v : others) sum += v;
  return sum / static_cast<double>(others.size());
}

// The relevance of every listed result for one preference, by direct
// scanning of the judgments; nullopt where nobody suitable judged it.
struct OracleJudgedPair {
  const PreferenceJudgment* preference;
  const RankedListPair* lists;
  std::vector<std::optional<double>> rel1;
  std::vector<std::optional<double>> rel2;
};

std::vector<OracleJudgedPair> oracle_judged(const EvaluationDataset& ds, const MetricConfig& config) {
  std::vector<OracleJudgedPair> out;
  for (const auto& p : ds.preferences) {
    if (config.query_filter) {
      bool keep = false;
      for (const auto& q : ds.queries) {
        if (q.id == p.query_id) keep = config.query_filter->count(q.query_type) > 0;
      }
      if (!keep) continue;
    }

    const RankedListPair* lists = nullptr;
    for (const auto& lp : ds.list_pairs) {
      if (lp.query_id == p.query_id) lists = &lp;
    }
    if (lists == nullptr) throw Error("oracle: no lists for query '" + p.query_id + "'");

    std::vector<const GradedJudgment*> judgments;
    for (const auto& j : ds.judgments) {
      if (j.query_id == p.query_id) judgments.push_back(&j);
    }

    OracleJudgedPair judged{&p, lists, {}, {}};
    for (const auto& id : lists->variant_a) {
      judged.rel1.push_back(oracle_relevance(judgments, id, p.rater_id, config));
    }
    for (const auto& id : lists->variant_b) {
      judged.rel2.push_back(oracle_relevance(judgments, id, p.rater_id, config));
    }
    out.push_back(std::move(judged));
  }
  return out;
}

std::vector<OraclePair> oracle_pairs(const std::vector<OracleJudgedPair>& judged,
                                     const MetricConfig& config, ValidationMode mode) {
  const auto c = static_cast<std::size_t>(config.cutoff);
  std::vector<OraclePair> out;
  for (const auto& jp : judged) {
    auto required = [&](const std::optional<double>& rel, const std::string& result) {
      if (rel) return *rel;
      if (mode == ValidationMode::Lenient) return 0.0;
      throw Error("oracle: missing judgment for '" + result + "'");
    };

    std::vector<double> rel1;
    std::vector<double> rel2;
    for (std::size_t r = 0; r < c; ++r) {
      for (int side = 0; side < 2; ++side) {
        const auto& ids = side == 0 ? jp.lists->variant_a : jp.lists->variant_b;
        const auto& rels = side == 0 ? jp.rel1 : jp.rel2;
        auto& target = side == 0 ? rel1 : rel2;
        if (r < ids.size()) {
          target.push_back(required(rels[r], ids[r]));
        } else if (mode == ValidationMode::Lenient) {
          target.push_back(0.0);
        } else {
          throw Error("oracle: list shorter than cut-off");
        }
      }
    }

    std::vector<double> pool;
    std::set<std::string> in_pool;
    for (int side = 0; side < 2; ++side) {
      const auto& ids = side == 0 ? jp.lists->variant_a : jp.lists->variant_b;
      const auto& rels = side == 0 ? jp.rel1 : jp.rel2;
      for (std::size_t r = 0; r < ids.size(); ++r) {
        if (in_pool.count(ids[r])) continue;
        std::optional<double> rel = rels[r];
        if (r < c) rel = required(rels[r], ids[r]);
        if (rel) {
          in_pool.insert(ids[r]);
          pool.push_back(*rel);
        }
      }
    }

    std::optional<double> m1;
    std::optional<double> m2;
    const int cut = config.cutoff;
    const auto& f = config.discount;
    switch (config.metric) {
      case Metric::Precision:
        m1 = precision_at(rel1, cut);
        m2 = precision_at(rel2, cut);
        break;
      case Metric::Ndcg:
        m1 = ndcg(rel1, pool, cut, f);
        m2 = ndcg(rel2, pool, cut, f);
        break;
      case Metric::Map: {
        double known = 0.0;
        for (double v : pool) known += v;
        m1 = average_precision(rel1, cut, f, config.ap_norm, known);
        m2 = average_precision(rel2, cut, f, config.ap_norm, known);
        break;
      }
      case Metric::Err:
        m1 = err(rel1, cut, f);
        m2 = err(rel2, cut, f);
        break;
      case Metric::Mrr:
        m1 = reciprocal_rank(rel1, cut, f, config.relevant_above);
        m2 = reciprocal_rank(rel2, cut, f, config.relevant_above);
        break;
      case Metric::Esl:
        m1 = esl(rel1, cut, f, config.esl_n.value());
        m2 = esl(rel2, cut, f, config.esl_n.value());
        break;
    }
    if (!m1 || !m2) continue;

    int user = 0;
    if (jp.preference->verdict == Verdict::A) user = 1;
    if (jp.preference->verdict == Verdict::B) user = -1;
    out.push_back({*m1, *m2, user});
  }
  return out;
}

// pref(x) = 1 if x > t, -1 if x < -t, 0 if |x| <= t
int oracle_pref(double x, double t) {
  if (x - t > kPrefTolerance) return 1;
  if (-x - t > kPrefTolerance) return -1;
  return 0;
}

std::vector<OracleResult> oracle_row(const std::vector<OraclePair>& pairs,
                                     const std::vector<double>& thresholds) {
  std::vector<OracleResult> row;
  for (double t : thresholds) {
    long sum = 0;
    long queries = 0;
    for (const auto& q : pairs) {
      if (q.user == 0) continue;
      ++queries;
      sum += oracle_pref(q.m1 - q.m2, t) * q.user;
    }
    if (queries == 0) {
      row.push_back({0.5, true});
    } else {
      row.push_back({0.5 + static_cast<double>(sum) / (2.0 * static_cast<double>(queries)), false});
    }
  }
  return row;
}

}  // namespace

std::vector<OracleResult> oracle_pir_row(const EvaluationDataset& dataset,
                                         const MetricConfig& config, int cutoff,
                                         const std::vector<double>& thresholds,
                                         ValidationMode mode) {
  return oracle_pir_rows(dataset, config, {cutoff}, thresholds, mode).front();
}

std::vector<std::vector<OracleResult>> oracle_pir_rows(const EvaluationDataset& dataset,
                                                       const MetricConfig& config,
                                                       const std::vector<int>& cutoffs,
                                                       const std::vector<double>& thresholds,
                                                       ValidationMode mode) {
  const auto judged = oracle_judged(dataset, config);
  std::vector<std::vector<OracleResult>> rows;
  for (int cutoff : cutoffs) {
    MetricConfig at_cutoff = config;
    at_cutoff.cutoff = cutoff;
    rows.push_back(oracle_row(oracle_pairs(judged, at_cutoff, mode), thresholds));
  }
  return rows;
}

OracleResult oracle_pir(const EvaluationDataset& dataset, const MetricConfig& config, double t,
                        int cutoff, ValidationMode mode) {
  return oracle_pir_row(dataset, config, cutoff, {t}, mode).front();
}

}  // namespace pirkit
