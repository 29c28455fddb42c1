#include "pirkit/pir.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace pirkit {

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::Precision: return "precision";
    case Metric::Ndcg: return "ndcg";
    case Metric::Map: return "map";
    case Metric::Err: return "err";
    case Metric::Mrr: return "mrr";
    case Metric::Esl: return "esl";
  }
  return "?";
}

Metric parse_metric(std::string_view s) {
  for (Metric m : kAllMetrics) {
    if (to_string(m) == s) return m;
  }
  throw Error("unknown metric '" + std::string(s) + "'");
}

std::string_view to_string(RatingSource s) {
  return s == RatingSource::SameUser ? "same" : "other";
}

RatingSource parse_rating_source(std::string_view s) {
  if (s == "same" || s == "same-user") return RatingSource::SameUser;
  if (s == "other" || s == "other-users") return RatingSource::OtherUsers;
  throw Error("unknown rating source '" + std::string(s) + "'");
}

void MetricConfig::check() const {
  if (cutoff < 1 || cutoff > kMaxCutoff) {
    throw Error("cut-off " + std::to_string(cutoff) + " outside 1.." + std::to_string(kMaxCutoff));
  }
  if (metric == Metric::Esl) {
    if (!esl_n) throw Error("ESL needs a cumulative relevance target");
    if (!(*esl_n > 0.0)) throw Error("ESL relevance target must be positive");
  } else if (esl_n) {
    throw Error("relevance target given for a metric other than ESL");
  }
  if (discount.kind() == DiscountKind::ClickBased && !discount.click_weights().covers(cutoff)) {
    throw Error("click weight table does not cover cut-off " + std::to_string(cutoff));
  }
}

std::string MetricConfig::label() const {
  std::ostringstream os;
  os << to_string(metric) << '/' << to_string(discount.kind()) << '/' << to_string(scale) << '/'
     << to_string(rating_source);
  if (metric == Metric::Esl && esl_n) os << "/n=" << *esl_n;
  if (metric == Metric::Map && ap_norm == ApNorm::ByKnownRelevant) os << "/known";
  if (metric == Metric::Mrr && relevant_above != 0.0) os << "/rel>" << relevant_above;
  if (query_filter) {
    os << '/';
    bool first = true;
    for (QueryType t : *query_filter) {
      if (!first) os << '+';
      os << to_string(t);
      first = false;
    }
  }
  return os.str();
}

int pref(double x, double t) {
  if (t < 0.0) throw Error("threshold must be non-negative");
  if (x > t + kPrefTolerance) return 1;
  if (x < -t - kPrefTolerance) return -1;
  return 0;
}

PirCell pir(std::span<const ScoredPair> pairs, double t) {
  PirCell cell;
  cell.threshold = t;
  for (const auto& p : pairs) {
    const int metric = pref(p.score_a - p.score_b, t);
    if (p.verdict == Verdict::Equal) {
      ++(metric == 0 ? cell.counts.correct_equal : cell.counts.false_pref);
      continue;
    }
    const int user = p.verdict == Verdict::A ? 1 : -1;
    if (metric == 0) {
      ++cell.counts.missed_pref;
    } else if (metric == user) {
      ++cell.counts.correct_pref;
    } else {
      ++cell.counts.reversed_pref;
    }
  }
  const std::size_t denominator = cell.counts.preferring();
  if (denominator == 0) {
    cell.empty_denominator = true;
    cell.pir = 0.5;
  } else {
    const double net = static_cast<double>(cell.counts.correct_pref) -
                       static_cast<double>(cell.counts.reversed_pref);
    cell.pir = 0.5 + net / (2.0 * static_cast<double>(denominator));
  }
  return cell;
}

JudgmentIndex::JudgmentIndex(const EvaluationDataset& dataset) {
  for (const auto& j : dataset.judgments) {
    grades_[{j.query_id, j.result_id}][j.rater_id] = j.grade;
  }
}

const std::map<std::string, int>* JudgmentIndex::grades(const std::string& query_id,
                                                        const std::string& result_id) const {
  auto it = grades_.find({query_id, result_id});
  return it == grades_.end() ? nullptr : &it->second;
}

namespace {

enum class Pooling { Rater, OtherRaters, AllRaters };

class RelevanceSource {
 public:
  RelevanceSource(const JudgmentIndex& index, const MetricConfig& config,
                  const std::string& query_id, const std::string& rater_id, Pooling pooling)
      : index_(index), config_(config), query_id_(query_id), rater_id_(rater_id),
        pooling_(pooling) {}

  std::optional<double> lookup(const std::string& result_id) const {
    const auto* grades = index_.grades(query_id_, result_id);
    if (grades == nullptr) return std::nullopt;
    if (pooling_ == Pooling::Rater) {
      auto it = grades->find(rater_id_);
      if (it == grades->end()) return std::nullopt;
      return conflate(it->second, config_.scale);
    }
    double sum = 0.0;
    int count = 0;
    for (const auto& [rater, grade] : *grades) {
      if (pooling_ == Pooling::OtherRaters && rater == rater_id_) continue;
      sum += conflate(grade, config_.scale);
      ++count;
    }
    if (count == 0) return std::nullopt;
    return sum / count;
  }

  double require(const std::string& result_id, ValidationMode mode) const {
    if (auto rel = lookup(result_id)) return *rel;
    if (mode == ValidationMode::Lenient) return 0.0;
    throw Error(missing(result_id));
  }

  std::string missing(const std::string& result_id) const {
    std::string who = "any rater";
    if (pooling_ == Pooling::Rater) who = "rater '" + rater_id_ + "'";
    if (pooling_ == Pooling::OtherRaters) who = "raters other than '" + rater_id_ + "'";
    return "no judgment by " + who + " for result '" + result_id + "' of query '" + query_id_ +
           "'";
  }

 private:
  const JudgmentIndex& index_;
  const MetricConfig& config_;
  const std::string& query_id_;
  const std::string& rater_id_;
  Pooling pooling_;
};

std::optional<double> score_list(std::span<const double> list, std::span<const double> pool,
                                 const MetricConfig& config) {
  const int c = config.cutoff;
  const auto& f = config.discount;
  switch (config.metric) {
    case Metric::Precision: return precision_at(list, c);
    case Metric::Ndcg: return ndcg(list, pool, c, f);
    case Metric::Map: {
      std::optional<double> known;
      if (config.ap_norm == ApNorm::ByKnownRelevant) {
        known = 0.0;
        for (double rel : pool) *known += rel;
      }
      return average_precision(list, c, f, config.ap_norm, known);
    }
    case Metric::Err: return err(list, c, f);
    case Metric::Mrr: return reciprocal_rank(list, c, f, config.relevant_above);
    case Metric::Esl: return esl(list, c, f, *config.esl_n);
  }
  throw Error("unhandled metric");
}

std::optional<std::pair<double, double>> score_variants(const EvaluationDataset& dataset,
                                                        const MetricConfig& config,
                                                        const std::string& query_id,
                                                        const RelevanceSource& source,
                                                        ValidationMode mode) {
  config.check();
  const RankedListPair* pair = dataset.find_list_pair(query_id);
  if (pair == nullptr) throw Error("no list pair for query '" + query_id + "'");

  const auto c = static_cast<std::size_t>(config.cutoff);
  std::vector<double> lists[2];
  std::vector<double> pool;
  std::set<std::string> pooled;
  for (Variant v : {Variant::A, Variant::B}) {
    const auto& ids = pair->list(v);
    auto& rels = lists[v == Variant::A ? 0 : 1];
    if (ids.size() < c && mode == ValidationMode::Strict) {
      throw Error("variant " + std::string(to_string(v)) + " of query '" + query_id + "' has " +
                  std::to_string(ids.size()) + " results, cut-off is " + std::to_string(c));
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
      std::optional<double> rel;
      if (i < c) {
        rel = source.require(ids[i], mode);
        rels.push_back(*rel);
      } else {
        rel = source.lookup(ids[i]);
      }
      if (rel && pooled.insert(ids[i]).second) pool.push_back(*rel);
    }
    rels.resize(c, 0.0);
  }

  auto a = score_list(lists[0], pool, config);
  auto b = score_list(lists[1], pool, config);
  if (!a || !b) return std::nullopt;
  return std::make_pair(*a, *b);
}

}  // namespace

std::optional<std::pair<double, double>> score_pair(const JudgmentIndex& index,
                                                    const EvaluationDataset& dataset,
                                                    const MetricConfig& config,
                                                    const std::string& query_id,
                                                    const std::string& rater_id,
                                                    ValidationMode mode) {
  const Pooling pooling =
      config.rating_source == RatingSource::SameUser ? Pooling::Rater : Pooling::OtherRaters;
  const RelevanceSource source(index, config, query_id, rater_id, pooling);
  return score_variants(dataset, config, query_id, source, mode);
}

std::optional<std::pair<double, double>> score_query(const JudgmentIndex& index,
                                                     const EvaluationDataset& dataset,
                                                     const MetricConfig& config,
                                                     const std::string& query_id,
                                                     const std::optional<std::string>& rater,
                                                     ValidationMode mode) {
  const std::string rater_id = rater.value_or("");
  const RelevanceSource source(index, config, query_id, rater_id,
                               rater ? Pooling::Rater : Pooling::AllRaters);
  return score_variants(dataset, config, query_id, source, mode);
}

std::optional<std::pair<double, double>> score_pair(const EvaluationDataset& dataset,
                                                    const MetricConfig& config,
                                                    const std::string& query_id,
                                                    const std::string& rater_id,
                                                    ValidationMode mode) {
  return score_pair(JudgmentIndex(dataset), dataset, config, query_id, rater_id, mode);
}

PairSet score_pairs(const JudgmentIndex& index, const EvaluationDataset& dataset,
                    const MetricConfig& config, ValidationMode mode) {
  PairSet out;
  for (const auto& p : dataset.preferences) {
    if (config.query_filter) {
      const Query* q = dataset.find_query(p.query_id);
      if (q == nullptr) throw Error("preference references unknown query '" + p.query_id + "'");
      if (!config.query_filter->count(q->query_type)) continue;
    }
    auto scores = score_pair(index, dataset, config, p.query_id, p.rater_id, mode);
    if (!scores) {
      ++out.excluded;
      continue;
    }
    out.pairs.push_back({p.query_id, p.rater_id, scores->first, scores->second, p.verdict});
  }
  return out;
}

std::vector<double> threshold_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw Error("threshold step must be positive");
  if (lo < 0.0 || hi < lo) throw Error("threshold range must satisfy 0 <= lo <= hi");
  const auto steps = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(steps) + 1);
  for (long k = 0; k <= steps; ++k) {
    // Round to 12 significant decimals so 3 * 0.1 prints and compares as 0.3.
    grid.push_back(std::round((lo + static_cast<double>(k) * step) * 1e12) / 1e12);
  }
  return grid;
}

std::vector<double> default_thresholds() { return threshold_grid(0.0, 0.30, 0.01); }

std::vector<int> default_cutoffs() {
  std::vector<int> cutoffs;
  for (int c = 1; c <= kMaxCutoff; ++c) cutoffs.push_back(c);
  return cutoffs;
}

PirGrid::PirGrid(std::vector<MetricConfig> configs, std::vector<int> cutoffs,
                 std::vector<double> thresholds)
    : configs_(std::move(configs)),
      cutoffs_(std::move(cutoffs)),
      thresholds_(std::move(thresholds)),
      cells_(configs_.size() * cutoffs_.size() * thresholds_.size()) {}

std::size_t PirGrid::offset(std::size_t config, std::size_t cutoff_index) const {
  if (config >= configs_.size() || cutoff_index >= cutoffs_.size()) {
    throw Error("grid index out of range");
  }
  return (config * cutoffs_.size() + cutoff_index) * thresholds_.size();
}

PirCell& PirGrid::at(std::size_t config, std::size_t cutoff_index, std::size_t threshold_index) {
  return row(config, cutoff_index)[threshold_index];
}

const PirCell& PirGrid::at(std::size_t config, std::size_t cutoff_index,
                           std::size_t threshold_index) const {
  return row(config, cutoff_index)[threshold_index];
}

std::span<const PirCell> PirGrid::row(std::size_t config, std::size_t cutoff_index) const {
  return std::span<const PirCell>(cells_).subspan(offset(config, cutoff_index),
                                                  thresholds_.size());
}

std::span<PirCell> PirGrid::row(std::size_t config, std::size_t cutoff_index) {
  return std::span<PirCell>(cells_).subspan(offset(config, cutoff_index), thresholds_.size());
}

std::size_t PirGrid::cutoff_index(int cutoff) const {
  auto it = std::find(cutoffs_.begin(), cutoffs_.end(), cutoff);
  if (it == cutoffs_.end()) throw Error("cut-off " + std::to_string(cutoff) + " not in grid");
  return static_cast<std::size_t>(it - cutoffs_.begin());
}

namespace {

void check_thresholds(const std::vector<double>& thresholds) {
  if (thresholds.empty()) throw Error("threshold grid is empty");
  if (thresholds.front() != 0.0) throw Error("threshold grid must start at 0");
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > thresholds[i - 1])) {
      throw Error("threshold grid must be strictly increasing");
    }
  }
}

void fill_row(std::span<PirCell> row, const PairSet& scored, const std::vector<double>& thresholds) {
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    row[t] = pir(scored.pairs, thresholds[t]);
    row[t].excluded = scored.excluded;
  }
}

/// One preference with the relevance of every listed result resolved for a
/// given scale and rating source. Metric, discount and cut-off vary per grid
/// cell; the judgments behind them do not, so they are looked up once.
struct PreparedPair {
  const PreferenceJudgment* preference = nullptr;
  const Query* query = nullptr;
  const RankedListPair* lists = nullptr;
  std::vector<std::optional<double>> relevance[2];
  std::vector<std::string> missing[2];  // error text where relevance is absent
  // Relevance of each distinct judged result of either list. Results left
  // unjudged inside the cut-off enter scoring as 0 in lenient mode, which
  // never changes an ideal ranking or a relevance sum, so they are omitted.
  std::vector<double> pool;
};

std::vector<PreparedPair> prepare_pairs(const JudgmentIndex& index,
                                        const EvaluationDataset& dataset, RelevanceScale scale,
                                        RatingSource source) {
  MetricConfig config;
  config.scale = scale;
  const Pooling pooling = source == RatingSource::SameUser ? Pooling::Rater : Pooling::OtherRaters;
  std::vector<PreparedPair> out;
  out.reserve(dataset.preferences.size());
  for (const auto& p : dataset.preferences) {
    PreparedPair prepared;
    prepared.preference = &p;
    prepared.query = dataset.find_query(p.query_id);
    prepared.lists = dataset.find_list_pair(p.query_id);
    if (prepared.lists != nullptr) {
      const RelevanceSource relevance(index, config, p.query_id, p.rater_id, pooling);
      std::set<std::string> pooled;
      for (int v = 0; v < 2; ++v) {
        for (const auto& id : prepared.lists->list(v == 0 ? Variant::A : Variant::B)) {
          const auto rel = relevance.lookup(id);
          prepared.relevance[v].push_back(rel);
          prepared.missing[v].push_back(rel ? std::string() : relevance.missing(id));
          if (rel && pooled.insert(id).second) prepared.pool.push_back(*rel);
        }
      }
    }
    out.push_back(std::move(prepared));
  }
  return out;
}

/// Same result as score_pairs for a config whose scale and rating source
/// match the prepared pairs.
PairSet score_prepared(const std::vector<PreparedPair>& prepared, const MetricConfig& config,
                       ValidationMode mode) {
  PairSet out;
  const auto c = static_cast<std::size_t>(config.cutoff);
  std::vector<double> lists[2];
  for (const auto& pp : prepared) {
    const auto& p = *pp.preference;
    if (config.query_filter) {
      if (pp.query == nullptr) throw Error("preference references unknown query '" + p.query_id + "'");
      if (!config.query_filter->count(pp.query->query_type)) continue;
    }
    if (pp.lists == nullptr) throw Error("no list pair for query '" + p.query_id + "'");
    for (int v = 0; v < 2; ++v) {
      const auto& rels = pp.relevance[v];
      if (rels.size() < c && mode == ValidationMode::Strict) {
        throw Error("variant " + std::string(v == 0 ? "A" : "B") + " of query '" + p.query_id +
                    "' has " + std::to_string(rels.size()) + " results, cut-off is " +
                    std::to_string(c));
      }
      auto& list = lists[v];
      list.assign(c, 0.0);
      for (std::size_t i = 0; i < c && i < rels.size(); ++i) {
        if (rels[i]) {
          list[i] = *rels[i];
        } else if (mode == ValidationMode::Strict) {
          throw Error(pp.missing[v][i]);
        }
      }
    }
    const auto a = score_list(lists[0], pp.pool, config);
    const auto b = score_list(lists[1], pp.pool, config);
    if (!a || !b) {
      ++out.excluded;
      continue;
    }
    out.pairs.push_back({p.query_id, p.rater_id, *a, *b, p.verdict});
  }
  return out;
}

}  // namespace

PirGrid pir_sweep(const EvaluationDataset& dataset, const std::vector<MetricConfig>& configs,
                  const std::vector<double>& thresholds, const std::vector<int>& cutoffs,
                  const SweepOptions& options) {
  check_thresholds(thresholds);
  if (cutoffs.empty()) throw Error("cut-off list is empty");
  for (const auto& config : configs) {
    for (int c : cutoffs) {
      MetricConfig at_cutoff = config;
      at_cutoff.cutoff = c;
      at_cutoff.check();
    }
  }

  PirGrid grid(configs, cutoffs, thresholds);
  const JudgmentIndex index(dataset);
  const std::size_t tasks = configs.size() * cutoffs.size();

  std::map<std::pair<RelevanceScale, RatingSource>, std::vector<PreparedPair>> prepared;
  for (const auto& config : configs) {
    const auto key = std::make_pair(config.scale, config.rating_source);
    if (!prepared.count(key)) prepared.emplace(key, prepare_pairs(index, dataset, key.first, key.second));
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t task = next++; task < tasks; task = next++) {
      const std::size_t ci = task / cutoffs.size();
      const std::size_t ki = task % cutoffs.size();
      try {
        MetricConfig config = configs[ci];
        config.cutoff = cutoffs[ki];
        const auto& pairs = prepared.at({config.scale, config.rating_source});
        fill_row(grid.row(ci, ki), score_prepared(pairs, config, options.mode), thresholds);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(tasks)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return grid;
}

BestThreshold best_threshold(std::span<const PirCell> row) {
  if (row.empty()) throw Error("empty threshold row");
  BestThreshold best{row.front().threshold, row.front().pir};
  for (const auto& cell : row.subspan(1)) {
    if (cell.pir > best.pir) best = {cell.threshold, cell.pir};
  }
  return best;
}

BestThreshold best_threshold(const PirGrid& grid, std::size_t config, int cutoff) {
  return best_threshold(grid.row(config, grid.cutoff_index(cutoff)));
}

std::vector<double> Breakdown::shares() const {
  const double total = static_cast<double>(counts.total());
  if (total == 0.0) return {0.0, 0.0, 0.0, 0.0, 0.0};
  return {counts.correct_pref / total, counts.correct_equal / total, counts.false_pref / total,
          counts.missed_pref / total, counts.reversed_pref / total};
}

Breakdown detailed_breakdown(const EvaluationDataset& dataset, const MetricConfig& config,
                             double t, int cutoff, ValidationMode mode) {
  MetricConfig at_cutoff = config;
  at_cutoff.cutoff = cutoff;
  const auto scored = score_pairs(JudgmentIndex(dataset), dataset, at_cutoff, mode);
  return {pir(scored.pairs, t).counts, scored.excluded};
}

std::vector<PirCell> breakdown_series(const EvaluationDataset& dataset, const MetricConfig& config,
                                      int cutoff, const std::vector<double>& thresholds,
                                      ValidationMode mode) {
  MetricConfig at_cutoff = config;
  at_cutoff.cutoff = cutoff;
  const auto scored = score_pairs(JudgmentIndex(dataset), dataset, at_cutoff, mode);
  std::vector<PirCell> series(thresholds.size());
  fill_row(series, scored, thresholds);
  return series;
}

}  // namespace pirkit
