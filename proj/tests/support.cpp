#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

#include <unistd.h>

#include "pirkit/metrics.hpp"
#include "pirkit/scales.hpp"

#ifndef PIRKIT_FIXTURE_DIR
#error "PIRKIT_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace pirkit::testing {

namespace fs = std::filesystem;

fs::path fixture(const std::string& name) { return fs::path(PIRKIT_FIXTURE_DIR) / name; }

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  const auto base = fs::temp_directory_path();
  for (;;) {
    path_ = base / ("pirkit-test-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter.fetch_add(1)));
    if (fs::create_directories(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void add_query(EvaluationDataset& ds, const std::string& query_id, const std::vector<int>& grades_a,
               const std::vector<int>& grades_b, Verdict verdict, const std::string& rater) {
  if (!ds.find_query(query_id)) {
    Query q;
    q.id = query_id;
    q.text = "query " + query_id;
    ds.queries.push_back(q);
  }
  if (!ds.find_list_pair(query_id)) {
    RankedListPair lp{query_id, {}, {}};
    for (std::size_t r = 0; r < grades_a.size(); ++r) {
      lp.variant_a.push_back(query_id + "-a" + std::to_string(r + 1));
    }
    for (std::size_t r = 0; r < grades_b.size(); ++r) {
      lp.variant_b.push_back(query_id + "-b" + std::to_string(r + 1));
    }
    ds.list_pairs.push_back(lp);
  }
  for (std::size_t r = 0; r < grades_a.size(); ++r) {
    ds.judgments.push_back({query_id, query_id + "-a" + std::to_string(r + 1), rater, grades_a[r],
                            std::nullopt});
  }
  for (std::size_t r = 0; r < grades_b.size(); ++r) {
    ds.judgments.push_back({query_id, query_id + "-b" + std::to_string(r + 1), rater, grades_b[r],
                            std::nullopt});
  }
  ds.preferences.push_back({query_id, rater, verdict});
}

EvaluationDataset swapped(const EvaluationDataset& ds) {
  EvaluationDataset out = ds;
  for (auto& lp : out.list_pairs) std::swap(lp.variant_a, lp.variant_b);
  for (auto& p : out.preferences) {
    if (p.verdict == Verdict::A) {
      p.verdict = Verdict::B;
    } else if (p.verdict == Verdict::B) {
      p.verdict = Verdict::A;
    }
  }
  for (auto& s : out.sessions) s.variant = s.variant == Variant::A ? Variant::B : Variant::A;
  return out;
}

SyntheticSpec small_spec(std::uint64_t seed) {
  SynthRng rng(seed ^ 0x5eedULL);
  SyntheticSpec spec;
  spec.queries = 3 + static_cast<int>(rng.below(4));
  spec.raters = 3 + static_cast<int>(rng.below(3));
  spec.raters_per_query = 2 + static_cast<int>(rng.below(2));
  spec.list_length = 10;
  spec.rater_noise = 0.3;
  spec.flip_probability = 0.15;
  spec.equal_margin = 0.03;
  spec.seed = seed;
  return spec;
}

std::vector<MetricConfig> every_config() {
  std::vector<MetricConfig> out;
  for (Metric m : kAllMetrics) {
    for (DiscountKind k : kAllDiscounts) {
      for (RelevanceScale s : kAllScales) {
        for (RatingSource src : {RatingSource::SameUser, RatingSource::OtherUsers}) {
          std::vector<ApNorm> norms{ApNorm::ByEvaluatedCount};
          if (m == Metric::Map) norms.push_back(ApNorm::ByKnownRelevant);
          for (ApNorm norm : norms) {
            MetricConfig c;
            c.metric = m;
            c.discount = DiscountFunction(k);
            c.scale = s;
            c.rating_source = src;
            c.ap_norm = norm;
            if (m == Metric::Esl) c.esl_n = 1.0;
            out.push_back(std::move(c));
          }
        }
      }
    }
  }
  return out;
}

namespace {

class Recorder {
 public:
  explicit Recorder(std::string name) { result_.name = std::move(name); }

  void check(bool ok, const std::string& detail) {
    ++result_.cases;
    if (ok) return;
    if (result_.failures++ == 0) {
      result_.first_failure = "case " + std::to_string(result_.cases) + ": " + detail;
    }
  }

  PropertyResult result() const { return result_; }

 private:
  PropertyResult result_;
};

Verdict random_verdict(SynthRng& rng) {
  switch (rng.below(3)) {
    case 0: return Verdict::A;
    case 1: return Verdict::B;
    default: return Verdict::Equal;
  }
}

std::vector<ScoredPair> random_pairs(SynthRng& rng, bool on_grid) {
  std::vector<ScoredPair> pairs(1 + rng.below(30));
  for (auto& p : pairs) {
    if (on_grid) {
      p.score_a = static_cast<double>(rng.below(21)) / 20.0;
      p.score_b = static_cast<double>(rng.below(21)) / 20.0;
    } else {
      p.score_a = rng.uniform();
      p.score_b = rng.uniform();
    }
    p.verdict = random_verdict(rng);
  }
  return pairs;
}

std::vector<double> random_list(SynthRng& rng, std::size_t length) {
  std::vector<double> list(length);
  for (auto& v : list) v = grade_to_unit(1 + static_cast<int>(rng.below(6)));
  return list;
}

DiscountKind random_kind(SynthRng& rng) { return kAllDiscounts[rng.below(std::size(kAllDiscounts))]; }

std::string describe(const PirCell& c) {
  std::ostringstream os;
  os << "t=" << c.threshold << " pir=" << c.pir << " counts=" << c.counts.correct_pref << '/'
     << c.counts.correct_equal << '/' << c.counts.false_pref << '/' << c.counts.missed_pref << '/'
     << c.counts.reversed_pref;
  return os.str();
}

}  // namespace

PropertyResult property_swap_symmetry(int cases) {
  Recorder rec("swap symmetry");
  const auto configs = every_config();
  const auto thresholds = default_thresholds();
  for (int i = 0; i < cases; ++i) {
    SynthRng rng(100'000 + i);
    const auto ds = generate_synthetic(small_spec(100'000 + i));
    const auto& config = configs[rng.below(configs.size())];
    const int cutoff = 1 + static_cast<int>(rng.below(10));
    const auto before = breakdown_series(ds, config, cutoff, thresholds);
    const auto after = breakdown_series(swapped(ds), config, cutoff, thresholds);
    std::string detail;
    for (std::size_t k = 0; k < before.size() && detail.empty(); ++k) {
      if (!(before[k] == after[k])) {
        detail = config.label() + " @" + std::to_string(cutoff) + ": " + describe(before[k]) +
                 " vs " + describe(after[k]);
      }
    }
    rec.check(detail.empty(), detail);
  }
  return rec.result();
}

PropertyResult property_sign_offset_invariance(int cases) {
  Recorder rec("sign/offset invariance at t=0");
  for (int i = 0; i < cases; ++i) {
    SynthRng rng(200'000 + i);
    auto pairs = random_pairs(rng, true);
    const auto base = pir(pairs, 0.0);
    const double lambda = 0.1 + 9.9 * rng.uniform();
    auto scaled = pairs;
    for (auto& p : scaled) {
      const double offset = -5.0 + 10.0 * rng.uniform();
      p.score_a = lambda * p.score_a + offset;
      p.score_b = lambda * p.score_b + offset;
    }
    const auto moved = pir(scaled, 0.0);
    rec.check(base == moved, describe(base) + " vs " + describe(moved));
  }
  return rec.result();
}

PropertyResult property_threshold_monotonicity(int cases) {
  Recorder rec("threshold monotonicity");
  const auto thresholds = default_thresholds();
  for (int i = 0; i < cases; ++i) {
    SynthRng rng(300'000 + i);
    const auto pairs = random_pairs(rng, false);
    std::string detail;
    PirCell prev = pir(pairs, thresholds.front());
    for (std::size_t k = 1; k < thresholds.size() && detail.empty(); ++k) {
      const PirCell cur = pir(pairs, thresholds[k]);
      const auto& a = prev.counts;
      const auto& b = cur.counts;
      const bool ok = b.correct_pref <= a.correct_pref && b.reversed_pref <= a.reversed_pref &&
                      b.missed_pref >= a.missed_pref && b.correct_equal >= a.correct_equal &&
                      b.correct_equal + b.false_pref == a.correct_equal + a.false_pref &&
                      b.preferring() == a.preferring();
      if (!ok) detail = describe(prev) + " then " + describe(cur);
      prev = cur;
    }
    rec.check(detail.empty(), detail);
  }
  return rec.result();
}

PropertyResult property_pir_quantization(int cases) {
  Recorder rec("PIR quantization");
  for (int i = 0; i < cases; ++i) {
    SynthRng rng(400'000 + i);
    const auto pairs = random_pairs(rng, false);
    const double t = 0.3 * rng.uniform();
    const auto cell = pir(pairs, t);
    const auto q = static_cast<double>(cell.counts.preferring());
    bool ok;
    if (q == 0) {
      ok = cell.pir == 0.5 && cell.empty_denominator;
    } else {
      const double k = (cell.pir - 0.5) * 2.0 * q;
      ok = std::abs(k - std::round(k)) < 1e-9 && std::abs(k) <= q + 1e-9;
    }
    rec.check(ok, describe(cell));
  }
  return rec.result();
}

PropertyResult property_ndcg_bounds(int cases) {
  Recorder rec("NDCG bounds and perfect order");
  // The click-based table is not monotone, so sorting by relevance need not
  // maximize DCG under it; the bound is checked for the monotone discounts.
  const DiscountKind monotone[] = {DiscountKind::None, DiscountKind::Log5, DiscountKind::Log2,
                                   DiscountKind::Root, DiscountKind::Rank, DiscountKind::Square};
  for (int i = 0; i < cases; ++i) {
    SynthRng rng(500'000 + i);
    const std::size_t length = 1 + rng.below(10);
    const auto list = random_list(rng, length);
    auto pool = list;
    const auto other = random_list(rng, length);
    pool.insert(pool.end(), other.begin(), other.end());
    const int c = 1 + static_cast<int>(rng.below(length));
    const DiscountFunction f(monotone[rng.below(std::size(monotone))]);

    const auto score = ndcg(list, pool, c, f);
    const auto ideal = ideal_list(pool, c);
    const auto perfect = ndcg(ideal, pool, c, f);
    bool ok = true;
    std::ostringstream os;
    if (score) {
      ok = *score >= 0.0 && *score <= 1.0 + 1e-12;
      os << "ndcg=" << *score;
    }
    if (perfect) {
      ok = ok && std::abs(*perfect - 1.0) < 1e-12;
      os << " perfect=" << *perfect;
    }
    ok = ok && score.has_value() == perfect.has_value();
    rec.check(ok, os.str() + " discount=" + std::string(to_string(f.kind())));
  }
  return rec.result();
}

PropertyResult property_esl_endpoints(int cases) {
  Recorder rec("ESL endpoints");
  for (int i = 0; i < cases; ++i) {
    SynthRng rng(600'000 + i);
    const std::size_t length = 2 + rng.below(9);
    auto list = random_list(rng, length);
    double expected = 0.0;
    double got = 0.0;
    switch (i % 3) {
      case 0: {  // top result fully relevant meets n = 1 at once
        list[0] = 1.0;
        const int c = 1 + static_cast<int>(rng.below(length));
        expected = 1.0;
        got = esl(list, c, DiscountFunction(random_kind(rng)), 1.0);
        break;
      }
      case 1: {  // nothing relevant
        std::fill(list.begin(), list.end(), 0.0);
        const int c = 1 + static_cast<int>(rng.below(length));
        expected = 0.0;
        got = esl(list, c, DiscountFunction(random_kind(rng)), 0.5 + 3.0 * rng.uniform());
        break;
      }
      default: {  // two half-relevant results reach n = 1 at rank 2
        list[0] = 0.5;
        list[1] = 0.5;
        expected = 0.5;
        got = esl(list, 2, DiscountFunction(DiscountKind::None), 1.0);
        break;
      }
    }
    rec.check(std::abs(got - expected) < 1e-12,
              "expected " + std::to_string(expected) + " got " + std::to_string(got));
  }
  return rec.result();
}

PropertyResult property_mrr_discount_invariance(int cases) {
  Recorder rec("MRR discount-choice invariance");
  for (int i = 0; i < cases; ++i) {
    SynthRng rng(700'000 + i);
    // A strictly decreasing click table alongside the analytic discounts.
    std::vector<double> weights{1.0};
    for (int r = 1; r < kMaxCutoff; ++r) weights.push_back(weights.back() * (0.3 + 0.65 * rng.uniform()));
    const DiscountFunction discounts[] = {
        DiscountFunction(DiscountKind::Root), DiscountFunction(DiscountKind::Rank),
        DiscountFunction(DiscountKind::Square),
        DiscountFunction::click_based(ClickWeights(weights))};

    auto sparse = [&] {
      std::vector<double> list(kMaxCutoff, 0.0);
      for (auto& v : list) {
        if (rng.chance(0.25)) v = grade_to_unit(1 + static_cast<int>(rng.below(5)));
      }
      return list;
    };
    const auto a = sparse();
    const auto b = sparse();
    const int c = 1 + static_cast<int>(rng.below(kMaxCutoff));

    auto first = [&](const std::vector<double>& list) {
      for (int r = 0; r < c; ++r) {
        if (list[r] > 0.0) return r;
      }
      return kMaxCutoff + 1;
    };
    const int expected = first(a) < first(b) ? 1 : (first(a) > first(b) ? -1 : 0);
    bool ok = true;
    std::string detail;
    for (const auto& f : discounts) {
      const int got = pref(reciprocal_rank(a, c, f) - reciprocal_rank(b, c, f), 0.0);
      if (got != expected) {
        ok = false;
        detail = std::string(to_string(f.kind())) + " gives " + std::to_string(got) +
                 ", expected " + std::to_string(expected);
      }
    }
    rec.check(ok, detail);
  }
  return rec.result();
}

PropertyResult property_err_monotonicity(int cases) {
  Recorder rec("ERR(RANK) monotone in each grade");
  const DiscountFunction rank(DiscountKind::Rank);
  for (int i = 0; i < cases; ++i) {
    SynthRng rng(800'000 + i);
    const std::size_t length = 1 + rng.below(10);
    auto list = random_list(rng, length);
    for (auto& v : list) v = rng.uniform();
    const int c = static_cast<int>(length);
    std::string detail;
    for (std::size_t pos = 0; pos < length && detail.empty(); ++pos) {
      auto probe = list;
      double prev = -1.0;
      for (int step = 0; step <= 20; ++step) {
        probe[pos] = step / 20.0;
        const double value = err(probe, c, rank);
        if (value < prev - 1e-12) {
          detail = "rank " + std::to_string(pos + 1) + " at " + std::to_string(probe[pos]);
          break;
        }
        prev = value;
      }
    }
    rec.check(detail.empty(), detail);
  }
  return rec.result();
}

std::vector<PropertyResult> all_properties(int cases) {
  return {property_swap_symmetry(cases),       property_sign_offset_invariance(cases),
          property_threshold_monotonicity(cases), property_pir_quantization(cases),
          property_ndcg_bounds(cases),         property_esl_endpoints(cases),
          property_mrr_discount_invariance(cases), property_err_monotonicity(cases)};
}

}  // namespace pirkit::testing
