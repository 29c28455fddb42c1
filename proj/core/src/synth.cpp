#include "pirkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "pirkit/scales.hpp"

namespace pirkit {

double SynthRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t SynthRng::below(std::size_t bound) {
  if (bound == 0) throw Error("empty range");
  return std::min(bound - 1, static_cast<std::size_t>(uniform() * static_cast<double>(bound)));
}

void SyntheticSpec::check() const {
  if (queries < 1) throw Error("synthetic spec needs at least one query");
  if (raters < 1) throw Error("synthetic spec needs at least one rater");
  if (raters_per_query < 1) throw Error("synthetic spec needs at least one rater per query");
  if (list_length < 1) throw Error("synthetic lists need at least one result");
  if (preference_depth < 1) throw Error("preference depth must be at least 1");
  if (total_preferences) {
    if (*total_preferences < queries) {
      throw Error("fewer preferences than queries");
    }
    const int per_query = (*total_preferences + queries - 1) / queries;
    if (per_query > raters) {
      throw Error("more preferences per query than raters");
    }
  }
  for (const auto* mix : {&grade_mix_a, &grade_mix_b}) {
    double sum = 0.0;
    for (double w : *mix) {
      if (w < 0.0) throw Error("grade weights must be non-negative");
      sum += w;
    }
    if (sum <= 0.0) throw Error("grade weights must not all be zero");
  }
  for (double p : {rater_noise, flip_probability, click_scale, position_decay}) {
    if (p < 0.0 || p > 1.0) throw Error("probabilities must lie in [0, 1]");
  }
  if (equal_margin < 0.0) throw Error("equal margin must be non-negative");
}

namespace {

std::string padded(int n, int width) {
  std::string out = std::to_string(n);
  if (static_cast<int>(out.size()) < width) out.insert(0, width - out.size(), '0');
  return out;
}

std::string numbered(char prefix, int n, int width) { return prefix + padded(n, width); }

int digits(int n) { return static_cast<int>(std::to_string(n).size()); }

/// `total` grades distributed by largest remainder over `mix`, shuffled.
std::vector<int> latent_grades(const std::array<double, 6>& mix, std::size_t total,
                               SynthRng& rng) {
  const double sum = std::accumulate(mix.begin(), mix.end(), 0.0);
  std::array<std::size_t, 6> counts{};
  std::array<double, 6> remainder{};
  std::size_t assigned = 0;
  for (std::size_t g = 0; g < 6; ++g) {
    const double exact = mix[g] / sum * static_cast<double>(total);
    counts[g] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    remainder[g] = exact - static_cast<double>(counts[g]);
    assigned += counts[g];
  }
  while (assigned < total) {
    std::size_t best = 0;
    for (std::size_t g = 1; g < 6; ++g) {
      if (remainder[g] > remainder[best]) best = g;
    }
    ++counts[best];
    remainder[best] = -1.0;
    ++assigned;
  }
  std::vector<int> grades;
  grades.reserve(total);
  for (std::size_t g = 0; g < 6; ++g) grades.insert(grades.end(), counts[g], static_cast<int>(g) + 1);
  for (std::size_t i = grades.size(); i > 1; --i) std::swap(grades[i - 1], grades[rng.below(i)]);
  return grades;
}

QueryType draw_query_type(SynthRng& rng) {
  const double u = rng.uniform();
  if (u < 0.50) return QueryType::Informational;
  if (u < 0.75) return QueryType::Transactional;
  if (u < 0.85) return QueryType::Navigational;
  if (u < 0.95) return QueryType::Factual;
  return QueryType::Meta;
}

int noisy(int grade, double noise, SynthRng& rng) {
  if (!rng.chance(noise)) return grade;
  const int moved = grade + (rng.chance(0.5) ? 1 : -1);
  return std::clamp(moved, 1, 6);
}

}  // namespace

EvaluationDataset generate_synthetic(const SyntheticSpec& spec) {
  spec.check();
  SynthRng rng(spec.seed);
  EvaluationDataset ds;

  const auto per_variant = static_cast<std::size_t>(spec.queries) * spec.list_length;
  const auto grades_a = latent_grades(spec.grade_mix_a, per_variant, rng);
  const auto grades_b = latent_grades(spec.grade_mix_b, per_variant, rng);

  const int qw = std::max(3, digits(spec.queries));
  const int rw = std::max(2, digits(spec.raters));
  const int lw = std::max(2, digits(spec.list_length));

  const int base_raters = std::min(spec.raters_per_query, spec.raters);
  int extra_preferences = 0;
  int per_query_floor = base_raters;
  if (spec.total_preferences) {
    per_query_floor = *spec.total_preferences / spec.queries;
    extra_preferences = *spec.total_preferences % spec.queries;
  }

  int next_rater = 0;
  Timestamp clock = 1'300'000'000;
  for (int q = 0; q < spec.queries; ++q) {
    Query query;
    query.id = numbered('q', q + 1, qw);
    query.query_type = draw_query_type(rng);
    query.language = rng.chance(0.5) ? Language::DE : Language::EN;
    query.text = "synthetic query " + std::to_string(q + 1);
    query.info_need = "information need of " + query.id;
    ds.queries.push_back(query);

    RankedListPair pair{query.id, {}, {}};
    std::vector<int> latent[2];
    for (int r = 0; r < spec.list_length; ++r) {
      const auto slot = static_cast<std::size_t>(q) * spec.list_length + r;
      pair.variant_a.push_back(query.id + "-a" + padded(r + 1, lw));
      pair.variant_b.push_back(query.id + "-b" + padded(r + 1, lw));
      latent[0].push_back(grades_a[slot]);
      latent[1].push_back(grades_b[slot]);
    }
    ds.list_pairs.push_back(pair);

    int assigned = per_query_floor + (q < extra_preferences ? 1 : 0);
    for (int k = 0; k < assigned; ++k) {
      const std::string rater = numbered('u', (next_rater + k) % spec.raters + 1, rw);
      double mean_rel[2] = {0.0, 0.0};
      std::vector<double> rel[2];
      for (int v = 0; v < 2; ++v) {
        const auto& ids = v == 0 ? pair.variant_a : pair.variant_b;
        for (int r = 0; r < spec.list_length; ++r) {
          const int grade = noisy(latent[v][r], spec.rater_noise, rng);
          ds.judgments.push_back({query.id, ids[r], rater, grade, std::nullopt});
          rel[v].push_back(grade_to_unit(grade));
        }
        const int depth = std::min(spec.preference_depth, spec.list_length);
        for (int r = 0; r < depth; ++r) mean_rel[v] += rel[v][r];
        mean_rel[v] /= depth;
      }

      Verdict verdict = Verdict::Equal;
      const double gap = mean_rel[0] - mean_rel[1];
      if (gap > spec.equal_margin) verdict = Verdict::A;
      if (gap < -spec.equal_margin) verdict = Verdict::B;
      if (verdict != Verdict::Equal && rng.chance(spec.flip_probability)) {
        verdict = verdict == Verdict::A ? Verdict::B : Verdict::A;
      }
      ds.preferences.push_back({query.id, rater, verdict});

      if (!spec.sessions) continue;
      for (int v = 0; v < 2; ++v) {
        Session s;
        s.query_id = query.id;
        s.rater_id = rater;
        s.variant = v == 0 ? Variant::A : Variant::B;
        s.start_ts = clock;
        Timestamp t = clock + 3 + static_cast<Timestamp>(rng.below(8));
        double clicked_rel = 0.0;
        for (int r = 0; r < spec.list_length; ++r) {
          const double p = spec.click_scale * rel[v][r] * std::pow(spec.position_decay, r);
          if (rng.chance(p)) {
            s.clicks.push_back({r + 1, t});
            clicked_rel += rel[v][r];
            t += 5 + static_cast<Timestamp>(rng.below(40));
          }
        }
        s.end_ts = t + static_cast<Timestamp>(rng.below(30));
        s.satisfied = !s.clicks.empty() && clicked_rel / s.clicks.size() >= 0.5;
        clock = s.end_ts + 60;
        ds.sessions.push_back(std::move(s));
      }
    }
    next_rater = (next_rater + assigned) % spec.raters;
  }
  return ds;
}

}  // namespace pirkit
