#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>

#include "pirkit/model.hpp"

namespace pirkit {

/// Parameters of a synthetic evaluation study.
///
/// Every query gets two disjoint result lists. Each list slot draws a latent
/// grade from its variant's grade mix; the mix is realized by exact counting
/// (largest remainder) and then shuffled, so with `rater_noise` = 0 the
/// judged grade marginals equal the mix whenever the counts divide evenly.
/// Each assigned rater judges every result of the query (latent grade, moved
/// one step up or down with probability `rater_noise`), states a preference
/// from their own mean relevance over the top `preference_depth` results,
/// and leaves one session per variant.
struct SyntheticSpec {
  int queries = 50;
  int raters = 5;
  int raters_per_query = 3;                 // clamped to `raters`
  std::optional<int> total_preferences;     // spreads unevenly over queries
  int list_length = 10;

  // Weights of grades 1..6 for each variant's latent grades.
  std::array<double, 6> grade_mix_a{3, 3, 2, 1, 1, 0};
  std::array<double, 6> grade_mix_b{1, 1, 2, 2, 2, 2};
  double rater_noise = 0.2;

  // Preference model: a mean-relevance gap within `equal_margin` is EQUAL;
  // otherwise the better list wins, flipped with `flip_probability`.
  int preference_depth = 10;
  double equal_margin = 0.02;
  double flip_probability = 0.0;

  // Click model: rank r is clicked with probability
  // click_scale * relevance * position_decay^(r - 1).
  bool sessions = true;
  double click_scale = 0.8;
  double position_decay = 0.85;

  std::uint64_t seed = 1;

  /// Throws Error when the parameters cannot produce a dataset.
  void check() const;
};

/// The generator's random engine: 64-bit Mersenne Twister with explicit
/// integer-to-real and bounded-integer maps (std distributions differ
/// across standard libraries).
class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : engine_(seed) {}

  double uniform();                      // [0, 1)
  std::size_t below(std::size_t bound);  // [0, bound)
  bool chance(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

EvaluationDataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace pirkit
