#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pirkit/model.hpp"
#include "pirkit/pir.hpp"
#include "pirkit/synth.hpp"

namespace pirkit::testing {

std::filesystem::path fixture(const std::string& name);

/// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// One query whose lists carry the given grades for a single rater "u1".
/// Result ids are "<query>-a<rank>" and "<query>-b<rank>".
void add_query(EvaluationDataset& ds, const std::string& query_id, const std::vector<int>& grades_a,
               const std::vector<int>& grades_b, Verdict verdict,
               const std::string& rater = "u1");

/// Same dataset with variants A and B exchanged and A/B verdicts flipped.
EvaluationDataset swapped(const EvaluationDataset& ds);

/// A small seeded synthetic dataset whose shape varies with the seed.
SyntheticSpec small_spec(std::uint64_t seed);

/// All metric configs of the full family: metric x discount x scale x source.
std::vector<MetricConfig> every_config();

/// Outcome of one randomized property suite.
struct PropertyResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0 && cases > 0; }
};

PropertyResult property_swap_symmetry(int cases);
PropertyResult property_sign_offset_invariance(int cases);
PropertyResult property_threshold_monotonicity(int cases);
PropertyResult property_pir_quantization(int cases);
PropertyResult property_ndcg_bounds(int cases);
PropertyResult property_esl_endpoints(int cases);
PropertyResult property_mrr_discount_invariance(int cases);
PropertyResult property_err_monotonicity(int cases);

std::vector<PropertyResult> all_properties(int cases);

}  // namespace pirkit::testing
