#pragma once

#include <vector>

#include "pirkit/model.hpp"
#include "pirkit/pir.hpp"

namespace pirkit {

/// Reference PIR by direct enumeration, written without the engine's
/// indexing, pooling or counting code. Slow on purpose; tests compare the
/// engine against it.
struct OracleResult {
  double pir = 0.5;
  bool empty = false;  // no pair with a stated preference
};

OracleResult oracle_pir(const EvaluationDataset& dataset, const MetricConfig& config, double t,
                        int cutoff, ValidationMode mode = ValidationMode::Strict);

/// Same as oracle_pir at each threshold, sharing the per-pair scores.
std::vector<OracleResult> oracle_pir_row(const EvaluationDataset& dataset,
                                         const MetricConfig& config, int cutoff,
                                         const std::vector<double>& thresholds,
                                         ValidationMode mode = ValidationMode::Strict);

/// oracle_pir_row at each cut-off, reading the judgments once.
std::vector<std::vector<OracleResult>> oracle_pir_rows(const EvaluationDataset& dataset,
                                                       const MetricConfig& config,
                                                       const std::vector<int>& cutoffs,
                                                       const std::vector<double>& thresholds,
                                                       ValidationMode mode = ValidationMode::Strict);

}  // namespace pirkit
