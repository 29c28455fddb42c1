#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pirkit/scales.hpp"

namespace pirkit {

// All metrics read unit relevances in [0, 1], rank 1 first. A cut-off `c`
// must not exceed the list length; anything past rank c is ignored.

/// Mean relevance of the top c results. With `relevant_above` set, the
/// classical fraction of results whose relevance exceeds it.
double precision_at(std::span<const double> list, int c,
                    std::optional<double> relevant_above = std::nullopt);

double cumulated_gain(std::span<const double> list, int c);
double dcg(std::span<const double> list, int c, const DiscountFunction& f);

/// The `c` best relevances of the pool in descending order (padded with
/// zeros when the pool is smaller than c).
std::vector<double> ideal_list(std::span<const double> pool, int c);

/// DCG over the ideal ordering of `pool`. nullopt when the ideal DCG is zero:
/// such a query carries no information and is excluded from evaluation.
std::optional<double> ndcg(std::span<const double> list, std::span<const double> pool, int c,
                           const DiscountFunction& f);

enum class ApNorm { ByKnownRelevant, ByEvaluatedCount };

/// Average precision with the rank divisor replaced by the discount, i.e.
///   sum_r rel(r) * (sum_{k<=r} rel(k)) * weight(r)
/// divided by the known-relevant count or by c. nullopt on a zero divisor.
std::optional<double> average_precision(std::span<const double> list, int c,
                                        const DiscountFunction& f, ApNorm norm,
                                        std::optional<double> known_relevant = std::nullopt);

/// Highest grade on the ERR gain scale: relevance r maps to grade 5r.
inline constexpr double kErrMaxGrade = 5.0;

double err(std::span<const double> list, int c, const DiscountFunction& f);

/// Discount weight at the first rank whose relevance exceeds `relevant_above`,
/// 0 when no such rank lies within c.
double reciprocal_rank(std::span<const double> list, int c, const DiscountFunction& f,
                       double relevant_above = 0.0);

/// Normalized expected search length for a cumulative relevance target n.
double esl(std::span<const double> list, int c, const DiscountFunction& f, double n);

double mean_over_queries(std::span<const double> scores);

}  // namespace pirkit
