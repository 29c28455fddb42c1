#include "pirkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

namespace pirkit {

namespace {

std::span<const double> top(std::span<const double> list, int c) {
  if (c < 1) throw Error("cut-off " + std::to_string(c) + " is not >= 1");
  if (static_cast<std::size_t>(c) > list.size()) {
    throw Error("cut-off " + std::to_string(c) + " exceeds list length " +
                std::to_string(list.size()));
  }
  return list.first(static_cast<std::size_t>(c));
}

// Sums of unit relevances such as 0.6 + 0.2 + 0.2 must still meet a target of 1.
constexpr double kRelevanceSumTolerance = 1e-9;

double stop_probability(double rel) {
  const double grade = kErrMaxGrade * rel;
  return (std::exp2(grade) - 1.0) / std::exp2(kErrMaxGrade);
}

}  // namespace

double precision_at(std::span<const double> list, int c, std::optional<double> relevant_above) {
  const auto head = top(list, c);
  double sum = 0.0;
  for (double rel : head) {
    sum += relevant_above ? (rel > *relevant_above ? 1.0 : 0.0) : rel;
  }
  return sum / c;
}

double cumulated_gain(std::span<const double> list, int c) {
  const auto head = top(list, c);
  return std::accumulate(head.begin(), head.end(), 0.0);
}

double dcg(std::span<const double> list, int c, const DiscountFunction& f) {
  const auto head = top(list, c);
  double sum = 0.0;
  for (std::size_t i = 0; i < head.size(); ++i) {
    sum += head[i] * f.weight(static_cast<int>(i) + 1);
  }
  return sum;
}

std::vector<double> ideal_list(std::span<const double> pool, int c) {
  std::vector<double> ideal(pool.begin(), pool.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  ideal.resize(static_cast<std::size_t>(c), 0.0);
  return ideal;
}

std::optional<double> ndcg(std::span<const double> list, std::span<const double> pool, int c,
                           const DiscountFunction& f) {
  const auto ideal = ideal_list(pool, c);
  const double best = dcg(ideal, c, f);
  if (best <= 0.0) return std::nullopt;
  return dcg(list, c, f) / best;
}

std::optional<double> average_precision(std::span<const double> list, int c,
                                        const DiscountFunction& f, ApNorm norm,
                                        std::optional<double> known_relevant) {
  const auto head = top(list, c);
  double divisor = c;
  if (norm == ApNorm::ByKnownRelevant) {
    if (!known_relevant) throw Error("known-relevant normalization needs a relevant count");
    divisor = *known_relevant;
  }
  if (divisor <= 0.0) return std::nullopt;

  double running = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < head.size(); ++i) {
    running += head[i];
    sum += head[i] * running * f.weight(static_cast<int>(i) + 1);
  }
  return sum / divisor;
}

double err(std::span<const double> list, int c, const DiscountFunction& f) {
  const auto head = top(list, c);
  double not_yet_satisfied = 1.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < head.size(); ++i) {
    const double stop = stop_probability(head[i]);
    sum += f.weight(static_cast<int>(i) + 1) * not_yet_satisfied * stop;
    not_yet_satisfied *= 1.0 - stop;
  }
  return sum;
}

double reciprocal_rank(std::span<const double> list, int c, const DiscountFunction& f,
                       double relevant_above) {
  const auto head = top(list, c);
  for (std::size_t i = 0; i < head.size(); ++i) {
    if (head[i] > relevant_above) return f.weight(static_cast<int>(i) + 1);
  }
  return 0.0;
}

double esl(std::span<const double> list, int c, const DiscountFunction& f, double n) {
  if (!(n > 0.0)) throw Error("ESL relevance target must be positive");
  const auto head = top(list, c);
  // The target rank defaults to c when the cumulative relevance never reaches n.
  std::size_t target = head.size();
  double cumulative = 0.0;
  for (std::size_t i = 0; i < head.size(); ++i) {
    cumulative += head[i];
    if (cumulative >= n - kRelevanceSumTolerance) {
      target = i + 1;
      break;
    }
  }
  double found = 0.0;
  for (std::size_t i = 0; i < target; ++i) {
    found += head[i] * f.weight(static_cast<int>(i) + 1);
  }
  return 1.0 - (static_cast<double>(target) - found) / c;
}

double mean_over_queries(std::span<const double> scores) {
  if (scores.empty()) throw Error("cannot average an empty score set");
  return std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
}

}  // namespace pirkit
