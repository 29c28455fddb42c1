#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string_view>
#include <vector>

#include "pirkit/model.hpp"

namespace pirkit {

/// Relevance scales a six-point grade can be read on. R2_k is binary with
/// grades 1..k relevant; R3_1 and R3_2 are ternary with a "partially
/// relevant" middle band.
enum class RelevanceScale { SixPoint, R2_1, R2_3, R2_5, R3_1, R3_2 };

inline constexpr RelevanceScale kAllScales[] = {
    RelevanceScale::SixPoint, RelevanceScale::R2_1, RelevanceScale::R2_3,
    RelevanceScale::R2_5,     RelevanceScale::R3_1, RelevanceScale::R3_2};

std::string_view to_string(RelevanceScale s);
RelevanceScale parse_scale(std::string_view s);

/// Linear map 1 -> 1.0, 2 -> 0.8, ..., 6 -> 0.0.
double grade_to_unit(int grade);

/// Unit relevance of a raw grade under the given scale.
double conflate(int grade, RelevanceScale scale);

enum class DiscountKind { None, Log5, Log2, Root, Rank, Square, ClickBased };

inline constexpr DiscountKind kAllDiscounts[] = {
    DiscountKind::None, DiscountKind::Log5,   DiscountKind::Log2,      DiscountKind::Root,
    DiscountKind::Rank, DiscountKind::Square, DiscountKind::ClickBased};

std::string_view to_string(DiscountKind k);
DiscountKind parse_discount(std::string_view s);

/// Rank-indexed weight table for the click-based discount. Entry i holds the
/// weight of rank i + 1. Weights must lie in (0, 1] and the first must be 1.
/// Monotonicity is not required.
class ClickWeights {
 public:
  ClickWeights() = default;
  explicit ClickWeights(std::vector<double> weights);

  /// Illustrative table shaped like published eye-tracking click rates
  /// (steep drop after rank 1, bumps at ranks 3 and 7). It is an example,
  /// not measured data.
  static ClickWeights example();

  /// Reads "rank weight" lines; ranks must run 1..n without gaps.
  static ClickWeights parse(std::istream& in, std::string_view source = "<stream>");
  static ClickWeights load(const std::filesystem::path& path);

  std::size_t size() const { return weights_.size(); }
  bool covers(int rank) const { return rank >= 1 && static_cast<std::size_t>(rank) <= size(); }
  double at(int rank) const;
  const std::vector<double>& weights() const { return weights_; }

  bool operator==(const ClickWeights&) const = default;

 private:
  std::vector<double> weights_;
};

class DiscountFunction {
 public:
  DiscountFunction() = default;
  explicit DiscountFunction(DiscountKind kind);
  DiscountFunction(DiscountKind kind, ClickWeights table);

  static DiscountFunction click_based(ClickWeights table) {
    return DiscountFunction(DiscountKind::ClickBased, std::move(table));
  }

  DiscountKind kind() const { return kind_; }
  const ClickWeights& click_weights() const { return table_; }

  /// Weight in (0, 1] applied to the result at `rank` (1-based).
  double weight(int rank) const;

  bool operator==(const DiscountFunction&) const = default;

 private:
  DiscountKind kind_ = DiscountKind::None;
  ClickWeights table_;
};

double discount_weight(const DiscountFunction& f, int rank);

}  // namespace pirkit
