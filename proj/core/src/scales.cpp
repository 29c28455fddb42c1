#include "pirkit/scales.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>

namespace pirkit {

namespace {

void check_grade(int grade) {
  if (grade < 1 || grade > 6) {
    throw Error("grade " + std::to_string(grade) + " outside 1..6");
  }
}

double log_discount(int rank, int base) {
  if (rank < base) return 1.0;
  const double r = rank;
  if (base == 2) return 1.0 / std::log2(r);
  return 1.0 / (std::log(r) / std::log(static_cast<double>(base)));
}

}  // namespace

std::string_view to_string(RelevanceScale s) {
  switch (s) {
    case RelevanceScale::SixPoint: return "six";
    case RelevanceScale::R2_1: return "r2-1";
    case RelevanceScale::R2_3: return "r2-3";
    case RelevanceScale::R2_5: return "r2-5";
    case RelevanceScale::R3_1: return "r3-1";
    case RelevanceScale::R3_2: return "r3-2";
  }
  return "?";
}

RelevanceScale parse_scale(std::string_view s) {
  for (RelevanceScale scale : kAllScales) {
    if (to_string(scale) == s) return scale;
  }
  if (s == "six-point" || s == "6") return RelevanceScale::SixPoint;
  throw Error("unknown relevance scale '" + std::string(s) + "'");
}

double grade_to_unit(int grade) {
  check_grade(grade);
  return (6 - grade) / 5.0;
}

double conflate(int grade, RelevanceScale scale) {
  check_grade(grade);
  switch (scale) {
    case RelevanceScale::SixPoint: return grade_to_unit(grade);
    case RelevanceScale::R2_1: return grade <= 1 ? 1.0 : 0.0;
    case RelevanceScale::R2_3: return grade <= 3 ? 1.0 : 0.0;
    case RelevanceScale::R2_5: return grade <= 5 ? 1.0 : 0.0;
    case RelevanceScale::R3_1: return grade == 1 ? 1.0 : (grade == 6 ? 0.0 : 0.5);
    case RelevanceScale::R3_2: return grade <= 2 ? 1.0 : (grade <= 4 ? 0.5 : 0.0);
  }
  throw Error("unhandled relevance scale");
}

std::string_view to_string(DiscountKind k) {
  switch (k) {
    case DiscountKind::None: return "none";
    case DiscountKind::Log5: return "log5";
    case DiscountKind::Log2: return "log2";
    case DiscountKind::Root: return "root";
    case DiscountKind::Rank: return "rank";
    case DiscountKind::Square: return "square";
    case DiscountKind::ClickBased: return "click";
  }
  return "?";
}

DiscountKind parse_discount(std::string_view s) {
  for (DiscountKind k : kAllDiscounts) {
    if (to_string(k) == s) return k;
  }
  if (s == "click-based") return DiscountKind::ClickBased;
  throw Error("unknown discount function '" + std::string(s) + "'");
}

ClickWeights::ClickWeights(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error("click weight table is empty");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!(w > 0.0 && w <= 1.0)) {
      throw Error("click weight for rank " + std::to_string(i + 1) + " is outside (0, 1]");
    }
  }
  if (weights_.front() != 1.0) throw Error("click weight for rank 1 must be 1");
}

ClickWeights ClickWeights::example() {
  return ClickWeights({1.0, 0.24, 0.27, 0.12, 0.10, 0.07, 0.09, 0.05, 0.04, 0.03,
                       0.02, 0.02, 0.015, 0.015, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01});
}

ClickWeights ClickWeights::parse(std::istream& in, std::string_view source) {
  std::vector<double> weights;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    int rank = 0;
    double weight = 0.0;
    if (!(fields >> rank >> weight)) {
      throw Error(std::string(source) + ":" + std::to_string(line_no) +
                  ": expected '<rank> <weight>'");
    }
    if (rank != static_cast<int>(weights.size()) + 1) {
      throw Error(std::string(source) + ":" + std::to_string(line_no) + ": expected rank " +
                  std::to_string(weights.size() + 1) + ", got " + std::to_string(rank));
    }
    weights.push_back(weight);
  }
  return ClickWeights(std::move(weights));
}

ClickWeights ClickWeights::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open click weight table " + path.string());
  return parse(in, path.string());
}

double ClickWeights::at(int rank) const {
  if (!covers(rank)) {
    throw Error("click weight table has no entry for rank " + std::to_string(rank));
  }
  return weights_[static_cast<std::size_t>(rank - 1)];
}

DiscountFunction::DiscountFunction(DiscountKind kind) : kind_(kind) {
  if (kind_ == DiscountKind::ClickBased) table_ = ClickWeights::example();
}

DiscountFunction::DiscountFunction(DiscountKind kind, ClickWeights table)
    : kind_(kind), table_(std::move(table)) {}

double DiscountFunction::weight(int rank) const {
  if (rank < 1) throw Error("rank " + std::to_string(rank) + " is not >= 1");
  const double r = rank;
  switch (kind_) {
    case DiscountKind::None: return 1.0;
    case DiscountKind::Log5: return log_discount(rank, 5);
    case DiscountKind::Log2: return log_discount(rank, 2);
    case DiscountKind::Root: return 1.0 / std::sqrt(r);
    case DiscountKind::Rank: return 1.0 / r;
    case DiscountKind::Square: return 1.0 / (r * r);
    case DiscountKind::ClickBased: return table_.at(rank);
  }
  throw Error("unhandled discount function");
}

double discount_weight(const DiscountFunction& f, int rank) { return f.weight(rank); }

}  // namespace pirkit
