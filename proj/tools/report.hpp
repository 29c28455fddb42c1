#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pirkit/implicit.hpp"
#include "pirkit/pir.hpp"

namespace pirkit::report {

/// Fixed four-decimal rendering used by every table.
std::string fmt4(double value);

/// A plot-ready table: `x` in column 1, one named series per further column.
struct SeriesTable {
  std::string x_label;
  std::vector<double> x;
  std::vector<std::string> names;
  std::vector<std::vector<double>> series;  // series[i][k] pairs with x[k]
};

void write_tsv(std::ostream& out, const SeriesTable& table);

/// Minimal SVG line chart of the same numbers.
void write_svg(std::ostream& out, const SeriesTable& table, const std::string& title,
               const std::string& y_label);

/// Every grid cell, one row each.
void write_grid(std::ostream& out, const PirGrid& grid);

/// PIR at the best threshold per cut-off, one column per config.
SeriesTable best_threshold_series(const PirGrid& grid);
/// The threshold chosen for each cell of best_threshold_series.
SeriesTable best_threshold_choice(const PirGrid& grid);
/// PIR at threshold 0 per cut-off, one column per config.
SeriesTable zero_threshold_series(const PirGrid& grid);
/// PIR against threshold for one config, one column per cut-off.
SeriesTable threshold_series(const PirGrid& grid, std::size_t config);

/// Threshold evolution of the five categories (shares of all pairs).
SeriesTable breakdown_table(const std::vector<PirCell>& cells);

void write_stats(std::ostream& out, const DescriptiveStats& stats);

/// Filesystem-safe rendering of a config label.
std::string slug(const std::string& label);

}  // namespace pirkit::report
