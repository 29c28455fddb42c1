#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace pirkit::report {

std::string fmt4(double value) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << value;
  std::string s = os.str();
  if (s == "-0.0000") s = "0.0000";
  return s;
}

void write_tsv(std::ostream& out, const SeriesTable& table) {
  out << table.x_label;
  for (const auto& name : table.names) out << '\t' << name;
  out << '\n';
  for (std::size_t k = 0; k < table.x.size(); ++k) {
    out << fmt4(table.x[k]);
    for (const auto& s : table.series) out << '\t' << fmt4(s[k]);
    out << '\n';
  }
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_svg(std::ostream& out, const SeriesTable& table, const std::string& title,
               const std::string& y_label) {
  const double width = 720, height = 420;
  const double left = 60, right = 220, top = 40, bottom = 50;
  const double plot_w = width - left - right, plot_h = height - top - bottom;

  double x_min = table.x.empty() ? 0.0 : table.x.front();
  double x_max = table.x.empty() ? 1.0 : table.x.back();
  if (x_max == x_min) x_max = x_min + 1.0;
  double y_min = 0.0, y_max = 1.0;
  for (const auto& s : table.series) {
    for (double v : s) {
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  }
  auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return top + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << left << "\" y=\"20\" font-size=\"14\">" << escape(title) << "</text>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
      << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = y_min + (y_max - y_min) * i / 4.0;
    out << "<text x=\"" << left - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">"
        << fmt4(y) << "</text>\n";
  }
  for (double x : table.x) {
    out << "<text x=\"" << px(x) << "\" y=\"" << top + plot_h + 16
        << "\" text-anchor=\"middle\">" << fmt4(x) << "</text>\n";
  }
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">" << escape(table.x_label) << "</text>\n";
  out << "<text x=\"14\" y=\"" << top + plot_h / 2 << "\" transform=\"rotate(-90 14 "
      << top + plot_h / 2 << ")\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";

  for (std::size_t i = 0; i < table.series.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < table.x.size(); ++k) {
      out << (k ? " " : "") << px(table.x[k]) << ',' << py(table.series[i][k]);
    }
    out << "\"/>\n";
    const double ly = top + 12 + 14.0 * static_cast<double>(i);
    out << "<line x1=\"" << left + plot_w + 10 << "\" y1=\"" << ly - 4 << "\" x2=\""
        << left + plot_w + 30 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\"/>\n";
    out << "<text x=\"" << left + plot_w + 34 << "\" y=\"" << ly << "\">"
        << escape(table.names[i]) << "</text>\n";
  }
  out << "</svg>\n";
}

void write_grid(std::ostream& out, const PirGrid& grid) {
  out << "config\tcutoff\tthreshold\tpir\tcorrect_pref\tcorrect_equal\tfalse_pref\t"
         "missed_pref\treversed_pref\texcluded\tempty\n";
  for (std::size_t ci = 0; ci < grid.configs().size(); ++ci) {
    const std::string label = grid.configs()[ci].label();
    for (std::size_t ki = 0; ki < grid.cutoffs().size(); ++ki) {
      for (const auto& cell : grid.row(ci, ki)) {
        const auto& n = cell.counts;
        out << label << '\t' << grid.cutoffs()[ki] << '\t' << fmt4(cell.threshold) << '\t'
            << fmt4(cell.pir) << '\t' << n.correct_pref << '\t' << n.correct_equal << '\t'
            << n.false_pref << '\t' << n.missed_pref << '\t' << n.reversed_pref << '\t'
            << cell.excluded << '\t' << (cell.empty_denominator ? 1 : 0) << '\n';
      }
    }
  }
}

namespace {

template <typename F>
SeriesTable per_cutoff(const PirGrid& grid, F value) {
  SeriesTable t;
  t.x_label = "cutoff";
  for (int c : grid.cutoffs()) t.x.push_back(c);
  for (std::size_t ci = 0; ci < grid.configs().size(); ++ci) {
    t.names.push_back(grid.configs()[ci].label());
    std::vector<double> s;
    for (std::size_t ki = 0; ki < grid.cutoffs().size(); ++ki) s.push_back(value(grid.row(ci, ki)));
    t.series.push_back(std::move(s));
  }
  return t;
}

}  // namespace

SeriesTable best_threshold_series(const PirGrid& grid) {
  return per_cutoff(grid, [](std::span<const PirCell> row) { return best_threshold(row).pir; });
}

SeriesTable best_threshold_choice(const PirGrid& grid) {
  return per_cutoff(grid,
                    [](std::span<const PirCell> row) { return best_threshold(row).threshold; });
}

SeriesTable zero_threshold_series(const PirGrid& grid) {
  return per_cutoff(grid, [](std::span<const PirCell> row) { return row.front().pir; });
}

SeriesTable threshold_series(const PirGrid& grid, std::size_t config) {
  SeriesTable t;
  t.x_label = "threshold";
  t.x = grid.thresholds();
  for (std::size_t ki = 0; ki < grid.cutoffs().size(); ++ki) {
    t.names.push_back("cutoff " + std::to_string(grid.cutoffs()[ki]));
    std::vector<double> s;
    for (const auto& cell : grid.row(config, ki)) s.push_back(cell.pir);
    t.series.push_back(std::move(s));
  }
  return t;
}

SeriesTable breakdown_table(const std::vector<PirCell>& cells) {
  SeriesTable t;
  t.x_label = "threshold";
  t.names = {"pir", "correct_pref", "correct_equal", "false_pref", "missed_pref",
             "reversed_pref"};
  t.series.resize(t.names.size());
  for (const auto& cell : cells) {
    t.x.push_back(cell.threshold);
    const auto& n = cell.counts;
    const double total = std::max<double>(1.0, static_cast<double>(n.total()));
    t.series[0].push_back(cell.pir);
    t.series[1].push_back(n.correct_pref / total);
    t.series[2].push_back(n.correct_equal / total);
    t.series[3].push_back(n.false_pref / total);
    t.series[4].push_back(n.missed_pref / total);
    t.series[5].push_back(n.reversed_pref / total);
  }
  return t;
}

namespace {

std::string optional4(const std::optional<double>& v) { return v ? fmt4(*v) : "undefined"; }

}  // namespace

void write_stats(std::ostream& out, const DescriptiveStats& stats) {
  out << "queries";
  std::size_t total = 0;
  for (const auto& [type, n] : stats.query_types) total += n;
  out << '\t' << total << '\n';
  for (const auto& [type, n] : stats.query_types) {
    out << "query_type\t" << to_string(type) << '\t' << n << '\n';
  }
  out << "mean_query_words\t" << optional4(stats.mean_query_words) << '\n';

  for (Variant v : {Variant::A, Variant::B}) {
    const auto& vs = stats.variant(v);
    const std::string p = std::string("variant_") + std::string(to_string(v));
    out << p << "\tsessions\t" << vs.sessions << '\n';
    out << p << "\tzero_click_share\t" << optional4(vs.zero_click_share) << '\n';
    out << p << "\tsatisfaction_share\t" << optional4(vs.satisfaction_share) << '\n';
    for (const auto& [clicks, n] : vs.clicks_per_session) {
      out << p << "\tclicks_per_session\t" << clicks << '\t' << n << '\n';
    }
    for (const auto& [rank, n] : vs.clicks_by_rank) {
      out << p << "\tclicks_at_rank\t" << rank << '\t' << n << '\n';
    }
    for (const auto& [rank, mean] : vs.mean_relevance_by_rank) {
      out << p << "\tmean_relevance_at_rank\t" << rank << '\t' << fmt4(mean) << '\n';
    }
    for (const auto& [rank, dist] : vs.grades_by_rank) {
      out << p << "\tgrades_at_rank\t" << rank;
      for (std::size_t n : dist) out << '\t' << n;
      out << '\n';
    }
  }
}

std::string slug(const std::string& label) {
  std::string out;
  for (char c : label) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.') {
      out += c;
    } else {
      out += '_';
    }
  }
  return out;
}

}  // namespace pirkit::report
