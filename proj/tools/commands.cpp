#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "pirkit/implicit.hpp"
#include "pirkit/io.hpp"
#include "pirkit/metrics.hpp"
#include "pirkit/pir.hpp"
#include "pirkit/synth.hpp"
#include "report.hpp"

namespace pirkit::cli {

namespace fs = std::filesystem;
using report::fmt4;

namespace {

/// A flag value that cannot be interpreted; maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("invalid " + what + " '" + s + "'");
}

int parse_int(const std::string& s, const std::string& what) {
  const double v = parse_number(s, what);
  if (v != static_cast<int>(v)) throw UsageError("invalid " + what + " '" + s + "'");
  return static_cast<int>(v);
}

/// "lo:hi:step" or a comma list.
std::vector<double> parse_thresholds(const std::string& spec) {
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw UsageError("thresholds must be lo:hi:step, got '" + spec + "'");
    try {
      return threshold_grid(parse_number(parts[0], "threshold"), parse_number(parts[1], "threshold"),
                            parse_number(parts[2], "threshold step"));
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  std::vector<double> out;
  for (const auto& p : split(spec, ',')) out.push_back(parse_number(p, "threshold"));
  if (out.empty()) throw UsageError("empty threshold list");
  return out;
}

/// "1-10", "1,3,5" or a mix such as "1-3,10".
std::vector<int> parse_cutoffs(const std::string& spec) {
  std::vector<int> out;
  for (const auto& p : split(spec, ',')) {
    const auto dash = p.find('-');
    if (dash == std::string::npos) {
      out.push_back(parse_int(p, "cut-off"));
      continue;
    }
    const int lo = parse_int(p.substr(0, dash), "cut-off");
    const int hi = parse_int(p.substr(dash + 1), "cut-off");
    if (lo > hi) throw UsageError("descending cut-off range '" + p + "'");
    for (int c = lo; c <= hi; ++c) out.push_back(c);
  }
  if (out.empty()) throw UsageError("empty cut-off list");
  for (int c : out) {
    if (c < 1 || c > kMaxCutoff) {
      throw UsageError("cut-off " + std::to_string(c) + " outside 1.." + std::to_string(kMaxCutoff));
    }
  }
  return out;
}

std::pair<Timestamp, Timestamp> parse_band(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 2) throw UsageError("band must be lo:hi, got '" + spec + "'");
  const auto lo = static_cast<Timestamp>(parse_int(parts[0], "band bound"));
  const auto hi = static_cast<Timestamp>(parse_int(parts[1], "band bound"));
  if (lo > hi) throw UsageError("band lower bound exceeds upper bound");
  return {lo, hi};
}

std::array<double, 6> parse_mix(const std::string& spec) {
  const auto parts = split(spec, ',');
  if (parts.size() != 6) throw UsageError("grade mix needs six weights, got '" + spec + "'");
  std::array<double, 6> mix{};
  for (std::size_t i = 0; i < 6; ++i) mix[i] = parse_number(parts[i], "grade weight");
  return mix;
}

/// Expands a comma list (or "all") through an enum parser, keeping order and
/// dropping repeats.
template <typename T, std::size_t N, typename Parse>
std::vector<T> parse_list(const std::string& spec, const T (&all)[N], Parse parse,
                          const std::string& what) {
  if (spec == "all") return {std::begin(all), std::end(all)};
  std::vector<T> out;
  for (const auto& p : split(spec, ',')) {
    T v;
    try {
      v = parse(p);
    } catch (const Error&) {
      throw UsageError("unknown " + what + " '" + p + "'");
    }
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty " + what + " list");
  return out;
}

constexpr QueryType kAllQueryTypes[] = {QueryType::Informational, QueryType::Transactional,
                                        QueryType::Navigational, QueryType::Factual,
                                        QueryType::Meta};
constexpr RatingSource kAllSources[] = {RatingSource::SameUser, RatingSource::OtherUsers};

std::optional<std::set<QueryType>> parse_query_filter(const std::string& spec) {
  if (spec.empty()) return std::nullopt;
  const auto types = parse_list(spec, kAllQueryTypes, parse_query_type, "query type");
  return std::set<QueryType>(types.begin(), types.end());
}

ApNorm parse_norm(const std::string& s) {
  if (s == "known-relevant" || s == "known") return ApNorm::ByKnownRelevant;
  if (s == "evaluated" || s == "cutoff") return ApNorm::ByEvaluatedCount;
  throw UsageError("unknown MAP normalization '" + s + "' (known-relevant or evaluated)");
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream file(path);
  if (!file) throw Error("cannot write '" + path.string() + "'");
  return file;
}

void write_table(const fs::path& dir, const std::string& stem, const report::SeriesTable& table,
                 bool svg, const std::string& title, const std::string& y_label) {
  auto tsv = open_output(dir / (stem + ".tsv"));
  report::write_tsv(tsv, table);
  if (svg) {
    auto chart = open_output(dir / (stem + ".svg"));
    report::write_svg(chart, table, title, y_label);
  }
}

// ---------------------------------------------------------------------------
// Shared option groups

struct DataFlags {
  std::string dir;
  bool strict = false;
  bool lenient = false;

  ValidationMode mode() const { return lenient ? ValidationMode::Lenient : ValidationMode::Strict; }

  void add(CLI::App& app) {
    app.add_option("dataset", dir, "Dataset directory")->required()->check(CLI::ExistingDirectory);
    auto* s = app.add_flag("--strict", strict, "Missing judgments are errors (default)");
    auto* l = app.add_flag("--lenient", lenient, "Missing judgments count as relevance 0");
    s->excludes(l);
  }
};

struct MetricFlags {
  std::string metric = "ndcg";
  std::string discount = "log2";
  std::string scale = "six";
  std::string source = "same";
  std::string query_types;
  std::string norm = "evaluated";
  std::string click_table;
  double esl_n = 1.0;
  double relevant_above = 0.0;

  void add(CLI::App& app, bool families) {
    const std::string list = families ? " (comma list or 'all')" : "";
    app.add_option("--metric", metric, "precision, ndcg, map, err, mrr, esl" + list)
        ->capture_default_str();
    app.add_option("--discount", discount,
                   "none, log5, log2, root, rank, square, click" + list)
        ->capture_default_str();
    app.add_option("--scale", scale, "six, r2-1, r2-3, r2-5, r3-1, r3-2" + list)
        ->capture_default_str();
    if (families) {
      app.add_option("--rating-source", source, "same, other or both")->capture_default_str();
    }
    app.add_option("--query-type", query_types, "Restrict to these query types (comma list)");
    app.add_option("--norm,--ap-norm", norm, "MAP normalization: evaluated or known-relevant")
        ->capture_default_str();
    app.add_option("--n,--esl-n", esl_n, "ESL target relevance sum")->capture_default_str();
    app.add_option("--relevant-above", relevant_above,
                   "Reciprocal rank: minimal unit relevance counted as relevant (exclusive)")
        ->capture_default_str();
    app.add_option("--click-table", click_table,
                   "Rank/weight table for the click-based discount (default: built-in example)");
  }

  std::vector<MetricConfig> configs() const {
    const auto metrics = parse_list(metric, kAllMetrics, parse_metric, "metric");
    const auto kinds = parse_list(discount, kAllDiscounts, parse_discount, "discount");
    const auto scales = parse_list(scale, kAllScales, parse_scale, "scale");
    std::vector<RatingSource> sources;
    if (source == "both") {
      sources.assign(std::begin(kAllSources), std::end(kAllSources));
    } else {
      sources = parse_list(source, kAllSources, parse_rating_source, "rating source");
    }
    const auto filter = parse_query_filter(query_types);
    const ApNorm ap_norm = parse_norm(norm);

    std::optional<ClickWeights> table;
    if (!click_table.empty()) table = ClickWeights::load(click_table);

    std::vector<MetricConfig> out;
    for (Metric m : metrics) {
      for (DiscountKind k : kinds) {
        for (RelevanceScale s : scales) {
          for (RatingSource src : sources) {
            MetricConfig c;
            c.metric = m;
            c.discount = (k == DiscountKind::ClickBased && table)
                             ? DiscountFunction::click_based(*table)
                             : DiscountFunction(k);
            c.scale = s;
            c.rating_source = src;
            c.query_filter = filter;
            c.ap_norm = ap_norm;
            c.relevant_above = relevant_above;
            if (m == Metric::Esl) c.esl_n = esl_n;
            out.push_back(std::move(c));
          }
        }
      }
    }
    return out;
  }
};

void print_issue(std::ostream& os, const ValidationIssue& issue) {
  os << (issue.fatal ? "error: " : "warning: ") << to_string(issue.kind) << ": "
     << issue.message << '\n';
}

/// Validates `dataset`, printing warnings to `err`; throws on fatal issues.
void check_dataset(const EvaluationDataset& dataset, const ValidationOptions& options,
                   std::ostream& err) {
  auto result = validate(dataset, options);
  if (!result.ok()) throw ValidationError(std::move(result));
  for (const auto& issue : result.issues) print_issue(err, issue);
}

EvaluationDataset load(const DataFlags& data, ValidationOptions options, std::ostream& err) {
  options.mode = data.mode();
  auto dataset = read_dataset(DatasetPaths::in_directory(data.dir));
  check_dataset(dataset, options, err);
  return dataset;
}

EvaluationDataset load(const DataFlags& data, int max_cutoff, bool other_users,
                       std::ostream& err) {
  ValidationOptions options;
  options.max_cutoff = max_cutoff;
  options.require_other_user_coverage = other_users;
  return load(data, options, err);
}

bool uses_other_users(const std::vector<MetricConfig>& configs) {
  return std::any_of(configs.begin(), configs.end(), [](const MetricConfig& c) {
    return c.rating_source == RatingSource::OtherUsers;
  });
}

void report_cell(std::ostream& out, const PirCell& cell) {
  const auto& n = cell.counts;
  out << "threshold\t" << fmt4(cell.threshold) << '\n'
      << "pir\t" << fmt4(cell.pir) << '\n';
  const double total = std::max<double>(1.0, static_cast<double>(n.total()));
  const std::pair<const char*, std::size_t> rows[] = {
      {"correct_pref", n.correct_pref}, {"correct_equal", n.correct_equal},
      {"false_pref", n.false_pref},     {"missed_pref", n.missed_pref},
      {"reversed_pref", n.reversed_pref}};
  out << "category\tcount\tshare\n";
  for (const auto& [name, count] : rows) {
    out << name << '\t' << count << '\t' << fmt4(static_cast<double>(count) / total) << '\n';
  }
  out << "excluded\t" << cell.excluded << '\n';
}

// ---------------------------------------------------------------------------
// Commands

struct ValidateCmd {
  DataFlags data;
  int max_cutoff = kMaxCutoff;
  bool require_other = false;

  void add(CLI::App& app) {
    data.add(app);
    app.add_option("--max-cutoff", max_cutoff, "Deepest cut-off the lists must support")
        ->capture_default_str()
        ->check(CLI::Range(1, kMaxCutoff));
    app.add_flag("--require-other", require_other,
                 "Every listed result must be judged by a rater other than the preference rater");
  }

  int run(std::ostream& out, std::ostream&) const {
    const auto dataset = read_dataset(DatasetPaths::in_directory(data.dir));
    ValidationOptions options;
    options.mode = data.mode();
    options.max_cutoff = max_cutoff;
    options.require_other_user_coverage = require_other;
    const auto result = validate(dataset, options);
    std::size_t fatal = 0;
    for (const auto& issue : result.issues) {
      print_issue(out, issue);
      if (issue.fatal) ++fatal;
    }
    out << (result.ok() ? "valid" : "invalid") << ": " << dataset.queries.size() << " queries, "
        << dataset.judgments.size() << " judgments, " << dataset.preferences.size()
        << " preferences, " << dataset.sessions.size() << " sessions; " << fatal << " errors, "
        << result.issues.size() - fatal << " warnings\n";
    return result.ok() ? kExitOk : kExitValidation;
  }
};

struct EvalCmd {
  DataFlags data;
  MetricFlags metric;
  std::optional<int> cutoff;
  std::string rater;

  void add(CLI::App& app) {
    data.add(app);
    metric.add(app, false);
    app.add_option("--cutoff", cutoff, "Cut-off rank (default: 10, or the shortest list)")
        ->check(CLI::Range(1, kMaxCutoff));
    app.add_option("--rater", rater, "Score with this rater's grades only (default: mean of all)");
  }

  int run(std::ostream& out, std::ostream& err) const {
    auto configs = metric.configs();
    if (configs.size() != 1) throw UsageError("eval takes exactly one metric configuration");

    const auto dataset = read_dataset(DatasetPaths::in_directory(data.dir));
    int depth = kMaxCutoff;
    if (cutoff) {
      depth = *cutoff;
    } else {
      for (const auto& lp : dataset.list_pairs) {
        for (Variant v : {Variant::A, Variant::B}) {
          depth = std::min(depth, static_cast<int>(lp.list(v).size()));
        }
      }
      depth = std::max(depth, 1);
    }

    MetricConfig config = configs.front();
    config.cutoff = depth;
    try {
      config.check();
    } catch (const Error& e) {
      throw UsageError(e.what());
    }

    ValidationOptions options;
    options.mode = data.mode();
    options.max_cutoff = depth;
    // Eval scores from whoever judged the results, not from preference raters.
    options.require_same_user_coverage = false;
    check_dataset(dataset, options, err);
    const JudgmentIndex index(dataset);
    const std::optional<std::string> only =
        rater.empty() ? std::nullopt : std::optional<std::string>(rater);

    out << "# " << config.label() << " @" << depth << '\n';
    out << "query\tA\tB\n";
    std::vector<double> a;
    std::vector<double> b;
    for (const auto& q : dataset.queries) {
      if (config.query_filter && !config.query_filter->count(q.query_type)) continue;
      if (!dataset.find_list_pair(q.id)) continue;
      const auto scores = score_query(index, dataset, config, q.id, only, data.mode());
      if (scores) {
        a.push_back(scores->first);
        b.push_back(scores->second);
        out << q.id << '\t' << fmt4(scores->first) << '\t' << fmt4(scores->second) << '\n';
      } else {
        out << q.id << "\tundefined\tundefined\n";
      }
    }
    if (a.empty()) {
      out << "mean\tundefined\tundefined\n";
    } else {
      out << "mean\t" << fmt4(mean_over_queries(a)) << '\t' << fmt4(mean_over_queries(b)) << '\n';
    }
    return kExitOk;
  }
};

struct SweepCmd {
  DataFlags data;
  MetricFlags metric;
  std::string thresholds = "0:0.30:0.01";
  std::string cutoffs = "1-10";
  unsigned jobs = 1;
  std::string out_dir;
  bool svg = false;

  void add(CLI::App& app) {
    data.add(app);
    metric.add(app, true);
    app.add_option("--thresholds", thresholds, "lo:hi:step or comma list, starting at 0")
        ->capture_default_str();
    app.add_option("--cutoffs", cutoffs, "Cut-offs, e.g. 1-10 or 1,3,5")->capture_default_str();
    app.add_option("--jobs", jobs, "Worker threads (0: one per core)")->capture_default_str();
    app.add_option("--out", out_dir, "Directory for grid and series files");
    app.add_flag("--svg", svg, "Also write line charts of every series");
  }

  int run(std::ostream& out, std::ostream& err) const {
    const auto configs = metric.configs();
    const auto grid_t = parse_thresholds(thresholds);
    const auto grid_c = parse_cutoffs(cutoffs);
    if (grid_t.front() != 0.0) throw UsageError("thresholds must start at 0");
    if (!std::is_sorted(grid_t.begin(), grid_t.end()) ||
        std::adjacent_find(grid_t.begin(), grid_t.end()) != grid_t.end()) {
      throw UsageError("thresholds must increase strictly");
    }
    for (const auto& c : configs) {
      try {
        c.check();
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
    }

    const int deepest = *std::max_element(grid_c.begin(), grid_c.end());
    const auto dataset = load(data, deepest, uses_other_users(configs), err);
    SweepOptions options;
    options.mode = data.mode();
    options.jobs = jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : jobs;
    const auto grid = pir_sweep(dataset, configs, grid_t, grid_c, options);

    std::size_t empty = 0;
    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
      for (std::size_t ki = 0; ki < grid_c.size(); ++ki) {
        for (const auto& cell : grid.row(ci, ki)) empty += cell.empty_denominator ? 1 : 0;
      }
    }

    out << "config\tcutoff\tbest_threshold\tbest_pir\tzero_pir\n";
    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
      const std::string label = configs[ci].label();
      for (std::size_t ki = 0; ki < grid_c.size(); ++ki) {
        const auto row = grid.row(ci, ki);
        const auto best = best_threshold(row);
        out << label << '\t' << grid_c[ki] << '\t' << fmt4(best.threshold) << '\t'
            << fmt4(best.pir) << '\t' << fmt4(row.front().pir) << '\n';
      }
    }

    if (!out_dir.empty()) {
      const fs::path dir(out_dir);
      fs::create_directories(dir / "curves");
      {
        auto file = open_output(dir / "grid.tsv");
        report::write_grid(file, grid);
      }
      write_table(dir, "best_threshold", report::best_threshold_series(grid), svg,
                  "PIR at the best threshold", "PIR");
      write_table(dir, "best_threshold_t", report::best_threshold_choice(grid), svg,
                  "Best threshold", "threshold");
      write_table(dir, "zero_threshold", report::zero_threshold_series(grid), svg,
                  "PIR at threshold 0", "PIR");
      for (std::size_t ci = 0; ci < configs.size(); ++ci) {
        const std::string label = configs[ci].label();
        write_table(dir / "curves", report::slug(label), report::threshold_series(grid, ci), svg,
                    label, "PIR");
      }
    }

    if (empty > 0) {
      err << "note: " << empty << " of " << grid.size()
          << " cells have no preferring pairs; their PIR is reported as 0.5\n";
    }
    return kExitOk;
  }
};

struct BreakdownCmd {
  DataFlags data;
  MetricFlags metric;
  double threshold = 0.0;
  int cutoff = kMaxCutoff;
  std::string thresholds = "0:0.30:0.01";
  std::string out_dir;
  bool svg = false;

  void add(CLI::App& app) {
    data.add(app);
    metric.add(app, false);
    app.add_option("--rating-source", metric.source, "same or other")->capture_default_str();
    app.add_option("--threshold", threshold, "Threshold of the category table")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    app.add_option("--cutoff", cutoff, "Cut-off rank")
        ->capture_default_str()
        ->check(CLI::Range(1, kMaxCutoff));
    app.add_option("--thresholds", thresholds, "Threshold axis of the evolution series")
        ->capture_default_str();
    app.add_option("--out", out_dir, "Directory for the evolution series file");
    app.add_flag("--svg", svg, "Also write a line chart of the series");
  }

  int run(std::ostream& out, std::ostream& err) const {
    auto configs = metric.configs();
    if (configs.size() != 1) throw UsageError("breakdown takes exactly one metric configuration");
    MetricConfig config = configs.front();
    config.cutoff = cutoff;
    try {
      config.check();
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    const auto axis = parse_thresholds(thresholds);

    const auto dataset = load(data, cutoff, config.rating_source == RatingSource::OtherUsers, err);
    const auto at = breakdown_series(dataset, config, cutoff, {threshold}, data.mode()).front();
    const auto series = breakdown_series(dataset, config, cutoff, axis, data.mode());

    out << "# " << config.label() << " @" << cutoff << '\n';
    report_cell(out, at);
    out << '\n';
    report::write_tsv(out, report::breakdown_table(series));
    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      write_table(out_dir, "breakdown", report::breakdown_table(series), svg,
                  "Preference identification by threshold: " + config.label(), "share");
    }
    if (at.empty_denominator) {
      err << "no pair carries a preference; PIR is undefined (reported as 0.5)\n";
      return kExitEmptyDenominator;
    }
    return kExitOk;
  }
};

struct ImplicitCmd {
  DataFlags data;
  std::string measure = "duration";
  std::string endpoint = "end";
  std::string direction = "lower";
  std::string thresholds;
  std::string query_types;
  std::string band;
  std::string out_dir;
  bool svg = false;

  void add(CLI::App& app) {
    data.add(app);
    app.add_option("--measure", measure, "duration, clicks, mean-rank, first-rank")
        ->capture_default_str();
    app.add_option("--endpoint", endpoint, "Duration endpoint: end or last-click")
        ->capture_default_str();
    app.add_option("--direction", direction, "Which values are better: lower or higher")
        ->capture_default_str();
    app.add_option("--thresholds", thresholds,
                   "lo:hi:step or comma list (default depends on the measure)");
    app.add_option("--query-type", query_types, "Restrict to these query types (comma list)");
    app.add_option("--band", band, "Keep sessions whose duration lies in lo:hi seconds");
    app.add_option("--out", out_dir, "Directory for the PIR series file");
    app.add_flag("--svg", svg, "Also write a line chart of the series");
  }

  int run(std::ostream& out, std::ostream& err) const {
    ImplicitConfig config;
    try {
      config.measure = parse_implicit_measure(measure);
      config.endpoint = parse_endpoint(endpoint);
      config.direction = parse_direction(direction);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    config.query_filter = parse_query_filter(query_types);
    if (!band.empty()) config.duration_band = parse_band(band);
    const auto axis =
        thresholds.empty() ? default_implicit_thresholds(config.measure) : parse_thresholds(thresholds);

    ValidationOptions options;
    options.require_same_user_coverage = false;
    const auto dataset = load(data, options, err);
    const auto cells = implicit_pir(dataset, config, axis);

    out << "# " << to_string(config.measure) << '/' << to_string(config.direction);
    if (config.measure == ImplicitMeasure::Duration) out << '/' << to_string(config.endpoint);
    out << '\n';
    out << "threshold\tpir\tcorrect_pref\tcorrect_equal\tfalse_pref\tmissed_pref\t"
           "reversed_pref\texcluded\n";
    for (const auto& cell : cells) {
      const auto& n = cell.counts;
      out << fmt4(cell.threshold) << '\t' << fmt4(cell.pir) << '\t' << n.correct_pref << '\t'
          << n.correct_equal << '\t' << n.false_pref << '\t' << n.missed_pref << '\t'
          << n.reversed_pref << '\t' << cell.excluded << '\n';
    }
    if (!out_dir.empty()) {
      report::SeriesTable table;
      table.x_label = "threshold";
      table.names = {std::string(to_string(config.measure))};
      table.series.resize(1);
      for (const auto& cell : cells) {
        table.x.push_back(cell.threshold);
        table.series[0].push_back(cell.pir);
      }
      fs::create_directories(out_dir);
      write_table(out_dir, "implicit_" + std::string(to_string(config.measure)), table, svg,
                  "PIR of " + std::string(to_string(config.measure)), "PIR");
    }
    if (!cells.empty() && cells.front().empty_denominator) {
      err << "no pair carries a preference; PIR is undefined (reported as 0.5)\n";
      return kExitEmptyDenominator;
    }
    return kExitOk;
  }
};

struct StatsCmd {
  DataFlags data;

  void add(CLI::App& app) { data.add(app); }

  int run(std::ostream& out, std::ostream& err) const {
    ValidationOptions options;
    options.require_same_user_coverage = false;
    const auto dataset = load(data, options, err);
    report::write_stats(out, descriptive_stats(dataset));
    return kExitOk;
  }
};

struct SynthCmd {
  SyntheticSpec spec;
  int preferences = 0;
  std::string mix_a;
  std::string mix_b;
  bool no_sessions = false;
  std::string out_dir;

  void add(CLI::App& app) {
    app.add_option("--queries", spec.queries, "Number of queries")->capture_default_str();
    app.add_option("--raters", spec.raters, "Size of the rater pool")->capture_default_str();
    app.add_option("--raters-per-query", spec.raters_per_query, "Preference raters per query")
        ->capture_default_str();
    app.add_option("--preferences", preferences,
                   "Total preferences, spread unevenly over queries (overrides --raters-per-query)");
    app.add_option("--list-length", spec.list_length, "Results per list")->capture_default_str();
    app.add_option("--grade-mix-a", mix_a, "Six weights for grades 1..6 of variant A");
    app.add_option("--grade-mix-b", mix_b, "Six weights for grades 1..6 of variant B");
    app.add_option("--noise", spec.rater_noise, "Probability a rater moves a grade by one")
        ->capture_default_str();
    app.add_option("--depth", spec.preference_depth, "Results a rater compares for preferences")
        ->capture_default_str();
    app.add_option("--equal-margin", spec.equal_margin, "Mean-relevance gap judged as equal")
        ->capture_default_str();
    app.add_option("--flip", spec.flip_probability, "Probability a preference is reversed")
        ->capture_default_str();
    app.add_flag("--no-sessions", no_sessions, "Omit sessions and clicks");
    app.add_option("--seed", spec.seed, "Random seed")->capture_default_str();
    app.add_option("--out", out_dir, "Output directory")->required();
  }

  int run(std::ostream& out, std::ostream&) {
    if (preferences > 0) spec.total_preferences = preferences;
    if (!mix_a.empty()) spec.grade_mix_a = parse_mix(mix_a);
    if (!mix_b.empty()) spec.grade_mix_b = parse_mix(mix_b);
    spec.sessions = !no_sessions;
    try {
      spec.check();
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    const auto dataset = generate_synthetic(spec);
    write_dataset(dataset, out_dir);
    out << "wrote " << dataset.queries.size() << " queries, " << dataset.judgments.size()
        << " judgments, " << dataset.preferences.size() << " preferences, "
        << dataset.sessions.size() << " sessions to " << out_dir << '\n';
    return kExitOk;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Search-quality metric evaluation by preference identification", "pirkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  ValidateCmd validate_cmd;
  EvalCmd eval_cmd;
  SweepCmd sweep_cmd;
  BreakdownCmd breakdown_cmd;
  ImplicitCmd implicit_cmd;
  StatsCmd stats_cmd;
  SynthCmd synth_cmd;

  struct Entry {
    CLI::App* app;
    std::function<int()> run;
  };
  std::vector<Entry> entries;
  auto add = [&](auto& cmd, const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    cmd.add(*sub);
    entries.push_back({sub, [&cmd, &out, &err] { return cmd.run(out, err); }});
  };
  add(validate_cmd, "validate", "Check a dataset against its invariants");
  add(eval_cmd, "eval", "Per-query and mean metric scores of both variants");
  add(sweep_cmd, "sweep", "PIR over metric configs, cut-offs and thresholds");
  add(breakdown_cmd, "breakdown", "Five-category preference identification");
  add(implicit_cmd, "implicit", "PIR of a session-log measure");
  add(stats_cmd, "stats", "Descriptive statistics of queries, judgments and sessions");
  add(synth_cmd, "synth", "Generate a synthetic dataset");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  for (const auto& entry : entries) {
    if (!entry.app->parsed()) continue;
    try {
      return entry.run();
    } catch (const UsageError& e) {
      err << "usage error: " << e.what() << '\n';
      return kExitUsage;
    } catch (const ValidationError& e) {
      for (const auto& issue : e.report().issues) print_issue(err, issue);
      err << "error: dataset failed validation\n";
      return kExitValidation;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitValidation;
    }
  }
  return kExitUsage;
}

}  // namespace pirkit::cli
