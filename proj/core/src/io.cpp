#include "pirkit/io.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <tuple>
#include <vector>

#include "json.hpp"

namespace pirkit {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

ParseError::ParseError(std::string file, std::size_t line, const std::string& what)
    : Error(file + ":" + std::to_string(line) + ": " + what), file_(std::move(file)), line_(line) {}

namespace {

/// One parsed line, addressed by canonical column position.
class Record {
 public:
  Record(std::vector<std::optional<std::string>> cells, const std::string& file, std::size_t line)
      : cells_(std::move(cells)), file_(file), line_(line) {}

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(file_, line_, what); }

  std::size_t line() const { return line_; }

  const std::string& text(std::size_t i, const char* name) const {
    if (i >= cells_.size() || !cells_[i]) fail(std::string("missing field '") + name + "'");
    return *cells_[i];
  }

  long long integer(std::size_t i, const char* name) const {
    const std::string& s = text(i, name);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      fail(std::string("field '") + name + "' is not an integer: '" + s + "'");
    }
    return value;
  }

  std::optional<bool> flag(std::size_t i, const char* name) const {
    if (i >= cells_.size() || !cells_[i]) return std::nullopt;
    const std::string& s = *cells_[i];
    if (s.empty() || s == "-" || s == "null") return std::nullopt;
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    fail(std::string("field '") + name + "' is not a boolean: '" + s + "'");
  }

  template <typename F>
  auto parsed(std::size_t i, const char* name, F parse) const {
    try {
      return parse(text(i, name));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(e.what());
    }
  }

 private:
  std::vector<std::optional<std::string>> cells_;
  const std::string& file_;
  std::size_t line_;
};

using Columns = std::vector<const char*>;

const Columns kQueryColumns = {"id", "type", "language", "text", "info_need"};
const Columns kJudgmentColumns = {"query_id", "result_id", "rater_id", "grade", "snippet_relevant"};
const Columns kListColumns = {"query_id", "variant", "rank", "result_id"};
const Columns kPreferenceColumns = {"query_id", "rater_id", "verdict"};
const Columns kSessionColumns = {"query_id", "rater_id", "variant", "start_ts", "end_ts",
                                 "satisfied"};
const Columns kClickColumns = {"query_id", "rater_id", "variant", "rank", "ts"};

std::optional<std::string> json_cell(const Json& value) {
  if (value.is_null()) return std::nullopt;
  if (value.is_string()) return value.get<std::string>();
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  return value.dump();
}

void for_each_record(const fs::path& path, const std::string& kind, const Columns& columns,
                     const std::function<void(const Record&)>& visit) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  const std::string file = path.string();
  const bool tsv = path.extension() == ".tsv";

  std::string line;
  std::size_t line_no = 0;
  bool header_seen = tsv;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    if (tsv) {
      if (line.front() == '#') continue;
      std::vector<std::optional<std::string>> cells;
      std::istringstream fields(line);
      std::string cell;
      while (std::getline(fields, cell, '\t')) cells.emplace_back(cell);
      visit(Record(std::move(cells), file, line_no));
      continue;
    }

    Json doc;
    try {
      doc = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ParseError(file, line_no, std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError(file, line_no, "expected a JSON object");

    if (!header_seen) {
      if (doc.value("schema", "") != "pirkit" || doc.value("kind", "") != kind) {
        throw ParseError(file, line_no, "expected a pirkit '" + kind + "' header line");
      }
      if (doc.value("version", 0) != kSchemaVersion) {
        throw ParseError(file, line_no,
                         "unsupported schema version " + doc.value("version", Json()).dump());
      }
      header_seen = true;
      continue;
    }

    std::vector<std::optional<std::string>> cells;
    for (const char* name : columns) {
      auto it = doc.find(name);
      cells.push_back(it == doc.end() ? std::nullopt : json_cell(*it));
    }
    visit(Record(std::move(cells), file, line_no));
  }
  if (!header_seen) throw ParseError(file, line_no, "missing '" + kind + "' header line");
}

int parse_grade(const Record& r, std::size_t i) {
  const long long grade = r.integer(i, "grade");
  if (grade < 1 || grade > 6) r.fail("grade " + std::to_string(grade) + " outside 1..6");
  return static_cast<int>(grade);
}

using SessionKey = std::tuple<std::string, std::string, Variant>;

}  // namespace

DatasetPaths DatasetPaths::in_directory(const fs::path& dir) {
  auto pick = [&](const std::string& kind) -> std::optional<fs::path> {
    for (const char* ext : {".jsonl", ".tsv"}) {
      fs::path p = dir / (kind + ext);
      if (fs::exists(p)) return p;
    }
    return std::nullopt;
  };
  auto required = [&](const std::string& kind) {
    auto p = pick(kind);
    if (!p) throw Error("no " + kind + ".jsonl or " + kind + ".tsv in " + dir.string());
    return *p;
  };
  DatasetPaths paths;
  paths.queries = required("queries");
  paths.judgments = required("judgments");
  paths.lists = required("lists");
  paths.preferences = pick("preferences");
  paths.sessions = pick("sessions");
  paths.clicks = pick("clicks");
  return paths;
}

EvaluationDataset read_dataset(const DatasetPaths& paths) {
  EvaluationDataset ds;

  for_each_record(paths.queries, "queries", kQueryColumns, [&](const Record& r) {
    Query q;
    q.id = r.text(0, "id");
    q.query_type = r.parsed(1, "type", parse_query_type);
    q.language = r.parsed(2, "language", parse_language);
    q.text = r.text(3, "text");
    q.info_need = r.text(4, "info_need");
    ds.queries.push_back(std::move(q));
  });

  for_each_record(paths.judgments, "judgments", kJudgmentColumns, [&](const Record& r) {
    GradedJudgment j;
    j.query_id = r.text(0, "query_id");
    j.result_id = r.text(1, "result_id");
    j.rater_id = r.text(2, "rater_id");
    j.grade = parse_grade(r, 3);
    j.snippet_relevant = r.flag(4, "snippet_relevant");
    ds.judgments.push_back(std::move(j));
  });

  // query -> index into list_pairs; (query, variant) -> ranks seen so far
  std::map<std::string, std::size_t> pair_index;
  for_each_record(paths.lists, "lists", kListColumns, [&](const Record& r) {
    const std::string query_id = r.text(0, "query_id");
    const Variant variant = r.parsed(1, "variant", parse_variant);
    const long long rank = r.integer(2, "rank");
    auto [it, inserted] = pair_index.emplace(query_id, ds.list_pairs.size());
    if (inserted) ds.list_pairs.push_back({query_id, {}, {}});
    auto& pair = ds.list_pairs[it->second];
    auto& list = variant == Variant::A ? pair.variant_a : pair.variant_b;
    if (rank != static_cast<long long>(list.size()) + 1) {
      r.fail("expected rank " + std::to_string(list.size() + 1) + " for variant " +
             std::string(to_string(variant)) + " of query '" + query_id + "', got " +
             std::to_string(rank));
    }
    list.push_back(r.text(3, "result_id"));
  });

  if (paths.preferences) {
    for_each_record(*paths.preferences, "preferences", kPreferenceColumns, [&](const Record& r) {
      ds.preferences.push_back({r.text(0, "query_id"), r.text(1, "rater_id"),
                                r.parsed(2, "verdict", parse_verdict)});
    });
  }

  std::map<SessionKey, std::size_t> session_index;
  if (paths.sessions) {
    for_each_record(*paths.sessions, "sessions", kSessionColumns, [&](const Record& r) {
      Session s;
      s.query_id = r.text(0, "query_id");
      s.rater_id = r.text(1, "rater_id");
      s.variant = r.parsed(2, "variant", parse_variant);
      s.start_ts = r.integer(3, "start_ts");
      s.end_ts = r.integer(4, "end_ts");
      s.satisfied = r.flag(5, "satisfied");
      session_index.emplace(SessionKey{s.query_id, s.rater_id, s.variant}, ds.sessions.size());
      ds.sessions.push_back(std::move(s));
    });
  }
  if (paths.clicks) {
    for_each_record(*paths.clicks, "clicks", kClickColumns, [&](const Record& r) {
      const SessionKey key{r.text(0, "query_id"), r.text(1, "rater_id"),
                           r.parsed(2, "variant", parse_variant)};
      auto it = session_index.find(key);
      if (it == session_index.end()) r.fail("click refers to a session that does not exist");
      ds.sessions[it->second].clicks.push_back(
          {static_cast<int>(r.integer(3, "rank")), r.integer(4, "ts")});
    });
  }
  return ds;
}

EvaluationDataset load_dataset(const DatasetPaths& paths, const ValidationOptions& options) {
  EvaluationDataset ds = read_dataset(paths);
  ValidationReport report = validate(ds, options);
  if (!report.ok()) throw ValidationError(std::move(report));
  return ds;
}

EvaluationDataset load_dataset(const fs::path& dir, const ValidationOptions& options) {
  return load_dataset(DatasetPaths::in_directory(dir), options);
}

namespace {

class JsonLinesWriter {
 public:
  JsonLinesWriter(const fs::path& path, const std::string& kind) : out_(path, std::ios::binary) {
    if (!out_) throw Error("cannot write " + path.string());
    Json header;
    header["schema"] = "pirkit";
    header["version"] = kSchemaVersion;
    header["kind"] = kind;
    write(header);
  }

  void write(const Json& record) { out_ << record.dump() << '\n'; }

 private:
  std::ofstream out_;
};

}  // namespace

void write_dataset(const EvaluationDataset& ds, const fs::path& dir) {
  fs::create_directories(dir);

  JsonLinesWriter queries(dir / "queries.jsonl", "queries");
  for (const auto& q : ds.queries) {
    Json r;
    r["id"] = q.id;
    r["type"] = std::string(to_string(q.query_type));
    r["language"] = std::string(to_string(q.language));
    r["text"] = q.text;
    r["info_need"] = q.info_need;
    queries.write(r);
  }

  JsonLinesWriter judgments(dir / "judgments.jsonl", "judgments");
  for (const auto& j : ds.judgments) {
    Json r;
    r["query_id"] = j.query_id;
    r["result_id"] = j.result_id;
    r["rater_id"] = j.rater_id;
    r["grade"] = j.grade;
    if (j.snippet_relevant) r["snippet_relevant"] = *j.snippet_relevant;
    judgments.write(r);
  }

  JsonLinesWriter lists(dir / "lists.jsonl", "lists");
  for (const auto& p : ds.list_pairs) {
    for (Variant v : {Variant::A, Variant::B}) {
      const auto& ids = p.list(v);
      for (std::size_t i = 0; i < ids.size(); ++i) {
        Json r;
        r["query_id"] = p.query_id;
        r["variant"] = std::string(to_string(v));
        r["rank"] = i + 1;
        r["result_id"] = ids[i];
        lists.write(r);
      }
    }
  }

  JsonLinesWriter preferences(dir / "preferences.jsonl", "preferences");
  for (const auto& p : ds.preferences) {
    Json r;
    r["query_id"] = p.query_id;
    r["rater_id"] = p.rater_id;
    r["verdict"] = std::string(to_string(p.verdict));
    preferences.write(r);
  }

  JsonLinesWriter sessions(dir / "sessions.jsonl", "sessions");
  JsonLinesWriter clicks(dir / "clicks.jsonl", "clicks");
  for (const auto& s : ds.sessions) {
    Json r;
    r["query_id"] = s.query_id;
    r["rater_id"] = s.rater_id;
    r["variant"] = std::string(to_string(s.variant));
    r["start_ts"] = s.start_ts;
    r["end_ts"] = s.end_ts;
    if (s.satisfied) r["satisfied"] = *s.satisfied;
    sessions.write(r);
    for (const auto& c : s.clicks) {
      Json cr;
      cr["query_id"] = s.query_id;
      cr["rater_id"] = s.rater_id;
      cr["variant"] = std::string(to_string(s.variant));
      cr["rank"] = c.rank;
      cr["ts"] = c.ts;
      clicks.write(cr);
    }
  }
}

}  // namespace pirkit
