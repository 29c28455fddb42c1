#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "pirkit/model.hpp"

namespace pirkit {

inline constexpr int kSchemaVersion = 1;

/// A record that failed to parse, with its location.
class ParseError : public Error {
 public:
  ParseError(std::string file, std::size_t line, const std::string& what);
  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

/// One file per record kind. Files ending in ".tsv" are read as
/// tab-separated columns in the canonical field order; all others as JSON
/// lines whose first line is a schema header. Preferences, sessions and
/// clicks are optional.
struct DatasetPaths {
  std::filesystem::path queries;
  std::filesystem::path judgments;
  std::filesystem::path lists;
  std::optional<std::filesystem::path> preferences;
  std::optional<std::filesystem::path> sessions;
  std::optional<std::filesystem::path> clicks;

  /// Looks for <kind>.jsonl, falling back to <kind>.tsv.
  static DatasetPaths in_directory(const std::filesystem::path& dir);
};

/// Parses every file without validating cross-record invariants.
EvaluationDataset read_dataset(const DatasetPaths& paths);

/// Parses and validates; throws ValidationError when validation fails.
EvaluationDataset load_dataset(const DatasetPaths& paths, const ValidationOptions& options = {});
EvaluationDataset load_dataset(const std::filesystem::path& dir,
                               const ValidationOptions& options = {});

/// Writes the canonical JSON-lines form into `dir` (created if needed).
/// Output bytes depend only on the dataset contents.
void write_dataset(const EvaluationDataset& dataset, const std::filesystem::path& dir);

}  // namespace pirkit
