#pragma once

#include "mutapath/corpus.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mutapath {

class EmptyInputError : public std::runtime_error {
 public:
  explicit EmptyInputError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct PerProjectRow {
  std::string project;
  std::string opset;
  std::int64_t r = 0;
  std::int64_t p = 0;
  std::int64_t u = 0;
  std::int64_t excluded = 0;
};

/// Usage counts per operator; a column is empty (std::nullopt) when that
/// operator set was not run or does not contain the operator.
struct OperatorUsageRow {
  std::string op;
  std::optional<std::int64_t> count_pitest;
  std::optional<std::int64_t> count_extended;
};

struct LengthHistogramRow {
  std::string opset;
  BugClass status = BugClass::R;
  int k = 0;
  std::int64_t count = 0;
};

/// Progress split into ten equal buckets; bucket i covers [i/10, (i+1)/10),
/// with 1.0 counted in bucket 9.
struct ProgressHistogramRow {
  std::string opset;
  int bucket = 0;
  std::int64_t count = 0;
};

struct ExtrapolationRow {
  int percentile = 0;
  int expected_k = 0;
};

struct SummaryTables {
  std::vector<PerProjectRow> per_project;
  std::vector<OperatorUsageRow> operator_usage;
  std::vector<LengthHistogramRow> length_histogram;
  std::vector<ProgressHistogramRow> progress_histogram;
  std::vector<ExtrapolationRow> extrapolation;  // empty when there is no R/P data
};

SummaryTables summarize(const std::vector<PairResult>& results);

/// Expected chain lengths if partially reproduced bugs had been completed:
/// takes k for each R, 2k for each P (missing half assumed), sorts, and reads
/// the curve at percentiles 5,10,...,100. Throws EmptyInputError when the
/// results contain neither R nor P entries.
std::vector<ExtrapolationRow> extrapolate_expected_lengths(
    const std::vector<PairResult>& results);

struct ReportFormats {
  bool csv = true;
  bool json = true;
};

/// Writes pairs.csv, per_project.csv, operator_usage.csv,
/// length_histogram.csv, extrapolation.csv and/or results.json into out_dir.
/// Output bytes depend only on the inputs.
void emit(const SummaryTables& tables, const std::vector<PairResult>& results,
          const std::filesystem::path& out_dir, const ReportFormats& formats = {});

/// One-line totals, e.g. "pairs=10 R=3 P=4 U=2 excluded=1".
std::string render_summary(const std::vector<PairResult>& results);

}  // namespace mutapath
