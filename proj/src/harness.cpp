#include "mutapath/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <tuple>

#include "json.hpp"

namespace mutapath {
namespace {

/// Opsets in report order: the default set first, then the extended one,
/// then anything else in order of first appearance.
std::vector<std::string> opsets_present(const std::vector<PairResult>& results) {
  std::vector<std::string> order;
  auto note = [&](const std::string& name) {
    if (std::find(order.begin(), order.end(), name) == order.end()) order.push_back(name);
  };
  for (const PairResult& r : results) {
    if (r.opset == "pitest") note("pitest");
  }
  for (const PairResult& r : results) {
    if (r.opset == "extended") note("extended");
  }
  for (const PairResult& r : results) note(r.opset);
  return order;
}

std::string fixed_decimal(double value, int places) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", places, value);
  return buf;
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

bool operator_in_set(const OperatorSet& set, OperatorId id) {
  return std::any_of(set.operators.begin(), set.operators.end(),
                     [&](const MutationOperator& op) { return op.id == id; });
}

}  // namespace

SummaryTables summarize(const std::vector<PairResult>& results) {
  SummaryTables tables;
  const std::vector<std::string> opsets = opsets_present(results);
  auto opset_rank = [&](const std::string& name) {
    return std::find(opsets.begin(), opsets.end(), name) - opsets.begin();
  };

  for (const PairResult& r : results) {
    auto row = std::find_if(tables.per_project.begin(), tables.per_project.end(),
                            [&](const PerProjectRow& q) {
                              return q.project == r.project && q.opset == r.opset;
                            });
    if (row == tables.per_project.end()) {
      tables.per_project.push_back(PerProjectRow{r.project, r.opset, 0, 0, 0, 0});
      row = std::prev(tables.per_project.end());
    }
    if (r.excluded || !r.status) {
      ++row->excluded;
    } else if (*r.status == BugClass::R) {
      ++row->r;
    } else if (*r.status == BugClass::P) {
      ++row->p;
    } else {
      ++row->u;
    }
  }

  const bool ran_pitest = std::any_of(results.begin(), results.end(),
                                      [](const PairResult& r) { return r.opset == "pitest"; });
  const bool ran_extended = std::any_of(results.begin(), results.end(),
                                        [](const PairResult& r) { return r.opset == "extended"; });
  for (int i = 0; i < kOperatorCount; ++i) {
    const OperatorId id = static_cast<OperatorId>(i);
    OperatorUsageRow row;
    row.op = operator_name(id);
    if (ran_pitest && operator_in_set(pitest_operators(), id)) row.count_pitest = 0;
    if (ran_extended && operator_in_set(extended_operators(), id)) row.count_extended = 0;
    tables.operator_usage.push_back(std::move(row));
  }
  for (const PairResult& r : results) {
    if (r.excluded) continue;
    for (const auto& [op, count] : r.operator_usage) {
      auto row = std::find_if(tables.operator_usage.begin(), tables.operator_usage.end(),
                              [&](const OperatorUsageRow& q) { return q.op == op; });
      if (row == tables.operator_usage.end()) continue;
      if (r.opset == "pitest") row->count_pitest = row->count_pitest.value_or(0) + count;
      if (r.opset == "extended") row->count_extended = row->count_extended.value_or(0) + count;
    }
  }

  std::map<std::tuple<std::ptrdiff_t, int, int>, std::int64_t> lengths;
  std::map<std::pair<std::ptrdiff_t, int>, std::int64_t> buckets;
  for (const PairResult& r : results) {
    if (r.excluded || !r.status) continue;
    const auto rank = opset_rank(r.opset);
    ++lengths[{rank, static_cast<int>(*r.status), r.k}];
    const int bucket = std::min(9, static_cast<int>(r.progress * 10.0));
    ++buckets[{rank, bucket}];
  }
  for (const auto& [key, count] : lengths) {
    const auto& [rank, status, k] = key;
    tables.length_histogram.push_back(
        LengthHistogramRow{opsets[static_cast<std::size_t>(rank)],
                           static_cast<BugClass>(status), k, count});
  }
  for (std::size_t rank = 0; rank < opsets.size(); ++rank) {
    const bool any = std::any_of(results.begin(), results.end(), [&](const PairResult& r) {
      return r.opset == opsets[rank] && !r.excluded;
    });
    if (!any) continue;
    for (int bucket = 0; bucket < 10; ++bucket) {
      auto it = buckets.find({static_cast<std::ptrdiff_t>(rank), bucket});
      tables.progress_histogram.push_back(
          ProgressHistogramRow{opsets[rank], bucket, it == buckets.end() ? 0 : it->second});
    }
  }

  try {
    tables.extrapolation = extrapolate_expected_lengths(results);
  } catch (const EmptyInputError&) {
    tables.extrapolation.clear();
  }
  return tables;
}

std::vector<ExtrapolationRow> extrapolate_expected_lengths(
    const std::vector<PairResult>& results) {
  std::vector<int> lengths;
  for (const PairResult& r : results) {
    if (r.excluded || !r.status) continue;
    if (*r.status == BugClass::R) lengths.push_back(r.k);
    if (*r.status == BugClass::P) lengths.push_back(2 * r.k);
  }
  if (lengths.empty())
    throw EmptyInputError("extrapolation needs at least one reproduced or partial result");
  std::sort(lengths.begin(), lengths.end());

  std::vector<ExtrapolationRow> rows;
  const std::int64_t n = static_cast<std::int64_t>(lengths.size());
  for (int percentile = 5; percentile <= 100; percentile += 5) {
    std::int64_t idx = (percentile * n + 99) / 100;  // nearest rank, rounding up
    if (idx < 1) idx = 1;
    rows.push_back(ExtrapolationRow{percentile, lengths[static_cast<std::size_t>(idx - 1)]});
  }
  return rows;
}

void emit(const SummaryTables& tables, const std::vector<PairResult>& results,
          const std::filesystem::path& out_dir, const ReportFormats& formats) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  if (formats.csv) {
    std::string pairs = "id,project,status,k,initial_diff,remaining_diff,progress,expansions,"
                        "wall_time,excluded\n";
    for (const PairResult& r : results) {
      pairs += csv_field(r.id) + ',' + csv_field(r.project) + ',';
      pairs += r.status ? bug_class_name(*r.status) : "";
      pairs += ',' + std::to_string(r.k) + ',' + std::to_string(r.initial_diff) + ',' +
               std::to_string(r.remaining_diff) + ',' + fixed_decimal(r.progress, 6) + ',' +
               std::to_string(r.expansions) + ',' + fixed_decimal(r.wall_time, 3) + ',' +
               (r.excluded ? "true" : "false") + '\n';
    }
    write_text(out_dir / "pairs.csv", pairs);

    std::string per_project = "project,opset,R,P,U,excluded\n";
    for (const PerProjectRow& row : tables.per_project) {
      per_project += csv_field(row.project) + ',' + csv_field(row.opset) + ',' +
                     std::to_string(row.r) + ',' + std::to_string(row.p) + ',' +
                     std::to_string(row.u) + ',' + std::to_string(row.excluded) + '\n';
    }
    write_text(out_dir / "per_project.csv", per_project);

    std::string usage = "operator,count_pitest,count_extended\n";
    auto cell = [](const std::optional<std::int64_t>& v) {
      return v ? std::to_string(*v) : std::string("-");
    };
    for (const OperatorUsageRow& row : tables.operator_usage) {
      usage += csv_field(row.op) + ',' + cell(row.count_pitest) + ',' +
               cell(row.count_extended) + '\n';
    }
    write_text(out_dir / "operator_usage.csv", usage);

    std::string hist = "opset,status,k,count\n";
    for (const LengthHistogramRow& row : tables.length_histogram) {
      hist += csv_field(row.opset) + ',' + bug_class_name(row.status) + ',' +
              std::to_string(row.k) + ',' + std::to_string(row.count) + '\n';
    }
    write_text(out_dir / "length_histogram.csv", hist);

    std::string extra = "percentile,expected_k\n";
    for (const ExtrapolationRow& row : tables.extrapolation) {
      extra += std::to_string(row.percentile) + ',' + std::to_string(row.expected_k) + '\n';
    }
    write_text(out_dir / "extrapolation.csv", extra);
  }

  if (formats.json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const PairResult& r : results) {
      nlohmann::json o;
      o["id"] = r.id;
      o["project"] = r.project;
      o["opset"] = r.opset;
      o["status"] = r.status ? nlohmann::json(bug_class_name(*r.status))
                             : nlohmann::json(nullptr);
      o["k"] = r.k;
      o["initial_diff"] = r.initial_diff;
      o["remaining_diff"] = r.remaining_diff;
      o["progress"] = r.progress;
      o["expansions"] = r.expansions;
      o["wall_time"] = r.wall_time;
      o["excluded"] = r.excluded;
      nlohmann::json usage = nlohmann::json::object();
      for (const auto& [op, count] : r.operator_usage) usage[op] = count;
      o["operator_usage"] = std::move(usage);
      arr.push_back(std::move(o));
    }
    write_text(out_dir / "results.json", arr.dump(2) + "\n");
  }
}

std::string render_summary(const std::vector<PairResult>& results) {
  std::int64_t r = 0, p = 0, u = 0, excluded = 0;
  for (const PairResult& res : results) {
    if (res.excluded || !res.status) {
      ++excluded;
    } else if (*res.status == BugClass::R) {
      ++r;
    } else if (*res.status == BugClass::P) {
      ++p;
    } else {
      ++u;
    }
  }
  return "pairs=" + std::to_string(results.size()) + " R=" + std::to_string(r) +
         " P=" + std::to_string(p) + " U=" + std::to_string(u) +
         " excluded=" + std::to_string(excluded);
}

}  // namespace mutapath
