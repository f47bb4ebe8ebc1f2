#include "mutapath/corpus.hpp"
#include "mutapath/harness.hpp"
#include "mutapath/parser.hpp"
#include "mutapath/printer.hpp"
#include "mutapath/search.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

namespace {

using namespace mutapath;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::runtime_error("cannot read " + path);
  return std::move(buf).str();
}

Ast parse_file(const std::string& path) {
  try {
    return parse(read_file(path));
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ":" + std::to_string(e.line()) + ":" +
                             std::to_string(e.column()) + ": " + e.what());
  }
}

const OperatorSet& opset_or_fail(const std::string& name) {
  const OperatorSet* set = operator_set_by_name(name);
  if (!set) throw std::runtime_error("unknown operator set '" + name + "'");
  return *set;
}

nlohmann::json application_json(const MutationApplication& app) {
  nlohmann::json o;
  o["operator"] = operator_name(app.op);
  o["site"] = app.site;
  std::visit(
      [&](const auto& detail) {
        using T = std::decay_t<decltype(detail)>;
        if constexpr (std::is_same_v<T, RelabelDetail>) {
          o["action"] = "relabel";
          o["old"] = detail.old_label;
          o["new"] = detail.new_label;
        } else if constexpr (std::is_same_v<T, ToggleNegativeDetail>) {
          o["action"] = detail.wrap ? "wrap" : "unwrap";
        } else if constexpr (std::is_same_v<T, DeleteStmtDetail>) {
          o["action"] = "delete";
        } else {
          o["action"] = "replace";
          o["new"] = print_expr(detail.replacement);
          o["new_kind"] = kind_name(detail.replacement->kind());
        }
      },
      app.detail);
  return o;
}

nlohmann::json search_result_json(const SearchResult& result) {
  nlohmann::json o;
  o["status"] = status_name(result.status);
  o["k"] = static_cast<int>(result.path.size());
  o["initial_diff"] = result.initial_diff;
  o["remaining_diff"] = result.remaining_diff;
  o["progress"] = result.progress;
  o["expansions"] = result.expansions;
  o["wall_time"] = result.wall_time_seconds;
  nlohmann::json path = nlohmann::json::array();
  for (const MutationApplication& app : result.path) path.push_back(application_json(app));
  o["path"] = std::move(path);
  return o;
}

struct BudgetFlags {
  std::int64_t max_expansions = SearchBudget{}.max_expansions;
  std::int64_t max_frontier = SearchBudget{}.max_frontier;
  double time_limit = SearchBudget{}.time_limit_seconds;
  std::string heuristic_scale = "1";

  void attach(CLI::App* cmd) {
    cmd->add_option("--max-expansions", max_expansions, "expansion budget")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-frontier", max_frontier, "open queue size cap")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--time-limit", time_limit, "seconds per search")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--heuristic-scale", heuristic_scale,
                    "divide the heuristic by this rational, e.g. 2, 1.5 or 3/2");
  }

  SearchBudget budget() const {
    SearchBudget b;
    b.max_expansions = max_expansions;
    b.max_frontier = max_frontier;
    b.time_limit_seconds = time_limit;
    auto scale = Rational::parse(heuristic_scale);
    if (!scale) throw std::runtime_error("invalid --heuristic-scale '" + heuristic_scale + "'");
    b.heuristic_scale = *scale;
    return b;
  }
};

int cmd_reproduce(const std::string& fixed_path, const std::string& buggy_path,
                  const std::string& ops, const BudgetFlags& flags) {
  const Ast fixed = parse_file(fixed_path);
  const Ast buggy = parse_file(buggy_path);
  const SearchResult result = find_mutation_path(fixed, buggy, opset_or_fail(ops), flags.budget());
  std::cout << search_result_json(result).dump(2) << "\n";
  switch (result.status) {
    case SearchStatus::Full: return 0;
    case SearchStatus::Partial: return 3;
    case SearchStatus::Unreproducible: return 4;
  }
  return 1;
}

ReportFormats parse_formats(const std::string& text) {
  ReportFormats formats{false, false};
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "csv") {
      formats.csv = true;
    } else if (item == "json") {
      formats.json = true;
    } else {
      throw std::runtime_error("unknown format '" + item + "' (expected csv and/or json)");
    }
  }
  if (!formats.csv && !formats.json) throw std::runtime_error("--format selects nothing");
  return formats;
}

int cmd_run(const std::string& manifest_path, const std::string& ops, int parallelism,
            const std::string& out_dir, const std::string& format, const BudgetFlags& flags) {
  const auto t0 = std::chrono::steady_clock::now();
  const CorpusManifest manifest = load_manifest(manifest_path);
  const std::vector<PairResult> results =
      run_corpus(manifest, opset_or_fail(ops), flags.budget(), parallelism);
  const SummaryTables tables = summarize(results);
  emit(tables, results, out_dir, parse_formats(format));
  std::cout << render_summary(results) << "\n";
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const ProgressHistogramRow& row : tables.progress_histogram) {
    std::cerr << "progress[" << row.opset << "] " << row.bucket * 10 << "-"
              << (row.bucket + 1) * 10 << "%: " << row.count << "\n";
  }
  char timing[64];
  std::snprintf(timing, sizeof(timing), "%.3fs", secs);
  std::cerr << "wrote " << out_dir << " in " << timing << "\n";
  return 0;
}

int cmd_seed(const std::string& fixed_path, int k, std::uint64_t seed, const std::string& ops,
             const std::string& out_dir) {
  const Ast fixed = parse_file(fixed_path);
  const SeededBug bug = seed_bug(fixed, k, seed, opset_or_fail(ops));

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir + ": " + ec.message());

  {
    std::ofstream out(std::filesystem::path(out_dir) / "buggy.mini", std::ios::binary);
    out << pretty_print(bug.buggy);
    if (!out) throw std::runtime_error("failed writing buggy.mini");
  }
  nlohmann::json truth;
  truth["seed"] = bug.seed;
  truth["requested_k"] = k;
  truth["k"] = bug.k;
  truth["opset"] = ops;
  nlohmann::json steps = nlohmann::json::array();
  for (const MutationApplication& app : bug.truth_path) steps.push_back(application_json(app));
  truth["steps"] = std::move(steps);
  {
    std::ofstream out(std::filesystem::path(out_dir) / "truth.json", std::ios::binary);
    out << truth.dump(2) << "\n";
    if (!out) throw std::runtime_error("failed writing truth.json");
  }
  std::cout << "seeded k=" << bug.k << " into " << out_dir << "\n";
  return 0;
}

std::string site_text(const std::vector<int>& site) {
  std::string text = "[";
  for (std::size_t i = 0; i < site.size(); ++i) {
    if (i) text += ' ';
    text += std::to_string(site[i]);
  }
  return text + "]";
}

int cmd_diff(const std::string& a_path, const std::string& b_path, bool with_script) {
  const Ast a = parse_file(a_path);
  const Ast b = parse_file(b_path);
  DiffOptions options;
  options.with_script = with_script;
  const DiffResult result = ast_diff(a, b, options);
  std::cout << "distance: " << result.distance << "\n";
  if (result.script) {
    for (const EditOp& op : *result.script) {
      std::cout << edit_op_name(op.kind) << " " << site_text(op.site);
      switch (op.kind) {
        case EditOp::Kind::Relabel:
          std::cout << " '" << op.label << "'";
          break;
        case EditOp::Kind::Delete:
          std::cout << " " << kind_name(op.node_kind);
          break;
        case EditOp::Kind::Insert:
          std::cout << " " << kind_name(op.node_kind) << " '" << op.label
                    << "' take=" << op.take_count;
          break;
      }
      std::cout << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"searches shortest mutation chains that turn a fixed program into its buggy "
               "version, and reports reproducibility over corpora"};
  app.require_subcommand(1);

  auto* rep = app.add_subcommand("reproduce", "search a mutation chain between two programs");
  std::string rep_fixed, rep_buggy, rep_ops = "extended";
  rep->add_option("fixed", rep_fixed, "fixed program")->required();
  rep->add_option("buggy", rep_buggy, "buggy program")->required();
  rep->add_option("--ops", rep_ops, "operator set: pitest or extended");
  BudgetFlags rep_budget;
  rep_budget.attach(rep);

  auto* run = app.add_subcommand("run", "run a whole corpus and write reports");
  std::string run_manifest, run_ops = "extended", run_out = "out", run_format = "csv,json";
  int run_parallelism = 1;
  run->add_option("manifest", run_manifest, "corpus manifest")->required();
  run->add_option("--ops", run_ops, "operator set: pitest or extended");
  run->add_option("--parallelism", run_parallelism, "concurrent searches")
      ->check(CLI::PositiveNumber);
  run->add_option("--out", run_out, "report directory");
  run->add_option("--format", run_format, "comma list of csv,json");
  BudgetFlags run_budget;
  run_budget.attach(run);

  auto* seed = app.add_subcommand("seed", "derive a synthetic buggy program");
  std::string seed_fixed, seed_ops = "extended", seed_out;
  int seed_k = 1;
  std::uint64_t seed_value = 0;
  seed->add_option("fixed", seed_fixed, "fixed program")->required();
  seed->add_option("--k", seed_k, "mutation chain length")
      ->required()
      ->check(CLI::PositiveNumber);
  seed->add_option("--seed", seed_value, "random seed")->required();
  seed->add_option("--ops", seed_ops, "operator set: pitest or extended");
  seed->add_option("--out", seed_out, "output directory")->required();

  auto* diff = app.add_subcommand("diff", "tree edit distance between two programs");
  std::string diff_a, diff_b;
  bool diff_script = false;
  diff->add_option("a", diff_a, "first program")->required();
  diff->add_option("b", diff_b, "second program")->required();
  diff->add_flag("--script", diff_script, "also print the edit script");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (rep->parsed()) return cmd_reproduce(rep_fixed, rep_buggy, rep_ops, rep_budget);
    if (run->parsed())
      return cmd_run(run_manifest, run_ops, run_parallelism, run_out, run_format, run_budget);
    if (seed->parsed()) return cmd_seed(seed_fixed, seed_k, seed_value, seed_ops, seed_out);
    if (diff->parsed()) return cmd_diff(diff_a, diff_b, diff_script);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
