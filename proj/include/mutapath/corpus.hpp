#pragma once

#include "mutapath/search.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mutapath {

class ManifestError : public std::runtime_error {
 public:
  explicit ManifestError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown by seed_bug when not a single mutation applies to the program.
class NoSitesError : public std::runtime_error {
 public:
  explicit NoSitesError(const std::string& what) : std::runtime_error(what) {}
};

/// One corpus entry. Files that could not be read or parsed leave the pair
/// excluded (asts empty) instead of failing the whole load.
struct PairSpec {
  std::string id;
  std::string project;
  std::filesystem::path fixed_path;
  std::filesystem::path buggy_path;
  std::optional<Ast> fixed;
  std::optional<Ast> buggy;
  bool excluded = false;
  std::string exclude_reason;
};

struct CorpusManifest {
  std::string project;
  std::vector<PairSpec> pairs;
  /// Top-level string fields of the manifest beyond project/pairs.
  std::map<std::string, std::string> metadata;
};

/// Reads a manifest (JSON object {"project": ..., "pairs": [{"id", "fixed",
/// "buggy"}]}) and loads every referenced program. File paths resolve
/// relative to the manifest's directory. Schema violations and duplicate ids
/// raise ManifestError; unparseable programs only exclude their pair.
CorpusManifest load_manifest(const std::filesystem::path& path);

struct SeededBug {
  Ast fixed;
  Ast buggy;
  std::vector<MutationApplication> truth_path;
  std::uint64_t seed = 0;
  /// Number of applications actually chained; < requested when the walk ran
  /// out of non-cycling applications.
  int k = 0;
};

/// Builds a synthetic bug by chaining k random mutations, never revisiting an
/// earlier tree, so the truth path length upper-bounds the shortest path.
SeededBug seed_bug(const Ast& fixed, int k, std::uint64_t seed, const OperatorSet& opset);

struct PairResult {
  std::string id;
  std::string project;
  std::string opset;
  std::optional<BugClass> status;  // empty for excluded pairs
  int k = 0;
  int initial_diff = 0;
  int remaining_diff = 0;
  double progress = 0.0;
  std::map<std::string, std::int64_t> operator_usage;
  std::int64_t expansions = 0;
  /// Kept at zero so reports are byte-stable; measure timing around the call
  /// instead when it matters.
  double wall_time = 0.0;
  bool excluded = false;
};

/// Searches every non-excluded pair, up to `parallelism` at a time. Results
/// come back in manifest order whatever the interleaving, and are a pure
/// function of (manifest contents, opset, budget).
std::vector<PairResult> run_corpus(const CorpusManifest& manifest, const OperatorSet& opset,
                                   const SearchBudget& budget, int parallelism = 1);

}  // namespace mutapath
