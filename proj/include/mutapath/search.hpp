#pragma once

#include "mutapath/mutops.hpp"
#include "mutapath/treediff.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>

namespace mutapath {

/// Thrown by bfs_oracle when the exhaustive enumeration outgrows its cap.
class OracleExhaustedError : public std::runtime_error {
 public:
  explicit OracleExhaustedError(const std::string& what) : std::runtime_error(what) {}
};

/// Positive rational, accepted as "2", "1.5", or "3/2".
struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 1;

  static std::optional<Rational> parse(std::string_view text);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct SearchBudget {
  std::int64_t max_expansions = 50'000;
  std::int64_t max_frontier = 200'000;
  double time_limit_seconds = 60.0;
  /// Divides the heuristic before rounding up. 1 keeps raw tree edit
  /// distance (fast, possibly non-admissible because one mutation can erase
  /// a whole subtree); the largest per-application `touched` value restores
  /// admissibility and with it shortest-path guarantees.
  Rational heuristic_scale{1, 1};
};

enum class SearchStatus { Full, Partial, Unreproducible };
const char* status_name(SearchStatus status);

enum class BugClass { R, P, U };
const char* bug_class_name(BugClass bug_class);

struct SearchResult {
  SearchStatus status = SearchStatus::Unreproducible;
  std::vector<MutationApplication> path;
  int initial_diff = 0;
  int remaining_diff = 0;
  double progress = 0.0;
  std::int64_t expansions = 0;
  double wall_time_seconds = 0.0;
};

/// Best-first search for a shortest chain of mutations turning `fixed` into
/// `buggy`. Returns Full with the chain when the goal is reached, Partial
/// with the best diff-reducing prefix when a budget runs out first, and
/// Unreproducible when nothing explored got closer than the start.
SearchResult find_mutation_path(const Ast& fixed, const Ast& buggy, const OperatorSet& opset,
                                const SearchBudget& budget = {});

BugClass classify(const SearchResult& result);

/// Exhaustive breadth-first baseline: exact shortest chain length, or
/// nullopt when none exists within max_depth. Only viable on small inputs.
std::optional<int> bfs_oracle(const Ast& fixed, const Ast& buggy, const OperatorSet& opset,
                              int max_depth, std::int64_t state_cap = 2'000'000);

}  // namespace mutapath
