#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mutapath/ast.hpp"

namespace mutapath {

/// Thrown when |a| * |b| exceeds DiffOptions::size_limit before the distance
/// table would be allocated.
class SizeLimitError : public std::runtime_error {
 public:
  SizeLimitError(std::int64_t product, std::int64_t limit)
      : std::runtime_error("tree pair too large for exact diff: " +
                           std::to_string(product) + " node pairs > limit " +
                           std::to_string(limit)) {}
};

class InvalidScriptError : public std::runtime_error {
 public:
  explicit InvalidScriptError(const std::string& what)
      : std::runtime_error("invalid edit script: " + what) {}
};

/// One step of a sequential edit script. Sites are child-index paths into the
/// *current* working forest: the leading index selects a top-level tree (0
/// while the forest holds a single tree), the rest walk child lists. Deleting
/// a node splices its children into its place; inserting a node at `site`
/// adopts `take_count` consecutive existing children starting at that
/// position. Relabel keeps the node kind and rewrites the label.
struct EditOp {
  enum class Kind { Insert, Delete, Relabel };
  Kind kind;
  std::vector<int> site;
  NodeKind node_kind = NodeKind::Literal;  // Insert only
  std::string label;                       // Insert / Relabel
  int take_count = 0;                      // Insert only
};

struct DiffResult {
  int distance = 0;
  std::optional<std::vector<EditOp>> script;
};

struct DiffOptions {
  std::int64_t size_limit = 4'000'000;
  bool with_script = false;
};

/// Exact ordered-tree edit distance with unit costs. Allowed operations are
/// node insertion, node deletion, and relabeling; two nodes can only be
/// matched (and thus relabeled) when their kinds are equal, so a kind change
/// always costs a delete plus an insert. There is no move operation. When
/// `with_script` is set, the result carries a minimal sequential script whose
/// length equals the distance.
DiffResult ast_diff(const Ast& a, const Ast& b, const DiffOptions& options = {});

/// Applies a script produced by ast_diff(a, b, {.with_script=true}) to `a`,
/// yielding `b`. Throws InvalidScriptError when an op does not fit the tree
/// it is applied to.
Ast replay(const std::vector<EditOp>& script, const Ast& a);

const char* edit_op_name(EditOp::Kind kind);

}  // namespace mutapath
