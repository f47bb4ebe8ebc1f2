#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mutapath {

enum class NodeKind {
  Program,
  FunctionDecl,
  Param,
  TypeRef,
  Block,
  VarDecl,
  Assign,
  If,
  While,
  Return,
  ExprStmt,
  BinaryExpr,
  UnaryExpr,
  IncDecExpr,
  Call,
  Identifier,
  Literal,
};

inline constexpr int kNodeKindCount = 17;

const char* kind_name(NodeKind kind);
std::optional<NodeKind> kind_from_name(std::string_view name);

/// 128-bit structural digest. Trees with equal digests are treated as equal;
/// the digest is a pure function of (kind, label, children), never of
/// addresses, so it is stable across runs.
struct Digest {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;
  friend bool operator==(const Digest&, const Digest&) = default;
  friend auto operator<=>(const Digest&, const Digest&) = default;
};

struct DigestHash {
  std::size_t operator()(const Digest& d) const noexcept {
    return static_cast<std::size_t>(d.hi ^ (d.lo * 0x9e3779b97f4a7c15ull));
  }
};

std::string to_hex(const Digest& digest);

class Node;
using NodePtr = std::shared_ptr<const Node>;

/// Immutable ordered tree node. Subtree size and digest are computed once at
/// construction, so rewrites share untouched subtrees and only rebuild the
/// spine from the edited node up to the root.
class Node {
 public:
  Node(NodeKind kind, std::string label, std::vector<NodePtr> children);

  static NodePtr make(NodeKind kind, std::string label = {},
                      std::vector<NodePtr> children = {});

  NodeKind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  const std::vector<NodePtr>& children() const { return children_; }
  const NodePtr& child(std::size_t i) const { return children_[i]; }
  int arity() const { return static_cast<int>(children_.size()); }

  /// Node count of this subtree, including the node itself.
  int size() const { return size_; }
  const Digest& digest() const { return digest_; }

 private:
  NodeKind kind_;
  std::string label_;
  std::vector<NodePtr> children_;
  int size_;
  Digest digest_;
};

struct Ast {
  NodePtr root;
};

Digest canonical_hash(const Ast& ast);
int node_count(const Ast& ast);

/// Child-index walk from the root; empty path addresses the root itself.
/// Returns nullptr when the path leaves the tree.
const Node* node_at(const Ast& ast, std::span<const int> path);

/// Checks the arity and label rules for every node (BinaryExpr has exactly
/// two children, labels are non-empty exactly where the language defines
/// them, statement/expression positions hold the right kinds, ...).
bool validate(const Ast& ast, std::string* why = nullptr);

enum class LiteralKind { Int, Float, Bool, String, Null };

const char* literal_kind_name(LiteralKind kind);

/// Classifies a literal lexeme; lexemes are stored verbatim, quotes included
/// for strings, so the kind is always recoverable from the label alone.
LiteralKind literal_kind(std::string_view lexeme);

bool is_numeric(LiteralKind kind);

}  // namespace mutapath
