#pragma once

#include "mutapath/ast.hpp"

#include <array>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mutapath {

/// Thrown by apply() when the node at the application site no longer matches
/// what the application was enumerated against.
class StaleApplicationError : public std::runtime_error {
 public:
  explicit StaleApplicationError(const std::string& what) : std::runtime_error(what) {}
};

enum class OperatorId {
  ConditionalBoundary,
  Increments,
  InvertNegative,
  Math,
  NegateConditionals,
  VoidMethodCalls,
  EmptyReturns,
  FalseReturns,
  TrueReturns,
  NullReturns,
  PrimitiveReturns,
  MethodCalls,
  RelaxedEmptyReturns,
  RelaxedInlineConstants,
  RelaxedReturnValues,
  Rename,
};

inline constexpr int kOperatorCount = 16;

const char* operator_name(OperatorId id);
std::optional<OperatorId> operator_from_name(std::string_view name);

struct RelabelDetail {
  std::string old_label;
  std::string new_label;
};

/// wrap=true puts a unary minus around the node at the site; wrap=false
/// removes one (the site then addresses the UnaryExpr itself).
struct ToggleNegativeDetail {
  bool wrap = false;
};

/// Removes the statement at the site from its enclosing block.
struct DeleteStmtDetail {};

struct ReplaceNodeDetail {
  NodePtr replacement;
};

struct MutationApplication {
  OperatorId op;
  std::vector<int> site;
  /// Digest the node at the site must still carry when applied.
  Digest expected;
  std::variant<RelabelDetail, ToggleNegativeDetail, DeleteStmtDetail, ReplaceNodeDetail> detail;
  /// Upper bound on how many tree-edit operations one application is worth;
  /// lets callers derive an always-admissible heuristic scale.
  int touched = 1;
};

/// Replacement material harvested from the program pair under analysis:
/// literal lexemes from the target program, identifier names from both.
struct CandidatePool {
  std::array<std::set<std::string>, 5> literals;  // indexed by LiteralKind
  std::set<std::string> identifiers;

  const std::set<std::string>& literals_of(LiteralKind kind) const {
    return literals[static_cast<int>(kind)];
  }
};

CandidatePool build_pool(const Ast& fixed, const Ast& buggy);

struct MutationOperator {
  OperatorId id;
  void (*enumerate)(const Ast& ast, const CandidatePool& pool,
                    std::vector<MutationApplication>& out);
};

struct OperatorSet {
  std::string name;
  std::vector<MutationOperator> operators;
};

/// The eleven default operators.
const OperatorSet& pitest_operators();

/// All operators except VoidMethodCalls, whose applications MethodCalls
/// already produces; keeping both would duplicate edges.
const OperatorSet& extended_operators();

/// nullptr when the name is neither "pitest" nor "extended".
const OperatorSet* operator_set_by_name(std::string_view name);

/// Every application of every operator in the set: operators in set order,
/// sites in preorder, candidate values in pool order. Identity rewrites are
/// never included.
std::vector<MutationApplication> enumerate_applications(const OperatorSet& opset, const Ast& ast,
                                                        const CandidatePool& pool);

/// Applies one mutation, sharing all untouched subtrees with the input tree.
Ast apply(const Ast& ast, const MutationApplication& app);

}  // namespace mutapath
