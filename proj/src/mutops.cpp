#include "mutapath/mutops.hpp"

#include <algorithm>
#include <map>

namespace mutapath {
namespace {

const char* const kOperatorNames[kOperatorCount] = {
    "ConditionalBoundary",
    "Increments",
    "InvertNegative",
    "Math",
    "NegateConditionals",
    "VoidMethodCalls",
    "EmptyReturns",
    "FalseReturns",
    "TrueReturns",
    "NullReturns",
    "PrimitiveReturns",
    "MethodCalls",
    "RelaxedEmptyReturns",
    "RelaxedInlineConstants",
    "RelaxedReturnValues",
    "Rename",
};

const std::string kNoReturnType;

struct SiteInfo {
  const Node* node;
  const Node* parent;        // nullptr at the root
  bool in_expr;              // the node fills an expression slot of its parent
  const std::string* ret_type;  // enclosing function's return type, "" outside
  std::vector<int> path;
};

bool child_in_expr(NodeKind parent, int index) {
  switch (parent) {
    case NodeKind::BinaryExpr:
    case NodeKind::UnaryExpr:
    case NodeKind::IncDecExpr:
    case NodeKind::Call:
      return true;
    case NodeKind::Assign:
    case NodeKind::VarDecl:
      return index == 1;
    case NodeKind::If:
    case NodeKind::While:
    case NodeKind::Return:
    case NodeKind::ExprStmt:
      return index == 0;
    default:
      return false;
  }
}

void walk(const NodePtr& n, const Node* parent, bool in_expr, const std::string* ret,
          std::vector<int>& path, std::vector<SiteInfo>& out) {
  out.push_back(SiteInfo{n.get(), parent, in_expr, ret, path});
  const std::string* child_ret = ret;
  if (n->kind() == NodeKind::FunctionDecl) child_ret = &n->child(0)->label();
  for (int i = 0; i < n->arity(); ++i) {
    path.push_back(i);
    walk(n->child(i), n.get(), child_in_expr(n->kind(), i), child_ret, path, out);
    path.pop_back();
  }
}

std::vector<SiteInfo> collect_sites(const Ast& ast) {
  std::vector<SiteInfo> sites;
  if (!ast.root) return sites;
  std::vector<int> path;
  walk(ast.root, nullptr, false, &kNoReturnType, path, sites);
  return sites;
}

/// Function name -> return type label; the first declaration wins.
std::map<std::string, std::string> declared_functions(const Ast& ast) {
  std::map<std::string, std::string> decls;
  if (!ast.root || ast.root->kind() != NodeKind::Program) return decls;
  for (const NodePtr& fn : ast.root->children()) {
    if (fn->kind() != NodeKind::FunctionDecl || fn->arity() < 1) continue;
    decls.emplace(fn->label(), fn->child(0)->label());
  }
  return decls;
}

MutationApplication relabel_app(OperatorId op, const SiteInfo& s, std::string new_label) {
  return MutationApplication{op, s.path, s.node->digest(),
                             RelabelDetail{s.node->label(), std::move(new_label)}, 1};
}

/// Replaces the expression under a Return node; skips identity rewrites.
void push_return_replacement(OperatorId op, const SiteInfo& ret_site, NodePtr replacement,
                             std::vector<MutationApplication>& out) {
  const NodePtr& old = ret_site.node->child(0);
  if (old->digest() == replacement->digest()) return;
  std::vector<int> site = ret_site.path;
  site.push_back(0);
  int touched = old->size() + replacement->size();
  out.push_back(MutationApplication{op, std::move(site), old->digest(),
                                    ReplaceNodeDetail{std::move(replacement)}, touched});
}

bool is_string_literal(const Node* n) {
  return n->kind() == NodeKind::Literal && literal_kind(n->label()) == LiteralKind::String;
}

bool invertible_operand(const Node* n) {
  if (n->kind() == NodeKind::Identifier) return true;
  return n->kind() == NodeKind::Literal && is_numeric(literal_kind(n->label()));
}

/// Default literal lexeme per declared type; nullptr for void.
const char* default_literal(const std::string& type) {
  if (type == "int" || type == "float") return "0";
  if (type == "bool") return "false";
  if (type == "string") return "\"\"";
  if (type == "ref") return "null";
  return nullptr;
}

/// Literal kind carried by values of a declared type.
std::optional<LiteralKind> literal_kind_for_type(const std::string& type) {
  if (type == "int") return LiteralKind::Int;
  if (type == "float") return LiteralKind::Float;
  if (type == "bool") return LiteralKind::Bool;
  if (type == "string") return LiteralKind::String;
  if (type == "ref") return LiteralKind::Null;
  return std::nullopt;
}

void enum_conditional_boundary(const Ast& ast, const CandidatePool&,
                               std::vector<MutationApplication>& out) {
  for (const SiteInfo& s : collect_sites(ast)) {
    if (s.node->kind() != NodeKind::BinaryExpr) continue;
    const std::string& l = s.node->label();
    const char* swap = l == "<"    ? "<="
                       : l == "<=" ? "<"
                       : l == ">"  ? ">="
                       : l == ">=" ? ">"
                                   : nullptr;
    if (swap) out.push_back(relabel_app(OperatorId::ConditionalBoundary, s, swap));
  }
}

void enum_increments(const Ast& ast, const CandidatePool&, std::vector<MutationApplication>& out) {
  for (const SiteInfo& s : collect_sites(ast)) {
    if (s.node->kind() != NodeKind::IncDecExpr) continue;
    out.push_back(
        relabel_app(OperatorId::Increments, s, s.node->label() == "++" ? "--" : "++"));
  }
}

void enum_invert_negative(const Ast& ast, const CandidatePool&,
                          std::vector<MutationApplication>& out) {
  for (const SiteInfo& s : collect_sites(ast)) {
    if (s.node->kind() == NodeKind::UnaryExpr && s.node->label() == "-" &&
        invertible_operand(s.node->child(0).get())) {
      out.push_back(MutationApplication{OperatorId::InvertNegative, s.path, s.node->digest(),
                                        ToggleNegativeDetail{false}, 1});
    } else if (invertible_operand(s.node) && s.in_expr &&
               !(s.parent && s.parent->kind() == NodeKind::UnaryExpr &&
                 s.parent->label() == "-")) {
      out.push_back(MutationApplication{OperatorId::InvertNegative, s.path, s.node->digest(),
                                        ToggleNegativeDetail{true}, 1});
    }
  }
}

void enum_math(const Ast& ast, const CandidatePool&, std::vector<MutationApplication>& out) {
  static const char* const kArith[] = {"+", "-", "*", "/", "%"};
  static const char* const kBitwise[] = {"&", "|", "^", "<<", ">>"};
  for (const SiteInfo& s : collect_sites(ast)) {
    if (s.node->kind() != NodeKind::BinaryExpr) continue;
    const std::string& l = s.node->label();
    auto in = [&](const char* const (&cat)[5]) {
      return std::find_if(std::begin(cat), std::end(cat),
                          [&](const char* op) { return l == op; }) != std::end(cat);
    };
    const char* const(*cat)[5] = in(kArith) ? &kArith : in(kBitwise) ? &kBitwise : nullptr;
    if (!cat) continue;
    if (l == "+" && (is_string_literal(s.node->child(0).get()) ||
                     is_string_literal(s.node->child(1).get())))
      continue;  // string concatenation is not a mathematical operator
    for (const char* other : *cat) {
      if (l != other) out.push_back(relabel_app(OperatorId::Math, s, other));
    }
  }
}

void enum_negate_conditionals(const Ast& ast, const CandidatePool&,
                              std::vector<MutationApplication>& out) {
  for (const SiteInfo& s : collect_sites(ast)) {
    if (s.node->kind() != NodeKind::BinaryExpr) continue;
    const std::string& l = s.node->label();
    const char* neg = l == "=="   ? "!="
                      : l == "!=" ? "=="
                      : l == "<"  ? ">="
                      : l == "<=" ? ">"
                      : l == ">"  ? "<="
                      : l == ">=" ? "<"
                                  : nullptr;
    if (neg) out.push_back(relabel_app(OperatorId::NegateConditionals, s, neg));
  }
}

bool deletable_call_stmt(const SiteInfo& s) {
  return s.node->kind() == NodeKind::ExprStmt && s.parent &&
         s.parent->kind() == NodeKind::Block && s.node->child(0)->kind() == NodeKind::Call;
}

void enum_void_method_calls(const Ast& ast, const CandidatePool&,
                            std::vector<MutationApplication>& out) {
  auto decls = declared_functions(ast);
  for (const SiteInfo& s : collect_sites(ast)) {
    if (!deletable_call_stmt(s)) continue;
    auto it = decls.find(s.node->child(0)->label());
    if (it != decls.end() && it->second != "void") continue;  // known non-void callee
    out.push_back(MutationApplication{OperatorId::VoidMethodCalls, s.path, s.node->digest(),
                                      DeleteStmtDetail{}, s.node->size()});
  }
}

void enum_typed_return_default(OperatorId op, const Ast& ast,
                               bool (*type_wanted)(const std::string&),
                               std::vector<MutationApplication>& out) {
  for (const SiteInfo& s : collect_sites(ast)) {
    if (s.node->kind() != NodeKind::Return || !type_wanted(*s.ret_type)) continue;
    const char* lex = default_literal(*s.ret_type);
    if (!lex) continue;
    push_return_replacement(op, s, Node::make(NodeKind::Literal, lex), out);
  }
}

void enum_empty_returns(const Ast& ast, const CandidatePool&,
                        std::vector<MutationApplication>& out) {
  enum_typed_return_default(
      OperatorId::EmptyReturns, ast,
      [](const std::string& t) {
        return t == "int" || t == "float" || t == "bool" || t == "string";
      },
      out);
}

void enum_false_returns(const Ast& ast, const CandidatePool&,
                        std::vector<MutationApplication>& out) {
  for (const SiteInfo& s : collect_sites(ast)) {
    if (s.node->kind() == NodeKind::Return && *s.ret_type == "bool")
      push_return_replacement(OperatorId::FalseReturns, s, Node::make(NodeKind::Literal, "false"),
                              out);
  }
}

void enum_true_returns(const Ast& ast, const CandidatePool&,
                       std::vector<MutationApplication>& out) {
  for (const SiteInfo& s : collect_sites(ast)) {
    if (s.node->kind() == NodeKind::Return && *s.ret_type == "bool")
      push_return_replacement(OperatorId::TrueReturns, s, Node::make(NodeKind::Literal, "true"),
                              out);
  }
}

void enum_null_returns(const Ast& ast, const CandidatePool&,
                       std::vector<MutationApplication>& out) {
  enum_typed_return_default(
      OperatorId::NullReturns, ast, [](const std::string& t) { return t == "ref"; }, out);
}

void enum_primitive_returns(const Ast& ast, const CandidatePool&,
                            std::vector<MutationApplication>& out) {
  enum_typed_return_default(
      OperatorId::PrimitiveReturns, ast,
      [](const std::string& t) { return t == "int" || t == "float"; }, out);
}

void enum_method_calls(const Ast& ast, const CandidatePool&,
                       std::vector<MutationApplication>& out) {
  auto decls = declared_functions(ast);
  for (const SiteInfo& s : collect_sites(ast)) {
    if (deletable_call_stmt(s)) {
      out.push_back(MutationApplication{OperatorId::MethodCalls, s.path, s.node->digest(),
                                        DeleteStmtDetail{}, s.node->size()});
    } else if (s.node->kind() == NodeKind::Call && s.in_expr && s.parent &&
               s.parent->kind() != NodeKind::ExprStmt) {
      auto it = decls.find(s.node->label());
      if (it == decls.end()) continue;  // unknown return type
      const char* lex = default_literal(it->second);
      if (!lex) continue;  // void-valued call in expression position
      NodePtr replacement = Node::make(NodeKind::Literal, lex);
      out.push_back(MutationApplication{OperatorId::MethodCalls, s.path, s.node->digest(),
                                        ReplaceNodeDetail{replacement},
                                        s.node->size() + replacement->size()});
    }
  }
}

void enum_relaxed_empty_returns(const Ast& ast, const CandidatePool& pool,
                                std::vector<MutationApplication>& out) {
  for (const SiteInfo& s : collect_sites(ast)) {
    if (s.node->kind() != NodeKind::Return) continue;
    auto kind = literal_kind_for_type(*s.ret_type);
    if (!kind) continue;
    for (const std::string& lex : pool.literals_of(*kind)) {
      push_return_replacement(OperatorId::RelaxedEmptyReturns, s,
                              Node::make(NodeKind::Literal, lex), out);
    }
  }
}

void enum_relaxed_inline_constants(const Ast& ast, const CandidatePool& pool,
                                   std::vector<MutationApplication>& out) {
  for (const SiteInfo& s : collect_sites(ast)) {
    if (s.node->kind() != NodeKind::Literal) continue;
    for (const std::string& lex : pool.literals_of(literal_kind(s.node->label()))) {
      if (lex != s.node->label())
        out.push_back(relabel_app(OperatorId::RelaxedInlineConstants, s, lex));
    }
  }
}

void enum_relaxed_return_values(const Ast& ast, const CandidatePool& pool,
                                std::vector<MutationApplication>& out) {
  for (const SiteInfo& s : collect_sites(ast)) {
    if (s.node->kind() != NodeKind::Return) continue;
    if (auto kind = literal_kind_for_type(*s.ret_type)) {
      for (const std::string& lex : pool.literals_of(*kind)) {
        push_return_replacement(OperatorId::RelaxedReturnValues, s,
                                Node::make(NodeKind::Literal, lex), out);
      }
    }
    for (const std::string& name : pool.identifiers) {
      push_return_replacement(OperatorId::RelaxedReturnValues, s,
                              Node::make(NodeKind::Identifier, name), out);
    }
  }
}

void enum_rename(const Ast& ast, const CandidatePool& pool,
                 std::vector<MutationApplication>& out) {
  for (const SiteInfo& s : collect_sites(ast)) {
    if (s.node->kind() != NodeKind::Identifier && s.node->kind() != NodeKind::Call) continue;
    for (const std::string& name : pool.identifiers) {
      if (name != s.node->label()) out.push_back(relabel_app(OperatorId::Rename, s, name));
    }
  }
}

constexpr MutationOperator kOperators[kOperatorCount] = {
    {OperatorId::ConditionalBoundary, enum_conditional_boundary},
    {OperatorId::Increments, enum_increments},
    {OperatorId::InvertNegative, enum_invert_negative},
    {OperatorId::Math, enum_math},
    {OperatorId::NegateConditionals, enum_negate_conditionals},
    {OperatorId::VoidMethodCalls, enum_void_method_calls},
    {OperatorId::EmptyReturns, enum_empty_returns},
    {OperatorId::FalseReturns, enum_false_returns},
    {OperatorId::TrueReturns, enum_true_returns},
    {OperatorId::NullReturns, enum_null_returns},
    {OperatorId::PrimitiveReturns, enum_primitive_returns},
    {OperatorId::MethodCalls, enum_method_calls},
    {OperatorId::RelaxedEmptyReturns, enum_relaxed_empty_returns},
    {OperatorId::RelaxedInlineConstants, enum_relaxed_inline_constants},
    {OperatorId::RelaxedReturnValues, enum_relaxed_return_values},
    {OperatorId::Rename, enum_rename},
};

}  // namespace

const char* operator_name(OperatorId id) { return kOperatorNames[static_cast<int>(id)]; }

std::optional<OperatorId> operator_from_name(std::string_view name) {
  for (int i = 0; i < kOperatorCount; ++i) {
    if (name == kOperatorNames[i]) return static_cast<OperatorId>(i);
  }
  return std::nullopt;
}

CandidatePool build_pool(const Ast& fixed, const Ast& buggy) {
  CandidatePool pool;
  auto harvest_identifiers = [&](const NodePtr& root) {
    if (!root) return;
    auto rec = [&](auto&& self, const NodePtr& n) -> void {
      switch (n->kind()) {
        case NodeKind::Identifier:
        case NodeKind::Call:
        case NodeKind::FunctionDecl:
        case NodeKind::VarDecl:
          pool.identifiers.insert(n->label());
          break;
        default:
          break;
      }
      for (const NodePtr& c : n->children()) self(self, c);
    };
    rec(rec, root);
  };
  harvest_identifiers(fixed.root);
  harvest_identifiers(buggy.root);
  if (buggy.root) {
    auto rec = [&](auto&& self, const NodePtr& n) -> void {
      if (n->kind() == NodeKind::Literal)
        pool.literals[static_cast<int>(literal_kind(n->label()))].insert(n->label());
      for (const NodePtr& c : n->children()) self(self, c);
    };
    rec(rec, buggy.root);
  }
  return pool;
}

const OperatorSet& pitest_operators() {
  static const OperatorSet set = [] {
    OperatorSet s{"pitest", {}};
    for (int i = 0; i <= static_cast<int>(OperatorId::PrimitiveReturns); ++i)
      s.operators.push_back(kOperators[i]);
    return s;
  }();
  return set;
}

const OperatorSet& extended_operators() {
  static const OperatorSet set = [] {
    OperatorSet s{"extended", {}};
    for (const MutationOperator& op : kOperators) {
      if (op.id != OperatorId::VoidMethodCalls) s.operators.push_back(op);
    }
    return s;
  }();
  return set;
}

const OperatorSet* operator_set_by_name(std::string_view name) {
  if (name == "pitest") return &pitest_operators();
  if (name == "extended") return &extended_operators();
  return nullptr;
}

std::vector<MutationApplication> enumerate_applications(const OperatorSet& opset, const Ast& ast,
                                                        const CandidatePool& pool) {
  std::vector<MutationApplication> out;
  for (const MutationOperator& op : opset.operators) op.enumerate(ast, pool, out);
  return out;
}

namespace {

NodePtr make_replacement(const NodePtr& node, const MutationApplication& app) {
  return std::visit(
      [&](const auto& detail) -> NodePtr {
        using T = std::decay_t<decltype(detail)>;
        if constexpr (std::is_same_v<T, RelabelDetail>) {
          if (node->label() != detail.old_label)
            throw StaleApplicationError("stale mutation: old label does not match");
          return Node::make(node->kind(), detail.new_label, node->children());
        } else if constexpr (std::is_same_v<T, ToggleNegativeDetail>) {
          if (detail.wrap) return Node::make(NodeKind::UnaryExpr, "-", {node});
          if (node->kind() != NodeKind::UnaryExpr || node->label() != "-" || node->arity() != 1)
            throw StaleApplicationError("stale mutation: no unary minus to remove");
          return node->child(0);
        } else if constexpr (std::is_same_v<T, DeleteStmtDetail>) {
          return nullptr;
        } else {
          return detail.replacement;
        }
      },
      app.detail);
}

NodePtr apply_rec(const NodePtr& node, const MutationApplication& app, std::size_t depth) {
  if (depth == app.site.size()) {
    if (node->digest() != app.expected)
      throw StaleApplicationError("stale mutation: node at site has changed");
    return make_replacement(node, app);
  }
  const int idx = app.site[depth];
  if (idx < 0 || idx >= node->arity())
    throw StaleApplicationError("stale mutation: site leaves the tree");
  NodePtr child = apply_rec(node->child(idx), app, depth + 1);
  std::vector<NodePtr> kids = node->children();
  if (child) {
    kids[static_cast<std::size_t>(idx)] = std::move(child);
  } else {
    kids.erase(kids.begin() + idx);
  }
  return Node::make(node->kind(), node->label(), std::move(kids));
}

}  // namespace

Ast apply(const Ast& ast, const MutationApplication& app) {
  if (!ast.root) throw StaleApplicationError("stale mutation: empty tree");
  NodePtr root = apply_rec(ast.root, app, 0);
  if (!root) throw StaleApplicationError("stale mutation: cannot delete the root");
  return Ast{std::move(root)};
}

}  // namespace mutapath
