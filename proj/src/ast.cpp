#include "mutapath/ast.hpp"

#include <array>
#include <cctype>
#include <utility>

namespace mutapath {
namespace {

constexpr std::array<const char*, kNodeKindCount> kKindNames = {
    "Program",  "FunctionDecl", "Param",      "TypeRef",    "Block",
    "VarDecl",  "Assign",       "If",         "While",      "Return",
    "ExprStmt", "BinaryExpr",   "UnaryExpr",  "IncDecExpr", "Call",
    "Identifier", "Literal",
};

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Two independent 64-bit absorption lanes give a 128-bit digest; collisions
// are negligible for any corpus this engine will ever see.
struct Lane {
  std::uint64_t state;
  explicit Lane(std::uint64_t seed) : state(seed) {}
  void absorb(std::uint64_t v) { state = mix64(state ^ (v * 0x2545f4914f6cdd1dull)); }
};

bool is_expr_kind(NodeKind k) {
  switch (k) {
    case NodeKind::BinaryExpr:
    case NodeKind::UnaryExpr:
    case NodeKind::IncDecExpr:
    case NodeKind::Call:
    case NodeKind::Identifier:
    case NodeKind::Literal:
      return true;
    default:
      return false;
  }
}

bool is_stmt_kind(NodeKind k) {
  switch (k) {
    case NodeKind::VarDecl:
    case NodeKind::Assign:
    case NodeKind::If:
    case NodeKind::While:
    case NodeKind::Return:
    case NodeKind::ExprStmt:
    case NodeKind::Block:
      return true;
    default:
      return false;
  }
}

bool is_type_label(const std::string& s) {
  return s == "int" || s == "float" || s == "bool" || s == "string" ||
         s == "void" || s == "ref";
}

bool is_binary_op_label(const std::string& s) {
  static const char* ops[] = {"||", "&&", "|",  "^",  "&",  "==", "!=", "<", "<=",
                              ">",  ">=", "<<", ">>", "+",  "-",  "*",  "/", "%"};
  for (const char* op : ops) {
    if (s == op) return true;
  }
  return false;
}

bool fail(std::string* why, std::string msg) {
  if (why) *why = std::move(msg);
  return false;
}

bool validate_node(const Node& n, std::string* why);

bool validate_children(const Node& n, std::string* why) {
  for (const NodePtr& c : n.children()) {
    if (!c) return fail(why, "null child");
    if (!validate_node(*c, why)) return false;
  }
  return true;
}

bool validate_node(const Node& n, std::string* why) {
  const std::string& label = n.label();
  const int arity = n.arity();
  auto kind_of = [&](int i) { return n.child(i)->kind(); };
  switch (n.kind()) {
    case NodeKind::Program:
      if (!label.empty()) return fail(why, "Program has a label");
      for (int i = 0; i < arity; ++i) {
        if (kind_of(i) != NodeKind::FunctionDecl)
          return fail(why, "Program child is not a FunctionDecl");
      }
      break;
    case NodeKind::FunctionDecl:
      if (label.empty()) return fail(why, "FunctionDecl without a name");
      if (arity < 2) return fail(why, "FunctionDecl needs a TypeRef and a Block");
      if (kind_of(0) != NodeKind::TypeRef)
        return fail(why, "FunctionDecl child 0 is not a TypeRef");
      if (kind_of(arity - 1) != NodeKind::Block)
        return fail(why, "FunctionDecl last child is not a Block");
      for (int i = 1; i < arity - 1; ++i) {
        if (kind_of(i) != NodeKind::Param)
          return fail(why, "FunctionDecl middle child is not a Param");
      }
      break;
    case NodeKind::Param:
      if (!label.empty()) return fail(why, "Param has a label");
      if (arity != 2 || kind_of(0) != NodeKind::TypeRef ||
          kind_of(1) != NodeKind::Identifier)
        return fail(why, "Param is not [TypeRef, Identifier]");
      break;
    case NodeKind::TypeRef:
      if (!is_type_label(label)) return fail(why, "TypeRef label '" + label + "'");
      if (arity != 0) return fail(why, "TypeRef with children");
      break;
    case NodeKind::Block:
      if (!label.empty()) return fail(why, "Block has a label");
      for (int i = 0; i < arity; ++i) {
        if (!is_stmt_kind(kind_of(i)))
          return fail(why, "Block child is not a statement");
      }
      break;
    case NodeKind::VarDecl:
      if (label.empty()) return fail(why, "VarDecl without a name");
      if (arity < 1 || arity > 2 || kind_of(0) != NodeKind::TypeRef)
        return fail(why, "VarDecl is not [TypeRef, init?]");
      if (arity == 2 && !is_expr_kind(kind_of(1)))
        return fail(why, "VarDecl initializer is not an expression");
      break;
    case NodeKind::Assign:
      if (!label.empty()) return fail(why, "Assign has a label");
      if (arity != 2 || kind_of(0) != NodeKind::Identifier ||
          !is_expr_kind(kind_of(1)))
        return fail(why, "Assign is not [Identifier, expr]");
      break;
    case NodeKind::If:
      if (!label.empty()) return fail(why, "If has a label");
      if (arity < 2 || arity > 3 || !is_expr_kind(kind_of(0)))
        return fail(why, "If is not [expr, stmt, stmt?]");
      for (int i = 1; i < arity; ++i) {
        if (!is_stmt_kind(kind_of(i))) return fail(why, "If branch is not a statement");
      }
      break;
    case NodeKind::While:
      if (!label.empty()) return fail(why, "While has a label");
      if (arity != 2 || !is_expr_kind(kind_of(0)) || !is_stmt_kind(kind_of(1)))
        return fail(why, "While is not [expr, stmt]");
      break;
    case NodeKind::Return:
      if (!label.empty()) return fail(why, "Return has a label");
      if (arity != 1 || !is_expr_kind(kind_of(0)))
        return fail(why, "Return is not [expr]");
      break;
    case NodeKind::ExprStmt:
      if (!label.empty()) return fail(why, "ExprStmt has a label");
      if (arity != 1 || !is_expr_kind(kind_of(0)))
        return fail(why, "ExprStmt is not [expr]");
      break;
    case NodeKind::BinaryExpr:
      if (!is_binary_op_label(label))
        return fail(why, "BinaryExpr label '" + label + "'");
      if (arity != 2 || !is_expr_kind(kind_of(0)) || !is_expr_kind(kind_of(1)))
        return fail(why, "BinaryExpr is not [expr, expr]");
      break;
    case NodeKind::UnaryExpr:
      if (label != "-" && label != "!")
        return fail(why, "UnaryExpr label '" + label + "'");
      if (arity != 1 || !is_expr_kind(kind_of(0)))
        return fail(why, "UnaryExpr is not [expr]");
      break;
    case NodeKind::IncDecExpr:
      if (label != "++" && label != "--")
        return fail(why, "IncDecExpr label '" + label + "'");
      if (arity != 1 || !is_expr_kind(kind_of(0)))
        return fail(why, "IncDecExpr is not [expr]");
      break;
    case NodeKind::Call:
      if (label.empty()) return fail(why, "Call without a callee");
      for (int i = 0; i < arity; ++i) {
        if (!is_expr_kind(kind_of(i))) return fail(why, "Call argument is not an expression");
      }
      break;
    case NodeKind::Identifier:
      if (label.empty()) return fail(why, "Identifier without a name");
      if (arity != 0) return fail(why, "Identifier with children");
      break;
    case NodeKind::Literal:
      if (label.empty()) return fail(why, "Literal without a lexeme");
      if (arity != 0) return fail(why, "Literal with children");
      break;
  }
  return validate_children(n, why);
}

}  // namespace

const char* kind_name(NodeKind kind) {
  return kKindNames[static_cast<int>(kind)];
}

std::optional<NodeKind> kind_from_name(std::string_view name) {
  for (int i = 0; i < kNodeKindCount; ++i) {
    if (name == kKindNames[i]) return static_cast<NodeKind>(i);
  }
  return std::nullopt;
}

std::string to_hex(const Digest& digest) {
  static const char* hex = "0123456789abcdef";
  std::string out(32, '0');
  for (int i = 0; i < 16; ++i) {
    std::uint64_t word = i < 8 ? digest.hi : digest.lo;
    int shift = 56 - 8 * (i % 8);
    unsigned byte = static_cast<unsigned>((word >> shift) & 0xff);
    out[2 * i] = hex[byte >> 4];
    out[2 * i + 1] = hex[byte & 0xf];
  }
  return out;
}

Node::Node(NodeKind kind, std::string label, std::vector<NodePtr> children)
    : kind_(kind), label_(std::move(label)), children_(std::move(children)) {
  Lane a(0x6d757461706174ull), b(0x7472656544696666ull);
  a.absorb(static_cast<std::uint64_t>(kind_) + 1);
  b.absorb(static_cast<std::uint64_t>(kind_) + 1);
  a.absorb(label_.size());
  b.absorb(label_.size());
  for (unsigned char ch : label_) {
    a.absorb(ch);
    b.absorb(ch + 0x100ull);
  }
  size_ = 1;
  a.absorb(children_.size());
  b.absorb(children_.size());
  for (const NodePtr& c : children_) {
    size_ += c->size();
    a.absorb(c->digest().hi);
    a.absorb(c->digest().lo);
    b.absorb(c->digest().lo);
    b.absorb(c->digest().hi);
  }
  digest_ = Digest{a.state, b.state};
}

NodePtr Node::make(NodeKind kind, std::string label, std::vector<NodePtr> children) {
  return std::make_shared<Node>(kind, std::move(label), std::move(children));
}

Digest canonical_hash(const Ast& ast) {
  return ast.root ? ast.root->digest() : Digest{};
}

int node_count(const Ast& ast) { return ast.root ? ast.root->size() : 0; }

const Node* node_at(const Ast& ast, std::span<const int> path) {
  const Node* n = ast.root.get();
  for (int idx : path) {
    if (!n || idx < 0 || idx >= n->arity()) return nullptr;
    n = n->child(static_cast<std::size_t>(idx)).get();
  }
  return n;
}

bool validate(const Ast& ast, std::string* why) {
  if (!ast.root) return fail(why, "empty tree");
  if (ast.root->kind() != NodeKind::Program) return fail(why, "root is not a Program");
  return validate_node(*ast.root, why);
}

const char* literal_kind_name(LiteralKind kind) {
  switch (kind) {
    case LiteralKind::Int: return "int";
    case LiteralKind::Float: return "float";
    case LiteralKind::Bool: return "bool";
    case LiteralKind::String: return "string";
    case LiteralKind::Null: return "null";
  }
  return "?";
}

LiteralKind literal_kind(std::string_view lexeme) {
  if (lexeme == "true" || lexeme == "false") return LiteralKind::Bool;
  if (lexeme == "null") return LiteralKind::Null;
  if (!lexeme.empty() && lexeme.front() == '"') return LiteralKind::String;
  if (lexeme.find('.') != std::string_view::npos) return LiteralKind::Float;
  return LiteralKind::Int;
}

bool is_numeric(LiteralKind kind) {
  return kind == LiteralKind::Int || kind == LiteralKind::Float;
}

}  // namespace mutapath
