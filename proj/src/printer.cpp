#include "mutapath/printer.hpp"

#include <cassert>

namespace mutapath {
namespace {

constexpr int kPrecUnary = 11;
constexpr int kPrecPostfix = 12;
constexpr int kPrecPrimary = 13;

int binary_prec(const std::string& op) {
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "|") return 3;
  if (op == "^") return 4;
  if (op == "&") return 5;
  if (op == "==" || op == "!=") return 6;
  if (op == "<" || op == "<=" || op == ">" || op == ">=") return 7;
  if (op == "<<" || op == ">>") return 8;
  if (op == "+" || op == "-") return 9;
  return 10;  // * / %
}

int node_prec(const Node& n) {
  switch (n.kind()) {
    case NodeKind::BinaryExpr: return binary_prec(n.label());
    case NodeKind::UnaryExpr: return kPrecUnary;
    case NodeKind::IncDecExpr: return kPrecPostfix;
    default: return kPrecPrimary;
  }
}

void expr(const Node& n, std::string& out);

void child_expr(const Node& c, int min_prec, std::string& out) {
  bool parens = node_prec(c) < min_prec;
  if (parens) out += '(';
  expr(c, out);
  if (parens) out += ')';
}

void expr(const Node& n, std::string& out) {
  switch (n.kind()) {
    case NodeKind::Identifier:
    case NodeKind::Literal:
      out += n.label();
      break;
    case NodeKind::Call: {
      out += n.label();
      out += '(';
      for (int i = 0; i < n.arity(); ++i) {
        if (i) out += ", ";
        expr(*n.child(i), out);
      }
      out += ')';
      break;
    }
    case NodeKind::BinaryExpr: {
      int p = binary_prec(n.label());
      child_expr(*n.child(0), p, out);  // left-associative
      out += ' ';
      out += n.label();
      out += ' ';
      child_expr(*n.child(1), p + 1, out);
      break;
    }
    case NodeKind::UnaryExpr: {
      out += n.label();
      const Node& operand = *n.child(0);
      // "-(-x)" needs the parentheses or the two minus signs would lex as
      // a decrement token.
      bool parens = node_prec(operand) < kPrecUnary ||
                    (n.label() == "-" && operand.kind() == NodeKind::UnaryExpr &&
                     operand.label() == "-");
      if (parens) out += '(';
      expr(operand, out);
      if (parens) out += ')';
      break;
    }
    case NodeKind::IncDecExpr: {
      child_expr(*n.child(0), kPrecPostfix, out);
      out += n.label();
      break;
    }
    default:
      assert(false && "not an expression node");
  }
}

void indent(int level, std::string& out) { out.append(2 * level, ' '); }

void stmt(const Node& n, int level, std::string& out);

void block_body(const Node& block, int level, std::string& out) {
  for (const NodePtr& s : block.children()) stmt(*s, level + 1, out);
}

// Renders an if statement. `inline_head` omits the leading indent so an
// else-if chain stays on the `} else if (...)` line.
void if_stmt(const Node& n, int level, std::string& out, bool inline_head) {
  if (!inline_head) indent(level, out);
  out += "if (";
  expr(*n.child(0), out);
  out += ')';
  const Node& then = *n.child(1);
  bool block_then = then.kind() == NodeKind::Block;
  if (block_then) {
    out += " {\n";
    block_body(then, level, out);
    indent(level, out);
    out += '}';
  } else {
    out += '\n';
    stmt(then, level + 1, out);
  }
  if (n.arity() == 2) {
    if (block_then) out += '\n';
    return;
  }
  const Node& alt = *n.child(2);
  if (block_then) {
    out += " else";
  } else {
    indent(level, out);
    out += "else";
  }
  if (alt.kind() == NodeKind::Block) {
    out += " {\n";
    block_body(alt, level, out);
    indent(level, out);
    out += "}\n";
  } else if (alt.kind() == NodeKind::If) {
    out += ' ';
    if_stmt(alt, level, out, true);
  } else {
    out += '\n';
    stmt(alt, level + 1, out);
  }
}

void stmt(const Node& n, int level, std::string& out) {
  switch (n.kind()) {
    case NodeKind::Block:
      indent(level, out);
      out += "{\n";
      block_body(n, level, out);
      indent(level, out);
      out += "}\n";
      break;
    case NodeKind::VarDecl:
      indent(level, out);
      out += n.child(0)->label();
      out += ' ';
      out += n.label();
      if (n.arity() == 2) {
        out += " = ";
        expr(*n.child(1), out);
      }
      out += ";\n";
      break;
    case NodeKind::Assign:
      indent(level, out);
      out += n.child(0)->label();
      out += " = ";
      expr(*n.child(1), out);
      out += ";\n";
      break;
    case NodeKind::If:
      if_stmt(n, level, out, false);
      break;
    case NodeKind::While: {
      indent(level, out);
      out += "while (";
      expr(*n.child(0), out);
      out += ')';
      const Node& body = *n.child(1);
      if (body.kind() == NodeKind::Block) {
        out += " {\n";
        block_body(body, level, out);
        indent(level, out);
        out += "}\n";
      } else {
        out += '\n';
        stmt(body, level + 1, out);
      }
      break;
    }
    case NodeKind::Return:
      indent(level, out);
      out += "return ";
      expr(*n.child(0), out);
      out += ";\n";
      break;
    case NodeKind::ExprStmt:
      indent(level, out);
      expr(*n.child(0), out);
      out += ";\n";
      break;
    default:
      assert(false && "not a statement node");
  }
}

void function_decl(const Node& fn, std::string& out) {
  out += fn.child(0)->label();
  out += ' ';
  out += fn.label();
  out += '(';
  for (int i = 1; i < fn.arity() - 1; ++i) {
    if (i > 1) out += ", ";
    const Node& param = *fn.child(i);
    out += param.child(0)->label();
    out += ' ';
    out += param.child(1)->label();
  }
  out += ") {\n";
  block_body(*fn.child(fn.arity() - 1), 0, out);
  out += "}\n";
}

}  // namespace

std::string pretty_print(const Ast& ast) {
  std::string out;
  if (!ast.root) return out;
  for (const NodePtr& fn : ast.root->children()) function_decl(*fn, out);
  return out;
}

std::string print_expr(const NodePtr& e) {
  std::string out;
  expr(*e, out);
  return out;
}

}  // namespace mutapath
