#pragma once

#include <string>

#include "mutapath/ast.hpp"

namespace mutapath {

/// Renders a tree back to canonical source text: two-space indents, one
/// statement per line, minimal parentheses chosen by operator precedence.
/// parse(pretty_print(ast)) reproduces the tree exactly.
std::string pretty_print(const Ast& ast);

/// Canonical rendering of a single expression subtree.
std::string print_expr(const NodePtr& expr);

}  // namespace mutapath
