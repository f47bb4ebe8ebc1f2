#include "support/program_gen.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace testsupport {
namespace {

using mutapath::Ast;
using mutapath::Node;
using mutapath::NodeKind;
using mutapath::NodePtr;

const char* const kVarNames[] = {"a", "b", "c", "x", "y", "z", "n", "m"};
const char* const kFnNames[] = {"f", "g", "h", "p", "q"};
const char* const kValueTypes[] = {"int", "float", "bool", "string"};
const char* const kReturnTypes[] = {"int", "int", "float", "bool", "string", "ref", "void"};
const char* const kArithOps[] = {"+", "-", "*", "/", "%"};
const char* const kCompareOps[] = {"<", "<=", ">", ">=", "==", "!="};

struct FnSig {
  std::string name;
  std::string ret;
  std::vector<std::pair<std::string, std::string>> params;  // (type, name)
};

struct Gen {
  Rng& rng;
  std::vector<FnSig> sigs;

  NodePtr identifier(const std::vector<std::string>& scope) {
    return Node::make(NodeKind::Identifier, scope[rng.bounded(scope.size())]);
  }

  NodePtr literal() {
    switch (rng.range(0, 4)) {
      case 0: {
        char buf[8];
        std::snprintf(buf, sizeof(buf), "%d.%d", rng.range(0, 9), rng.range(0, 9));
        return Node::make(NodeKind::Literal, buf);
      }
      case 1:
        return Node::make(NodeKind::Literal, rng.chance(50) ? "true" : "false");
      case 2:
        return Node::make(NodeKind::Literal, std::string("\"s") +
                                                 std::to_string(rng.range(0, 3)) + "\"");
      default:
        return Node::make(NodeKind::Literal, std::to_string(rng.range(0, 9)));
    }
  }

  NodePtr call(const std::vector<std::string>& scope, int depth) {
    const FnSig& sig = sigs[rng.bounded(sigs.size())];
    std::vector<NodePtr> args;
    for (std::size_t i = 0; i < sig.params.size(); ++i) args.push_back(expr(scope, depth - 1));
    return Node::make(NodeKind::Call, sig.name, std::move(args));
  }

  NodePtr expr(const std::vector<std::string>& scope, int depth) {
    const int roll = rng.range(0, 99);
    if (depth <= 0 || roll < 45) {
      if (!scope.empty() && rng.chance(55)) return identifier(scope);
      return literal();
    }
    if (roll < 75) {
      const char* op = rng.chance(65) ? rng.pick(kArithOps) : rng.pick(kCompareOps);
      return Node::make(NodeKind::BinaryExpr, op, {expr(scope, depth - 1), expr(scope, depth - 1)});
    }
    if (roll < 81 && !scope.empty()) {
      return Node::make(NodeKind::IncDecExpr, rng.chance(50) ? "++" : "--",
                        {identifier(scope)});
    }
    if (roll < 88) {
      return Node::make(NodeKind::UnaryExpr, rng.chance(70) ? "-" : "!",
                        {expr(scope, depth - 1)});
    }
    if (!sigs.empty()) return call(scope, depth);
    return literal();
  }

  NodePtr compare(const std::vector<std::string>& scope, int depth) {
    return Node::make(NodeKind::BinaryExpr, rng.pick(kCompareOps),
                      {expr(scope, depth - 1), expr(scope, depth - 1)});
  }

  NodePtr statement(std::vector<std::string>& scope, std::vector<std::string>& fresh,
                    int depth) {
    const int roll = rng.range(0, 99);
    if (roll < 25 && !fresh.empty()) {
      std::string name = fresh.back();
      fresh.pop_back();
      std::vector<NodePtr> kids{Node::make(NodeKind::TypeRef, rng.pick(kValueTypes))};
      if (rng.chance(70)) kids.push_back(expr(scope, depth));
      scope.push_back(name);
      return Node::make(NodeKind::VarDecl, name, std::move(kids));
    }
    if (roll < 45 && !scope.empty()) {
      return Node::make(NodeKind::Assign, "", {identifier(scope), expr(scope, depth)});
    }
    if (roll < 60 && depth > 0) {
      std::vector<NodePtr> kids{compare(scope, depth), block(scope, fresh, depth - 1, 1, 2)};
      if (rng.chance(30)) kids.push_back(block(scope, fresh, depth - 1, 1, 1));
      return Node::make(NodeKind::If, "", std::move(kids));
    }
    if (roll < 70 && depth > 0) {
      return Node::make(NodeKind::While, "",
                        {compare(scope, depth), block(scope, fresh, depth - 1, 1, 1)});
    }
    if (roll < 85 && !sigs.empty()) {
      return Node::make(NodeKind::ExprStmt, "", {call(scope, depth)});
    }
    if (!scope.empty()) {
      return Node::make(NodeKind::ExprStmt, "",
                        {Node::make(NodeKind::IncDecExpr, rng.chance(50) ? "++" : "--",
                                    {identifier(scope)})});
    }
    return Node::make(NodeKind::ExprStmt, "", {expr(scope, depth)});
  }

  NodePtr block(std::vector<std::string>& scope, std::vector<std::string>& fresh, int depth,
                int min_stmts, int max_stmts) {
    const std::size_t scope_mark = scope.size();
    std::vector<NodePtr> stmts;
    const int n = rng.range(min_stmts, max_stmts);
    for (int i = 0; i < n; ++i) stmts.push_back(statement(scope, fresh, depth));
    scope.resize(scope_mark);  // inner declarations go out of scope
    return Node::make(NodeKind::Block, "", std::move(stmts));
  }

  NodePtr function(const FnSig& sig, int size_hint) {
    std::vector<NodePtr> kids{Node::make(NodeKind::TypeRef, sig.ret)};
    std::vector<std::string> scope;
    for (const auto& [type, name] : sig.params) {
      kids.push_back(Node::make(NodeKind::Param, "",
                                {Node::make(NodeKind::TypeRef, type),
                                 Node::make(NodeKind::Identifier, name)}));
      scope.push_back(name);
    }
    std::vector<std::string> fresh;
    for (const char* name : kVarNames) {
      if (std::find(scope.begin(), scope.end(), name) == scope.end()) fresh.push_back(name);
    }
    std::reverse(fresh.begin(), fresh.end());

    std::vector<NodePtr> stmts;
    const int n = rng.range(1, std::max(1, size_hint));
    for (int i = 0; i < n; ++i) stmts.push_back(statement(scope, fresh, 2));
    if (sig.ret != "void") {
      stmts.push_back(Node::make(NodeKind::Return, "", {expr(scope, 2)}));
    }
    kids.push_back(Node::make(NodeKind::Block, "", std::move(stmts)));
    return Node::make(NodeKind::FunctionDecl, sig.name, std::move(kids));
  }
};

}  // namespace

mutapath::Ast random_program(Rng& rng, int size_hint) {
  Gen gen{rng, {}};
  const int nfns = 1 + static_cast<int>(rng.bounded(2));
  const int name_base = rng.range(0, 4);
  const int param_base = rng.range(0, 7);
  for (int i = 0; i < nfns; ++i) {
    FnSig sig;
    sig.name = kFnNames[(name_base + i) % 5];
    sig.ret = rng.pick(kReturnTypes);
    const int nparams = rng.range(0, 2);
    for (int j = 0; j < nparams; ++j) {
      sig.params.emplace_back(rng.pick(kValueTypes), kVarNames[(param_base + j) % 8]);
    }
    gen.sigs.push_back(std::move(sig));
  }
  std::vector<NodePtr> decls;
  for (const FnSig& sig : gen.sigs) decls.push_back(gen.function(sig, size_hint));
  return Ast{Node::make(NodeKind::Program, "", std::move(decls))};
}

mutapath::Ast random_program_sized(std::uint64_t seed, int min_nodes, int max_nodes) {
  for (int attempt = 0; attempt < 4000; ++attempt) {
    Rng rng(seed ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(attempt + 1)));
    Ast program = random_program(rng, 1 + attempt % 7);
    const int n = node_count(program);
    if (n >= min_nodes && n <= max_nodes) return program;
  }
  throw std::logic_error("random_program_sized could not hit the requested node range");
}

}  // namespace testsupport
