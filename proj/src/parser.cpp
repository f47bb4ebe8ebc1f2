#include "mutapath/parser.hpp"

#include <cctype>
#include <utility>

namespace mutapath {
namespace {

enum class Tok {
  Ident, IntLit, FloatLit, StringLit,
  KwInt, KwFloat, KwBool, KwString, KwVoid, KwRef,
  KwIf, KwElse, KwWhile, KwReturn, KwTrue, KwFalse, KwNull,
  LParen, RParen, LBrace, RBrace, Comma, Semi, Assign,
  OrOr, AndAnd, Or, Xor, And, EqEq, NotEq, Lt, Le, Gt, Ge, Shl, Shr,
  Plus, Minus, Star, Slash, Percent, Not, PlusPlus, MinusMinus,
  Eof,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

const char* tok_desc(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::IntLit: return "integer literal";
    case Tok::FloatLit: return "float literal";
    case Tok::StringLit: return "string literal";
    case Tok::KwInt: return "'int'";
    case Tok::KwFloat: return "'float'";
    case Tok::KwBool: return "'bool'";
    case Tok::KwString: return "'string'";
    case Tok::KwVoid: return "'void'";
    case Tok::KwRef: return "'ref'";
    case Tok::KwIf: return "'if'";
    case Tok::KwElse: return "'else'";
    case Tok::KwWhile: return "'while'";
    case Tok::KwReturn: return "'return'";
    case Tok::KwTrue: return "'true'";
    case Tok::KwFalse: return "'false'";
    case Tok::KwNull: return "'null'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Assign: return "'='";
    case Tok::OrOr: return "'||'";
    case Tok::AndAnd: return "'&&'";
    case Tok::Or: return "'|'";
    case Tok::Xor: return "'^'";
    case Tok::And: return "'&'";
    case Tok::EqEq: return "'=='";
    case Tok::NotEq: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Shl: return "'<<'";
    case Tok::Shr: return "'>>'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Percent: return "'%'";
    case Tok::Not: return "'!'";
    case Tok::PlusPlus: return "'++'";
    case Tok::MinusMinus: return "'--'";
    case Tok::Eof: return "end of input";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      int line = line_, col = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::Eof, "", line, col});
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        out.push_back(lex_word(line, col));
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back(lex_number(line, col));
      } else if (c == '"') {
        out.push_back(lex_string(line, col));
      } else {
        out.push_back(lex_punct(line, col));
      }
    }
  }

 private:
  [[noreturn]] void error(const std::string& msg, int line, int col) {
    throw ParseError(msg, line, col, {});
  }

  char peek(std::size_t off = 0) const {
    return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token lex_word(int line, int col) {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      advance();
    }
    std::string word(src_.substr(start, pos_ - start));
    static const std::pair<const char*, Tok> keywords[] = {
        {"int", Tok::KwInt},     {"float", Tok::KwFloat},   {"bool", Tok::KwBool},
        {"string", Tok::KwString}, {"void", Tok::KwVoid},   {"ref", Tok::KwRef},
        {"if", Tok::KwIf},       {"else", Tok::KwElse},     {"while", Tok::KwWhile},
        {"return", Tok::KwReturn}, {"true", Tok::KwTrue},   {"false", Tok::KwFalse},
        {"null", Tok::KwNull},
    };
    for (const auto& [text, tok] : keywords) {
      if (word == text) return {tok, std::move(word), line, col};
    }
    return {Tok::Ident, std::move(word), line, col};
  }

  Token lex_number(int line, int col) {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    bool is_float = false;
    if (peek() == '.') {
      if (!std::isdigit(static_cast<unsigned char>(peek(1))))
        error("malformed number: digits required after '.'", line_, col_);
      is_float = true;
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    }
    return {is_float ? Tok::FloatLit : Tok::IntLit,
            std::string(src_.substr(start, pos_ - start)), line, col};
  }

  Token lex_string(int line, int col) {
    std::size_t start = pos_;
    advance();  // opening quote
    while (true) {
      if (pos_ >= src_.size() || src_[pos_] == '\n')
        error("unterminated string literal", line, col);
      char c = src_[pos_];
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size()) error("unterminated string literal", line, col);
        advance();
      } else if (c == '"') {
        advance();
        break;
      } else {
        advance();
      }
    }
    // Lexeme keeps the quotes and escapes verbatim; printing reuses it as is.
    return {Tok::StringLit, std::string(src_.substr(start, pos_ - start)), line, col};
  }

  Token lex_punct(int line, int col) {
    auto two = [&](char a, char b) { return peek() == a && peek(1) == b; };
    struct Rule { const char* text; Tok tok; };
    static const Rule two_char[] = {
        {"||", Tok::OrOr}, {"&&", Tok::AndAnd}, {"==", Tok::EqEq}, {"!=", Tok::NotEq},
        {"<<", Tok::Shl},  {">>", Tok::Shr},    {"<=", Tok::Le},   {">=", Tok::Ge},
        {"++", Tok::PlusPlus}, {"--", Tok::MinusMinus},
    };
    for (const Rule& r : two_char) {
      if (two(r.text[0], r.text[1])) {
        advance();
        advance();
        return {r.tok, r.text, line, col};
      }
    }
    char c = peek();
    Tok tok;
    switch (c) {
      case '(': tok = Tok::LParen; break;
      case ')': tok = Tok::RParen; break;
      case '{': tok = Tok::LBrace; break;
      case '}': tok = Tok::RBrace; break;
      case ',': tok = Tok::Comma; break;
      case ';': tok = Tok::Semi; break;
      case '=': tok = Tok::Assign; break;
      case '|': tok = Tok::Or; break;
      case '^': tok = Tok::Xor; break;
      case '&': tok = Tok::And; break;
      case '<': tok = Tok::Lt; break;
      case '>': tok = Tok::Gt; break;
      case '+': tok = Tok::Plus; break;
      case '-': tok = Tok::Minus; break;
      case '*': tok = Tok::Star; break;
      case '/': tok = Tok::Slash; break;
      case '%': tok = Tok::Percent; break;
      case '!': tok = Tok::Not; break;
      default:
        error(std::string("unexpected character '") + c + "'", line, col);
    }
    advance();
    return {tok, std::string(1, c), line, col};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool is_type_tok(Tok t) {
  switch (t) {
    case Tok::KwInt:
    case Tok::KwFloat:
    case Tok::KwBool:
    case Tok::KwString:
    case Tok::KwVoid:
    case Tok::KwRef:
      return true;
    default:
      return false;
  }
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Ast run() {
    std::vector<NodePtr> functions;
    while (cur().kind != Tok::Eof) {
      functions.push_back(function_decl());
    }
    return Ast{Node::make(NodeKind::Program, "", std::move(functions))};
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek() const {
    return toks_[pos_ + 1 < toks_.size() ? pos_ + 1 : toks_.size() - 1];
  }
  Token take() { return toks_[pos_++]; }

  [[noreturn]] void unexpected(std::vector<std::string> expected) {
    const Token& t = cur();
    std::string msg = "unexpected " + std::string(tok_desc(t.kind));
    if (!t.text.empty() && t.kind != Tok::Eof) msg += " '" + t.text + "'";
    if (!expected.empty()) {
      msg += ", expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) msg += expected.size() == 2 ? " or " : ", ";
        msg += expected[i];
      }
    }
    throw ParseError(msg, t.line, t.column, std::move(expected));
  }

  Token expect(Tok kind) {
    if (cur().kind != kind) unexpected({tok_desc(kind)});
    return take();
  }

  NodePtr type_ref() {
    if (!is_type_tok(cur().kind))
      unexpected({"'int'", "'float'", "'bool'", "'string'", "'void'", "'ref'"});
    return Node::make(NodeKind::TypeRef, take().text);
  }

  NodePtr function_decl() {
    NodePtr ret = type_ref();
    std::string name = expect(Tok::Ident).text;
    expect(Tok::LParen);
    std::vector<NodePtr> children{std::move(ret)};
    if (cur().kind != Tok::RParen) {
      while (true) {
        NodePtr pt = type_ref();
        NodePtr pn = Node::make(NodeKind::Identifier, expect(Tok::Ident).text);
        children.push_back(
            Node::make(NodeKind::Param, "", {std::move(pt), std::move(pn)}));
        if (cur().kind == Tok::Comma) {
          take();
          continue;
        }
        break;
      }
    }
    expect(Tok::RParen);
    children.push_back(block());
    return Node::make(NodeKind::FunctionDecl, std::move(name), std::move(children));
  }

  NodePtr block() {
    expect(Tok::LBrace);
    std::vector<NodePtr> stmts;
    while (cur().kind != Tok::RBrace) {
      if (cur().kind == Tok::Eof) unexpected({"'}'", "statement"});
      stmts.push_back(statement());
    }
    take();
    return Node::make(NodeKind::Block, "", std::move(stmts));
  }

  NodePtr statement() {
    switch (cur().kind) {
      case Tok::LBrace:
        return block();
      case Tok::KwIf:
        return if_stmt();
      case Tok::KwWhile:
        return while_stmt();
      case Tok::KwReturn:
        return return_stmt();
      default:
        break;
    }
    if (is_type_tok(cur().kind)) return var_decl();
    if (cur().kind == Tok::Ident && peek().kind == Tok::Assign) return assign_stmt();
    NodePtr e = expression();
    expect(Tok::Semi);
    return Node::make(NodeKind::ExprStmt, "", {std::move(e)});
  }

  NodePtr var_decl() {
    NodePtr type = type_ref();
    std::string name = expect(Tok::Ident).text;
    std::vector<NodePtr> children{std::move(type)};
    if (cur().kind == Tok::Assign) {
      take();
      children.push_back(expression());
    }
    expect(Tok::Semi);
    return Node::make(NodeKind::VarDecl, std::move(name), std::move(children));
  }

  NodePtr assign_stmt() {
    NodePtr target = Node::make(NodeKind::Identifier, take().text);
    take();  // '='
    NodePtr value = expression();
    expect(Tok::Semi);
    return Node::make(NodeKind::Assign, "", {std::move(target), std::move(value)});
  }

  NodePtr if_stmt() {
    take();  // 'if'
    expect(Tok::LParen);
    NodePtr cond = expression();
    expect(Tok::RParen);
    NodePtr then = statement();
    std::vector<NodePtr> children{std::move(cond), std::move(then)};
    if (cur().kind == Tok::KwElse) {
      take();
      children.push_back(statement());
    }
    return Node::make(NodeKind::If, "", std::move(children));
  }

  NodePtr while_stmt() {
    take();  // 'while'
    expect(Tok::LParen);
    NodePtr cond = expression();
    expect(Tok::RParen);
    NodePtr body = statement();
    return Node::make(NodeKind::While, "", {std::move(cond), std::move(body)});
  }

  NodePtr return_stmt() {
    take();  // 'return'
    NodePtr value = expression();
    expect(Tok::Semi);
    return Node::make(NodeKind::Return, "", {std::move(value)});
  }

  struct Level {
    std::initializer_list<Tok> toks;
  };

  NodePtr expression() { return binary(0); }

  static const char* binary_label(Tok t) {
    switch (t) {
      case Tok::OrOr: return "||";
      case Tok::AndAnd: return "&&";
      case Tok::Or: return "|";
      case Tok::Xor: return "^";
      case Tok::And: return "&";
      case Tok::EqEq: return "==";
      case Tok::NotEq: return "!=";
      case Tok::Lt: return "<";
      case Tok::Le: return "<=";
      case Tok::Gt: return ">";
      case Tok::Ge: return ">=";
      case Tok::Shl: return "<<";
      case Tok::Shr: return ">>";
      case Tok::Plus: return "+";
      case Tok::Minus: return "-";
      case Tok::Star: return "*";
      case Tok::Slash: return "/";
      case Tok::Percent: return "%";
      default: return nullptr;
    }
  }

  NodePtr binary(int level) {
    static const std::vector<std::vector<Tok>> levels = {
        {Tok::OrOr},
        {Tok::AndAnd},
        {Tok::Or},
        {Tok::Xor},
        {Tok::And},
        {Tok::EqEq, Tok::NotEq},
        {Tok::Lt, Tok::Le, Tok::Gt, Tok::Ge},
        {Tok::Shl, Tok::Shr},
        {Tok::Plus, Tok::Minus},
        {Tok::Star, Tok::Slash, Tok::Percent},
    };
    if (level == static_cast<int>(levels.size())) return unary();
    NodePtr lhs = binary(level + 1);
    while (true) {
      bool matched = false;
      for (Tok t : levels[level]) {
        if (cur().kind == t) {
          take();
          NodePtr rhs = binary(level + 1);
          lhs = Node::make(NodeKind::BinaryExpr, binary_label(t),
                           {std::move(lhs), std::move(rhs)});
          matched = true;
          break;
        }
      }
      if (!matched) return lhs;
    }
  }

  NodePtr unary() {
    if (cur().kind == Tok::Minus || cur().kind == Tok::Not) {
      std::string op = take().text;
      return Node::make(NodeKind::UnaryExpr, std::move(op), {unary()});
    }
    return postfix();
  }

  NodePtr postfix() {
    NodePtr e = primary();
    while (cur().kind == Tok::PlusPlus || cur().kind == Tok::MinusMinus) {
      e = Node::make(NodeKind::IncDecExpr, take().text, {std::move(e)});
    }
    return e;
  }

  NodePtr primary() {
    switch (cur().kind) {
      case Tok::Ident: {
        std::string name = take().text;
        if (cur().kind == Tok::LParen) {
          take();
          std::vector<NodePtr> args;
          if (cur().kind != Tok::RParen) {
            while (true) {
              args.push_back(expression());
              if (cur().kind == Tok::Comma) {
                take();
                continue;
              }
              break;
            }
          }
          expect(Tok::RParen);
          return Node::make(NodeKind::Call, std::move(name), std::move(args));
        }
        return Node::make(NodeKind::Identifier, std::move(name));
      }
      case Tok::IntLit:
      case Tok::FloatLit:
      case Tok::StringLit:
        return Node::make(NodeKind::Literal, take().text);
      case Tok::KwTrue:
      case Tok::KwFalse:
      case Tok::KwNull:
        return Node::make(NodeKind::Literal, take().text);
      case Tok::LParen: {
        take();
        NodePtr e = expression();
        expect(Tok::RParen);
        return e;
      }
      default:
        unexpected({"expression"});
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

ParseError::ParseError(std::string message, int line, int column,
                       std::vector<std::string> expected)
    : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

Ast parse(std::string_view source) {
  Lexer lexer(source);
  Parser parser(lexer.run());
  return parser.run();
}

}  // namespace mutapath
