#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mutapath/ast.hpp"

namespace mutapath {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, int line, int column,
             std::vector<std::string> expected);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
};

/// Parses a whole program. Whitespace and `//` comments are discarded, so two
/// sources differing only in layout parse to trees with equal canonical
/// hashes. Throws ParseError with the offending line/column and the tokens
/// that would have been accepted there.
Ast parse(std::string_view source);

}  // namespace mutapath
