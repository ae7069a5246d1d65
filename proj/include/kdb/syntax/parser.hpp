#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "kdb/syntax/ast.hpp"

namespace kdb {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::uint32_t line, std::uint32_t col, std::string message,
             std::vector<std::string> expected = {});

  std::uint32_t line() const { return line_; }
  std::uint32_t col() const { return col_; }
  const std::string & message() const { return message_; }
  const std::vector<std::string> & expected() const { return expected_; }

 private:
  std::uint32_t line_;
  std::uint32_t col_;
  std::string message_;
  std::vector<std::string> expected_;
};

// Parses a whole source file and runs the alpha-renaming pass, so the result
// has globally distinct bound names.
System parse_system(const std::string & source);

// Fragment parsers for tests and tools. Fragments are resolved in an empty
// scope: free names stay data variables.
NetP parse_net(const std::string & source);
ProcP parse_process(const std::string & source);
ExprP parse_expr(const std::string & source);
PredP parse_pred(const std::string & source);

}  // namespace kdb
