#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmc {

class ExprParseError : public std::runtime_error {
 public:
  ExprParseError(const std::string& what, int line, int column)
      : std::runtime_error(what + " at line " + std::to_string(line) +
                           ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class ExprEvalError : public std::runtime_error {
 public:
  explicit ExprEvalError(const std::string& what) : std::runtime_error(what) {}
};

// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := unary ('^' factor)?          -- '^' right-associates
//   unary  := '-' unary | atom
//   atom   := number | identifier | 'sqrt' '(' expr ')' | '(' expr ')'
// Exponents must be constant (identifier-free) subexpressions.
struct Expr {
  enum class Kind { number, ident, unary, binary, call };

  Kind kind = Kind::number;
  double number = 0.0;
  std::string name;  // ident / call
  char op = 0;       // binary: + - * / ^ ; unary: -
  std::vector<std::unique_ptr<Expr>> args;
};

using ExprPtr = std::unique_ptr<Expr>;

ExprPtr parse_expr(const std::string& text);
double eval_expr(const Expr& e, const std::map<std::string, double>& bindings);
std::string expr_to_string(const Expr& e);
bool expr_equal(const Expr& a, const Expr& b);
bool expr_has_identifier(const Expr& e);

}  // namespace qmc
