#include "qmc/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace qmc {

namespace {

struct Token {
  enum class Kind { number, ident, op, lparen, rparen, end };
  Kind kind = Kind::end;
  double number = 0.0;
  std::string text;
  int column = 0;  // 1-based
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

  int column() const { return current_.column; }

 private:
  void advance() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    current_ = Token{};
    current_.column = static_cast<int>(pos_) + 1;
    if (pos_ >= text_.size()) {
      current_.kind = Token::Kind::end;
      return;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      const double value = std::strtod(begin, &end);
      if (end == begin)
        throw ExprParseError("malformed number", 1, current_.column);
      current_.kind = Token::Kind::number;
      current_.number = value;
      pos_ += static_cast<size_t>(end - begin);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) ||
              text_[end] == '_'))
        ++end;
      current_.kind = Token::Kind::ident;
      current_.text = text_.substr(pos_, end - pos_);
      pos_ = end;
      return;
    }
    if (c == '(') {
      current_.kind = Token::Kind::lparen;
      ++pos_;
      return;
    }
    if (c == ')') {
      current_.kind = Token::Kind::rparen;
      ++pos_;
      return;
    }
    if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
      current_.kind = Token::Kind::op;
      current_.text = std::string(1, c);
      ++pos_;
      return;
    }
    throw ExprParseError(std::string("unexpected character '") + c + "'", 1,
                         current_.column);
  }

  const std::string& text_;
  size_t pos_ = 0;
  Token current_;
};

ExprPtr make_number(double v) {
  auto e = std::make_unique<Expr>();
  e->kind = Expr::Kind::number;
  e->number = v;
  return e;
}

ExprPtr make_binary(char op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_unique<Expr>();
  e->kind = Expr::Kind::binary;
  e->op = op;
  e->args.push_back(std::move(lhs));
  e->args.push_back(std::move(rhs));
  return e;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    if (lex_.peek().kind != Token::Kind::end)
      throw ExprParseError("trailing input", 1, lex_.column());
    return e;
  }

 private:
  bool at_op(const char* what) const {
    return lex_.peek().kind == Token::Kind::op && lex_.peek().text == what;
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    while (at_op("+") || at_op("-")) {
      const char op = lex_.take().text[0];
      lhs = make_binary(op, std::move(lhs), term());
    }
    return lhs;
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    while (at_op("*") || at_op("/")) {
      const char op = lex_.take().text[0];
      lhs = make_binary(op, std::move(lhs), factor());
    }
    return lhs;
  }

  ExprPtr factor() {
    ExprPtr base = unary();
    if (at_op("^")) {
      const int col = lex_.column();
      lex_.take();
      ExprPtr expo = factor();  // right-associative
      if (expr_has_identifier(*expo))
        throw ExprParseError("exponent must be a constant expression", 1, col);
      return make_binary('^', std::move(base), std::move(expo));
    }
    return base;
  }

  ExprPtr unary() {
    if (at_op("-")) {
      lex_.take();
      auto e = std::make_unique<Expr>();
      e->kind = Expr::Kind::unary;
      e->op = '-';
      e->args.push_back(unary());
      return e;
    }
    return atom();
  }

  ExprPtr atom() {
    const Token t = lex_.take();
    switch (t.kind) {
      case Token::Kind::number:
        return make_number(t.number);
      case Token::Kind::ident: {
        if (lex_.peek().kind == Token::Kind::lparen) {
          if (t.text != "sqrt")
            throw ExprParseError("unknown function '" + t.text + "'", 1,
                                 t.column);
          lex_.take();  // '('
          ExprPtr arg = expr();
          if (lex_.peek().kind != Token::Kind::rparen)
            throw ExprParseError("expected ')'", 1, lex_.column());
          lex_.take();
          auto e = std::make_unique<Expr>();
          e->kind = Expr::Kind::call;
          e->name = t.text;
          e->args.push_back(std::move(arg));
          return e;
        }
        auto e = std::make_unique<Expr>();
        e->kind = Expr::Kind::ident;
        e->name = t.text;
        return e;
      }
      case Token::Kind::lparen: {
        ExprPtr inner = expr();
        if (lex_.peek().kind != Token::Kind::rparen)
          throw ExprParseError("expected ')'", 1, lex_.column());
        lex_.take();
        return inner;
      }
      default:
        throw ExprParseError("expected a value", 1, t.column);
    }
  }

  Lexer lex_;
};

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::binary:
      if (e.op == '+' || e.op == '-') return 1;
      if (e.op == '*' || e.op == '/') return 2;
      return 3;  // '^'
    case Expr::Kind::unary:
      return 4;
    default:
      return 5;  // atoms
  }
}

void print(const Expr& e, std::string& out);

void print_child(const Expr& child, int min_prec, std::string& out) {
  if (precedence(child) < min_prec) {
    out += '(';
    print(child, out);
    out += ')';
  } else {
    print(child, out);
  }
}

void print(const Expr& e, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::number: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", e.number);
      out += buf;
      return;
    }
    case Expr::Kind::ident:
      out += e.name;
      return;
    case Expr::Kind::unary:
      out += '-';
      print_child(*e.args[0], 4, out);
      return;
    case Expr::Kind::call:
      out += e.name;
      out += '(';
      print(*e.args[0], out);
      out += ')';
      return;
    case Expr::Kind::binary: {
      const int prec = precedence(e);
      if (e.op == '^') {
        // Base slot is a unary production; exponent re-parses as a factor.
        print_child(*e.args[0], 4, out);
        out += '^';
        print_child(*e.args[1], 3, out);
        return;
      }
      print_child(*e.args[0], prec, out);
      out += e.op;
      print_child(*e.args[1], prec + 1, out);
      return;
    }
  }
}

}  // namespace

ExprPtr parse_expr(const std::string& text) { return Parser(text).parse(); }

double eval_expr(const Expr& e, const std::map<std::string, double>& bindings) {
  switch (e.kind) {
    case Expr::Kind::number:
      return e.number;
    case Expr::Kind::ident: {
      const auto it = bindings.find(e.name);
      if (it == bindings.end())
        throw ExprEvalError("unbound identifier '" + e.name + "'");
      return it->second;
    }
    case Expr::Kind::unary:
      return -eval_expr(*e.args[0], bindings);
    case Expr::Kind::call: {
      const double arg = eval_expr(*e.args[0], bindings);
      if (arg < 0.0) throw ExprEvalError("sqrt of a negative value");
      return std::sqrt(arg);
    }
    case Expr::Kind::binary: {
      const double a = eval_expr(*e.args[0], bindings);
      const double b = eval_expr(*e.args[1], bindings);
      double r = 0.0;
      switch (e.op) {
        case '+':
          r = a + b;
          break;
        case '-':
          r = a - b;
          break;
        case '*':
          r = a * b;
          break;
        case '/':
          if (b == 0.0) throw ExprEvalError("division by zero");
          r = a / b;
          break;
        case '^':
          if (a < 0.0 && b != std::floor(b))
            throw ExprEvalError("negative base with non-integer exponent");
          r = std::pow(a, b);
          break;
        default:
          throw ExprEvalError("unknown operator");
      }
      if (!std::isfinite(r)) throw ExprEvalError("non-finite result");
      return r;
    }
  }
  throw ExprEvalError("malformed expression tree");
}

std::string expr_to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.op != b.op || a.name != b.name ||
      a.args.size() != b.args.size())
    return false;
  if (a.kind == Expr::Kind::number && a.number != b.number) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!expr_equal(*a.args[i], *b.args[i])) return false;
  return true;
}

bool expr_has_identifier(const Expr& e) {
  if (e.kind == Expr::Kind::ident) return true;
  for (const auto& arg : e.args)
    if (expr_has_identifier(*arg)) return true;
  return false;
}

}  // namespace qmc
