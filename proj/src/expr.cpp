#include "nlclaw/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace nlclaw {

ExprError::ExprError(const std::string& message, std::size_t column)
    : Error("column " + std::to_string(column) + ": " + message), column_(column) {}

struct Expression::Node {
  enum class Kind { Number, X, Y, Neg, Add, Sub, Mul, Div, Pow, Exp, Tanh, Sin, Abs, Sgn };
  Kind kind = Kind::Number;
  double value = 0.0;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

using Node = Expression::Node;
using Ptr = std::shared_ptr<const Node>;

Ptr make(Node::Kind k, Ptr a = nullptr, Ptr b = nullptr, double v = 0.0) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  n->value = v;
  return n;
}

class Parser {
public:
  Parser(const std::string& s, bool allow_y) : s_(s), allow_y_(allow_y) {}

  Ptr parse() {
    skip();
    if (pos_ >= s_.size()) {
      fail("empty expression");
    }
    Ptr e = expr();
    skip();
    if (pos_ < s_.size()) {
      fail(std::string("unexpected '") + s_[pos_] + "'");
    }
    return e;
  }

  bool used_y = false;

private:
  [[noreturn]] void fail(const std::string& msg) const { throw ExprError(msg, pos_ + 1); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Ptr expr() {
    Ptr left = term();
    for (;;) {
      if (accept('+')) {
        left = make(Node::Kind::Add, left, term());
      } else if (accept('-')) {
        left = make(Node::Kind::Sub, left, term());
      } else {
        return left;
      }
    }
  }

  Ptr term() {
    Ptr left = unary();
    for (;;) {
      if (accept('*')) {
        left = make(Node::Kind::Mul, left, unary());
      } else if (accept('/')) {
        left = make(Node::Kind::Div, left, unary());
      } else {
        return left;
      }
    }
  }

  Ptr unary() {
    if (accept('-')) {
      return make(Node::Kind::Neg, unary());
    }
    if (accept('+')) {
      return unary();
    }
    return power();
  }

  Ptr power() {
    Ptr base = primary();
    if (accept('^')) {
      return make(Node::Kind::Pow, base, unary());
    }
    return base;
  }

  Ptr primary() {
    skip();
    if (pos_ >= s_.size()) {
      fail("unexpected end of expression");
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return number();
    }
    if (c == '(') {
      ++pos_;
      Ptr e = expr();
      if (!accept(')')) {
        fail("expected ')'");
      }
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      }
      const std::string id = s_.substr(start, pos_ - start);
      if (id == "x") {
        return make(Node::Kind::X);
      }
      if (id == "y") {
        if (!allow_y_) {
          pos_ = start;
          fail("variable 'y' is only allowed in 2D data");
        }
        used_y = true;
        return make(Node::Kind::Y);
      }
      Node::Kind k{};
      if (id == "exp") {
        k = Node::Kind::Exp;
      } else if (id == "tanh") {
        k = Node::Kind::Tanh;
      } else if (id == "sin") {
        k = Node::Kind::Sin;
      } else if (id == "abs") {
        k = Node::Kind::Abs;
      } else if (id == "sgn") {
        k = Node::Kind::Sgn;
      } else {
        pos_ = start;
        fail("unknown name '" + id + "'");
      }
      if (!accept('(')) {
        fail("expected '(' after " + id);
      }
      Ptr arg = expr();
      if (!accept(')')) {
        fail("expected ')'");
      }
      return make(k, arg);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  Ptr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t n = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
        ++pos_;
      }
      if (digits() == 0) {
        fail("malformed exponent");
      }
    }
    const std::string tok = s_.substr(start, pos_ - start);
    return make(Node::Kind::Number, nullptr, nullptr, std::strtod(tok.c_str(), nullptr));
  }

  const std::string& s_;
  bool allow_y_;
  std::size_t pos_ = 0;
};

double eval(const Node& n, double x, double y) {
  switch (n.kind) {
  case Node::Kind::Number:
    return n.value;
  case Node::Kind::X:
    return x;
  case Node::Kind::Y:
    return y;
  case Node::Kind::Neg:
    return -eval(*n.a, x, y);
  case Node::Kind::Add:
    return eval(*n.a, x, y) + eval(*n.b, x, y);
  case Node::Kind::Sub:
    return eval(*n.a, x, y) - eval(*n.b, x, y);
  case Node::Kind::Mul:
    return eval(*n.a, x, y) * eval(*n.b, x, y);
  case Node::Kind::Div:
    return eval(*n.a, x, y) / eval(*n.b, x, y);
  case Node::Kind::Pow:
    return std::pow(eval(*n.a, x, y), eval(*n.b, x, y));
  case Node::Kind::Exp:
    return std::exp(eval(*n.a, x, y));
  case Node::Kind::Tanh:
    return std::tanh(eval(*n.a, x, y));
  case Node::Kind::Sin:
    return std::sin(eval(*n.a, x, y));
  case Node::Kind::Abs:
    return std::abs(eval(*n.a, x, y));
  case Node::Kind::Sgn: {
    const double v = eval(*n.a, x, y);
    return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
  }
  }
  return 0.0;
}

} // namespace

Expression Expression::parse(const std::string& text, bool allow_y) {
  Parser p(text, allow_y);
  Expression e;
  e.root_ = p.parse();
  e.text_ = text;
  e.uses_y_ = p.used_y;
  return e;
}

double Expression::operator()(double x, double y) const { return eval(*root_, x, y); }

} // namespace nlclaw
