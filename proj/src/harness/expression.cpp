#include "galimech/harness/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

namespace galimech::harness {

struct Expression::Node {
  enum class Kind { kConstant, kVariable, kNeg, kAdd, kSub, kMul, kDiv, kPow,
                    kSin, kCos, kExp };
  Kind kind = Kind::kConstant;
  double value = 0.0;
  int variable = 0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;

  double eval(const Eventd& x) const {
    switch (kind) {
      case Kind::kConstant: return value;
      case Kind::kVariable: return x.coords(variable);
      case Kind::kNeg: return -lhs->eval(x);
      case Kind::kAdd: return lhs->eval(x) + rhs->eval(x);
      case Kind::kSub: return lhs->eval(x) - rhs->eval(x);
      case Kind::kMul: return lhs->eval(x) * rhs->eval(x);
      case Kind::kDiv: return lhs->eval(x) / rhs->eval(x);
      case Kind::kPow: return std::pow(lhs->eval(x), rhs->eval(x));
      case Kind::kSin: return std::sin(lhs->eval(x));
      case Kind::kCos: return std::cos(lhs->eval(x));
      case Kind::kExp: return std::exp(lhs->eval(x));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse_all() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return n;
  }

  bool uses_time = false;

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ExpressionError(what, pos_);
  }

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

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (accept('+')) {
        n = make(Kind::kAdd, n, term());
      } else if (accept('-')) {
        n = make(Kind::kSub, n, term());
      } else {
        return n;
      }
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) {
        n = make(Kind::kMul, n, unary());
      } else if (accept('/')) {
        n = make(Kind::kDiv, n, unary());
      } else {
        return n;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::kNeg, unary());
    if (accept('+')) return unary();
    return power();
  }

  // Right-associative, binds tighter than unary minus on its left operand:
  // -x^2 = -(x^2).
  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make(Kind::kPow, base, unary());
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    double v = 0.0;
    const char* begin = s_.data() + pos_;
    const char* end = s_.data() + s_.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(res.ptr - begin);
    auto n = std::make_shared<Expression::Node>();
    n->value = v;
    return n;
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
    const std::string id = s_.substr(start, pos_ - start);
    static const std::vector<std::string> variables = {"t", "q1", "q2", "q3"};
    for (std::size_t i = 0; i < variables.size(); ++i) {
      if (id == variables[i]) {
        if (i == 0) uses_time = true;
        auto n = std::make_shared<Expression::Node>();
        n->kind = Kind::kVariable;
        n->variable = static_cast<int>(i);
        return n;
      }
    }
    if (id == "pi" || id == "e") {
      auto n = std::make_shared<Expression::Node>();
      n->value = id == "pi" ? std::numbers::pi : std::numbers::e;
      return n;
    }
    Kind fn;
    if (id == "sin") {
      fn = Kind::kSin;
    } else if (id == "cos") {
      fn = Kind::kCos;
    } else if (id == "exp") {
      fn = Kind::kExp;
    } else {
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    if (!accept('(')) fail("expected '(' after " + id);
    NodePtr arg = expr();
    if (!accept(')')) fail("expected ')'");
    return make(fn, arg);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& source) {
  Parser parser(source);
  Expression e;
  e.root_ = parser.parse_all();
  e.source_ = source;
  e.uses_time_ = parser.uses_time;
  return e;
}

double Expression::operator()(const Eventd& x) const { return root_->eval(x); }

}  // namespace galimech::harness
