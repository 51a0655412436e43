#include "maslovflow/cli/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace maslovflow::cli {

namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr make_constant(Complex v, bool pi = false) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Constant;
  n->value = v;
  n->pi = pi;
  return n;
}

NodePtr make_unary(Node::Kind kind, NodePtr operand, Function f = Function::Sin) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->function = f;
  n->lhs = std::move(operand);
  return n;
}

NodePtr make_binary(Node::Kind kind, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse() {
    skip_space();
    if (pos_ == src_.size()) fail(ErrorCode::SyntaxError, "empty expression");
    NodePtr root = expr();
    skip_space();
    if (pos_ != src_.size()) fail(ErrorCode::SyntaxError, "unexpected '" + std::string(1, src_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(ErrorCode code, const std::string& what) const { fail_at(code, pos_, what); }

  [[noreturn]] void fail_at(ErrorCode code, std::size_t at, const std::string& what) const {
    throw ParseError(code, at, what + " at offset " + std::to_string(at));
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  // '-' or the UTF-8 minus sign U+2212.
  bool take_minus() {
    if (pos_ < src_.size() && src_[pos_] == '-') {
      ++pos_;
      return true;
    }
    if (src_.substr(pos_, 3) == "\xE2\x88\x92") {
      pos_ += 3;
      return true;
    }
    return false;
  }

  bool take(char c) {
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      skip_space();
      if (take('+')) {
        lhs = make_binary(Node::Kind::Add, lhs, term());
      } else if (take_minus()) {
        lhs = make_binary(Node::Kind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      skip_space();
      if (take('*')) {
        lhs = make_binary(Node::Kind::Mul, lhs, factor());
      } else if (take('/')) {
        lhs = make_binary(Node::Kind::Div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    skip_space();
    if (take_minus()) return make_unary(Node::Kind::Neg, atom());
    return atom();
  }

  NodePtr atom() {
    skip_space();
    if (pos_ == src_.size()) fail(ErrorCode::SyntaxError, "unexpected end of expression");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (take('(')) {
      NodePtr inner = expr();
      skip_space();
      if (!take(')')) fail(ErrorCode::SyntaxError, "expected ')'");
      return inner;
    }
    fail(ErrorCode::SyntaxError, "unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t from = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      return pos_ - from;
    };
    std::size_t count = digits();
    if (take('.')) count += digits();
    if (count == 0) fail_at(ErrorCode::SyntaxError, start, "malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      const std::size_t mark = pos_++;
      if (!take('+')) take('-');
      if (digits() == 0) fail_at(ErrorCode::SyntaxError, mark, "malformed exponent");
    }
    double value = 0.0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (res.ec != std::errc() || !std::isfinite(value)) fail_at(ErrorCode::SyntaxError, start, "number out of range");
    // Imaginary suffix, not the start of a longer identifier.
    if (pos_ < src_.size() && src_[pos_] == 'i' &&
        (pos_ + 1 == src_.size() || !(std::isalnum(static_cast<unsigned char>(src_[pos_ + 1])) || src_[pos_ + 1] == '_'))) {
      ++pos_;
      return make_constant(Complex(0.0, value));
    }
    return make_constant(Complex(value, 0.0));
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "pi") return make_constant(Complex(std::numbers::pi, 0.0), true);
    if (name == "s") return make_unary(Node::Kind::S, nullptr);
    if (name == "t") return make_unary(Node::Kind::T, nullptr);
    Function f;
    if (name == "sin") {
      f = Function::Sin;
    } else if (name == "cos") {
      f = Function::Cos;
    } else if (name == "exp") {
      f = Function::Exp;
    } else if (name == "sqrt") {
      f = Function::Sqrt;
    } else {
      fail_at(ErrorCode::UnknownIdentifier, start, "unknown identifier '" + std::string(name) + "'");
    }
    skip_space();
    if (!take('(')) fail(ErrorCode::SyntaxError, "expected '(' after " + std::string(name));
    NodePtr arg = expr();
    skip_space();
    if (!take(')')) fail(ErrorCode::SyntaxError, "expected ')'");
    return make_unary(Node::Kind::Call, arg, f);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

Complex eval(const Node& n, double s, double t) {
  switch (n.kind) {
    case Node::Kind::Constant: return n.value;
    case Node::Kind::S: return s;
    case Node::Kind::T: return t;
    case Node::Kind::Add: return eval(*n.lhs, s, t) + eval(*n.rhs, s, t);
    case Node::Kind::Sub: return eval(*n.lhs, s, t) - eval(*n.rhs, s, t);
    case Node::Kind::Mul: return eval(*n.lhs, s, t) * eval(*n.rhs, s, t);
    case Node::Kind::Div: return eval(*n.lhs, s, t) / eval(*n.rhs, s, t);
    case Node::Kind::Neg: return -eval(*n.lhs, s, t);
    case Node::Kind::Call: {
      const Complex x = eval(*n.lhs, s, t);
      switch (n.function) {
        case Function::Sin: return x.imag() == 0.0 ? Complex(std::sin(x.real())) : std::sin(x);
        case Function::Cos: return x.imag() == 0.0 ? Complex(std::cos(x.real())) : std::cos(x);
        case Function::Exp: return x.imag() == 0.0 ? Complex(std::exp(x.real())) : std::exp(x);
        case Function::Sqrt: return std::sqrt(x);
      }
    }
  }
  return {};
}

std::string format(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

void print(const Node& n, std::string& out) {
  switch (n.kind) {
    case Node::Kind::Constant:
      if (n.pi) {
        out += "pi";
      } else if (n.value.imag() != 0.0) {
        out += format(n.value.imag()) + "i";
      } else {
        out += format(n.value.real());
      }
      return;
    case Node::Kind::S: out += "s"; return;
    case Node::Kind::T: out += "t"; return;
    case Node::Kind::Neg:
      out += "(-";
      print(*n.lhs, out);
      out += ")";
      return;
    case Node::Kind::Call: {
      static constexpr const char* names[] = {"sin", "cos", "exp", "sqrt"};
      out += names[static_cast<int>(n.function)];
      out += "(";
      print(*n.lhs, out);
      out += ")";
      return;
    }
    default: {
      const char op = n.kind == Node::Kind::Add ? '+' : n.kind == Node::Kind::Sub ? '-' : n.kind == Node::Kind::Mul ? '*' : '/';
      out += "(";
      print(*n.lhs, out);
      out += ' ';
      out += op;
      out += ' ';
      print(*n.rhs, out);
      out += ")";
    }
  }
}

}  // namespace

ParseError::ParseError(ErrorCode code, std::size_t offset, const std::string& what)
    : Error(code, what), offset_(offset) {}

Complex Expression::evaluate(double s, double t) const { return eval(*root_, s, t); }

std::string Expression::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

Expression parse_expression(std::string_view src) { return Expression(Parser(src).parse()); }

ExpressionMatrix::ExpressionMatrix(Index rows, Index cols, std::vector<Expression> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (static_cast<Index>(entries_.size()) != rows * cols) {
    throw Error(ErrorCode::DimensionMismatch, "expression matrix entry count does not match its shape");
  }
}

CMatrix ExpressionMatrix::evaluate(double s, double t) const {
  CMatrix out(rows_, cols_);
  for (Index i = 0; i < rows_; ++i) {
    for (Index j = 0; j < cols_; ++j) out(i, j) = at(i, j).evaluate(s, t);
  }
  return out;
}

}  // namespace maslovflow::cli
