#include "recurlab/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <variant>
#include <vector>

#include "recurlab/error.hpp"

namespace recur {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

void TextCursor::skip_ws() {
  while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
}

bool TextCursor::eof() {
  skip_ws();
  return pos_ >= text_.size();
}

char TextCursor::peek() {
  skip_ws();
  return pos_ < text_.size() ? text_[pos_] : '\0';
}

bool TextCursor::consume(char c) {
  if (peek() == c) {
    ++pos_;
    return true;
  }
  return false;
}

void TextCursor::expect(char c) {
  if (!consume(c)) {
    const char got = peek();
    fail(std::string("expected '") + c + "' but found " +
         (got == '\0' ? std::string("end of input") : std::string("'") + got + "'"));
  }
}

bool TextCursor::consume_word(std::string_view word) {
  skip_ws();
  if (text_.substr(pos_, word.size()) != word) return false;
  const std::size_t end = pos_ + word.size();
  if (end < text_.size() && is_ident_char(text_[end])) return false;
  pos_ = end;
  return true;
}

bool TextCursor::at_named_arg() {
  skip_ws();
  const std::size_t save = pos_;
  if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) return false;
  while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
  skip_ws();
  const bool named = pos_ < text_.size() && text_[pos_] == '=' &&
                     (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '=');
  pos_ = save;
  return named;
}

std::string TextCursor::identifier() {
  skip_ws();
  if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) fail("expected an identifier");
  const std::size_t start = pos_;
  while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
  return std::string(text_.substr(start, pos_ - start));
}

std::string TextCursor::number_token() {
  skip_ws();
  const std::size_t start = pos_;
  auto digit = [&](std::size_t p) {
    return p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p])) != 0;
  };
  while (digit(pos_)) ++pos_;
  if (pos_ < text_.size() && text_[pos_] == '.') {
    ++pos_;
    while (digit(pos_)) ++pos_;
  }
  if (pos_ == start) fail("expected a number");
  if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
    std::size_t p = pos_ + 1;
    if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
    if (digit(p)) {
      pos_ = p;
      while (digit(pos_)) ++pos_;
    }
  }
  return std::string(text_.substr(start, pos_ - start));
}

std::uint64_t TextCursor::natural() {
  skip_ws();
  const std::size_t start = pos_;
  std::uint64_t v = 0;
  while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) {
    const unsigned d = static_cast<unsigned>(text_[pos_] - '0');
    if (v > (~std::uint64_t{0} - d) / 10) fail("integer overflow");
    v = v * 10 + d;
    ++pos_;
  }
  if (pos_ == start) fail("expected a natural number");
  return v;
}

std::int64_t TextCursor::integer() {
  const bool negative = consume('-');
  if (!negative) consume('+');
  const unsigned long long v = natural();
  if (v > 9223372036854775807ULL) fail("integer overflow");
  return negative ? -static_cast<std::int64_t>(v) : static_cast<std::int64_t>(v);
}

std::string TextCursor::balanced_until(char close) {
  const char open = close == ')' ? '(' : close == ']' ? '[' : '{';
  int depth = 1;
  const std::size_t start = pos_;
  while (pos_ < text_.size()) {
    const char c = text_[pos_];
    if (c == open) ++depth;
    if (c == close && --depth == 0) {
      std::string inner(text_.substr(start, pos_ - start));
      ++pos_;
      return inner;
    }
    ++pos_;
  }
  fail(std::string("unbalanced '") + open + "'");
}

void TextCursor::fail(const std::string& message) const {
  int line = line_;
  int column = column_;
  for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
    if (text_[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  throw ConfigError(message, line, column);
}

// --- expression tree -------------------------------------------------------

struct Expr::Node {
  enum class Kind { Constant, Index, Neg, Add, Sub, Mul, Div, Pow, Call };
  Kind kind = Kind::Constant;
  Scalar value;
  std::string function;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_const(const Scalar& v) {
  auto n = std::make_shared<Expr::Node>();
  n->value = v;
  return n;
}

NodePtr make_op(Expr::Node::Kind k, std::vector<NodePtr> args, std::string fn = {}) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  n->args = std::move(args);
  n->function = std::move(fn);
  return n;
}

class Parser {
 public:
  explicit Parser(TextCursor& c) : c_(c) {}

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (c_.consume('+')) {
        lhs = make_op(Expr::Node::Kind::Add, {lhs, term()});
      } else if (c_.consume('-')) {
        lhs = make_op(Expr::Node::Kind::Sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  bool uses_index = false;

 private:
  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (c_.consume('*')) {
        lhs = make_op(Expr::Node::Kind::Mul, {lhs, unary()});
      } else if (c_.peek() == '/') {
        c_.consume('/');
        lhs = make_op(Expr::Node::Kind::Div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (c_.consume('-')) return make_op(Expr::Node::Kind::Neg, {unary()});
    if (c_.consume('+')) return unary();
    NodePtr base = atom();
    if (c_.consume('^')) return make_op(Expr::Node::Kind::Pow, {base, unary()});
    return base;
  }

  NodePtr atom() {
    const char c = c_.peek();
    if (c == '(') {
      c_.consume('(');
      NodePtr inner = expression();
      c_.expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '.') {
      const Rational v = parse_rational(c_.number_token());
      // "2i" is an imaginary literal
      const std::size_t p = c_.position();
      const auto text = c_.text();
      if (p < text.size() && text[p] == 'i' && (p + 1 >= text.size() || !is_ident_char(text[p + 1]))) {
        c_.reset(p + 1);
        return make_const(Scalar::gaussian(0, v));
      }
      return make_const(Scalar(v));
    }
    if (is_ident_start(c)) {
      const std::string name = c_.identifier();
      if (c_.peek() == '(') {
        c_.consume('(');
        std::vector<NodePtr> args{expression()};
        while (c_.consume(',')) args.push_back(expression());
        c_.expect(')');
        static const char* known[] = {"sqrt", "exp", "log", "cos", "sin", "abs", "root"};
        bool ok = false;
        for (const char* k : known) ok = ok || name == k;
        if (!ok) c_.fail("unknown function '" + name + "'");
        if (args.size() != 1) c_.fail("function '" + name + "' takes one argument");
        return make_op(Expr::Node::Kind::Call, std::move(args), name);
      }
      if (name == "n") {
        uses_index = true;
        auto node = std::make_shared<Expr::Node>();
        node->kind = Expr::Node::Kind::Index;
        return node;
      }
      if (name == "i") return make_const(Scalar::gaussian(0, 1));
      if (name == "pi") return make_const(Scalar::inexact(std::numbers::pi));
      if (name == "e") return make_const(Scalar::inexact(std::numbers::e));
      c_.fail("unknown identifier '" + name + "'");
    }
    c_.fail("expected an expression");
  }

  TextCursor& c_;
};

bool perfect_square(const Integer& z, Integer& root) {
  if (z < 0 || mpz_perfect_square_p(z.get_mpz_t()) == 0) return false;
  mpz_sqrt(root.get_mpz_t(), z.get_mpz_t());
  return true;
}

Scalar call(const std::string& fn, const Scalar& x) {
  if (fn == "root") {
    if (auto t = x.as_rational()) return Scalar::root_of_unity(*t);
    const double t = x.to_complex().real();
    return Scalar::inexact(std::polar(1.0, 2.0 * std::numbers::pi * t));
  }
  if (fn == "abs") {
    if (auto a = x.abs_exact()) return Scalar(*a);
    return Scalar::inexact(x.abs());
  }
  if (fn == "sqrt") {
    if (auto q = x.as_rational(); q && *q >= 0) {
      Integer rn;
      Integer rd;
      if (perfect_square(q->get_num(), rn) && perfect_square(q->get_den(), rd)) {
        return Scalar(Rational(rn, rd));
      }
    }
    return Scalar::inexact(std::sqrt(x.to_complex()));
  }
  const std::complex<double> z = x.to_complex();
  if (fn == "exp") return Scalar::inexact(std::exp(z));
  if (fn == "log") return Scalar::inexact(std::log(z));
  if (fn == "cos") return Scalar::inexact(std::cos(z));
  if (fn == "sin") return Scalar::inexact(std::sin(z));
  throw Error("unknown function " + fn);
}

Scalar evaluate(const Expr::Node& node, std::optional<std::int64_t> n) {
  using K = Expr::Node::Kind;
  switch (node.kind) {
    case K::Constant:
      return node.value;
    case K::Index:
      if (!n) throw ConfigError("expression uses 'n' where no index is available");
      return Scalar(Rational(static_cast<long>(*n)));
    case K::Neg:
      return -evaluate(*node.args[0], n);
    case K::Add:
      return evaluate(*node.args[0], n) + evaluate(*node.args[1], n);
    case K::Sub:
      return evaluate(*node.args[0], n) - evaluate(*node.args[1], n);
    case K::Mul:
      return evaluate(*node.args[0], n) * evaluate(*node.args[1], n);
    case K::Div:
      return evaluate(*node.args[0], n) / evaluate(*node.args[1], n);
    case K::Pow: {
      const Scalar base = evaluate(*node.args[0], n);
      const Scalar ex = evaluate(*node.args[1], n);
      if (auto q = ex.as_rational(); q && q->get_den() == 1 && base.is_exact() &&
                                     abs(q->get_num()) <= 1 << 20) {
        const long e = q->get_num().get_si();
        const Scalar p = base.pow(static_cast<std::uint64_t>(e < 0 ? -e : e));
        return e < 0 ? Scalar(1L) / p : p;
      }
      return Scalar::inexact(std::pow(base.to_complex(), ex.to_complex()));
    }
    case K::Call:
      return call(node.function, evaluate(*node.args[0], n));
  }
  throw Error("corrupt expression");
}

}  // namespace

Expr Expr::parse(TextCursor& cursor) {
  cursor.skip_ws();
  const std::size_t start = cursor.position();
  Parser p(cursor);
  Expr e;
  e.root_ = p.expression();
  e.uses_index_ = p.uses_index;
  std::string_view raw = cursor.text().substr(start, cursor.position() - start);
  while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back())) != 0) raw.remove_suffix(1);
  e.text_ = std::string(raw);
  return e;
}

Expr Expr::parse(std::string_view text) {
  TextCursor c(text);
  Expr e = parse(c);
  if (!c.eof()) c.fail("unexpected trailing input in expression");
  return e;
}

Expr Expr::constant(const Scalar& value) {
  Expr e;
  e.root_ = make_const(value);
  e.text_ = value.to_string();
  return e;
}

Scalar Expr::eval(std::optional<std::int64_t> n) const {
  if (!root_) throw ConfigError("empty expression");
  return evaluate(*root_, n);
}

}  // namespace recur
