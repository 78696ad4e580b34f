#pragma once

// Text form of an equation: parser for "y' = P / Q" and the inverse renderer.
//
// P and Q are polynomial expressions in x, y and the imaginary unit i built
// from numbers, + - * / ^ and parentheses (adjacency works as multiplication).
// Shape requirements beyond syntax: the numerator is a polynomial in y alone of
// degree <= 3; the denominator is linear in y with coefficients quadratic in x.

#include <array>
#include <cctype>
#include <complex>
#include <sstream>
#include <string>

#include "air/core.hpp"

namespace air {
namespace parse_detail {

constexpr int kMaxDeg = 9;

struct Poly2 {
  // c[i][j] multiplies x^i y^j
  std::array<std::array<Complex, kMaxDeg + 1>, kMaxDeg + 1> c{};

  static Poly2 constant(Complex v) {
    Poly2 p;
    p.c[0][0] = v;
    return p;
  }
  static Poly2 var_x() {
    Poly2 p;
    p.c[1][0] = 1;
    return p;
  }
  static Poly2 var_y() {
    Poly2 p;
    p.c[0][1] = 1;
    return p;
  }

  int deg_x() const {
    for (int i = kMaxDeg; i >= 0; --i)
      for (int j = 0; j <= kMaxDeg; ++j)
        if (std::abs(c[i][j]) != 0) return i;
    return 0;
  }
  int deg_y() const {
    for (int j = kMaxDeg; j >= 0; --j)
      for (int i = 0; i <= kMaxDeg; ++i)
        if (std::abs(c[i][j]) != 0) return j;
    return 0;
  }
  bool is_zero() const {
    for (const auto& row : c)
      for (auto v : row)
        if (std::abs(v) != 0) return false;
    return true;
  }
  bool is_constant() const { return deg_x() == 0 && deg_y() == 0; }

  Poly2 operator+(const Poly2& o) const {
    Poly2 r = *this;
    for (int i = 0; i <= kMaxDeg; ++i)
      for (int j = 0; j <= kMaxDeg; ++j) r.c[i][j] += o.c[i][j];
    return r;
  }
  Poly2 operator-(const Poly2& o) const {
    Poly2 r = *this;
    for (int i = 0; i <= kMaxDeg; ++i)
      for (int j = 0; j <= kMaxDeg; ++j) r.c[i][j] -= o.c[i][j];
    return r;
  }
  Poly2 operator*(const Poly2& o) const {
    Poly2 r;
    for (int i = 0; i <= kMaxDeg; ++i)
      for (int j = 0; j <= kMaxDeg; ++j) {
        if (std::abs(c[i][j]) == 0) continue;
        for (int k = 0; k <= kMaxDeg; ++k)
          for (int l = 0; l <= kMaxDeg; ++l) {
            if (std::abs(o.c[k][l]) == 0) continue;
            if (i + k > kMaxDeg || j + l > kMaxDeg)
              throw Error(ErrorCode::ParseShape, "expression degree too high");
            r.c[i + k][j + l] += c[i][j] * o.c[k][l];
          }
      }
    return r;
  }
};

struct Rational {
  Poly2 num, den = Poly2::constant(1);

  Rational operator+(const Rational& o) const { return {num * o.den + o.num * den, den * o.den}; }
  Rational operator-(const Rational& o) const { return {num * o.den - o.num * den, den * o.den}; }
  Rational operator*(const Rational& o) const { return {num * o.num, den * o.den}; }
  Rational operator/(const Rational& o) const {
    if (o.num.is_zero()) throw Error(ErrorCode::ParseShape, "division by zero in expression");
    return {num * o.den, den * o.num};
  }
  Rational negated() const { return {Poly2::constant(-1) * num, den}; }
};

enum class Tok { Number, X, Y, YPrime, Imag, Plus, Minus, Star, Slash, Caret, LParen, RParen, Equal, End };

struct Lexer {
  std::string src;
  std::size_t pos = 0;
  Tok tok = Tok::End;
  double value = 0;

  explicit Lexer(std::string s) : src(std::move(s)) { next(); }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ParseSyntax, msg + " at position " + std::to_string(pos));
  }

  void next() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    if (pos >= src.size()) {
      tok = Tok::End;
      return;
    }
    char ch = src[pos];
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      std::size_t used = 0;
      try {
        value = std::stod(src.substr(pos), &used);
      } catch (const std::exception&) {
        fail("malformed number");
      }
      pos += used;
      tok = Tok::Number;
      return;
    }
    ++pos;
    switch (ch) {
      case 'x': tok = Tok::X; return;
      case 'y':
        if (pos < src.size() && src[pos] == '\'') {
          ++pos;
          tok = Tok::YPrime;
        } else {
          tok = Tok::Y;
        }
        return;
      case 'i': tok = Tok::Imag; return;
      case '+': tok = Tok::Plus; return;
      case '-': tok = Tok::Minus; return;
      case '*': tok = Tok::Star; return;
      case '/': tok = Tok::Slash; return;
      case '^': tok = Tok::Caret; return;
      case '(': tok = Tok::LParen; return;
      case ')': tok = Tok::RParen; return;
      case '=': tok = Tok::Equal; return;
      default: fail(std::string("unexpected character '") + ch + "'");
    }
  }
};

struct Parser {
  Lexer lx;

  explicit Parser(std::string s) : lx(std::move(s)) {}

  Rational parse_equation() {
    if (lx.tok != Tok::YPrime) lx.fail("expected y' on the left-hand side");
    lx.next();
    if (lx.tok != Tok::Equal) lx.fail("expected '=' after y'");
    lx.next();
    Rational r = expr();
    if (lx.tok != Tok::End) lx.fail("trailing input after the expression");
    return r;
  }

  Rational expr() {
    Rational r = term();
    while (lx.tok == Tok::Plus || lx.tok == Tok::Minus) {
      bool plus = lx.tok == Tok::Plus;
      lx.next();
      Rational t = term();
      r = plus ? r + t : r - t;
    }
    return r;
  }

  bool starts_atom() const {
    switch (lx.tok) {
      case Tok::Number: case Tok::X: case Tok::Y: case Tok::Imag: case Tok::LParen:
        return true;
      default:
        return false;
    }
  }

  Rational term() {
    Rational r = unary();
    while (true) {
      if (lx.tok == Tok::Star || lx.tok == Tok::Slash) {
        bool mul = lx.tok == Tok::Star;
        lx.next();
        Rational u = unary();
        r = mul ? r * u : r / u;
      } else if (starts_atom()) {
        r = r * unary();  // adjacency, e.g. "2x"
      } else {
        return r;
      }
    }
  }

  Rational unary() {
    if (lx.tok == Tok::Minus) {
      lx.next();
      return unary().negated();
    }
    if (lx.tok == Tok::Plus) {
      lx.next();
      return unary();
    }
    return power();
  }

  Rational power() {
    Rational base = atom();
    if (lx.tok != Tok::Caret) return base;
    lx.next();
    bool neg = false;
    if (lx.tok == Tok::Minus) {
      neg = true;
      lx.next();
    }
    if (lx.tok != Tok::Number) lx.fail("expected an integer exponent after '^'");
    double v = lx.value;
    lx.next();
    if (v != std::floor(v) || v < 0 || v > 64) lx.fail("exponent must be a small non-negative integer");
    Rational r{Poly2::constant(1), Poly2::constant(1)};
    for (int k = 0; k < int(v); ++k) r = r * base;
    if (neg) r = Rational{Poly2::constant(1), Poly2::constant(1)} / r;
    return r;
  }

  Rational atom() {
    switch (lx.tok) {
      case Tok::Number: {
        Rational r{Poly2::constant(lx.value), Poly2::constant(1)};
        lx.next();
        return r;
      }
      case Tok::X: lx.next(); return {Poly2::var_x(), Poly2::constant(1)};
      case Tok::Y: lx.next(); return {Poly2::var_y(), Poly2::constant(1)};
      case Tok::Imag: lx.next(); return {Poly2::constant(Complex(0, 1)), Poly2::constant(1)};
      case Tok::LParen: {
        lx.next();
        Rational r = expr();
        if (lx.tok != Tok::RParen) lx.fail("expected ')'");
        lx.next();
        return r;
      }
      default:
        lx.fail("expected a number, x, y, i or '('");
    }
    throw Error(ErrorCode::Internal, "unreachable");
  }
};

}  // namespace parse_detail

// Parse "y' = P/Q" into the rational Abel form, enforcing its shape.
inline RationalAIR parse_equation(const std::string& text) {
  parse_detail::Parser parser(text);
  parse_detail::Rational r = parser.parse_equation();

  const auto& num = r.num;
  const auto& den = r.den;
  if (den.is_zero() || num.is_zero())
    throw Error(ErrorCode::ParseShape, "equation degenerates to zero");

  if (num.deg_y() > 3)
    throw Error(ErrorCode::ParseShape, "numerator degree in y exceeds 3");
  if (num.deg_x() > 0)
    throw Error(ErrorCode::ParseShape, "numerator coefficients must not depend on x");
  if (den.deg_y() != 1)
    throw Error(ErrorCode::ParseShape, "denominator not linear in y");
  if (den.deg_x() > 2)
    throw Error(ErrorCode::ParseShape, "denominator coefficients not quadratic in x");

  RationalAIR eq;
  for (int k = 0; k < 4; ++k) eq.num[k] = num.c[0][k];
  for (int i = 0; i < 3; ++i) {
    eq.den_y[i] = den.c[i][1];
    eq.den_c[i] = den.c[i][0];
  }
  eq.validate();
  return eq;
}

namespace parse_detail {

inline std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

inline std::string fmt_complex(Complex v) {
  if (v.imag() == 0) return fmt_double(v.real());
  if (v.real() == 0) return fmt_double(v.imag()) + "i";
  std::string s = "(" + fmt_double(v.real());
  s += v.imag() < 0 ? " - " : " + ";
  s += fmt_double(std::abs(v.imag())) + "i)";
  return s;
}

inline void append_term(std::string& out, Complex coeff, const std::string& mono) {
  if (std::abs(coeff) == 0) return;
  std::string cs;
  bool unit = (coeff == Complex(1)) && !mono.empty();
  bool neg_unit = (coeff == Complex(-1)) && !mono.empty();
  if (!unit && !neg_unit) cs = fmt_complex(coeff);
  if (out.empty()) {
    if (neg_unit) out += "-";
    else if (!cs.empty()) out += cs;
  } else {
    if (neg_unit) {
      out += " - ";
    } else if (!cs.empty() && cs[0] == '-') {
      out += " - ";
      cs.erase(0, 1);
    } else {
      out += " + ";
    }
    if (!cs.empty()) out += cs;
  }
  if (!cs.empty() && !unit && !neg_unit && !mono.empty()) out += "*";
  out += mono;
}

inline std::string quadratic_in_x(const std::array<Complex, 3>& c) {
  std::string s;
  append_term(s, c[2], "x^2");
  append_term(s, c[1], "x");
  append_term(s, c[0], "");
  return s.empty() ? "0" : s;
}

}  // namespace parse_detail

// Canonical text rendering, re-parseable by parse_equation.
inline std::string render(const RationalAIR& eq) {
  using parse_detail::append_term;
  std::string num;
  append_term(num, eq.num[3], "y^3");
  append_term(num, eq.num[2], "y^2");
  append_term(num, eq.num[1], "y");
  append_term(num, eq.num[0], "");
  if (num.empty()) num = "0";

  std::string sy = parse_detail::quadratic_in_x(eq.den_y);
  std::string rc = parse_detail::quadratic_in_x(eq.den_c);
  std::string den;
  if (sy != "0") {
    den = "(" + sy + ")*y";
    if (rc != "0") {
      if (rc[0] == '-') den += " - " + rc.substr(1);
      else den += " + " + rc;
    }
  } else {
    den = rc;
  }
  return "y' = (" + num + ")/(" + den + ")";
}

}  // namespace air
