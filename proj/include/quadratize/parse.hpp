#pragma once

#include <cctype>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>

#include "quadratize/unipoly.hpp"

namespace quadratize {

struct ParseError : std::runtime_error {
  size_t position;
  ParseError(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

namespace detail {

constexpr int kMaxParsedDegree = 100000;

// Recursive descent over
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*          (implicit '*' between a number and x)
//   factor := base ('^' uint)?
//   base   := 'x' | number | '(' expr ')'
//   number := uint | uint'/'uint | decimal  (decimal may carry an e-exponent)
// Any decimal literal anywhere switches the whole polynomial to Float mode.
class PolyParser {
 public:
  PolyParser(std::string text, Mode mode) : s_(std::move(text)), mode_(mode) {}

  UniPoly parse() {
    UniPoly r = expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
    return r;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  UniPoly expr() {
    skip_ws();
    bool negate = false;
    if (peek() == '-' || peek() == '+') {
      negate = peek() == '-';
      ++pos_;
    }
    UniPoly acc = term();
    if (negate) acc = -acc;
    while (true) {
      skip_ws();
      const char c = peek();
      if (c != '+' && c != '-') break;
      ++pos_;
      const UniPoly t = term();
      acc = c == '+' ? acc + t : acc - t;
    }
    return acc;
  }

  UniPoly term() {
    bool was_number = false;
    UniPoly acc = factor(&was_number);
    while (true) {
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        acc = acc * factor(&was_number);
      } else if (was_number && peek() == 'x') {
        acc = acc * factor(&was_number);  // "3x^2" reads as 3 * x^2
      } else {
        break;
      }
    }
    return acc;
  }

  UniPoly factor(bool* was_number) {
    UniPoly b = base(was_number);
    skip_ws();
    if (peek() != '^') return b;
    ++pos_;
    skip_ws();
    const size_t at = pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      throw ParseError("expected a nonnegative integer exponent", pos_);
    const long e = parse_uint();
    *was_number = false;
    return power(std::move(b), e, at);
  }

  UniPoly base(bool* was_number) {
    skip_ws();
    *was_number = false;
    const char c = peek();
    if (c == 'x') {
      ++pos_;
      return UniPoly::x(mode_);
    }
    if (c == '(') {
      ++pos_;
      UniPoly inner = expr();
      skip_ws();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      *was_number = true;
      return UniPoly::constant(number());
    }
    throw ParseError("expected 'x', a number, or '('", pos_);
  }

  long parse_uint() {
    const size_t at = pos_;
    long v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (s_[pos_] - '0');
      if (v > kMaxParsedDegree) throw ParseError("exponent too large", at);
      ++pos_;
    }
    if (pos_ == at) throw ParseError("expected digits", at);
    return v;
  }

  // Lexes one numeric literal. Rational forms stay exact unless the whole
  // input was flagged Float; decimal and e-notation forms are Float-only.
  Scalar number() {
    const size_t at = pos_;
    const auto digits = [this] {
      std::string d;
      while (std::isdigit(static_cast<unsigned char>(peek()))) d += s_[pos_++];
      return d;
    };
    std::string intpart = digits();
    bool is_decimal = false;
    std::string text = intpart;

    if (peek() == '.') {
      ++pos_;
      const std::string frac = digits();
      if (intpart.empty() && frac.empty()) throw ParseError("malformed decimal literal", at);
      is_decimal = true;
      text += "." + frac;
    } else if (intpart.empty()) {
      throw ParseError("expected digits", at);
    }

    if (peek() == 'e' || peek() == 'E') {
      const size_t mark = pos_;
      std::string ex;
      ++pos_;
      if (peek() == '+' || peek() == '-') ex += s_[pos_++];
      const std::string ed = digits();
      if (ed.empty()) {
        pos_ = mark;  // not an exponent after all; let the caller trip on 'e'
      } else {
        is_decimal = true;
        text += "e" + ex + ed;
      }
    }

    if (is_decimal) {
      if (mode_ != Mode::Float)
        throw ParseError("decimal literal in exact context", at);  // prescan prevents this
      return Scalar::flt(std::strtod(text.c_str(), nullptr));
    }

    if (peek() == '/') {
      ++pos_;
      const std::string den = digits();
      if (den.empty()) throw ParseError("expected denominator digits", pos_);
      if (den.find_first_not_of('0') == std::string::npos)
        throw ParseError("zero denominator", at);
      mpq_class q(intpart + "/" + den);
      q.canonicalize();
      return mode_ == Mode::Float ? Scalar::flt(q.get_d()) : Scalar(q);
    }

    const mpq_class q(intpart);
    return mode_ == Mode::Float ? Scalar::flt(q.get_d()) : Scalar(q);
  }

  UniPoly power(UniPoly b, long e, size_t at) {
    const long bd = b.degree_or(0);
    if (bd > 0 && bd * e > kMaxParsedDegree)
      throw ParseError("power expands past the supported degree", at);
    UniPoly acc = UniPoly::constant(Scalar::one(mode_));
    while (e > 0) {
      if (e & 1) acc = acc * b;
      e >>= 1;
      if (e > 0) b = b * b;
    }
    return acc;
  }

  std::string s_;
  size_t pos_ = 0;
  Mode mode_;
};

}  // namespace detail

// Parses an expression in x to its expanded polynomial. Exact rational
// coefficients unless the text contains a decimal (or e-notation) literal, in
// which case every coefficient becomes a float.
inline UniPoly parse_poly(const std::string& text) {
  const bool has_decimal = text.find('.') != std::string::npos ||
                           text.find('e') != std::string::npos ||
                           text.find('E') != std::string::npos;
  return detail::PolyParser(text, has_decimal ? Mode::Float : Mode::Exact).parse();
}

}  // namespace quadratize
