#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "quadratize/scalar.hpp"

namespace quadratize {

// Dense univariate polynomial, coefficients lowest-degree first. All
// coefficients share one mode; the trailing (leading) coefficient is nonzero,
// so the zero polynomial has an empty coefficient vector and no integer
// degree.
class UniPoly {
 public:
  explicit UniPoly(Mode m = Mode::Exact) : mode_(m) {}
  UniPoly(Mode m, std::vector<Scalar> coeffs) : mode_(m), c_(std::move(coeffs)) {
    for (const Scalar& s : c_)
      if (s.mode() != mode_) throw ModeMismatchError("UniPoly: coefficient mode mismatch");
    trim();
  }

  static UniPoly zero(Mode m = Mode::Exact) { return UniPoly(m); }
  static UniPoly constant(Scalar v) {
    UniPoly p(v.mode());
    p.c_.push_back(std::move(v));
    p.trim();
    return p;
  }
  static UniPoly x(Mode m = Mode::Exact) { return monomial(1, Scalar::one(m)); }
  static UniPoly monomial(int deg, Scalar coeff) {
    UniPoly p(coeff.mode());
    if (deg < 0) throw std::domain_error("UniPoly: negative degree");
    p.c_.assign(static_cast<size_t>(deg) + 1, Scalar::zero(coeff.mode()));
    p.c_.back() = std::move(coeff);
    p.trim();
    return p;
  }

  Mode mode() const { return mode_; }
  bool is_zero() const { return c_.empty(); }

  // The zero polynomial has no degree (conceptually -infinity).
  std::optional<int> degree() const {
    if (c_.empty()) return std::nullopt;
    return static_cast<int>(c_.size()) - 1;
  }
  int degree_or(int fallback) const { return degree().value_or(fallback); }

  Scalar coeff(int i) const {
    if (i < 0 || static_cast<size_t>(i) >= c_.size()) return Scalar::zero(mode_);
    return c_[static_cast<size_t>(i)];
  }
  Scalar leading() const {
    if (c_.empty()) return Scalar::zero(mode_);
    return c_.back();
  }
  void set_coeff(int i, const Scalar& v) {
    if (i < 0) throw std::domain_error("UniPoly: negative degree");
    if (v.mode() != mode_) throw ModeMismatchError("UniPoly: coefficient mode mismatch");
    if (static_cast<size_t>(i) >= c_.size()) c_.resize(static_cast<size_t>(i) + 1, Scalar::zero(mode_));
    c_[static_cast<size_t>(i)] = v;
    trim();
  }

  const std::vector<Scalar>& coeffs() const { return c_; }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    a.require(b);
    UniPoly r(a.mode_);
    r.c_.resize(std::max(a.c_.size(), b.c_.size()), Scalar::zero(a.mode_));
    for (size_t i = 0; i < r.c_.size(); ++i) {
      if (i < a.c_.size()) r.c_[i] += a.c_[i];
      if (i < b.c_.size()) r.c_[i] += b.c_[i];
    }
    r.trim();
    return r;
  }
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b) { return a + (-b); }
  UniPoly operator-() const {
    UniPoly r(mode_);
    r.c_.reserve(c_.size());
    for (const Scalar& s : c_) r.c_.push_back(-s);
    return r;
  }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    a.require(b);
    UniPoly r(a.mode_);
    if (a.is_zero() || b.is_zero()) return r;
    r.c_.assign(a.c_.size() + b.c_.size() - 1, Scalar::zero(a.mode_));
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    r.trim();
    return r;
  }
  friend UniPoly operator*(const Scalar& s, const UniPoly& p) {
    if (s.mode() != p.mode_) throw ModeMismatchError("UniPoly: scalar mode mismatch");
    UniPoly r(p.mode_);
    r.c_.reserve(p.c_.size());
    for (const Scalar& v : p.c_) r.c_.push_back(s * v);
    r.trim();
    return r;
  }
  friend UniPoly operator*(const UniPoly& p, const Scalar& s) { return s * p; }
  UniPoly& operator+=(const UniPoly& o) { return *this = *this + o; }
  UniPoly& operator-=(const UniPoly& o) { return *this = *this - o; }
  UniPoly& operator*=(const UniPoly& o) { return *this = *this * o; }

  UniPoly pow(unsigned e) const {
    UniPoly acc = constant(Scalar::one(mode_));
    UniPoly base = *this;
    while (e > 0) {
      if (e & 1u) acc *= base;
      if (e >>= 1u) base *= base;
    }
    return acc;
  }

  bool operator==(const UniPoly& o) const {
    require(o);
    if (c_.size() != o.c_.size()) return false;
    for (size_t i = 0; i < c_.size(); ++i)
      if (!c_[i].equals(o.c_[i])) return false;
    return true;
  }

  // Per-coefficient comparison with relative tolerance eps (Float mode);
  // exact equality in Exact mode.
  bool approx_equal(const UniPoly& o, double eps) const {
    require(o);
    size_t n = std::max(c_.size(), o.c_.size());
    for (size_t i = 0; i < n; ++i) {
      Scalar a = coeff(static_cast<int>(i)), b = o.coeff(static_cast<int>(i));
      if (!a.equals(b, eps)) return false;
    }
    return true;
  }

  Scalar eval(const Scalar& t) const {
    Scalar r = Scalar::zero(mode_);
    for (size_t i = c_.size(); i-- > 0;) r = r * t + c_[i];
    return r;
  }
  std::complex<double> eval(std::complex<double> t) const {
    std::complex<double> r = 0.0;
    for (size_t i = c_.size(); i-- > 0;) r = r * t + c_[i].to_complex();
    return r;
  }

  UniPoly derivative() const {
    UniPoly r(mode_);
    if (c_.size() <= 1) return r;
    r.c_.reserve(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) {
      Scalar k = mode_ == Mode::Exact ? Scalar(static_cast<long>(i))
                                      : Scalar::flt(static_cast<double>(i));
      r.c_.push_back(k * c_[i]);
    }
    r.trim();
    return r;
  }

  // p(x + lambda), computed by the Horner shift (repeated synthetic division).
  UniPoly taylor_shift(const Scalar& lambda) const {
    if (lambda.mode() != mode_) throw ModeMismatchError("taylor_shift: shift mode mismatch");
    UniPoly r = *this;
    if (r.c_.size() <= 1 || lambda.is_zero(0.0)) return r;
    size_t n = r.c_.size() - 1;
    for (size_t k = 0; k < n; ++k)
      for (size_t j = n - 1; j + 1 > k; --j) r.c_[j] += lambda * r.c_[j + 1];
    r.trim();
    return r;
  }

  // p(c*y + d) as a polynomial in y, by Horner over the linear argument.
  UniPoly linear_substitute(const Scalar& c, const Scalar& d) const {
    if (c.mode() != mode_ || d.mode() != mode_)
      throw ModeMismatchError("linear_substitute: argument mode mismatch");
    UniPoly lin(mode_);
    lin.c_ = {d, c};
    lin.trim();
    UniPoly r(mode_);
    for (size_t i = c_.size(); i-- > 0;) r = r * lin + constant(c_[i]);
    return r;
  }

  UniPoly to_float() const {
    UniPoly r(Mode::Float);
    r.c_.reserve(c_.size());
    for (const Scalar& s : c_) r.c_.push_back(s.to_float());
    r.trim();
    return r;
  }

  double norm_inf() const {
    double m = 0.0;
    for (const Scalar& s : c_) m = std::max(m, s.abs());
    return m;
  }

  // Canonical text: decreasing degree, '-' folded into the joiner, coefficient
  // juxtaposed with the power ("2x^5 - 20x^3 + 8"). Re-parseable for real
  // coefficients.
  std::string str() const {
    if (c_.empty()) return "0";
    std::string out;
    bool first = true;
    for (size_t i = c_.size(); i-- > 0;) {
      const Scalar& s = c_[i];
      if (s.is_zero(0.0)) continue;
      std::string coeff_txt;
      bool negative = false;
      if (s.is_exact()) {
        mpq_class q = s.rational();
        negative = sgn(q) < 0;
        coeff_txt = mpq_class(::abs(q)).get_str();
      } else if (s.cplx().imag() == 0.0) {
        double re = s.cplx().real();
        negative = std::signbit(re);
        coeff_txt = detail::double_to_string(std::fabs(re));
      } else {
        coeff_txt = "(" + s.str() + ")";
      }
      if (first) {
        out += negative ? "-" : "";
        first = false;
      } else {
        out += negative ? " - " : " + ";
      }
      bool unit = coeff_txt == "1";
      if (i == 0)
        out += coeff_txt;
      else {
        out += unit ? "" : coeff_txt;
        out += "x";
        if (i > 1) out += "^" + std::to_string(i);
      }
    }
    return out.empty() ? "0" : out;
  }

 private:
  void require(const UniPoly& o) const {
    if (mode_ != o.mode_) throw ModeMismatchError("UniPoly: operand mode mismatch");
  }
  void trim() {
    while (!c_.empty() && c_.back().is_zero(0.0)) c_.pop_back();
  }

  Mode mode_;
  std::vector<Scalar> c_;
};

}  // namespace quadratize
