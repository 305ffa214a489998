#pragma once

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace quadratize {

// Default relative tolerance for Float-mode equality and rank decisions.
inline constexpr double kDefaultTolerance = 1e-9;
// Tolerance used when polishing floating-point k-th roots.
inline constexpr double kRootRefineTolerance = 1e-12;

struct ModeMismatchError : std::logic_error {
  using std::logic_error::logic_error;
};

// Raised when a rational k-th root does not exist; callers may retry in Float mode.
struct ExactRootUnavailable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a Float-mode rank/zero decision falls inside the tolerance window
// where both answers are defensible.
struct ToleranceIndeterminate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Mode { Exact, Float };

inline const char* mode_name(Mode m) { return m == Mode::Exact ? "exact" : "float"; }

namespace detail {

inline std::string double_to_string(double v) {
  // Shortest decimal that round-trips.
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string double_to_string_17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

// A number in exactly one of two modes: an arbitrary-precision rational, or a
// complex double. Modes never mix silently; combining operands of different
// modes throws ModeMismatchError.
class Scalar {
 public:
  Scalar() : mode_(Mode::Exact), rat_(0) {}
  Scalar(long v) : mode_(Mode::Exact), rat_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(long num, long den) : mode_(Mode::Exact), rat_(num, den) {
    if (den == 0) throw std::domain_error("Scalar: zero denominator");
    rat_.canonicalize();
  }
  explicit Scalar(const mpq_class& q) : mode_(Mode::Exact), rat_(q) {}
  explicit Scalar(std::complex<double> z) : mode_(Mode::Float), flt_(z) {}

  static Scalar flt(double re, double im = 0.0) { return Scalar(std::complex<double>(re, im)); }
  static Scalar zero(Mode m) { return m == Mode::Exact ? Scalar() : flt(0.0); }
  static Scalar one(Mode m) { return m == Mode::Exact ? Scalar(1) : flt(1.0); }

  Mode mode() const { return mode_; }
  bool is_exact() const { return mode_ == Mode::Exact; }

  const mpq_class& rational() const {
    require(Mode::Exact);
    return rat_;
  }
  std::complex<double> cplx() const {
    require(Mode::Float);
    return flt_;
  }

  // Numeric value regardless of mode (imaginary part dropped for Exact).
  std::complex<double> to_complex() const {
    return is_exact() ? std::complex<double>(rat_.get_d(), 0.0) : flt_;
  }
  Scalar to_float() const { return is_exact() ? Scalar(to_complex()) : *this; }

  double abs() const { return is_exact() ? std::fabs(rat_.get_d()) : std::abs(flt_); }

  bool is_zero(double eps = kDefaultTolerance) const {
    return is_exact() ? sgn(rat_) == 0 : std::abs(flt_) <= eps;
  }

  // Float-mode equality is relative: |a-b| <= eps * max(1, |a|, |b|).
  bool equals(const Scalar& o, double eps = kDefaultTolerance) const {
    require(o.mode_);
    if (is_exact()) return rat_ == o.rat_;
    double scale = std::max({1.0, std::abs(flt_), std::abs(o.flt_)});
    return std::abs(flt_ - o.flt_) <= eps * scale;
  }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.equals(b); }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !a.equals(b); }

  // Ordering is defined for Exact mode only (complex numbers have no total order).
  friend bool operator<(const Scalar& a, const Scalar& b) {
    if (!a.is_exact() || !b.is_exact())
      throw ModeMismatchError("Scalar ordering requires Exact mode");
    return a.rat_ < b.rat_;
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    a.require(b.mode_);
    return a.is_exact() ? Scalar(mpq_class(a.rat_ + b.rat_)) : Scalar(a.flt_ + b.flt_);
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    a.require(b.mode_);
    return a.is_exact() ? Scalar(mpq_class(a.rat_ - b.rat_)) : Scalar(a.flt_ - b.flt_);
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    a.require(b.mode_);
    return a.is_exact() ? Scalar(mpq_class(a.rat_ * b.rat_)) : Scalar(a.flt_ * b.flt_);
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    a.require(b.mode_);
    if (b.is_exact()) {
      if (sgn(b.rat_) == 0) throw std::domain_error("Scalar: division by zero");
      return Scalar(mpq_class(a.rat_ / b.rat_));
    }
    if (b.flt_ == std::complex<double>(0.0, 0.0))
      throw std::domain_error("Scalar: division by zero");
    return Scalar(a.flt_ / b.flt_);
  }
  Scalar operator-() const {
    return is_exact() ? Scalar(mpq_class(-rat_)) : Scalar(-flt_);
  }

  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  // Canonical text. Exact: "num" or "num/den". Float: shortest round-trip
  // decimal; complex values with nonzero imaginary part use "re+imi" with 17
  // significant digits.
  std::string str() const {
    if (is_exact()) return rat_.get_str();
    if (flt_.imag() == 0.0) return detail::double_to_string(flt_.real());
    std::string s = detail::double_to_string_17(flt_.real());
    s += (flt_.imag() < 0 || std::signbit(flt_.imag())) ? "-" : "+";
    s += detail::double_to_string_17(std::fabs(flt_.imag()));
    s += "i";
    return s;
  }

 private:
  void require(Mode m) const {
    if (mode_ != m)
      throw ModeMismatchError("Scalar mode mismatch: cannot combine exact and float values");
  }

  Mode mode_;
  mpq_class rat_;
  std::complex<double> flt_{0.0, 0.0};
};

// Principal k-th root. Exact mode: the rational root when it exists (negative
// radicands allowed for odd k), otherwise ExactRootUnavailable. Float mode:
// principal complex branch, Newton-polished to kRootRefineTolerance.
inline Scalar nth_root(const Scalar& s, unsigned k) {
  if (k == 0) throw std::domain_error("nth_root: k must be >= 1");
  if (k == 1) return s;
  if (s.is_exact()) {
    const mpq_class& q = s.rational();
    if (sgn(q) == 0) return Scalar(0);
    bool neg = sgn(q) < 0;
    if (neg && k % 2 == 0)
      throw ExactRootUnavailable("nth_root: even root of a negative rational");
    mpz_class num = ::abs(q.get_num());
    mpz_class den = q.get_den();
    mpz_class rn, rd;
    bool ok = mpz_root(rn.get_mpz_t(), num.get_mpz_t(), k) != 0;
    ok = ok && mpz_root(rd.get_mpz_t(), den.get_mpz_t(), k) != 0;
    if (!ok)
      throw ExactRootUnavailable("nth_root: " + q.get_str() + " has no rational root of index " +
                                 std::to_string(k));
    if (neg) rn = -rn;
    return Scalar(mpq_class(rn, rd));
  }
  std::complex<double> z = s.cplx();
  if (z == std::complex<double>(0.0, 0.0)) return Scalar(0.0, 0.0);
  std::complex<double> r;
  if (z.imag() == 0.0 && z.real() > 0.0)
    r = std::pow(z.real(), 1.0 / static_cast<double>(k));
  else
    r = std::pow(z, 1.0 / static_cast<double>(k));
  // A couple of Newton steps tighten pow()'s last bits.
  double scale = std::max(1.0, std::abs(z));
  for (int it = 0; it < 4 && std::abs(std::pow(r, static_cast<double>(k)) - z) >
                                 kRootRefineTolerance * scale;
       ++it) {
    std::complex<double> rk1 = std::pow(r, static_cast<double>(k - 1));
    r -= (rk1 * r - z) / (static_cast<double>(k) * rk1);
  }
  return Scalar(r);
}

inline Scalar scalar_of(Mode m, long v) {
  return m == Mode::Exact ? Scalar(v) : Scalar::flt(static_cast<double>(v));
}

inline Scalar pow_scalar(const Scalar& s, unsigned e) {
  Scalar acc = Scalar::one(s.mode());
  Scalar base = s;
  while (e > 0) {
    if (e & 1u) acc *= base;
    base *= base;
    e >>= 1u;
  }
  return acc;
}

}  // namespace quadratize
