#pragma once

#include <optional>
#include <stdexcept>
#include <utility>

#include "quadratize/quadsys.hpp"

namespace quadratize {

// Closed-form quadratizations for specific degree ranges. Every construction
// routes its candidate variables through verify_quadratization, so a returned
// system is machine-checked rather than trusted.

struct ShiftNormalForm {
  Scalar shift;     // s with y = x + s
  UniPoly shifted;  // q(y) = p(y - s); its coefficient at degree n-1 is zero
};

inline ShiftNormalForm normalize_shift(const UniPoly& p) {
  const auto nd = p.degree();
  if (!nd || *nd < 1) throw std::invalid_argument("normalize_shift: need degree >= 1");
  const int n = *nd;
  const Scalar s = p.coeff(n - 1) / (scalar_of(p.mode(), n) * p.leading());
  return {s, p.taylor_shift(-s)};
}

// Single new variable z = (x+s)^(n-1). Works exactly when, after the shift
// that kills the x^(n-1) term, only the powers n, 2, 1 survive.
inline std::optional<Quadratization> try_one_variable(const UniPoly& p,
                                                      double eps = kDefaultTolerance) {
  const auto nd = p.degree();
  if (!nd || *nd < 3) return std::nullopt;
  const int n = *nd;
  const auto [s, q] = normalize_shift(p);
  const double scale = std::max(1.0, q.norm_inf());
  auto vanishes = [&](int k) {
    const Scalar c = q.coeff(k);
    return p.mode() == Mode::Exact ? c.is_zero(0.0) : c.abs() <= eps * scale;
  };
  if (!vanishes(0)) return std::nullopt;
  for (int k = 3; k < n; ++k)
    if (!vanishes(k)) return std::nullopt;
  UniPoly z = UniPoly::monomial(n - 1, Scalar::one(p.mode())).taylor_shift(s);
  return verify_quadratization(p, NewVarSet(p.mode(), {std::move(z)}), eps);
}

// Degrees at most 2 need no new variables at all.
inline Quadratization quadratize_trivial(const UniPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("quadratize_trivial: zero right-hand side");
  if (p.degree_or(0) > 2) throw std::invalid_argument("quadratize_trivial: degree exceeds 2");
  QuadExpr e(p.mode());
  e.add(0, 0, p.coeff(0));
  e.add(0, 1, p.coeff(1));
  e.add(1, 1, p.coeff(2));
  return Quadratization(p, NewVarSet(p.mode()), {std::move(e)});
}

// Degree 3: {x^2}. Degree 4: {(x+s)^3} after the shift killing the cubic
// term. Degree 5: {x^4, x^3} with no shift needed.
inline std::optional<Quadratization> quadratize_low_degree(const UniPoly& p,
                                                           double eps = kDefaultTolerance) {
  const int n = p.degree_or(-1);
  const Mode mode = p.mode();
  const Scalar one = Scalar::one(mode);
  if (n == 3)
    return verify_quadratization(p, NewVarSet(mode, {UniPoly::monomial(2, one)}), eps);
  if (n == 4) {
    const Scalar s = normalize_shift(p).shift;
    return verify_quadratization(
        p, NewVarSet(mode, {UniPoly::monomial(3, one).taylor_shift(s)}), eps);
  }
  if (n == 5)
    return verify_quadratization(
        p, NewVarSet(mode, {UniPoly::monomial(4, one), UniPoly::monomial(3, one)}), eps);
  throw std::invalid_argument("quadratize_low_degree: degree must be 3, 4, or 5");
}

// Degree 6, order 2: rescale x = alpha*y + beta so that q(y) = p(alpha*y+beta)
// is monic with no y^5 term, take z1 = y^5 + (5*q3/8)*y^2 and z2 = y^3, and
// express both in x again. In exact mode this needs a rational 6th root of the
// leading coefficient and throws ExactRootUnavailable otherwise.
inline std::optional<Quadratization> quadratize_degree6(const UniPoly& p,
                                                        double eps = kDefaultTolerance) {
  if (p.degree_or(-1) != 6) throw std::invalid_argument("quadratize_degree6: degree must be 6");
  const Mode mode = p.mode();
  const Scalar one = Scalar::one(mode);
  const Scalar lead = p.coeff(6);
  const Scalar alpha = one / nth_root(lead, 6);
  const Scalar beta = -p.coeff(5) / (scalar_of(mode, 6) * lead);
  const UniPoly q = p.linear_substitute(alpha, beta);

  const Scalar corr = q.coeff(3) * (mode == Mode::Exact ? Scalar(5, 8) : Scalar::flt(0.625));
  UniPoly z1y = UniPoly::monomial(5, one) + UniPoly::monomial(2, corr);
  UniPoly z2y = UniPoly::monomial(3, one);

  // y = (x - beta)/alpha
  const Scalar ia = one / alpha;
  const Scalar sh = -beta / alpha;
  return verify_quadratization(
      p, NewVarSet(mode, {z1y.linear_substitute(ia, sh), z2y.linear_substitute(ia, sh)}), eps);
}

// Degree 6, order 3, no radicals: {x^5, x^4, x^3} covers every product degree
// any degree-6 right-hand side can need.
inline std::optional<Quadratization> quadratize_degree6_monomial(const UniPoly& p,
                                                                 double eps = kDefaultTolerance) {
  if (p.degree_or(-1) != 6)
    throw std::invalid_argument("quadratize_degree6_monomial: degree must be 6");
  const Mode mode = p.mode();
  const Scalar one = Scalar::one(mode);
  return verify_quadratization(p,
                               NewVarSet(mode, {UniPoly::monomial(5, one), UniPoly::monomial(4, one),
                                                UniPoly::monomial(3, one)}),
                               eps);
}

}  // namespace quadratize
