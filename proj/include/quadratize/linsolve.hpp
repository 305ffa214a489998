#pragma once

#include <algorithm>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "quadratize/scalar.hpp"

namespace quadratize::detail {

// Canonical solvers for A*v = b. Columns are scanned left to right; the first
// column that is independent of the columns already chosen becomes a pivot,
// every other column stays free and its variable is fixed to 0. The returned
// solution is therefore a deterministic representative of the solution set,
// dependent only on the column order the caller established.

struct ExactSolveResult {
  bool feasible = false;
  std::vector<mpq_class> values;
};

// Fraction-free (Bareiss) elimination: rows are first scaled to integers, and
// every update ((a*piv - p*f)/prev) divides exactly, so all rank decisions are
// exact.
inline ExactSolveResult solve_canonical_exact(std::vector<std::vector<mpq_class>> A,
                                              std::vector<mpq_class> b) {
  const size_t R = A.size();
  const size_t C = R ? A[0].size() : 0;
  for (size_t r = 0; r < R; ++r) {
    mpz_class l = b[r].get_den();
    for (const mpq_class& e : A[r]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.get_den().get_mpz_t());
    if (l != 1) {
      mpq_class f(l);
      for (mpq_class& e : A[r]) e *= f;
      b[r] *= f;
    }
  }

  std::vector<char> used(R, 0);
  std::vector<std::pair<size_t, size_t>> pivots;  // (column, row), in elimination order
  mpq_class prev(1);
  for (size_t j = 0; j < C; ++j) {
    size_t rp = R;
    for (size_t r = 0; r < R; ++r)
      if (!used[r] && sgn(A[r][j]) != 0) {
        rp = r;
        break;
      }
    if (rp == R) continue;
    const mpq_class piv = A[rp][j];
    for (size_t r = 0; r < R; ++r) {
      if (used[r] || r == rp) continue;
      const mpq_class f = A[r][j];
      for (size_t jj = 0; jj < C; ++jj) A[r][jj] = (A[r][jj] * piv - A[rp][jj] * f) / prev;
      b[r] = (b[r] * piv - b[rp] * f) / prev;
    }
    prev = piv;
    used[rp] = 1;
    pivots.emplace_back(j, rp);
  }

  for (size_t r = 0; r < R; ++r)
    if (!used[r] && sgn(b[r]) != 0) return {};

  ExactSolveResult res;
  res.feasible = true;
  res.values.assign(C, mpq_class(0));
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    const auto [j, r] = *it;
    mpq_class acc = b[r];
    for (auto done = pivots.rbegin(); done != it; ++done) acc -= A[r][done->first] * res.values[done->first];
    res.values[j] = acc / A[r][j];
  }
  return res;
}

struct FloatSolveResult {
  bool feasible = false;
  std::vector<std::complex<double>> values;
};

// Column-pivoted Gauss-Jordan with a relative threshold. A column whose best
// remaining entry sits inside (tau/2, 2*tau) is neither clearly a pivot nor
// clearly negligible; that ambiguity is reported as ToleranceIndeterminate
// rather than silently resolved either way.
inline FloatSolveResult solve_canonical_float(std::vector<std::vector<std::complex<double>>> A,
                                              std::vector<std::complex<double>> b, double eps) {
  const size_t R = A.size();
  const size_t C = R ? A[0].size() : 0;
  const auto A0 = A;
  const auto b0 = b;

  double scale = 1.0, bscale = 1.0;
  for (size_t r = 0; r < R; ++r) {
    for (size_t j = 0; j < C; ++j) scale = std::max(scale, std::abs(A[r][j]));
    bscale = std::max(bscale, std::abs(b[r]));
  }
  const double tau = eps * scale;
  const double tau_b = eps * bscale;

  std::vector<char> used(R, 0);
  std::vector<std::pair<size_t, size_t>> pivots;
  for (size_t j = 0; j < C; ++j) {
    size_t rp = R;
    double best = 0.0;
    for (size_t r = 0; r < R; ++r)
      if (!used[r] && std::abs(A[r][j]) > best) {
        best = std::abs(A[r][j]);
        rp = r;
      }
    if (best <= 0.5 * tau) continue;
    if (best < 2.0 * tau)
      throw ToleranceIndeterminate("float elimination: pivot magnitude " + std::to_string(best) +
                                   " is inside the ambiguity window around " + std::to_string(tau));
    const std::complex<double> piv = A[rp][j];
    for (size_t jj = 0; jj < C; ++jj) A[rp][jj] /= piv;
    b[rp] /= piv;
    for (size_t r = 0; r < R; ++r) {
      if (r == rp) continue;
      const std::complex<double> f = A[r][j];
      if (f == std::complex<double>(0.0, 0.0)) continue;
      for (size_t jj = 0; jj < C; ++jj) A[r][jj] -= f * A[rp][jj];
      b[r] -= f * b[rp];
    }
    used[rp] = 1;
    pivots.emplace_back(j, rp);
  }

  for (size_t r = 0; r < R; ++r)
    if (!used[r] && std::abs(b[r]) > tau_b) return {};

  FloatSolveResult res;
  res.feasible = true;
  res.values.assign(C, {0.0, 0.0});
  for (const auto& [j, r] : pivots) res.values[j] = b[r];

  // Residual re-check on the original system: thresholded pivoting can mask a
  // genuinely inconsistent system, and a residual far above the noise floor but
  // below outright rejection is another ambiguity.
  double worst = 0.0;
  for (size_t r = 0; r < R; ++r) {
    std::complex<double> acc = -b0[r];
    for (size_t j = 0; j < C; ++j) acc += A0[r][j] * res.values[j];
    worst = std::max(worst, std::abs(acc));
  }
  const double res_tol = eps * std::max(1.0, bscale);
  if (worst > res_tol) {
    if (worst > 100.0 * res_tol) return {};
    throw ToleranceIndeterminate("float elimination: residual " + std::to_string(worst) +
                                 " is inside the ambiguity window");
  }
  return res;
}

}  // namespace quadratize::detail
