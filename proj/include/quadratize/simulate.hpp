#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "quadratize/quadsys.hpp"

namespace quadratize {

// Side-by-side integration record: the scalar trajectory, the quadratized
// trajectory (x first, then each z_i), and the worst disagreements between
// them. On blow-up the samples stop at the last finite state below the guard
// threshold and blow_up_time marks the step that tripped it.
struct SimReport {
  std::vector<double> t_grid;
  std::vector<std::complex<double>> x_orig;
  std::vector<std::vector<std::complex<double>>> quad_states;
  double max_x_deviation = 0.0;
  double max_invariant_drift = 0.0;
  bool blew_up = false;
  double blow_up_time = 0.0;
};

namespace detail {

constexpr double kBlowUpThreshold = 1e6;

inline bool state_within_bounds(const std::vector<std::complex<double>>& s) {
  for (const auto& v : s) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    if (std::abs(v) > kBlowUpThreshold) return false;
  }
  return true;
}

template <typename Field>
std::vector<std::complex<double>> rk4_step(const Field& f,
                                           const std::vector<std::complex<double>>& s, double h) {
  const size_t n = s.size();
  const auto shifted = [&s, n](const std::vector<std::complex<double>>& k, double w) {
    std::vector<std::complex<double>> r(n);
    for (size_t i = 0; i < n; ++i) r[i] = s[i] + w * k[i];
    return r;
  };
  const auto k1 = f(s);
  const auto k2 = f(shifted(k1, h / 2));
  const auto k3 = f(shifted(k2, h / 2));
  const auto k4 = f(shifted(k3, h));
  std::vector<std::complex<double>> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = s[i] + (h / 6) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

}  // namespace detail

// Fixed-step RK4 on x' = p(x) and on the quadratized system from consistent
// initial conditions z_i(0) = z_i(x0), reported on the shared time grid.
inline SimReport integrate_pair(const UniPoly& p, const Quadratization& quad, double x0, double T,
                                double h) {
  if (!(T > 0) || !(h > 0)) throw std::invalid_argument("integrate_pair: need T > 0 and h > 0");
  const UniPoly pf = p.to_float();
  const Quadratization qf = quad.to_float();
  const size_t m = qf.order();

  struct Term {
    int i, j;
    std::complex<double> c;
  };
  std::vector<std::vector<Term>> tables(m + 1);
  for (size_t k = 0; k <= m; ++k)
    for (const auto& [key, c] : qf.rhs()[k].terms())
      tables[k].push_back({key.first, key.second, c.to_complex()});

  // generator values over a state (x, z_1..z_m): index 0 is the constant 1,
  // index 1 is x, index g >= 2 is z_{g-1} = state[g-1]
  const auto gen = [](const std::vector<std::complex<double>>& s, int g) {
    return g == 0 ? std::complex<double>(1.0) : s[static_cast<size_t>(g - 1)];
  };
  const auto quad_field = [&tables, &gen](const std::vector<std::complex<double>>& s) {
    std::vector<std::complex<double>> out(tables.size(), 0.0);
    for (size_t k = 0; k < tables.size(); ++k)
      for (const Term& t : tables[k]) out[k] += t.c * gen(s, t.i) * gen(s, t.j);
    return out;
  };
  const auto scalar_field = [&pf](const std::vector<std::complex<double>>& s) {
    return std::vector<std::complex<double>>{pf.eval(s[0])};
  };

  std::vector<std::complex<double>> orig = {std::complex<double>(x0)};
  std::vector<std::complex<double>> state(m + 1);
  state[0] = std::complex<double>(x0);
  for (size_t i = 0; i < m; ++i) state[i + 1] = qf.vars()[i].eval(std::complex<double>(x0));

  SimReport rep;
  const auto record = [&](double t) {
    rep.t_grid.push_back(t);
    rep.x_orig.push_back(orig[0]);
    rep.quad_states.push_back(state);
    rep.max_x_deviation = std::max(rep.max_x_deviation, std::abs(state[0] - orig[0]));
    for (size_t i = 0; i < m; ++i)
      rep.max_invariant_drift =
          std::max(rep.max_invariant_drift, std::abs(state[i + 1] - qf.vars()[i].eval(orig[0])));
  };
  record(0.0);

  const long long steps = std::max<long long>(1, std::llround(T / h));
  for (long long k = 1; k <= steps; ++k) {
    orig = detail::rk4_step(scalar_field, orig, h);
    state = detail::rk4_step(quad_field, state, h);
    const double t = static_cast<double>(k) * h;
    if (!detail::state_within_bounds(orig) || !detail::state_within_bounds(state)) {
      rep.blew_up = true;
      rep.blow_up_time = t;
      break;
    }
    record(t);
  }
  return rep;
}

}  // namespace quadratize
