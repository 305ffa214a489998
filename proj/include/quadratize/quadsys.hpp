#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "quadratize/linsolve.hpp"
#include "quadratize/unipoly.hpp"

namespace quadratize {

// Generators of the quadratic system: index 0 is the constant 1, index 1 is x,
// index k >= 2 is the new variable z_{k-1}. A QuadExpr is a linear combination
// of pairwise products of generators, i.e. a right-hand side of degree <= 2.

inline std::string gen_name(int g) {
  if (g == 0) return "1";
  if (g == 1) return "x";
  return "z" + std::to_string(g - 1);
}

// The canonical column order used everywhere a representative solution is
// picked: 1, x, x^2, then z_k, then x*z_k, then z_j*z_k. Earlier columns are
// preferred as pivots and free columns are fixed to zero, so the solver output
// is reproducible.
inline std::vector<std::pair<int, int>> canonical_pairs(int m) {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<size_t>((m + 2) * (m + 3) / 2));
  out.emplace_back(0, 0);
  out.emplace_back(0, 1);
  out.emplace_back(1, 1);
  for (int k = 2; k <= m + 1; ++k) out.emplace_back(0, k);
  for (int k = 2; k <= m + 1; ++k) out.emplace_back(1, k);
  for (int j = 2; j <= m + 1; ++j)
    for (int k = j; k <= m + 1; ++k) out.emplace_back(j, k);
  return out;
}

class QuadExpr {
 public:
  explicit QuadExpr(Mode mode = Mode::Exact) : mode_(mode) {}

  Mode mode() const { return mode_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<std::pair<int, int>, Scalar>& terms() const { return terms_; }

  void add(int i, int j, const Scalar& c) {
    if (c.mode() != mode_) throw ModeMismatchError("QuadExpr term mode mismatch");
    if (i > j) std::swap(i, j);
    if (i < 0) throw std::invalid_argument("QuadExpr: negative generator index");
    auto it = terms_.find({i, j});
    if (it == terms_.end()) {
      if (!c.is_zero(0.0)) terms_.emplace(std::make_pair(i, j), c);
    } else {
      it->second += c;
      if (it->second.is_zero(0.0)) terms_.erase(it);
    }
  }

  Scalar coeff(int i, int j) const {
    if (i > j) std::swap(i, j);
    auto it = terms_.find({i, j});
    return it == terms_.end() ? Scalar::zero(mode_) : it->second;
  }

  QuadExpr scaled(const Scalar& f) const {
    QuadExpr r(mode_);
    for (const auto& [k, v] : terms_) r.add(k.first, k.second, v * f);
    return r;
  }

  // Largest generator index actually mentioned; 1 if the expression only uses
  // constants and x.
  int max_generator() const {
    int g = 1;
    for (const auto& [k, v] : terms_) g = std::max(g, k.second);
    return g;
  }

  bool equals(const QuadExpr& o, double eps = kDefaultTolerance) const {
    if (mode_ != o.mode_) return false;
    for (const auto& [k, v] : terms_)
      if (!v.equals(o.coeff(k.first, k.second), eps)) return false;
    for (const auto& [k, v] : o.terms_)
      if (!v.equals(coeff(k.first, k.second), eps)) return false;
    return true;
  }
  friend bool operator==(const QuadExpr& a, const QuadExpr& b) { return a.equals(b); }
  friend bool operator!=(const QuadExpr& a, const QuadExpr& b) { return !a.equals(b); }

  QuadExpr to_float() const {
    QuadExpr r(Mode::Float);
    for (const auto& [k, v] : terms_) r.add(k.first, k.second, v.to_float());
    return r;
  }

  // Terms with two non-constant factors first, then linear terms, then the
  // constant; within a group, higher generator indices first.
  std::string str() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<int, int>> keys;
    keys.reserve(terms_.size());
    for (const auto& [k, v] : terms_) keys.push_back(k);
    auto rank = [](const std::pair<int, int>& k) {
      const int nonconst = (k.first >= 1 ? 1 : 0) + (k.second >= 1 ? 1 : 0);
      return std::tuple<int, int, int>(nonconst, k.second, k.first);
    };
    std::sort(keys.begin(), keys.end(),
              [&](const auto& a, const auto& b) { return rank(a) > rank(b); });

    std::string out;
    bool first = true;
    for (const auto& k : keys) {
      std::string cs = terms_.at(k).str();
      bool neg = false;
      if (!cs.empty() && cs[0] == '-') {
        neg = true;
        cs.erase(cs.begin());
      }
      std::string name;
      if (k.second >= 1) {
        if (k.first == 0)
          name = gen_name(k.second);
        else if (k.first == k.second)
          name = gen_name(k.second) + "^2";
        else
          name = gen_name(k.second) + "*" + gen_name(k.first);
      }
      std::string body = name.empty() ? cs : (cs == "1" ? name : cs + name);
      if (first) {
        out += (neg ? "-" : "") + body;
        first = false;
      } else {
        out += (neg ? " - " : " + ") + body;
      }
    }
    return out;
  }

 private:
  Mode mode_;
  std::map<std::pair<int, int>, Scalar> terms_;
};

// An ordered list of new variables z_i = z_i(x); each entry is nonzero and all
// share one mode.
class NewVarSet {
 public:
  explicit NewVarSet(Mode mode) : mode_(mode) {}
  NewVarSet(Mode mode, std::vector<UniPoly> polys) : mode_(mode), polys_(std::move(polys)) {
    for (const auto& p : polys_) {
      if (p.mode() != mode_) throw ModeMismatchError("NewVarSet entry mode mismatch");
      if (p.is_zero()) throw std::invalid_argument("NewVarSet: zero polynomial entry");
    }
  }

  Mode mode() const { return mode_; }
  size_t size() const { return polys_.size(); }
  bool empty() const { return polys_.empty(); }
  const std::vector<UniPoly>& polys() const { return polys_; }
  const UniPoly& operator[](size_t i) const { return polys_[i]; }

  NewVarSet to_float() const {
    std::vector<UniPoly> ps;
    ps.reserve(polys_.size());
    for (const auto& p : polys_) ps.push_back(p.to_float());
    return NewVarSet(Mode::Float, std::move(ps));
  }

 private:
  Mode mode_;
  std::vector<UniPoly> polys_;
};

// Substitute the generator definitions into a QuadExpr, giving back the plain
// polynomial in x it represents.
inline UniPoly expand_quad_expr(const QuadExpr& e, const NewVarSet& vars) {
  const Mode mode = e.mode();
  auto gen_poly = [&](int g) -> UniPoly {
    if (g == 0) return UniPoly::constant(Scalar::one(mode));
    if (g == 1) return UniPoly::x(mode);
    return vars[static_cast<size_t>(g - 2)];
  };
  UniPoly acc = UniPoly::zero(mode);
  for (const auto& [k, c] : e.terms()) {
    if (k.second >= 2 && static_cast<size_t>(k.second - 2) >= vars.size())
      throw std::out_of_range("expand_quad_expr: generator index exceeds variable count");
    acc += gen_poly(k.first) * gen_poly(k.second) * c;
  }
  return acc;
}

// Write `target` as a degree-<=2 combination of {1, x, z_1..z_m} if possible.
// The representative returned is the canonical one: free coefficients in the
// solution set are zero.
inline std::optional<QuadExpr> solve_quadratic_representation(const UniPoly& target,
                                                              const NewVarSet& vars,
                                                              double eps = kDefaultTolerance) {
  const Mode mode = target.mode();
  if (vars.mode() != mode) throw ModeMismatchError("solve_quadratic_representation mode mismatch");
  const int m = static_cast<int>(vars.size());
  const auto pairs = canonical_pairs(m);

  auto gen_poly = [&](int g) -> UniPoly {
    if (g == 0) return UniPoly::constant(Scalar::one(mode));
    if (g == 1) return UniPoly::x(mode);
    return vars[static_cast<size_t>(g - 2)];
  };
  std::vector<UniPoly> products;
  products.reserve(pairs.size());
  int rows = target.degree_or(-1) + 1;
  for (const auto& [i, j] : pairs) {
    products.push_back(gen_poly(i) * gen_poly(j));
    rows = std::max(rows, products.back().degree_or(-1) + 1);
  }
  rows = std::max(rows, 1);

  QuadExpr result(mode);
  if (mode == Mode::Exact) {
    std::vector<std::vector<mpq_class>> A(static_cast<size_t>(rows),
                                          std::vector<mpq_class>(pairs.size()));
    std::vector<mpq_class> b(static_cast<size_t>(rows));
    for (size_t c = 0; c < pairs.size(); ++c)
      for (int r = 0; r < rows; ++r) A[static_cast<size_t>(r)][c] = products[c].coeff(r).rational();
    for (int r = 0; r < rows; ++r) b[static_cast<size_t>(r)] = target.coeff(r).rational();
    auto sol = detail::solve_canonical_exact(std::move(A), std::move(b));
    if (!sol.feasible) return std::nullopt;
    for (size_t c = 0; c < pairs.size(); ++c)
      if (sgn(sol.values[c]) != 0) result.add(pairs[c].first, pairs[c].second, Scalar(sol.values[c]));
  } else {
    std::vector<std::vector<std::complex<double>>> A(
        static_cast<size_t>(rows), std::vector<std::complex<double>>(pairs.size()));
    std::vector<std::complex<double>> b(static_cast<size_t>(rows));
    for (size_t c = 0; c < pairs.size(); ++c)
      for (int r = 0; r < rows; ++r) A[static_cast<size_t>(r)][c] = products[c].coeff(r).cplx();
    for (int r = 0; r < rows; ++r) b[static_cast<size_t>(r)] = target.coeff(r).cplx();
    auto sol = detail::solve_canonical_float(std::move(A), std::move(b), eps);
    if (!sol.feasible) return std::nullopt;
    for (size_t c = 0; c < pairs.size(); ++c)
      if (sol.values[c] != std::complex<double>(0.0, 0.0))
        result.add(pairs[c].first, pairs[c].second, Scalar(sol.values[c]));
  }
  return result;
}

// A verified quadratization of x' = p(x): new variables plus one QuadExpr for
// the derivative of each state (x first, then each z_i).
class Quadratization {
 public:
  Quadratization(UniPoly p, NewVarSet vars, std::vector<QuadExpr> rhs)
      : p_(std::move(p)), vars_(std::move(vars)), rhs_(std::move(rhs)) {
    if (rhs_.size() != vars_.size() + 1)
      throw std::invalid_argument("Quadratization: need one rhs per state");
    if (p_.mode() != vars_.mode()) throw ModeMismatchError("Quadratization mode mismatch");
    for (const auto& e : rhs_)
      if (e.mode() != p_.mode()) throw ModeMismatchError("Quadratization rhs mode mismatch");
  }

  Mode mode() const { return p_.mode(); }
  size_t order() const { return vars_.size(); }
  const UniPoly& poly() const { return p_; }
  const NewVarSet& vars() const { return vars_; }
  const std::vector<QuadExpr>& rhs() const { return rhs_; }

  Quadratization to_float() const {
    std::vector<QuadExpr> rs;
    rs.reserve(rhs_.size());
    for (const auto& e : rhs_) rs.push_back(e.to_float());
    return Quadratization(p_.to_float(), vars_.to_float(), std::move(rs));
  }

 private:
  UniPoly p_;
  NewVarSet vars_;
  std::vector<QuadExpr> rhs_;
};

// Check whether {z_i} quadratizes x' = p: p itself and every z_i'(x)*p must be
// expressible over the generator products. Returns the full system when they
// are.
inline std::optional<Quadratization> verify_quadratization(const UniPoly& p, const NewVarSet& vars,
                                                           double eps = kDefaultTolerance) {
  if (p.is_zero()) throw std::invalid_argument("verify_quadratization: zero right-hand side");
  if (p.mode() != vars.mode()) throw ModeMismatchError("verify_quadratization mode mismatch");
  std::vector<QuadExpr> rhs;
  rhs.reserve(vars.size() + 1);
  auto h1 = solve_quadratic_representation(p, vars, eps);
  if (!h1) return std::nullopt;
  rhs.push_back(std::move(*h1));
  for (size_t i = 0; i < vars.size(); ++i) {
    auto hi = solve_quadratic_representation(vars[i].derivative() * p, vars, eps);
    if (!hi) return std::nullopt;
    rhs.push_back(std::move(*hi));
  }
  return Quadratization(p, vars, std::move(rhs));
}

// Normal form of a variable set: affine parts dropped (1 and x are already
// generators), zero entries removed, then full inter-reduction so that leading
// degrees are distinct and no entry's support touches another entry's leading
// degree. First-seen order is kept.
inline NewVarSet reduce_new_vars(const NewVarSet& in, double eps = kDefaultTolerance) {
  const Mode mode = in.mode();
  auto negligible = [&](const Scalar& c, double scale) {
    return mode == Mode::Exact ? c.is_zero(0.0) : c.abs() <= eps * std::max(1.0, scale);
  };
  auto cleaned = [&](UniPoly q) -> std::optional<UniPoly> {
    q.set_coeff(0, Scalar::zero(mode));
    q.set_coeff(1, Scalar::zero(mode));
    if (mode == Mode::Float && !q.is_zero()) {
      const double scale = q.norm_inf();
      for (int i = q.degree_or(-1); i >= 0; --i)
        if (negligible(q.coeff(i), scale)) q.set_coeff(i, Scalar::zero(mode));
    }
    if (q.is_zero()) return std::nullopt;
    return q;
  };

  std::vector<UniPoly> ps;
  for (const auto& v : in.polys())
    if (auto q = cleaned(v)) ps.push_back(std::move(*q));

  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < ps.size() && !changed; ++i)
      for (size_t j = i + 1; j < ps.size() && !changed; ++j)
        if (ps[i].degree() == ps[j].degree()) {
          const int d = *ps[i].degree();
          UniPoly r = ps[j] - ps[i] * (ps[j].coeff(d) / ps[i].coeff(d));
          if (auto q = cleaned(std::move(r)))
            ps[j] = std::move(*q);
          else
            ps.erase(ps.begin() + static_cast<long>(j));
          changed = true;
        }
    if (changed) continue;
    for (size_t i = 0; i < ps.size() && !changed; ++i)
      for (size_t j = 0; j < ps.size() && !changed; ++j) {
        if (i == j) continue;
        const int dj = *ps[j].degree();
        const Scalar c = ps[i].coeff(dj);
        if (negligible(c, ps[i].norm_inf())) continue;
        UniPoly r = ps[i] - ps[j] * (c / ps[j].coeff(dj));
        if (auto q = cleaned(std::move(r)))
          ps[i] = std::move(*q);
        else
          ps.erase(ps.begin() + static_cast<long>(i));
        changed = true;
      }
  }
  return NewVarSet(mode, std::move(ps));
}

}  // namespace quadratize
