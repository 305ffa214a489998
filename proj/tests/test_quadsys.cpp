#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "quadratize/quadsys.hpp"

using namespace quadratize;

namespace {

UniPoly xpow(int d, long c = 1, Mode m = Mode::Exact) {
  return UniPoly::monomial(d, m == Mode::Exact ? Scalar(c) : Scalar::flt(static_cast<double>(c)));
}

UniPoly poly_from(std::initializer_list<long> coeffs_low_first) {
  std::vector<Scalar> cs;
  for (long v : coeffs_low_first) cs.emplace_back(v);
  return UniPoly(Mode::Exact, std::move(cs));
}

QuadExpr expr_from(Mode m, std::initializer_list<std::tuple<int, int, long>> terms) {
  QuadExpr e(m);
  for (const auto& [i, j, c] : terms)
    e.add(i, j, m == Mode::Exact ? Scalar(c) : Scalar::flt(static_cast<double>(c)));
  return e;
}

UniPoly random_poly(std::mt19937& rng, int deg) {
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 5);
  std::vector<Scalar> cs;
  for (int i = 0; i < deg; ++i) cs.emplace_back(num(rng), den(rng));
  long lead = num(rng);
  if (lead == 0) lead = 7;
  cs.emplace_back(lead);
  return UniPoly(Mode::Exact, std::move(cs));
}

// Independent feasibility oracle: plug the returned solution back into the
// original system and check each row exactly.
bool satisfies_exact(const std::vector<std::vector<mpq_class>>& A, const std::vector<mpq_class>& b,
                     const std::vector<mpq_class>& v) {
  for (size_t r = 0; r < A.size(); ++r) {
    mpq_class acc = -b[r];
    for (size_t c = 0; c < A[r].size(); ++c) acc += A[r][c] * v[c];
    if (sgn(acc) != 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("canonical pair order puts plain-x columns first and z products last") {
  const auto p = canonical_pairs(2);
  const std::vector<std::pair<int, int>> expect = {{0, 0}, {0, 1}, {1, 1}, {0, 2}, {0, 3},
                                                   {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}};
  REQUIRE(p == expect);
  REQUIRE(canonical_pairs(0).size() == 3);
  REQUIRE(canonical_pairs(5).size() == 7u * 8u / 2u);
}

TEST_CASE("exact elimination solves and prefers earlier columns") {
  using detail::solve_canonical_exact;
  // one equation, two usable columns: the first becomes the pivot
  auto r = solve_canonical_exact({{mpq_class(1), mpq_class(1)}}, {mpq_class(1)});
  REQUIRE(r.feasible);
  REQUIRE(r.values[0] == 1);
  REQUIRE(r.values[1] == 0);

  auto bad = solve_canonical_exact({{mpq_class(1), mpq_class(1)}, {mpq_class(1), mpq_class(1)}},
                                   {mpq_class(1), mpq_class(2)});
  REQUIRE_FALSE(bad.feasible);

  auto wide = solve_canonical_exact({{mpq_class(0), mpq_class(2), mpq_class(3)},
                                     {mpq_class(0), mpq_class(0), mpq_class(5)}},
                                    {mpq_class(7), mpq_class(10)});
  REQUIRE(wide.feasible);
  REQUIRE(wide.values[0] == 0);
  REQUIRE(wide.values[1] == mpq_class(1, 2));
  REQUIRE(wide.values[2] == 2);
}

TEST_CASE("exact elimination agrees with substitution oracle on random systems") {
  std::mt19937 rng(20240205);
  std::uniform_int_distribution<int> dim(1, 7);
  std::uniform_int_distribution<long> val(-4, 4);
  std::uniform_int_distribution<long> den(1, 3);
  int feasible_seen = 0, infeasible_seen = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const size_t R = static_cast<size_t>(dim(rng)), C = static_cast<size_t>(dim(rng));
    std::vector<std::vector<mpq_class>> A(R, std::vector<mpq_class>(C));
    for (auto& row : A)
      for (auto& e : row) e = mpq_class(val(rng), den(rng));
    std::vector<mpq_class> b(R);
    if (trial % 2 == 0) {
      // consistent by construction: b = A * (random vector)
      std::vector<mpq_class> w(C);
      for (auto& e : w) e = mpq_class(val(rng), den(rng));
      for (size_t r = 0; r < R; ++r)
        for (size_t c = 0; c < C; ++c) b[r] += A[r][c] * w[c];
    } else {
      for (auto& e : b) e = mpq_class(val(rng), den(rng));
    }
    auto res = detail::solve_canonical_exact(A, b);
    if (trial % 2 == 0) REQUIRE(res.feasible);
    if (res.feasible) {
      REQUIRE(satisfies_exact(A, b, res.values));
      ++feasible_seen;
    } else {
      ++infeasible_seen;
    }
  }
  REQUIRE(feasible_seen >= 100);
  REQUIRE(infeasible_seen >= 20);
}

TEST_CASE("float elimination solves well-scaled systems and flags ambiguous pivots") {
  using detail::solve_canonical_float;
  using C = std::complex<double>;
  auto r = solve_canonical_float({{C(2), C(0)}, {C(0), C(4)}}, {C(6), C(2)}, 1e-9);
  REQUIRE(r.feasible);
  REQUIRE(std::abs(r.values[0] - C(3)) < 1e-12);
  REQUIRE(std::abs(r.values[1] - C(0.5)) < 1e-12);

  auto bad = solve_canonical_float({{C(1), C(1)}, {C(1), C(1)}}, {C(1), C(2)}, 1e-9);
  REQUIRE_FALSE(bad.feasible);

  // best available pivot sits inside the ambiguity window around tau = eps*max|A|
  REQUIRE_THROWS_AS(solve_canonical_float({{C(1), C(0)}, {C(0), C(1.5e-9)}}, {C(1), C(1)}, 1e-9),
                    ToleranceIndeterminate);
}

TEST_CASE("power sum with fourth and third powers reproduces the known system") {
  const UniPoly p = poly_from({1, 1, 1, 1, 1, 1});  // x^5 + ... + 1
  const NewVarSet vars(Mode::Exact, {xpow(4), xpow(3)});
  auto q = verify_quadratization(p, vars);
  REQUIRE(q.has_value());
  REQUIRE(q->order() == 2);

  const QuadExpr want_x = expr_from(
      Mode::Exact, {{1, 2, 1}, {1, 1, 1}, {0, 3, 1}, {0, 2, 1}, {0, 1, 1}, {0, 0, 1}});
  const QuadExpr want_z1 = expr_from(
      Mode::Exact, {{2, 2, 4}, {2, 3, 4}, {3, 3, 4}, {1, 2, 4}, {0, 2, 4}, {0, 3, 4}});
  const QuadExpr want_z2 = expr_from(
      Mode::Exact, {{2, 3, 3}, {3, 3, 3}, {1, 2, 3}, {0, 2, 3}, {0, 3, 3}, {1, 1, 3}});
  CHECK(q->rhs()[0] == want_x);
  CHECK(q->rhs()[1] == want_z1);
  CHECK(q->rhs()[2] == want_z2);

  CHECK(q->rhs()[0].str() == "z1*x + x^2 + z2 + z1 + x + 1");
  CHECK(q->rhs()[1].str() == "4z2^2 + 4z2*z1 + 4z1^2 + 4z1*x + 4z2 + 4z1");
  CHECK(q->rhs()[2].str() == "3z2^2 + 3z2*z1 + 3z1*x + 3x^2 + 3z2 + 3z1");
}

TEST_CASE("pure power systems come out in closed form") {
  SECTION("x^10 with z = x^9") {
    auto q = verify_quadratization(xpow(10), NewVarSet(Mode::Exact, {xpow(9)}));
    REQUIRE(q.has_value());
    CHECK(q->rhs()[0] == expr_from(Mode::Exact, {{1, 2, 1}}));
    CHECK(q->rhs()[1] == expr_from(Mode::Exact, {{2, 2, 9}}));
    CHECK(q->rhs()[1].str() == "9z1^2");
  }
  SECTION("x^6 with z1 = x^5, z2 = x^3") {
    auto q = verify_quadratization(xpow(6), NewVarSet(Mode::Exact, {xpow(5), xpow(3)}));
    REQUIRE(q.has_value());
    CHECK(q->rhs()[0] == expr_from(Mode::Exact, {{1, 2, 1}}));
    CHECK(q->rhs()[1] == expr_from(Mode::Exact, {{2, 2, 5}}));
    CHECK(q->rhs()[2] == expr_from(Mode::Exact, {{2, 3, 3}}));
  }
}

TEST_CASE("verification is refused when some derivative leaves the span") {
  const UniPoly p = poly_from({1, 1, 1, 1, 1, 0, 1});  // x^6 + x^4 + x^3 + x^2 + x + 1
  // z1' * p has degree 9 but products of {1, x, x^4, x^3} stop at degree 8
  auto q = verify_quadratization(p, NewVarSet(Mode::Exact, {xpow(4), xpow(3)}));
  REQUIRE_FALSE(q.has_value());
}

TEST_CASE("expanding each right-hand side recovers the matching derivative") {
  std::mt19937 rng(77123);
  std::uniform_int_distribution<int> degd(3, 8);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = degd(rng);
    const UniPoly p = random_poly(rng, n);
    std::vector<UniPoly> zs;
    for (int k = 2; k <= n - 1; ++k) zs.push_back(xpow(k));
    const NewVarSet vars(Mode::Exact, zs);
    auto q = verify_quadratization(p, vars);
    REQUIRE(q.has_value());
    REQUIRE(expand_quad_expr(q->rhs()[0], vars) == p);
    for (size_t i = 0; i < vars.size(); ++i)
      REQUIRE(expand_quad_expr(q->rhs()[i + 1], vars) == vars[i].derivative() * p);
  }
}

TEST_CASE("scaling the right-hand side scales every expression") {
  std::mt19937 rng(901);
  const UniPoly p = random_poly(rng, 6);
  const NewVarSet vars(Mode::Exact, {xpow(2), xpow(3), xpow(4), xpow(5)});
  const Scalar c(-7, 3);
  auto q = verify_quadratization(p, vars);
  auto qc = verify_quadratization(p * c, vars);
  REQUIRE(q.has_value());
  REQUIRE(qc.has_value());
  for (size_t i = 0; i < q->rhs().size(); ++i) REQUIRE(qc->rhs()[i] == q->rhs()[i].scaled(c));
}

TEST_CASE("float verification tracks the exact one on the same input") {
  const UniPoly p = poly_from({1, 1, 1, 1, 1, 1});
  const NewVarSet vars(Mode::Exact, {xpow(4), xpow(3)});
  auto qe = verify_quadratization(p, vars);
  auto qf = verify_quadratization(p.to_float(), vars.to_float());
  REQUIRE(qe.has_value());
  REQUIRE(qf.has_value());
  for (size_t i = 0; i < qe->rhs().size(); ++i) {
    const auto& fe = qf->rhs()[i];
    for (const auto& [k, v] : qe->rhs()[i].terms())
      REQUIRE(fe.coeff(k.first, k.second).equals(v.to_float(), 1e-9));
  }
}

TEST_CASE("near-threshold float data raises the indeterminate error") {
  const UniPoly z = UniPoly::monomial(2, Scalar::flt(1.5e-9));
  const NewVarSet vars(Mode::Float, {z});
  const UniPoly target = xpow(3, 1, Mode::Float);
  REQUIRE_THROWS_AS(solve_quadratic_representation(target, vars, 1e-9), ToleranceIndeterminate);
}

TEST_CASE("mode mixing is rejected") {
  const UniPoly p = poly_from({0, 0, 0, 1});
  REQUIRE_THROWS_AS(verify_quadratization(p.to_float(), NewVarSet(Mode::Exact, {xpow(2)})),
                    ModeMismatchError);
  REQUIRE_THROWS_AS(verify_quadratization(UniPoly::zero(), NewVarSet(Mode::Exact, {xpow(2)})),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(NewVarSet(Mode::Exact, {UniPoly::zero()}), std::invalid_argument);
}

TEST_CASE("variable reduction drops affine parts and inter-reduces") {
  auto degs = [](const NewVarSet& s) {
    std::vector<int> d;
    for (const auto& p : s.polys()) d.push_back(p.degree_or(-1));
    return d;
  };

  SECTION("shared tail monomial is cancelled") {
    const NewVarSet in(Mode::Exact, {poly_from({0, 0, 0, 1, 0, 1}), xpow(3)});  // x^5+x^3, x^3
    const auto out = reduce_new_vars(in);
    REQUIRE(out.size() == 2);
    CHECK(out[0] == xpow(5));
    CHECK(out[1] == xpow(3));
  }
  SECTION("duplicates collapse") {
    const NewVarSet in(Mode::Exact, {poly_from({1, 1, 1}), xpow(2)});  // x^2+x+1, x^2
    const auto out = reduce_new_vars(in);
    REQUIRE(out.size() == 1);
    CHECK(out[0] == xpow(2));
  }
  SECTION("affine-only entries vanish") {
    const NewVarSet in(Mode::Exact, {poly_from({5, -2})});
    CHECK(reduce_new_vars(in).empty());
  }
  SECTION("input order is kept") {
    const NewVarSet in(Mode::Exact, {xpow(3), xpow(4)});
    CHECK(degs(reduce_new_vars(in)) == std::vector<int>{3, 4});
  }
  SECTION("cross-support cancellation can cascade") {
    // x^3 + 2x^2 and x^2 - 5x: the second's affine tail goes, then the first
    // loses its x^2 term
    const NewVarSet in(Mode::Exact, {poly_from({0, 0, 2, 1}), poly_from({0, -5, 1})});
    const auto out = reduce_new_vars(in);
    REQUIRE(out.size() == 2);
    CHECK(out[0] == xpow(3));
    CHECK(out[1] == xpow(2));
  }
}

TEST_CASE("variable reduction is idempotent and leaves distinct leading degrees") {
  std::mt19937 rng(5150);
  std::uniform_int_distribution<int> cnt(1, 5), degd(0, 7);
  std::uniform_int_distribution<long> val(-6, 6);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<UniPoly> zs;
    const int k = cnt(rng);
    for (int i = 0; i < k; ++i) {
      const int d = degd(rng);
      std::vector<Scalar> cs(static_cast<size_t>(d) + 1, Scalar(0L));
      for (auto& c : cs) c = Scalar(val(rng));
      long lead = val(rng);
      if (lead == 0) lead = 3;
      cs.back() = Scalar(lead);
      UniPoly p(Mode::Exact, std::move(cs));
      if (!p.is_zero()) zs.push_back(p);
    }
    if (zs.empty()) continue;
    const auto once = reduce_new_vars(NewVarSet(Mode::Exact, zs));
    const auto twice = reduce_new_vars(once);
    REQUIRE(once.size() == twice.size());
    for (size_t i = 0; i < once.size(); ++i) REQUIRE(once[i] == twice[i]);
    std::vector<int> lead;
    for (const auto& p : once.polys()) {
      REQUIRE(p.degree_or(-1) >= 2);
      lead.push_back(p.degree_or(-1));
      // support avoids every other leading degree
    }
    std::sort(lead.begin(), lead.end());
    REQUIRE(std::adjacent_find(lead.begin(), lead.end()) == lead.end());
    for (size_t i = 0; i < once.size(); ++i)
      for (size_t j = 0; j < once.size(); ++j)
        if (i != j) REQUIRE(once[i].coeff(once[j].degree_or(-1)).is_zero(0.0));
  }
}

TEST_CASE("quadratization containers validate their shape") {
  const UniPoly p = poly_from({0, 0, 0, 1});
  const NewVarSet vars(Mode::Exact, {xpow(2)});
  REQUIRE_THROWS_AS(Quadratization(p, vars, {QuadExpr(Mode::Exact)}), std::invalid_argument);
  auto q = verify_quadratization(p, vars);
  REQUIRE(q.has_value());
  const auto qf = q->to_float();
  REQUIRE(qf.mode() == Mode::Float);
  REQUIRE(qf.order() == q->order());
  REQUIRE(qf.rhs()[0].coeff(1, 2).equals(Scalar::flt(1.0)));
}

TEST_CASE("expression rendering covers signs, fractions, and floats") {
  QuadExpr e(Mode::Exact);
  e.add(0, 1, Scalar(-3, 2));
  e.add(0, 0, Scalar(1));
  CHECK(e.str() == "-3/2x + 1");

  QuadExpr f(Mode::Float);
  f.add(2, 2, Scalar::flt(0.5));
  f.add(1, 2, Scalar::flt(-1.0));
  CHECK(f.str() == "0.5z1^2 - z1*x");

  CHECK(QuadExpr(Mode::Exact).str() == "0");

  QuadExpr g(Mode::Exact);
  g.add(2, 3, Scalar(1));
  g.add(3, 3, Scalar(-1));
  CHECK(g.str() == "-z2^2 + z2*z1");
}
