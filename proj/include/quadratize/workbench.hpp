#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "quadratize/groebner.hpp"

namespace quadratize {

struct SymbolicMatrix {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::vector<MultiPoly>> entries;  // [row][col]
};

struct SingleVarMatrices {
  Ring ring;
  SymbolicMatrix xdot;
  SymbolicMatrix zdot;
};

namespace detail {

// univariate in x with MultiPoly coefficients, low power first
using XPoly = std::vector<MultiPoly>;

inline XPoly xp_mul(const XPoly& a, const XPoly& b, const Ring& ring) {
  XPoly r(a.size() + b.size() - 1, MultiPoly(ring));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  return r;
}

inline XPoly xp_derivative(const XPoly& a, const Ring& ring) {
  if (a.size() <= 1) return {MultiPoly(ring)};
  XPoly r(a.size() - 1, MultiPoly(ring));
  for (size_t k = 1; k < a.size(); ++k) r[k - 1] = mpq_class(static_cast<long>(k)) * a[k];
  return r;
}

inline std::string power_label(int k) {
  if (k == 0) return "1";
  if (k == 1) return "x";
  return "x^" + std::to_string(k);
}

}  // namespace detail

// Determinant by cofactor expansion along the column with the fewest nonzero
// entries; the unit columns in the workbench matrices collapse the recursion.
inline MultiPoly sym_det(const std::vector<std::vector<MultiPoly>>& grid,
                         const std::vector<int>& rows, const std::vector<int>& cols) {
  if (rows.size() != cols.size()) throw std::invalid_argument("sym_det: non-square selection");
  const Ring& ring = grid.at(0).at(0).ring();
  if (rows.empty()) return MultiPoly::constant(ring, 1);
  size_t best_c = 0, best_nz = rows.size() + 1;
  for (size_t c = 0; c < cols.size(); ++c) {
    size_t nz = 0;
    for (int r : rows)
      if (!grid[static_cast<size_t>(r)][static_cast<size_t>(cols[c])].is_zero()) ++nz;
    if (nz < best_nz) {
      best_nz = nz;
      best_c = c;
    }
  }
  MultiPoly acc(ring);
  if (best_nz == 0) return acc;
  std::vector<int> sub_cols;
  for (size_t c = 0; c < cols.size(); ++c)
    if (c != best_c) sub_cols.push_back(cols[c]);
  for (size_t ri = 0; ri < rows.size(); ++ri) {
    const MultiPoly& e = grid[static_cast<size_t>(rows[ri])][static_cast<size_t>(cols[best_c])];
    if (e.is_zero()) continue;
    std::vector<int> sub_rows;
    for (size_t r = 0; r < rows.size(); ++r)
      if (r != ri) sub_rows.push_back(rows[r]);
    const MultiPoly minor = sym_det(grid, sub_rows, sub_cols);
    const bool negative = (ri + best_c) % 2 == 1;
    acc = acc + (negative ? -e : e) * minor;
  }
  return acc;
}

inline MultiPoly sym_det(const std::vector<std::vector<MultiPoly>>& grid) {
  std::vector<int> rows(grid.size()), cols(grid.size());
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  return sym_det(grid, rows, cols);
}

// All determinants of (#cols)x(#cols) row selections.
inline std::vector<MultiPoly> sym_maximal_minors(const std::vector<std::vector<MultiPoly>>& grid) {
  const int nr = static_cast<int>(grid.size());
  const int nc = static_cast<int>(grid.at(0).size());
  if (nr < nc) throw std::invalid_argument("sym_maximal_minors: fewer rows than columns");
  std::vector<int> cols(static_cast<size_t>(nc));
  std::iota(cols.begin(), cols.end(), 0);
  std::vector<MultiPoly> out;
  std::vector<int> rows(static_cast<size_t>(nc));
  std::iota(rows.begin(), rows.end(), 0);
  while (true) {
    out.push_back(sym_det(grid, rows, cols));
    int i = nc - 1;
    while (i >= 0 && rows[static_cast<size_t>(i)] == nr - nc + i) --i;
    if (i < 0) break;
    ++rows[static_cast<size_t>(i)];
    for (int j = i + 1; j < nc; ++j)
      rows[static_cast<size_t>(j)] = rows[static_cast<size_t>(j - 1)] + 1;
  }
  return out;
}

// The coefficient-extraction matrices for quadratizing a monic degree-n
// right-hand side with one new variable z = x^(n-1) + q_{n-2}x^(n-2) + ... +
// q_2 x^2: columns expand {1, x, x^2, z, xz} (and z^2 for the z' * p matrix)
// in the x-power basis, with the target appended. The subleading coefficient
// p_{n-1} stays in the ring so the grids match their published form; the
// feasibility pipeline below zeroes it.
inline SingleVarMatrices build_single_var_matrices(int n, bool allow_large = false) {
  if (n < 5) throw std::invalid_argument("build_single_var_matrices: need n >= 5");
  if (n > 8 && !allow_large)
    throw std::invalid_argument(
        "build_single_var_matrices: n > 8 multiplies minors combinatorially; pass allow_large");

  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  for (int j = 2; j <= n - 2; ++j) names.push_back("q" + std::to_string(j));
  const Ring ring = make_ring(std::move(names));
  const auto var = [&ring](int idx) { return MultiPoly::variable(ring, idx); };
  const auto one = MultiPoly::constant(ring, 1);
  const auto zero = MultiPoly(ring);

  detail::XPoly P(static_cast<size_t>(n) + 1, zero);
  for (int i = 0; i < n; ++i) P[static_cast<size_t>(i)] = var(i);
  P[static_cast<size_t>(n)] = one;

  detail::XPoly Z(static_cast<size_t>(n), zero);
  for (int j = 2; j <= n - 2; ++j) Z[static_cast<size_t>(j)] = var(n + j - 2);
  Z[static_cast<size_t>(n - 1)] = one;

  detail::XPoly X = {zero, one};
  const detail::XPoly XZ = detail::xp_mul(X, Z, ring);
  const detail::XPoly ZZ = detail::xp_mul(Z, Z, ring);
  const detail::XPoly Zdot = detail::xp_mul(detail::xp_derivative(Z, ring), P, ring);

  const auto entry = [&zero](const detail::XPoly& col, int row) {
    return row < static_cast<int>(col.size()) ? col[static_cast<size_t>(row)] : zero;
  };

  const detail::XPoly One = {one};
  const detail::XPoly X2 = {zero, zero, one};

  SingleVarMatrices out{ring, {}, {}};

  out.xdot.col_labels = {"1", "x", "x^2", "z", "xz", "xdot"};
  const std::vector<const detail::XPoly*> s1 = {&One, &X, &X2, &Z, &XZ, &P};
  for (int r = 0; r <= n; ++r) {
    out.xdot.row_labels.push_back(detail::power_label(r));
    std::vector<MultiPoly> row;
    for (const auto* col : s1) row.push_back(entry(*col, r));
    out.xdot.entries.push_back(std::move(row));
  }

  out.zdot.col_labels = {"1", "x", "x^2", "z", "xz", "z^2", "zdot"};
  const std::vector<const detail::XPoly*> s2 = {&One, &X, &X2, &Z, &XZ, &ZZ, &Zdot};
  for (int r = 0; r <= 2 * (n - 1); ++r) {
    out.zdot.row_labels.push_back(detail::power_label(r));
    std::vector<MultiPoly> row;
    for (const auto* col : s2) row.push_back(entry(*col, r));
    out.zdot.entries.push_back(std::move(row));
  }
  return out;
}

inline std::string render_matrix(const SymbolicMatrix& m, const std::string& title) {
  const auto join = [](const auto& items, const auto& tostr) {
    std::string line;
    for (size_t c = 0; c < items.size(); ++c) {
      if (c + 2 == items.size())
        line += tostr(items[c]) + " | ";
      else
        line += tostr(items[c]) + (c + 1 == items.size() ? "" : ", ");
    }
    return line;
  };
  std::string out = title + "\ncolumns: " +
                    join(m.col_labels, [](const std::string& s) { return s; }) + "\n";
  size_t width = 0;
  for (const auto& l : m.row_labels) width = std::max(width, l.size());
  for (size_t r = 0; r < m.entries.size(); ++r) {
    out += "[" + m.row_labels[r] + "]" +
           std::string(width - m.row_labels[r].size() + 1, ' ') +
           join(m.entries[r], [](const MultiPoly& e) { return e.str(); }) + "\n";
  }
  return out;
}

// Existence conditions on the p-coefficients for a single new variable:
// zero the subleading coefficient (the linear shift makes this lossless),
// collect every maximal minor of both matrices, and eliminate the q's.
inline std::vector<MultiPoly> single_var_feasibility_conditions(int n, bool allow_large = false) {
  const SingleVarMatrices M = build_single_var_matrices(n, allow_large);
  std::vector<MultiPoly> gens;
  const auto collect = [&gens, n](const std::vector<std::vector<MultiPoly>>& grid) {
    for (const auto& minor : sym_maximal_minors(grid)) {
      const MultiPoly shifted = minor.at_zero(n - 1);
      if (shifted.is_zero()) continue;
      if (std::find(gens.begin(), gens.end(), shifted) == gens.end()) gens.push_back(shifted);
    }
  };
  collect(M.xdot.entries);
  collect(M.zdot.entries);

  std::vector<int> keep;
  for (int i = 0; i < n; ++i) keep.push_back(i);
  return elimination_ideal(gens, keep);
}

}  // namespace quadratize
