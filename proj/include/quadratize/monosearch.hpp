#pragma once

#include <future>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadratize/quadsys.hpp"

namespace quadratize {

namespace detail {

// Smallest m such that m new variables give at least `count` distinct
// generator products.
inline int count_order_bound(long long count) {
  int m = 0;
  while (static_cast<long long>(m + 2) * (m + 3) / 2 < count) ++m;
  return m;
}

// For purely monomial variable sets, solvability of every linear system in
// the verification is equivalent to degree coverage: each generator product is
// a single monomial, so a target coefficient is matchable iff its degree is a
// pairwise sum of generator degrees. `support` holds the degrees of the
// nonzero coefficients of p; `subset` the candidate new-variable degrees.
inline bool coverage_feasible(const std::vector<int>& support, const std::vector<int>& subset) {
  if (support.empty()) return true;
  std::vector<int> gens = {0, 1};
  gens.insert(gens.end(), subset.begin(), subset.end());
  int need_max = support.back();
  for (int d : subset) need_max = std::max(need_max, d - 1 + support.back());
  std::vector<char> reach(static_cast<size_t>(need_max) + 1, 0);
  for (size_t a = 0; a < gens.size(); ++a)
    for (size_t b = a; b < gens.size(); ++b) {
      const int s = gens[a] + gens[b];
      if (s <= need_max) reach[static_cast<size_t>(s)] = 1;
    }
  auto covered = [&](int shift) {
    for (int s : support)
      if (!reach[static_cast<size_t>(s + shift)]) return false;
    return true;
  };
  if (!covered(0)) return false;
  for (int d : subset)
    if (!covered(d - 1)) return false;
  return true;
}

inline long long subsets_of_size(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > (1LL << 60)) return 1LL << 60;  // counter saturation; never reached in practice
  }
  return r;
}

}  // namespace detail

// Lower bound on the order of any monomial quadratization of a dense
// degree-n right-hand side: the products of {1, x, z_1..z_m} must supply at
// least n+1 distinct degrees.
inline int monomial_lower_bound(int n) {
  if (n < 0) throw std::invalid_argument("monomial_lower_bound: negative degree");
  return detail::count_order_bound(static_cast<long long>(n) + 1);
}

struct SearchOptions {
  int max_degree = -1;  // largest candidate degree D; default 2*(n-1)
  int max_order = 6;    // largest subset size tried; negative: no cap
  double eps = kDefaultTolerance;
  unsigned jobs = 1;   // parallel feasibility checks when > 1
  bool prune = true;   // pruning is a pure speedup; off re-tests everything
};

// Per-size slice of the enumeration certificate.
struct SizeCount {
  int size = 0;
  long long tested = 0;
  long long pruned = 0;
  long long total = 0;
};

struct SearchStats {
  int max_degree = 0;
  long long tested = 0;  // candidates whose feasibility was actually evaluated
  long long pruned = 0;  // candidates dismissed by a validity argument
  long long total = 0;   // tested + pruned
  std::vector<SizeCount> per_size;
};

struct SearchResult {
  std::optional<Quadratization> quad;
  std::vector<int> degrees;
  SearchStats stats;
  std::string label;  // "minimal within bounds" or "none within bounds"
};

// Exhaustive search for a minimal monomial quadratization: subsets of
// {x^2..x^D} are tried by size, lexicographically within one size, and the
// first feasible subset is returned after full machine verification. Pruning
// never skips a feasible candidate:
//  - fewer than count_order_bound(#support) variables cannot supply enough
//    product degrees;
//  - a single variable x^d with d != n-1 fails on the degree of either x' or
//    its own derivative;
//  - with two variables both of degree <= n-1, one of them must be x^(n-1)
//    to reach degree n in x' and stay reachable in the derivatives.
inline SearchResult search_monomial(const UniPoly& p, const SearchOptions& opt = {}) {
  if (p.is_zero()) throw std::invalid_argument("search_monomial: zero right-hand side");
  const Mode mode = p.mode();
  const int n = p.degree_or(0);
  const double scale = std::max(1.0, p.norm_inf());
  std::vector<int> support;
  for (int i = 0; i <= n; ++i) {
    const Scalar c = p.coeff(i);
    const bool nz = mode == Mode::Exact ? !c.is_zero(0.0) : c.abs() > opt.eps * scale;
    if (nz) support.push_back(i);
  }

  const int D = opt.max_degree > 0 ? opt.max_degree : std::max(2, 2 * (n - 1));
  std::vector<int> range;
  for (int d = 2; d <= D; ++d) range.push_back(d);
  const int nrange = static_cast<int>(range.size());

  SearchResult out;
  out.label = "none within bounds";
  out.stats.max_degree = D;
  const int kcap = opt.max_order >= 0 ? std::min(opt.max_order, nrange) : nrange;
  const int kmin = detail::count_order_bound(static_cast<long long>(support.size()));
  auto size_row = [&out](int k) -> SizeCount& {
    while (static_cast<int>(out.stats.per_size.size()) <= k)
      out.stats.per_size.push_back({static_cast<int>(out.stats.per_size.size()), 0, 0, 0});
    return out.stats.per_size[static_cast<size_t>(k)];
  };

  if (opt.prune)
    for (int k = 0; k < std::min(kmin, kcap + 1); ++k) {
      const long long c = detail::subsets_of_size(nrange, k);
      out.stats.pruned += c;
      out.stats.total += c;
      auto& row = size_row(k);
      row.pruned += c;
      row.total += c;
    }

  const unsigned jobs = std::max(1u, opt.jobs);
  for (int k = opt.prune ? kmin : 0; k <= kcap; ++k) {
    std::vector<int> idx(static_cast<size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    bool more = nrange >= k;
    auto advance = [&]() {
      int i = k - 1;
      while (i >= 0 && idx[static_cast<size_t>(i)] == nrange - k + i) --i;
      if (i < 0) return false;
      ++idx[static_cast<size_t>(i)];
      for (int j = i + 1; j < k; ++j)
        idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
      return true;
    };

    while (more) {
      // pull the next block of unpruned candidates, in enumeration order
      std::vector<std::vector<int>> block;
      while (more && block.size() < jobs) {
        std::vector<int> subset;
        subset.reserve(static_cast<size_t>(k));
        for (int i : idx) subset.push_back(range[static_cast<size_t>(i)]);
        more = k == 0 ? false : advance();
        ++out.stats.total;
        ++size_row(k).total;
        bool prune = false;
        if (opt.prune) {
          if (n >= 3 && k == 1 && subset[0] != n - 1) prune = true;
          if (n >= 3 && k == 2 && subset[1] <= n - 1 && subset[0] != n - 1 && subset[1] != n - 1)
            prune = true;
        }
        if (prune) {
          ++out.stats.pruned;
          ++size_row(k).pruned;
          continue;
        }
        ++out.stats.tested;
        ++size_row(k).tested;
        block.push_back(std::move(subset));
      }

      std::vector<char> feasible(block.size(), 0);
      if (jobs > 1 && block.size() > 1) {
        std::vector<std::future<bool>> futs;
        futs.reserve(block.size());
        for (const auto& s : block)
          futs.push_back(std::async(std::launch::async,
                                    [&support, &s] { return detail::coverage_feasible(support, s); }));
        for (size_t i = 0; i < futs.size(); ++i) feasible[i] = futs[i].get() ? 1 : 0;
      } else {
        for (size_t i = 0; i < block.size(); ++i)
          feasible[i] = detail::coverage_feasible(support, block[i]) ? 1 : 0;
      }

      for (size_t i = 0; i < block.size(); ++i) {
        if (!feasible[i]) continue;
        std::vector<UniPoly> zs;
        zs.reserve(block[i].size());
        for (int d : block[i]) zs.push_back(UniPoly::monomial(d, Scalar::one(mode)));
        auto q = verify_quadratization(p, NewVarSet(mode, std::move(zs)), opt.eps);
        if (!q) {
          if (mode == Mode::Exact)
            throw std::logic_error("search_monomial: coverage and solver disagree");
          continue;  // borderline float coefficients; keep looking
        }
        out.quad = std::move(q);
        out.degrees = block[i];
        out.label = "minimal within bounds";
        return out;
      }
    }
  }
  return out;
}

}  // namespace quadratize
