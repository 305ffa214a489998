#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "quadratize/multipoly.hpp"

namespace quadratize {

namespace detail {

inline bool exp_divides(const Exps& a, const Exps& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline Exps exp_lcm(const Exps& a, const Exps& b) {
  Exps r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

inline Exps exp_sub(const Exps& a, const Exps& b) {
  Exps r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline bool exp_disjoint(const Exps& a, const Exps& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > 0 && b[i] > 0) return false;
  return true;
}

inline MultiPoly make_monic(const MultiPoly& f, const MonomialOrder& ord) {
  const auto [e, c] = f.leading_term(ord);
  return mpq_class(1 / c) * f;
}

}  // namespace detail

// Full normal form: every term of the result is irreducible by the basis.
inline MultiPoly reduce(const MultiPoly& f, const std::vector<MultiPoly>& basis,
                        const MonomialOrder& ord) {
  std::vector<std::pair<Exps, mpq_class>> lts;
  std::vector<const MultiPoly*> bs;
  for (const auto& b : basis) {
    if (b.is_zero()) continue;
    lts.push_back(b.leading_term(ord));
    bs.push_back(&b);
  }
  MultiPoly rest(f.ring());
  MultiPoly work = f;
  while (!work.is_zero()) {
    const auto [e, c] = work.leading_term(ord);
    bool reduced = false;
    for (size_t i = 0; i < bs.size(); ++i) {
      if (!detail::exp_divides(lts[i].first, e)) continue;
      work = work - MultiPoly::term(f.ring(), detail::exp_sub(e, lts[i].first),
                                    c / lts[i].second) *
                        *bs[i];
      reduced = true;
      break;
    }
    if (!reduced) {
      rest.add_term(e, c);
      work.add_term(e, -c);
    }
  }
  return rest;
}

inline MultiPoly spoly(const MultiPoly& f, const MultiPoly& g, const MonomialOrder& ord) {
  const auto [ef, cf] = f.leading_term(ord);
  const auto [eg, cg] = g.leading_term(ord);
  const Exps L = detail::exp_lcm(ef, eg);
  return MultiPoly::term(f.ring(), detail::exp_sub(L, ef), mpq_class(1 / cf)) * f -
         MultiPoly::term(g.ring(), detail::exp_sub(L, eg), mpq_class(1 / cg)) * g;
}

// Buchberger with normal pair selection, the coprime-leading-term criterion,
// and the chain criterion; output is the reduced basis (monic, mutually
// irreducible) sorted by leading term.
inline std::vector<MultiPoly> buchberger(const std::vector<MultiPoly>& gens,
                                         const MonomialOrder& ord) {
  std::vector<MultiPoly> G;
  for (const auto& g : gens) {
    if (g.is_zero()) continue;
    const MultiPoly m = detail::make_monic(g, ord);
    if (std::find(G.begin(), G.end(), m) == G.end()) G.push_back(m);
  }
  if (G.empty()) throw std::invalid_argument("buchberger: no nonzero generators");

  std::vector<Exps> lt;
  lt.reserve(G.size());
  for (const auto& g : G) lt.push_back(g.leading_term(ord).first);

  std::set<std::pair<int, int>> pending;
  for (int i = 0; i < static_cast<int>(G.size()); ++i)
    for (int j = i + 1; j < static_cast<int>(G.size()); ++j) pending.insert({i, j});

  while (!pending.empty()) {
    auto chosen = pending.begin();
    Exps best = detail::exp_lcm(lt[static_cast<size_t>(chosen->first)],
                                lt[static_cast<size_t>(chosen->second)]);
    for (auto it = std::next(pending.begin()); it != pending.end(); ++it) {
      Exps L = detail::exp_lcm(lt[static_cast<size_t>(it->first)],
                               lt[static_cast<size_t>(it->second)]);
      if (ord.less(L, best)) {
        chosen = it;
        best = L;
      }
    }
    const auto [i, j] = *chosen;
    pending.erase(chosen);

    if (detail::exp_disjoint(lt[static_cast<size_t>(i)], lt[static_cast<size_t>(j)])) continue;

    bool chained = false;
    for (int k = 0; k < static_cast<int>(G.size()) && !chained; ++k) {
      if (k == i || k == j) continue;
      if (!detail::exp_divides(lt[static_cast<size_t>(k)], best)) continue;
      const std::pair<int, int> ik{std::min(i, k), std::max(i, k)};
      const std::pair<int, int> jk{std::min(j, k), std::max(j, k)};
      if (!pending.count(ik) && !pending.count(jk)) chained = true;
    }
    if (chained) continue;

    const MultiPoly h = reduce(spoly(G[static_cast<size_t>(i)], G[static_cast<size_t>(j)], ord),
                               G, ord);
    if (h.is_zero()) continue;
    G.push_back(detail::make_monic(h, ord));
    lt.push_back(G.back().leading_term(ord).first);
    const int fresh = static_cast<int>(G.size()) - 1;
    for (int k = 0; k < fresh; ++k) pending.insert({k, fresh});
  }

  // minimal generators: ascending leading terms, keep only new leading ideals
  std::sort(G.begin(), G.end(), [&ord](const MultiPoly& a, const MultiPoly& b) {
    return ord.less(a.leading_term(ord).first, b.leading_term(ord).first);
  });
  std::vector<MultiPoly> minimal;
  for (const auto& g : G) {
    const Exps e = g.leading_term(ord).first;
    bool redundant = false;
    for (const auto& kept : minimal)
      if (detail::exp_divides(kept.leading_term(ord).first, e)) {
        redundant = true;
        break;
      }
    if (!redundant) minimal.push_back(g);
  }

  // inter-reduce tails until stable
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < minimal.size(); ++i) {
      std::vector<MultiPoly> others;
      for (size_t j = 0; j < minimal.size(); ++j)
        if (j != i) others.push_back(minimal[j]);
      MultiPoly r = reduce(minimal[i], others, ord);
      r = detail::make_monic(r, ord);
      if (r != minimal[i]) {
        minimal[i] = std::move(r);
        changed = true;
      }
    }
  }
  std::sort(minimal.begin(), minimal.end(), [&ord](const MultiPoly& a, const MultiPoly& b) {
    return ord.less(a.leading_term(ord).first, b.leading_term(ord).first);
  });
  return minimal;
}

inline bool in_ideal(const MultiPoly& f, const std::vector<MultiPoly>& gb,
                     const MonomialOrder& ord) {
  return reduce(f, gb, ord).is_zero();
}

// Lex basis with the eliminated variables ranked highest, filtered to the
// polynomials supported on `keep` alone.
inline std::vector<MultiPoly> elimination_ideal(const std::vector<MultiPoly>& gens,
                                                const std::vector<int>& keep) {
  if (gens.empty()) throw std::invalid_argument("elimination_ideal: no generators");
  const Ring& ring = gens[0].ring();
  std::vector<char> kept(ring->size(), 0);
  for (int v : keep) {
    if (v < 0 || static_cast<size_t>(v) >= ring->size())
      throw std::invalid_argument("elimination_ideal: keep index out of range");
    kept[static_cast<size_t>(v)] = 1;
  }
  MonomialOrder ord;
  ord.kind = MonomialOrder::Kind::Lex;
  for (size_t v = 0; v < ring->size(); ++v)
    if (!kept[v]) ord.precedence.push_back(static_cast<int>(v));
  for (size_t v = 0; v < ring->size(); ++v)
    if (kept[v]) ord.precedence.push_back(static_cast<int>(v));

  std::vector<MultiPoly> out;
  for (const auto& g : buchberger(gens, ord)) {
    bool pure = true;
    for (size_t v = 0; v < ring->size() && pure; ++v)
      if (!kept[v] && g.uses(static_cast<int>(v))) pure = false;
    if (pure) out.push_back(g);
  }
  return out;
}

}  // namespace quadratize
