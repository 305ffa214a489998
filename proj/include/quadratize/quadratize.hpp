#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadratize/construct.hpp"
#include "quadratize/monosearch.hpp"

namespace quadratize {

struct QuadratizeOptions {
  double eps = kDefaultTolerance;
  unsigned jobs = 1;  // parallelism for the search fallback
};

struct QuadratizeOutcome {
  Quadratization quad;
  std::string method;  // strategy that produced the result (CLI --strategy vocabulary)
  std::optional<SearchStats> search_stats;
  std::vector<std::string> notes;
};

enum class Strategy { Auto, OneVar, LowDegree, Degree6, Degree6Monomial, Search };

inline const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Auto: return "auto";
    case Strategy::OneVar: return "one-var";
    case Strategy::LowDegree: return "low-degree";
    case Strategy::Degree6: return "degree6";
    case Strategy::Degree6Monomial: return "degree6-monomial";
    case Strategy::Search: return "search";
  }
  return "?";
}

inline std::optional<Strategy> strategy_from_name(const std::string& s) {
  if (s == "auto") return Strategy::Auto;
  if (s == "one-var") return Strategy::OneVar;
  if (s == "low-degree") return Strategy::LowDegree;
  if (s == "degree6") return Strategy::Degree6;
  if (s == "degree6-monomial") return Strategy::Degree6Monomial;
  if (s == "search") return Strategy::Search;
  return std::nullopt;
}

// Strategy chain: degree <= 2 needs no new variables; 3 and 4 use the fixed
// monomial constructions; from 5 on a single shifted variable is tried first
// because it is optimal whenever it applies, then the degree-specific
// fallback, then the exhaustive monomial search. The search fallback runs
// without an order cap — a full ladder of monomial degrees always succeeds —
// so the dispatcher returns a verified system for every nonzero input.
inline QuadratizeOutcome quadratize(const UniPoly& p, const QuadratizeOptions& opt = {}) {
  if (p.is_zero()) throw std::invalid_argument("quadratize: zero right-hand side");
  const int n = p.degree_or(0);

  std::vector<std::string> notes;
  if (n <= 2) return {quadratize_trivial(p), "trivial", std::nullopt, std::move(notes)};

  if (n <= 4) {
    if (auto q = quadratize_low_degree(p, opt.eps))
      return {std::move(*q), "low-degree", std::nullopt, std::move(notes)};
    notes.push_back("fixed low-degree construction failed verification at this tolerance");
  } else {
    if (auto q = try_one_variable(p, opt.eps))
      return {std::move(*q), "one-var", std::nullopt, std::move(notes)};
    if (n == 5) {
      if (auto q = quadratize_low_degree(p, opt.eps))
        return {std::move(*q), "low-degree", std::nullopt, std::move(notes)};
      notes.push_back("two-variable quintic construction failed verification at this tolerance");
    }
    if (n == 6) {
      try {
        if (auto q = quadratize_degree6(p, opt.eps))
          return {std::move(*q), "degree6", std::nullopt, std::move(notes)};
        notes.push_back("degree-6 construction failed verification at this tolerance");
      } catch (const ExactRootUnavailable&) {
        notes.push_back(
            "leading coefficient has no exact sixth root; degree-6 construction skipped");
      }
    }
  }

  SearchOptions sopt;
  sopt.max_order = -1;  // uncapped: the fallback must always land
  sopt.eps = opt.eps;
  sopt.jobs = opt.jobs;
  auto res = search_monomial(p, sopt);
  if (!res.quad) throw std::logic_error("quadratize: search fallback found nothing");
  return {std::move(*res.quad), "search", std::move(res.stats), std::move(notes)};
}

// Single forced strategy, for callers that want one specific construction.
// Absent result means the strategy rejected the input (not an error);
// degree or mode preconditions still throw, as does an unavailable exact
// radical in the degree-6 route.
inline std::optional<QuadratizeOutcome> quadratize_with(const UniPoly& p, Strategy s,
                                                        const QuadratizeOptions& opt = {}) {
  if (s == Strategy::Auto) return quadratize(p, opt);
  if (p.is_zero()) throw std::invalid_argument("quadratize: zero right-hand side");
  switch (s) {
    case Strategy::OneVar: {
      auto q = try_one_variable(p, opt.eps);
      if (!q) return std::nullopt;
      return QuadratizeOutcome{std::move(*q), "one-var", std::nullopt, {}};
    }
    case Strategy::LowDegree: {
      auto q = quadratize_low_degree(p, opt.eps);
      if (!q) return std::nullopt;
      return QuadratizeOutcome{std::move(*q), "low-degree", std::nullopt, {}};
    }
    case Strategy::Degree6: {
      auto q = quadratize_degree6(p, opt.eps);
      if (!q) return std::nullopt;
      return QuadratizeOutcome{std::move(*q), "degree6", std::nullopt, {}};
    }
    case Strategy::Degree6Monomial: {
      auto q = quadratize_degree6_monomial(p, opt.eps);
      if (!q) return std::nullopt;
      return QuadratizeOutcome{std::move(*q), "degree6-monomial", std::nullopt, {}};
    }
    case Strategy::Search: {
      SearchOptions sopt;
      sopt.eps = opt.eps;
      sopt.jobs = opt.jobs;
      auto res = search_monomial(p, sopt);
      if (!res.quad) return std::nullopt;
      return QuadratizeOutcome{std::move(*res.quad), "search", std::move(res.stats), {}};
    }
    default: return std::nullopt;
  }
}

}  // namespace quadratize
