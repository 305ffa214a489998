#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace quadratize {

// Shared, immutable variable-name list. Polynomials over the same ring share
// the pointer; cross-ring arithmetic is rejected.
using Ring = std::shared_ptr<const std::vector<std::string>>;

inline Ring make_ring(std::vector<std::string> names) {
  return std::make_shared<const std::vector<std::string>>(std::move(names));
}

using Exps = std::vector<int>;

struct MonomialOrder {
  enum class Kind { Lex, DegRevLex };
  Kind kind = Kind::Lex;
  std::vector<int> precedence;  // variable indices, most significant first

  static MonomialOrder lex(const Ring& ring) {
    MonomialOrder o;
    o.kind = Kind::Lex;
    o.precedence.resize(ring->size());
    std::iota(o.precedence.begin(), o.precedence.end(), 0);
    return o;
  }

  static MonomialOrder degrevlex(const Ring& ring) {
    MonomialOrder o = lex(ring);
    o.kind = Kind::DegRevLex;
    return o;
  }

  // sign of a - b in this order
  int compare(const Exps& a, const Exps& b) const {
    if (kind == Kind::DegRevLex) {
      long da = 0, db = 0;
      for (int v : precedence) {
        da += a[static_cast<size_t>(v)];
        db += b[static_cast<size_t>(v)];
      }
      if (da != db) return da < db ? -1 : 1;
      for (auto it = precedence.rbegin(); it != precedence.rend(); ++it) {
        const int av = a[static_cast<size_t>(*it)], bv = b[static_cast<size_t>(*it)];
        if (av != bv) return av < bv ? 1 : -1;  // smaller trailing exponent wins
      }
      return 0;
    }
    for (int v : precedence) {
      const int av = a[static_cast<size_t>(v)], bv = b[static_cast<size_t>(v)];
      if (av != bv) return av < bv ? -1 : 1;
    }
    return 0;
  }

  bool less(const Exps& a, const Exps& b) const { return compare(a, b) < 0; }
};

class MultiPoly {
 public:
  explicit MultiPoly(Ring ring) : ring_(std::move(ring)) {
    if (!ring_) throw std::invalid_argument("MultiPoly: null ring");
  }

  static MultiPoly constant(const Ring& ring, const mpq_class& c) {
    MultiPoly p(ring);
    p.add_term(Exps(ring->size(), 0), c);
    return p;
  }

  static MultiPoly variable(const Ring& ring, int idx) {
    if (idx < 0 || static_cast<size_t>(idx) >= ring->size())
      throw std::invalid_argument("MultiPoly::variable: index out of range");
    MultiPoly p(ring);
    Exps e(ring->size(), 0);
    e[static_cast<size_t>(idx)] = 1;
    p.add_term(e, 1);
    return p;
  }

  const Ring& ring() const { return ring_; }
  size_t arity() const { return ring_->size(); }
  const std::map<Exps, mpq_class>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exps& e, const mpq_class& c) {
    if (e.size() != ring_->size())
      throw std::invalid_argument("MultiPoly::add_term: exponent arity mismatch");
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(e, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  mpq_class coeff(const Exps& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? mpq_class(0) : it->second;
  }

  long total_degree() const {
    long best = -1;
    for (const auto& [e, c] : terms_)
      best = std::max(best, std::accumulate(e.begin(), e.end(), 0L));
    return best;
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    a.check_ring(b);
    MultiPoly r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
  }

  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
    a.check_ring(b);
    MultiPoly r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, -c);
    return r;
  }

  friend MultiPoly operator-(const MultiPoly& a) {
    MultiPoly r(a.ring_);
    for (const auto& [e, c] : a.terms_) r.terms_.emplace(e, -c);
    return r;
  }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.check_ring(b);
    MultiPoly r(a.ring_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exps e(ea);
        for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }

  friend MultiPoly operator*(const mpq_class& c, const MultiPoly& a) {
    MultiPoly r(a.ring_);
    if (c == 0) return r;
    for (const auto& [e, k] : a.terms_) r.terms_.emplace(e, c * k);
    return r;
  }

  friend MultiPoly operator*(const MultiPoly& a, const mpq_class& c) { return c * a; }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    a.check_ring(b);
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

  // term := single monomial c*x^e as a polynomial
  static MultiPoly term(const Ring& ring, const Exps& e, const mpq_class& c) {
    MultiPoly p(ring);
    p.add_term(e, c);
    return p;
  }

  std::pair<Exps, mpq_class> leading_term(const MonomialOrder& ord) const {
    if (terms_.empty()) throw std::logic_error("MultiPoly::leading_term: zero polynomial");
    auto best = terms_.begin();
    for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it)
      if (ord.less(best->first, it->first)) best = it;
    return {best->first, best->second};
  }

  // substitute variable idx := 0 (drops every term using it)
  MultiPoly at_zero(int idx) const {
    MultiPoly r(ring_);
    for (const auto& [e, c] : terms_)
      if (e[static_cast<size_t>(idx)] == 0) r.terms_.emplace(e, c);
    return r;
  }

  bool uses(int idx) const {
    for (const auto& [e, c] : terms_)
      if (e[static_cast<size_t>(idx)] > 0) return true;
    return false;
  }

  mpq_class evaluate(const std::vector<mpq_class>& point) const {
    if (point.size() != ring_->size())
      throw std::invalid_argument("MultiPoly::evaluate: point arity mismatch");
    mpq_class total = 0;
    for (const auto& [e, c] : terms_) {
      mpq_class v = c;
      for (size_t i = 0; i < e.size(); ++i)
        for (int k = 0; k < e[i]; ++k) v *= point[i];
      total += v;
    }
    return total;
  }

  // Terms print most-significant first under lex with the LAST ring variable
  // highest, so listings stay in a fixed order no matter which order produced
  // the polynomial.
  std::string str() const {
    if (terms_.empty()) return "0";
    MonomialOrder r;
    r.kind = MonomialOrder::Kind::Lex;
    r.precedence.resize(ring_->size());
    std::iota(r.precedence.rbegin(), r.precedence.rend(), 0);
    std::vector<const std::pair<const Exps, mpq_class>*> ts;
    for (const auto& t : terms_) ts.push_back(&t);
    std::sort(ts.begin(), ts.end(),
              [&r](auto* a, auto* b) { return r.less(b->first, a->first); });
    std::ostringstream out;
    bool first = true;
    for (const auto* t : ts) {
      const auto& [e, c] = *t;
      const bool neg = c < 0;
      const mpq_class mag = neg ? mpq_class(-c) : c;
      if (first)
        out << (neg ? "-" : "");
      else
        out << (neg ? " - " : " + ");
      first = false;
      std::string vars;
      for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!vars.empty()) vars += "*";
        vars += (*ring_)[i];
        if (e[i] > 1) vars += "^" + std::to_string(e[i]);
      }
      if (vars.empty())
        out << mag.get_str();
      else if (mag == 1)
        out << vars;
      else
        out << mag.get_str() << vars;
    }
    return out.str();
  }

 private:
  void check_ring(const MultiPoly& o) const {
    if (ring_ != o.ring_ && *ring_ != *o.ring_)
      throw std::invalid_argument("MultiPoly: mixed rings");
  }

  Ring ring_;
  std::map<Exps, mpq_class> terms_;
};

}  // namespace quadratize
