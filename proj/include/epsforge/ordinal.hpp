#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "epsforge/errors.hpp"

namespace epsforge {

class Ordinal;
struct OrdinalTerm;

namespace detail {
inline uint64_t checked_add_u64(uint64_t a, uint64_t b) {
  uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OrdinalOverflow("coefficient overflow in ordinal addition");
  return r;
}
}  // namespace detail

// Ordinal below epsilon-zero in Cantor normal form:
//   w^(e1)*c1 + ... + w^(ek)*ck   with e1 > ... > ek and every ci >= 1.
// The empty sum is 0; a finite ordinal is a single exponent-0 term.
class Ordinal {
 public:
  Ordinal() = default;  // zero

  static Ordinal finite(uint64_t n);
  static Ordinal omega();
  static Ordinal single(Ordinal exp, uint64_t coeff);  // w^(exp)*coeff
  static Ordinal from_terms(std::vector<OrdinalTerm> terms);

  const std::vector<OrdinalTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  uint64_t finite_value() const;

  std::string display() const;

  friend int ord_cmp(const Ordinal& a, const Ordinal& b);
  bool operator==(const Ordinal& o) const { return ord_cmp(*this, o) == 0; }
  bool operator!=(const Ordinal& o) const { return ord_cmp(*this, o) != 0; }
  bool operator<(const Ordinal& o) const { return ord_cmp(*this, o) < 0; }
  bool operator<=(const Ordinal& o) const { return ord_cmp(*this, o) <= 0; }
  bool operator>(const Ordinal& o) const { return ord_cmp(*this, o) > 0; }
  bool operator>=(const Ordinal& o) const { return ord_cmp(*this, o) >= 0; }

 private:
  std::vector<OrdinalTerm> terms_;
};

struct OrdinalTerm {
  Ordinal exp;
  uint64_t coeff = 1;
};

inline int ord_cmp(const Ordinal& a, const Ordinal& b) {
  const auto& x = a.terms_;
  const auto& y = b.terms_;
  std::size_t n = x.size() < y.size() ? x.size() : y.size();
  for (std::size_t i = 0; i < n; ++i) {
    int c = ord_cmp(x[i].exp, y[i].exp);
    if (c != 0) return c;
    if (x[i].coeff != y[i].coeff) return x[i].coeff < y[i].coeff ? -1 : 1;
  }
  if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
  return 0;
}

inline Ordinal Ordinal::from_terms(std::vector<OrdinalTerm> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coeff == 0) throw OrdinalOverflow("zero coefficient in normal form");
    if (i + 1 < terms.size() && ord_cmp(terms[i].exp, terms[i + 1].exp) <= 0)
      throw OrdinalOverflow("exponents not strictly decreasing");
  }
  Ordinal o;
  o.terms_ = std::move(terms);
  return o;
}

inline Ordinal Ordinal::finite(uint64_t n) {
  Ordinal o;
  if (n > 0) o.terms_.push_back(OrdinalTerm{Ordinal(), n});
  return o;
}

inline Ordinal Ordinal::single(Ordinal exp, uint64_t coeff) {
  if (coeff == 0) return Ordinal();
  Ordinal o;
  o.terms_.push_back(OrdinalTerm{std::move(exp), coeff});
  return o;
}

inline Ordinal Ordinal::omega() { return single(finite(1), 1); }

inline bool Ordinal::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exp.is_zero());
}

inline uint64_t Ordinal::finite_value() const {
  if (terms_.empty()) return 0;
  if (!is_finite()) throw OrdinalOverflow("finite_value of a transfinite ordinal");
  return terms_[0].coeff;
}

// Ordinary (non-commutative) ordinal addition, renormalized.
inline Ordinal ord_add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return b;
  const Ordinal& e = b.terms().front().exp;
  std::vector<OrdinalTerm> out;
  std::size_t kept = 0;
  while (kept < a.terms().size() && ord_cmp(a.terms()[kept].exp, e) > 0) {
    out.push_back(a.terms()[kept]);
    ++kept;
  }
  uint64_t lead = b.terms().front().coeff;
  if (kept < a.terms().size() && ord_cmp(a.terms()[kept].exp, e) == 0)
    lead = detail::checked_add_u64(lead, a.terms()[kept].coeff);
  out.push_back(OrdinalTerm{e, lead});
  out.insert(out.end(), b.terms().begin() + 1, b.terms().end());
  return Ordinal::from_terms(std::move(out));
}

inline Ordinal omega_pow(const Ordinal& a) { return Ordinal::single(a, 1); }

// 2^a for a = w^(e1)*c1 + ... + n:  each limit term maps to w^(ei-1)*ci in the
// result exponent (infinite ei are fixed points of 1+x), the finite tail n
// becomes the coefficient 2^n.
inline Ordinal two_pow(const Ordinal& a) {
  std::vector<OrdinalTerm> exp_terms;
  uint64_t fin = 0;
  for (const auto& t : a.terms()) {
    if (t.exp.is_zero()) {
      fin = t.coeff;
      break;
    }
    Ordinal e1 = t.exp;
    if (e1.is_finite()) e1 = Ordinal::finite(e1.finite_value() - 1);
    exp_terms.push_back(OrdinalTerm{std::move(e1), t.coeff});
  }
  if (fin > 62) throw OrdinalOverflow("2^" + std::to_string(fin) + " exceeds the coefficient width");
  uint64_t c = uint64_t{1} << fin;
  if (exp_terms.empty()) return Ordinal::finite(c);
  return Ordinal::single(Ordinal::from_terms(std::move(exp_terms)), c);
}

// (w+1)^i = w^i + w^(i-1) + ... + w + 1.
inline Ordinal omega_plus_one_pow(uint64_t i) {
  if (i > 4096) throw OrdinalOverflow("(w+1)^i with oversized i");
  std::vector<OrdinalTerm> ts;
  ts.reserve(i + 1);
  for (uint64_t j = i + 1; j-- > 0;) ts.push_back(OrdinalTerm{Ordinal::finite(j), 1});
  return Ordinal::from_terms(std::move(ts));
}

inline constexpr uint64_t kTowerCap = 16;

// w_k: w_0 = 1, w_(k+1) = w^(w_k).
inline Ordinal tower(uint64_t k, uint64_t cap = kTowerCap) {
  if (k > cap) throw OrdinalOverflow("tower w_" + std::to_string(k) + " exceeds the nesting cap");
  Ordinal t = Ordinal::finite(1);
  for (uint64_t i = 0; i < k; ++i) t = omega_pow(t);
  return t;
}

inline std::string Ordinal::display() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) out += " + ";
    const auto& t = terms_[i];
    if (t.exp.is_zero()) {
      out += std::to_string(t.coeff);
      continue;
    }
    if (t.exp.is_finite() && t.exp.finite_value() == 1)
      out += "w";
    else
      out += "w^(" + t.exp.display() + ")";
    if (t.coeff != 1) out += "*" + std::to_string(t.coeff);
  }
  return out;
}

struct OrdinalLess {
  bool operator()(const Ordinal& a, const Ordinal& b) const { return ord_cmp(a, b) < 0; }
};

}  // namespace epsforge
