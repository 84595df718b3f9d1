#pragma once

// Brute-force ordinal arithmetic used as an independent oracle: term lists
// are renormalized by scanning, multiplication distributes naively and
// powers are folded multiplications. Deliberately not sharing code with the
// library implementations it checks.

#include <cstdint>
#include <random>
#include <vector>

#include "epsforge/ordinal.hpp"

namespace oracle {

using epsforge::Ordinal;
using epsforge::OrdinalTerm;

// Renormalize an arbitrary term list read left to right as an ordinal sum.
inline Ordinal norm(const std::vector<OrdinalTerm>& raw) {
  std::vector<OrdinalTerm> out;
  for (const auto& t : raw) {
    if (t.coeff == 0) continue;
    while (!out.empty() && epsforge::ord_cmp(out.back().exp, t.exp) < 0) out.pop_back();
    if (!out.empty() && epsforge::ord_cmp(out.back().exp, t.exp) == 0)
      out.back().coeff += t.coeff;
    else
      out.push_back(t);
  }
  return Ordinal::from_terms(std::move(out));
}

inline Ordinal add(const Ordinal& a, const Ordinal& b) {
  std::vector<OrdinalTerm> raw = a.terms();
  raw.insert(raw.end(), b.terms().begin(), b.terms().end());
  return norm(raw);
}

inline Ordinal mul_nat(const Ordinal& a, uint64_t d) {
  if (a.is_zero() || d == 0) return Ordinal();
  std::vector<OrdinalTerm> raw = a.terms();
  raw.front().coeff *= d;
  return norm(raw);
}

// a * w^(f)*d for f > 0: the lead exponent absorbs, x1 + f.
inline Ordinal mul_limit_term(const Ordinal& a, const Ordinal& f, uint64_t d) {
  if (a.is_zero()) return Ordinal();
  return Ordinal::single(add(a.terms().front().exp, f), d);
}

inline Ordinal mul(const Ordinal& a, const Ordinal& b) {
  Ordinal acc;
  for (const auto& t : b.terms())
    acc = add(acc, t.exp.is_zero() ? mul_nat(a, t.coeff) : mul_limit_term(a, t.exp, t.coeff));
  return acc;
}

inline Ordinal pow_nat(const Ordinal& a, uint64_t n) {
  Ordinal acc = Ordinal::finite(1);
  for (uint64_t i = 0; i < n; ++i) acc = mul(acc, a);
  return acc;
}

inline Ordinal omega_plus_one() { return add(Ordinal::omega(), Ordinal::finite(1)); }

// 2^a via ordinary laws: write a = w*q + n, then 2^a = (2^w)^q * 2^n with
// 2^w = w, computed through the oracle's own mul/pow machinery.
inline Ordinal two_pow(const Ordinal& a) {
  std::vector<OrdinalTerm> q_terms;
  uint64_t n = 0;
  for (const auto& t : a.terms()) {
    if (t.exp.is_zero()) {
      n = t.coeff;
    } else {
      Ordinal e = t.exp;
      if (e.is_finite())
        e = Ordinal::finite(e.finite_value() - 1);  // quotient exponent of division by w
      q_terms.push_back(OrdinalTerm{e, t.coeff});
    }
  }
  Ordinal q = norm(q_terms);
  Ordinal base = q.is_zero() ? Ordinal::finite(1) : Ordinal::single(q, 1);  // w^q
  return mul(base, Ordinal::finite(uint64_t{1} << n));
}

// Random normal form, depth-bounded; used by the fuzz suites.
inline Ordinal random_ordinal(std::mt19937_64& rng, int depth = 2) {
  std::vector<OrdinalTerm> raw;
  std::size_t terms = rng() % 4;
  for (std::size_t i = 0; i < terms; ++i) {
    Ordinal e = depth > 0 && rng() % 100 < 55 ? random_ordinal(rng, depth - 1)
                                              : Ordinal::finite(rng() % 5);
    raw.push_back(OrdinalTerm{std::move(e), rng() % 6 + 1});
  }
  std::sort(raw.begin(), raw.end(), [](const OrdinalTerm& a, const OrdinalTerm& b) {
    return epsforge::ord_cmp(a.exp, b.exp) > 0;
  });
  std::vector<OrdinalTerm> dedup;
  for (auto& t : raw) {
    if (!dedup.empty() && epsforge::ord_cmp(dedup.back().exp, t.exp) == 0) continue;
    dedup.push_back(std::move(t));
  }
  return Ordinal::from_terms(std::move(dedup));
}

}  // namespace oracle
