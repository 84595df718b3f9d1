#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "epsforge/critical.hpp"
#include "epsforge/errors.hpp"
#include "epsforge/expr.hpp"
#include "epsforge/ordinal.hpp"

namespace epsforge {

inline constexpr uint64_t kDefaultBudget = 1'000'000;

// Finite map from canonical closed eps terms to natural values; everything
// else defaults to 0 under reduction.
using Substitution = std::map<Expr, uint64_t, ExprLess>;

inline uint64_t rank_of(const Substitution& s) {
  uint64_t r = 0;
  for (const auto& [e, v] : s) {
    uint64_t re = rank(e);
    if (re > r) r = re;
  }
  return r;
}

namespace detail {
inline uint64_t eval_nat(Expr::Kind k, uint64_t a, uint64_t b) {
  uint64_t r = 0;
  switch (k) {
    case Expr::Kind::Plus:
      if (__builtin_add_overflow(a, b, &r)) throw EvalError("numeral overflow in +");
      return r;
    case Expr::Kind::Times:
      if (__builtin_mul_overflow(a, b, &r)) throw EvalError("numeral overflow in *");
      return r;
    default:  // Monus: cut-off subtraction
      return a > b ? a - b : 0;
  }
}
}  // namespace detail

// Innermost-leftmost normalization. Closed arithmetic and connectives are
// computed; a closed eps term whose body is fully reduced is replaced by its
// assigned value, default 0. Open parts are left in place, so a matrix
// reduces to the matrix of e^S with its distinguished variable still free.
inline Expr reduce(const Expr& e, const Substitution& s) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Num:
    case K::Bool:
    case K::Var:
      return e;
    case K::Plus:
    case K::Times:
    case K::Monus: {
      Expr a = reduce(e.left(), s);
      Expr b = reduce(e.right(), s);
      if (a.kind() == K::Num && b.kind() == K::Num)
        return Expr::num(detail::eval_nat(e.kind(), a.value(), b.value()));
      if (Expr::identical(a, e.left()) && Expr::identical(b, e.right())) return e;
      return Expr::make(e.kind(), std::move(a), std::move(b));
    }
    case K::Eq:
    case K::Lt: {
      Expr a = reduce(e.left(), s);
      Expr b = reduce(e.right(), s);
      if (a.kind() == K::Num && b.kind() == K::Num)
        return Expr::bool_const(e.kind() == K::Eq ? a.value() == b.value() : a.value() < b.value());
      if (Expr::identical(a, e.left()) && Expr::identical(b, e.right())) return e;
      return Expr::make(e.kind(), std::move(a), std::move(b));
    }
    case K::Not: {
      Expr f = reduce(e.body(), s);
      if (f.kind() == K::Bool) return Expr::bool_const(f.value() == 0);
      if (Expr::identical(f, e.body())) return e;
      return Expr::neg(std::move(f));
    }
    case K::And:
    case K::Or:
    case K::Imp: {
      Expr a = reduce(e.left(), s);
      Expr b = reduce(e.right(), s);
      if (a.kind() == K::Bool && b.kind() == K::Bool) {
        bool x = a.value() != 0, y = b.value() != 0;
        bool r = e.kind() == K::And ? (x && y) : e.kind() == K::Or ? (x || y) : (!x || y);
        return Expr::bool_const(r);
      }
      if (Expr::identical(a, e.left()) && Expr::identical(b, e.right())) return e;
      return Expr::make(e.kind(), std::move(a), std::move(b));
    }
    case K::Eps: {
      Expr body = reduce(e.body(), s);
      Expr red = Expr::identical(body, e.body()) ? e : Expr::eps(std::move(body));
      if (!red.closed()) return red;
      auto it = s.find(red);
      return Expr::num(it != s.end() ? it->second : 0);
    }
  }
  throw EvalError("reduce: unreachable kind");
}

inline std::optional<uint64_t> nat_value(const Expr& e) {
  if (e.kind() == Expr::Kind::Num) return e.value();
  return std::nullopt;
}

inline std::optional<bool> bool_value(const Expr& e) {
  if (e.kind() == Expr::Kind::Bool) return e.value() != 0;
  return std::nullopt;
}

inline uint64_t reduce_nat(const Expr& e, const Substitution& s) {
  Expr r = reduce(e, s);
  if (r.kind() != Expr::Kind::Num) throw EvalError("reduce_nat: expression did not reduce to a numeral");
  return r.value();
}

inline bool reduce_bool(const Expr& e, const Substitution& s) {
  Expr r = reduce(e, s);
  if (r.kind() != Expr::Kind::Bool) throw EvalError("reduce_bool: expression did not reduce to a boolean");
  return r.value() != 0;
}

// Ackermann ordering on naturals: 0 is relocated above everything else.
inline bool ack_less(uint64_t u, uint64_t v) {
  if (u == 0) return false;
  if (v == 0) return true;
  return u < v;
}

inline bool ack_leq(uint64_t u, uint64_t v) { return u == v || ack_less(u, v); }

// Order type of v in the Ackermann ordering: ||0|| = w, ||v|| = v-1 otherwise.
inline Ordinal ack_norm(uint64_t v) { return v == 0 ? Ordinal::omega() : Ordinal::finite(v - 1); }

inline bool is_solving(const Substitution& s, const CriticalFormulaSet& cr) {
  for (const Expr& inst : cr.instances())
    if (!reduce_bool(inst, s)) return false;
  return true;
}

// T below-or-equal S pointwise in the Ackermann ordering: every entry of S is
// present in T with a value that is <=_A the value in S.
inline bool sqsub_a(const Substitution& t, const Substitution& s) {
  for (const auto& [e, u] : s) {
    auto it = t.find(e);
    if (it == t.end() || !ack_leq(it->second, u)) return false;
  }
  return true;
}

}  // namespace epsforge
