#pragma once

#include <cstdint>
#include <memory>
#include <utility>

#include "epsforge/errors.hpp"

namespace epsforge {

class Expr;

namespace detail {
struct ExprNode;
}

// Immutable expression of quantifier-free arithmetic with epsilon terms.
// Terms and formulas share one node type and are distinguished by kind.
// Bound variables are nameless: Var(i) refers to the i-th enclosing eps
// binder; indices escaping every binder are free (a critical-formula matrix
// has exactly one, pointing just past its root). Structural equality is
// therefore alpha-equivalence.
class Expr {
 public:
  enum class Kind : uint8_t {
    Num,
    Var,
    Plus,
    Times,
    Monus,
    Eq,
    Lt,
    Bool,
    Not,
    And,
    Or,
    Imp,
    Eps,
  };

  Expr() = default;  // empty handle, only valid as a placeholder

  static Expr num(uint64_t n);
  static Expr var(uint64_t index);
  static Expr bool_const(bool b);
  static Expr plus(Expr a, Expr b) { return make(Kind::Plus, std::move(a), std::move(b)); }
  static Expr times(Expr a, Expr b) { return make(Kind::Times, std::move(a), std::move(b)); }
  static Expr monus(Expr a, Expr b) { return make(Kind::Monus, std::move(a), std::move(b)); }
  static Expr eq(Expr a, Expr b) { return make(Kind::Eq, std::move(a), std::move(b)); }
  static Expr lt(Expr a, Expr b) { return make(Kind::Lt, std::move(a), std::move(b)); }
  static Expr neg(Expr f) { return make(Kind::Not, std::move(f), Expr()); }
  static Expr conj(Expr a, Expr b) { return make(Kind::And, std::move(a), std::move(b)); }
  static Expr disj(Expr a, Expr b) { return make(Kind::Or, std::move(a), std::move(b)); }
  static Expr imp(Expr a, Expr b) { return make(Kind::Imp, std::move(a), std::move(b)); }
  static Expr eps(Expr body) { return make(Kind::Eps, std::move(body), Expr()); }
  static Expr make(Kind k, Expr a, Expr b);

  bool empty() const { return !p_; }
  Kind kind() const;
  uint64_t value() const;  // Num value, Var index, Bool 0/1
  const Expr& left() const;
  const Expr& right() const;
  const Expr& body() const { return left(); }

  // Number of enclosing binders the expression refers past (0 = closed).
  uint32_t dangling() const;
  bool closed() const { return dangling() == 0; }

  bool is_term() const;
  bool is_formula() const { return !empty() && !is_term(); }

  static bool identical(const Expr& a, const Expr& b) { return a.p_ == b.p_; }

  friend int expr_cmp(const Expr& a, const Expr& b);
  bool operator==(const Expr& o) const { return expr_cmp(*this, o) == 0; }
  bool operator!=(const Expr& o) const { return expr_cmp(*this, o) != 0; }

 private:
  explicit Expr(std::shared_ptr<const detail::ExprNode> p) : p_(std::move(p)) {}
  std::shared_ptr<const detail::ExprNode> p_;
};

namespace detail {
struct ExprNode {
  Expr::Kind kind;
  uint64_t val;
  Expr a;
  Expr b;
  uint32_t dangling;
};

inline int arity(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Num:
    case Expr::Kind::Var:
    case Expr::Kind::Bool:
      return 0;
    case Expr::Kind::Not:
    case Expr::Kind::Eps:
      return 1;
    default:
      return 2;
  }
}
}  // namespace detail

inline Expr Expr::num(uint64_t n) {
  return Expr(std::make_shared<detail::ExprNode>(detail::ExprNode{Kind::Num, n, Expr(), Expr(), 0}));
}

inline Expr Expr::var(uint64_t index) {
  return Expr(std::make_shared<detail::ExprNode>(
      detail::ExprNode{Kind::Var, index, Expr(), Expr(), static_cast<uint32_t>(index + 1)}));
}

inline Expr Expr::bool_const(bool b) {
  return Expr(std::make_shared<detail::ExprNode>(
      detail::ExprNode{Kind::Bool, b ? uint64_t{1} : uint64_t{0}, Expr(), Expr(), 0}));
}

inline Expr Expr::make(Kind k, Expr a, Expr b) {
  uint32_t d = 0;
  switch (detail::arity(k)) {
    case 1:
      d = a.dangling();
      if (k == Kind::Eps) d = d > 0 ? d - 1 : 0;
      break;
    case 2:
      d = a.dangling() > b.dangling() ? a.dangling() : b.dangling();
      break;
    default:
      break;
  }
  return Expr(std::make_shared<detail::ExprNode>(detail::ExprNode{k, 0, std::move(a), std::move(b), d}));
}

inline Expr::Kind Expr::kind() const { return p_->kind; }
inline uint64_t Expr::value() const { return p_->val; }
inline const Expr& Expr::left() const { return p_->a; }
inline const Expr& Expr::right() const { return p_->b; }
inline uint32_t Expr::dangling() const { return p_->dangling; }

inline bool Expr::is_term() const {
  switch (kind()) {
    case Kind::Num:
    case Kind::Var:
    case Kind::Plus:
    case Kind::Times:
    case Kind::Monus:
    case Kind::Eps:
      return true;
    default:
      return false;
  }
}

inline int expr_cmp(const Expr& a, const Expr& b) {
  if (a.p_ == b.p_) return 0;
  if (a.empty() || b.empty()) return a.empty() ? -1 : 1;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (detail::arity(a.kind())) {
    case 0:
      if (a.value() != b.value()) return a.value() < b.value() ? -1 : 1;
      return 0;
    case 1:
      return expr_cmp(a.body(), b.body());
    default: {
      int c = expr_cmp(a.left(), b.left());
      if (c != 0) return c;
      return expr_cmp(a.right(), b.right());
    }
  }
}

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return expr_cmp(a, b) < 0; }
};

template <class F>
void for_each_subexpr(const Expr& e, F&& f) {
  f(e);
  switch (detail::arity(e.kind())) {
    case 1:
      for_each_subexpr(e.body(), f);
      break;
    case 2:
      for_each_subexpr(e.left(), f);
      for_each_subexpr(e.right(), f);
      break;
    default:
      break;
  }
}

inline bool contains_subexpr(const Expr& outer, const Expr& inner) {
  bool found = false;
  for_each_subexpr(outer, [&](const Expr& u) {
    if (!found && u == inner) found = true;
  });
  return found;
}

// Does the free variable with index k (relative to e's root) occur in e?
inline bool free_in(const Expr& e, uint64_t k) {
  if (k >= e.dangling()) return false;
  switch (e.kind()) {
    case Expr::Kind::Var:
      return e.value() == k;
    case Expr::Kind::Eps:
      return free_in(e.body(), k + 1);
    case Expr::Kind::Not:
      return free_in(e.body(), k);
    default:
      return free_in(e.left(), k) || free_in(e.right(), k);
  }
}

uint64_t rank(const Expr& e);

namespace detail {
// Max rank over eps-subterms of e (e included) containing the variable that
// has index `target` at e's root.
inline uint64_t bound_eps_rank_max(const Expr& e, uint64_t target) {
  if (target >= e.dangling()) return 0;
  uint64_t best = 0;
  switch (e.kind()) {
    case Expr::Kind::Eps: {
      if (free_in(e, target)) best = rank(e);
      uint64_t inner = bound_eps_rank_max(e.body(), target + 1);
      return inner > best ? inner : best;
    }
    case Expr::Kind::Not:
      return bound_eps_rank_max(e.body(), target);
    case Expr::Kind::Var:
      return 0;
    default: {
      uint64_t l = bound_eps_rank_max(e.left(), target);
      uint64_t r = bound_eps_rank_max(e.right(), target);
      return l > r ? l : r;
    }
  }
}
}  // namespace detail

// rk(eps x.F) = 1 + max rank of eps-subterms of F in which x occurs free;
// everywhere else the max over immediate subexpressions.
inline uint64_t rank(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Num:
    case Expr::Kind::Var:
    case Expr::Kind::Bool:
      return 0;
    case Expr::Kind::Not:
      return rank(e.body());
    case Expr::Kind::Eps:
      return 1 + detail::bound_eps_rank_max(e.body(), 0);
    default: {
      uint64_t l = rank(e.left());
      uint64_t r = rank(e.right());
      return l > r ? l : r;
    }
  }
}

// Canonical: a closed eps term whose body has no closed subexpression other
// than numerals and boolean constants (the body itself included).
inline bool is_canonical(const Expr& e) {
  if (e.empty() || e.kind() != Expr::Kind::Eps || !e.closed()) return false;
  bool ok = true;
  for_each_subexpr(e.body(), [&](const Expr& u) {
    if (u.dangling() == 0 && u.kind() != Expr::Kind::Num && u.kind() != Expr::Kind::Bool) ok = false;
  });
  return ok;
}

namespace detail {
inline Expr subst_free(const Expr& e, uint64_t k, const Expr& t) {
  if (k >= e.dangling()) return e;
  switch (e.kind()) {
    case Expr::Kind::Var: {
      uint64_t i = e.value();
      if (i == k) return t;
      return i > k ? Expr::var(i - 1) : e;
    }
    case Expr::Kind::Eps:
      return Expr::eps(subst_free(e.body(), k + 1, t));
    case Expr::Kind::Not:
      return Expr::neg(subst_free(e.body(), k, t));
    default:
      return Expr::make(e.kind(), subst_free(e.left(), k, t), subst_free(e.right(), k, t));
  }
}
}  // namespace detail

// F[t]: plug the closed term t in for the distinguished free variable of the
// matrix F (the index pointing just past F's root).
inline Expr instantiate(const Expr& matrix, const Expr& t) {
  if (!t.closed()) throw EvalError("instantiate: witness must be closed");
  return detail::subst_free(matrix, 0, t);
}

}  // namespace epsforge
