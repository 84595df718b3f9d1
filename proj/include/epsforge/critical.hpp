#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "epsforge/expr.hpp"
#include "epsforge/ordinal.hpp"

namespace epsforge {

// One epsilon axiom, given by its matrix F (a formula over one distinguished
// free variable) and a closed witness term t. It denotes
//   F[t] -> (not (t < eps x.F)) and F[eps x.F].
struct CriticalFormula {
  Expr matrix;
  Expr witness;
};

inline Expr eps_term(const CriticalFormula& cf) { return Expr::eps(cf.matrix); }

inline Expr instance_formula(const CriticalFormula& cf) {
  Expr e = eps_term(cf);
  return Expr::imp(instantiate(cf.matrix, cf.witness),
                   Expr::conj(Expr::neg(Expr::lt(cf.witness, e)), instantiate(cf.matrix, e)));
}

// All distinct closed eps terms occurring in the given formulas, ordered so
// that a closed subexpression always comes after any term containing it; ties
// are broken by first occurrence.
inline std::vector<Expr> enumerate_closed_eps_terms(const std::vector<Expr>& roots) {
  std::vector<Expr> occ;
  for (const Expr& r : roots) {
    for_each_subexpr(r, [&](const Expr& u) {
      if (u.kind() != Expr::Kind::Eps || !u.closed()) return;
      for (const Expr& seen : occ)
        if (seen == u) return;
      occ.push_back(u);
    });
  }
  std::vector<Expr> out;
  std::vector<bool> used(occ.size(), false);
  for (std::size_t round = 0; round < occ.size(); ++round) {
    for (std::size_t i = 0; i < occ.size(); ++i) {
      if (used[i]) continue;
      bool embedded = false;
      for (std::size_t j = 0; j < occ.size() && !embedded; ++j)
        if (j != i && !used[j] && contains_subexpr(occ[j], occ[i])) embedded = true;
      if (!embedded) {
        out.push_back(occ[i]);
        used[i] = true;
        break;
      }
    }
  }
  return out;
}

// A fixed finite list of epsilon axioms together with the derived data the
// process and its analysis need: axiom instances, the ordered closed eps
// terms, the rank bound and the index bound (w+1)^N.
class CriticalFormulaSet {
 public:
  CriticalFormulaSet() { derive(); }

  static CriticalFormulaSet build(std::vector<CriticalFormula> axioms) {
    for (const auto& cf : axioms) {
      if (cf.matrix.empty() || !cf.matrix.is_formula())
        throw std::invalid_argument("critical formula: matrix must be a formula");
      if (cf.matrix.dangling() > 1)
        throw std::invalid_argument("critical formula: matrix has a non-distinguished free variable");
      if (cf.witness.empty() || !cf.witness.is_term() || !cf.witness.closed())
        throw std::invalid_argument("critical formula: witness must be a closed term");
    }
    CriticalFormulaSet cr;
    cr.axioms_ = std::move(axioms);
    cr.derive();
    return cr;
  }

  const std::vector<CriticalFormula>& axioms() const { return axioms_; }
  const std::vector<Expr>& instances() const { return instances_; }
  const std::vector<Expr>& cl_eps() const { return cl_eps_; }
  std::size_t n_cl_eps() const { return cl_eps_.size(); }
  uint64_t rank_bound() const { return rank_bound_; }
  const Ordinal& ind_bound() const { return ind_bound_; }

 private:
  void derive() {
    instances_.clear();
    uint64_t rk = 0;
    for (const auto& cf : axioms_) {
      Expr inst = instance_formula(cf);
      uint64_t r = rank(inst);
      if (r > rk) rk = r;
      instances_.push_back(std::move(inst));
    }
    rank_bound_ = rk + 1 > 2 ? rk + 1 : 2;
    cl_eps_ = enumerate_closed_eps_terms(instances_);
    ind_bound_ = omega_plus_one_pow(cl_eps_.size());
  }

  std::vector<CriticalFormula> axioms_;
  std::vector<Expr> instances_;
  std::vector<Expr> cl_eps_;
  uint64_t rank_bound_ = 2;
  Ordinal ind_bound_;
};

}  // namespace epsforge
