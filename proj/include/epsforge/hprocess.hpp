#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "epsforge/critical.hpp"
#include "epsforge/errors.hpp"
#include "epsforge/eval.hpp"
#include "epsforge/index.hpp"

namespace epsforge {

enum class ValueRule { paper, min_witness };

struct Selection {
  std::size_t index;  // least axiom index whose instance is false
  Expr e;             // e^S = eps x.|F|_S, canonical
  uint64_t v;         // v^S
};

// The axiom Cr(S) associated to a nonsolving substitution, with e^S and v^S.
inline Selection select_critical(const Substitution& s, const CriticalFormulaSet& cr,
                                 ValueRule rule = ValueRule::paper) {
  for (std::size_t i = 0; i < cr.instances().size(); ++i) {
    if (reduce_bool(cr.instances()[i], s)) continue;
    const CriticalFormula& cf = cr.axioms()[i];
    Expr e = Expr::eps(reduce(cf.matrix, s));
    uint64_t v = reduce_nat(cf.witness, s);
    if (rule == ValueRule::min_witness) {
      for (uint64_t u = 0; u <= v; ++u) {
        if (reduce_bool(instantiate(cf.matrix, Expr::num(u)), s)) {
          v = u;
          break;
        }
      }
    }
    return Selection{i, std::move(e), v};
  }
  throw NotApplicable("select_critical: substitution is solving");
}

// S' = S_{<rk(e)} u {(f,u) in S : rk(f) = rk(e), f != e} u {(e,v)}.
inline Substitution apply_update(const Substitution& s, const Expr& e, uint64_t v) {
  uint64_t r = rank(e);
  Substitution out;
  for (const auto& [f, u] : s) {
    uint64_t rf = rank(f);
    if (rf < r || (rf == r && f != e)) out.emplace(f, u);
  }
  out[e] = v;
  return out;
}

inline Substitution h_step(const Substitution& s, const CriticalFormulaSet& cr,
                           ValueRule rule = ValueRule::paper) {
  Selection sel = select_critical(s, cr, rule);
  return apply_update(s, sel.e, sel.v);
}

struct TraceStep {
  uint64_t n = 0;
  Substitution subst;
  bool solving = false;
  uint64_t rn = 0;  // rk(S^n); by convention 0 on the solving step
  std::optional<std::size_t> selected;
  std::optional<Expr> en;
  std::optional<uint64_t> vn;
  IndexVector an;  // ind(S^n); by convention all zero on the solving step

  bool operator==(const TraceStep& o) const {
    return n == o.n && subst == o.subst && solving == o.solving && rn == o.rn &&
           selected == o.selected && en == o.en && vn == o.vn && an == o.an;
  }
};

struct Trace {
  CriticalFormulaSet cr;
  std::vector<TraceStep> steps;
  bool budget_exceeded = false;
  ValueRule rule = ValueRule::paper;

  bool solved() const { return !steps.empty() && steps.back().solving; }

  uint64_t solution_index() const {
    if (!solved()) throw NotTerminated("trace did not reach a solution");
    return steps.back().n;
  }
};

// Lazy process runner: S^0 = {} and each further step corrects the least
// false axiom, until the first solving substitution. `budget` bounds the
// largest step index that may be materialized.
class HProcess {
 public:
  HProcess(CriticalFormulaSet cr, uint64_t budget = kDefaultBudget, ValueRule rule = ValueRule::paper)
      : cr_(std::move(cr)), budget_(budget), rule_(rule) {}

  const CriticalFormulaSet& cr() const { return cr_; }
  const std::vector<TraceStep>& steps() const { return steps_; }
  bool solved() const { return done_; }
  uint64_t rank_bound() const { return cr_.rank_bound(); }

  // Materialize step n; throws BudgetExceeded past the budget and
  // SeriesError past a reached solution (the process is frozen there).
  void ensure(uint64_t n) {
    while (steps_.size() <= n && !done_) extend_once();
    if (steps_.size() <= n) throw SeriesError("step index beyond the frozen trace");
  }

  uint64_t run_to_solution() {
    while (!done_) extend_once();
    return steps_.back().n;
  }

  Trace snapshot() const {
    Trace t;
    t.cr = cr_;
    t.steps = steps_;
    t.budget_exceeded = !done_;
    t.rule = rule_;
    return t;
  }

 private:
  void extend_once() {
    uint64_t n = steps_.size();
    if (n > budget_) throw BudgetExceeded("no solution within the step budget");
    const Substitution& s = n == 0 ? empty_ : next_;
    TraceStep step;
    step.n = n;
    step.subst = s;
    if (is_solving(s, cr_)) {
      step.solving = true;
      step.rn = 0;
      step.an = zero_index(cr_.n_cl_eps());
      done_ = true;
    } else {
      Selection sel = select_critical(s, cr_, rule_);
      step.solving = false;
      step.rn = rank_of(s);
      step.selected = sel.index;
      step.en = sel.e;
      step.vn = sel.v;
      step.an = index_of(s, cr_);
      next_ = apply_update(s, sel.e, sel.v);
    }
    steps_.push_back(std::move(step));
  }

  CriticalFormulaSet cr_;
  uint64_t budget_;
  ValueRule rule_;
  std::vector<TraceStep> steps_;
  Substitution next_;
  Substitution empty_;
  bool done_ = false;
};

inline Trace run_h_process(const CriticalFormulaSet& cr, uint64_t budget = kDefaultBudget,
                           ValueRule rule = ValueRule::paper) {
  HProcess p(cr, budget, rule);
  try {
    p.run_to_solution();
  } catch (const BudgetExceeded&) {
  }
  return p.snapshot();
}

struct CorrectnessViolation {
  uint64_t n = 0;
  uint64_t stored = 0;  // value of e_n in S^n
  uint64_t vn = 0;
};

// For every nonsolving step with e_n already in dom(S^n) at value v, the new
// value must satisfy 0 != v_n < v. Violations are data, not exceptions.
inline std::vector<CorrectnessViolation> check_correctness(const Trace& t) {
  std::vector<CorrectnessViolation> out;
  for (const TraceStep& st : t.steps) {
    if (st.solving) continue;
    auto it = st.subst.find(*st.en);
    if (it == st.subst.end()) continue;
    if (!(*st.vn != 0 && *st.vn < it->second))
      out.push_back(CorrectnessViolation{st.n, it->second, *st.vn});
  }
  return out;
}

}  // namespace epsforge
