#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "epsforge/eval.hpp"
#include "epsforge/hprocess.hpp"
#include "epsforge/series.hpp"
#include "epsforge/sexpr.hpp"

namespace epsforge {

struct GenLimits {
  uint64_t max_axioms = 6;
  uint64_t max_rank = 3;
  uint64_t max_depth = 5;
  uint64_t max_const = 9;
};

struct GenStats {
  uint64_t resamples = 0;
  uint64_t rank2_instances = 0;  // instances whose process reaches a rank>=2 substitution
  std::vector<uint64_t> lengths;
};

struct Corpus {
  std::vector<std::string> files;  // one critical-formula file per instance
  GenStats stats;
};

namespace detail {

inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform draw below n, implementation-stable (no std distributions).
inline uint64_t rand_below(std::mt19937_64& rng, uint64_t n) {
  if (n <= 1) return 0;
  uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  for (;;) {
    uint64_t v = rng();
    if (v < limit) return v % n;
  }
}

inline bool chance(std::mt19937_64& rng, uint64_t percent) { return rand_below(rng, 100) < percent; }

struct Gen {
  std::mt19937_64& rng;
  const GenLimits& lim;

  Expr term(uint64_t depth, uint64_t scope, bool allow_eps) {
    uint64_t pick = rand_below(rng, 100);
    if (scope > 0 && pick < 30) return Expr::var(rand_below(rng, scope));
    if (pick < 60 || depth == 0) return Expr::num(rand_below(rng, lim.max_const + 1));
    if (allow_eps && depth >= 2 && pick < 72)
      return Expr::eps(formula(depth - 2, scope + 1, false));
    Expr a = term(depth - 1, scope, allow_eps);
    Expr b = term(depth - 1, scope, allow_eps);
    switch (rand_below(rng, 3)) {
      case 0:
        return Expr::plus(std::move(a), std::move(b));
      case 1:
        return Expr::times(std::move(a), std::move(b));
      default:
        return Expr::monus(std::move(a), std::move(b));
    }
  }

  Expr atom(uint64_t depth, uint64_t scope, bool allow_eps) {
    Expr a = term(depth, scope, allow_eps);
    Expr b = term(depth, scope, allow_eps);
    return rand_below(rng, 2) ? Expr::eq(std::move(a), std::move(b)) : Expr::lt(std::move(a), std::move(b));
  }

  Expr formula(uint64_t depth, uint64_t scope, bool allow_eps) {
    uint64_t pick = rand_below(rng, 100);
    if (depth == 0 || pick < 55) return atom(depth, scope, allow_eps);
    if (pick < 60) return Expr::bool_const(rand_below(rng, 2) != 0);
    if (pick < 70) return Expr::neg(formula(depth - 1, scope, allow_eps));
    Expr a = formula(depth - 1, scope, allow_eps);
    Expr b = formula(depth - 1, scope, allow_eps);
    switch (rand_below(rng, 3)) {
      case 0:
        return Expr::conj(std::move(a), std::move(b));
      case 1:
        return Expr::disj(std::move(a), std::move(b));
      default:
        return Expr::imp(std::move(a), std::move(b));
    }
  }

  // Matrix whose process step inserts a rank-2 key: the premise F[t] holds
  // outright while F[0] is false, and the nested eps keeps x free.
  CriticalFormula nested_template() {
    uint64_t c = 1 + rand_below(rng, lim.max_const);
    Expr inner = Expr::eps(Expr::lt(Expr::var(0), Expr::var(1)));  // eps y (< y x)
    Expr matrix = Expr::conj(Expr::lt(Expr::num(0), Expr::var(0)), Expr::lt(inner, Expr::var(0)));
    return CriticalFormula{std::move(matrix), Expr::num(c)};
  }

  CriticalFormula random_axiom() {
    for (int tries = 0; tries < 32; ++tries) {
      Expr matrix = formula(lim.max_depth >= 2 ? lim.max_depth - 2 : 1, 1, true);
      if (!free_in(matrix, 0)) continue;  // the distinguished variable must occur
      Expr witness = chance(rng, 15) ? Expr::eps(formula(1, 1, false)) : term(2, 0, false);
      if (!witness.closed()) continue;
      CriticalFormula cf{std::move(matrix), std::move(witness)};
      if (rank(instance_formula(cf)) > lim.max_rank) continue;
      return cf;
    }
    return nested_template();
  }
};

// Accept an instance only if its process solves quickly enough for the
// analysis harness and all span ordinals stay representable.
inline bool acceptable(const CriticalFormulaSet& cr, uint64_t step_cap, uint64_t* h_out,
                       bool* rank2_out) {
  try {
    Trace t = run_h_process(cr, step_cap);
    if (!t.solved()) return false;
    uint64_t h = t.solution_index();
    if (h < 1 || h > 48) return false;
    bool rank2 = false;
    for (const TraceStep& st : t.steps) {
      if (rank_of(st.subst) >= 2) rank2 = true;
      for (const auto& [e, v] : st.subst)
        if (v > 1000000) return false;  // runaway numerals
    }
    SeriesContext ctx(t);
    for (uint64_t m = 0; m < h; ++m)
      for (uint64_t k = m + 1; k <= h; ++k)
        if (is_valid_series(ctx, m, k)) o_value(ctx, m, k);
    termination_certificate(ctx, t);
    *h_out = h;
    *rank2_out = rank2;
    return true;
  } catch (const OrdinalOverflow&) {
    return false;
  } catch (const EvalError&) {
    return false;
  }
}

}  // namespace detail

// Deterministic corpus: identical (seed, count, limits) yield byte-identical
// files. Unsolvable-within-cap or overflowing candidates are rejected and
// counted as resamples.
inline Corpus gen_corpus(uint64_t seed, uint64_t count, const GenLimits& lim = {},
                         uint64_t budget = kDefaultBudget) {
  Corpus corpus;
  uint64_t step_cap = budget < 512 ? budget : 512;
  for (uint64_t idx = 0; idx < count; ++idx) {
    for (uint64_t attempt = 0;; ++attempt) {
      std::mt19937_64 rng(detail::mix64(seed ^ detail::mix64(idx * 0x10001ULL + attempt)));
      detail::Gen gen{rng, lim};
      std::vector<CriticalFormula> axioms;
      uint64_t n_axioms = 1 + detail::rand_below(rng, lim.max_axioms);
      bool want_nested = detail::chance(rng, 55);
      for (uint64_t i = 0; i < n_axioms; ++i) {
        if (want_nested && i == n_axioms - 1 && attempt < 64)
          axioms.push_back(gen.nested_template());
        else
          axioms.push_back(gen.random_axiom());
      }
      CriticalFormulaSet cr;
      try {
        cr = CriticalFormulaSet::build(std::move(axioms));
      } catch (const std::invalid_argument&) {
        ++corpus.stats.resamples;
        continue;
      }
      uint64_t h = 0;
      bool rank2 = false;
      if (attempt >= 64 || detail::acceptable(cr, step_cap, &h, &rank2)) {
        if (attempt >= 64) {
          // deterministic fallback: a single nested-template axiom always solves in one step
          std::mt19937_64 rng2(detail::mix64(seed ^ detail::mix64(idx * 0x10001ULL)));
          detail::Gen gen2{rng2, lim};
          cr = CriticalFormulaSet::build({gen2.nested_template()});
          detail::acceptable(cr, step_cap, &h, &rank2);
        }
        corpus.files.push_back(print_critical_set(cr));
        corpus.stats.lengths.push_back(h);
        if (rank2) ++corpus.stats.rank2_instances;
        break;
      }
      ++corpus.stats.resamples;
    }
  }
  return corpus;
}

}  // namespace epsforge
