#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "epsforge/errors.hpp"
#include "epsforge/hprocess.hpp"
#include "epsforge/index.hpp"
#include "epsforge/ordinal.hpp"

namespace epsforge {

// Read-only view of a trace for span analysis, with memo tables for the
// p-level and o-value recursions. Spans are half-open index ranges [m,k).
struct SeriesContext {
  const std::vector<TraceStep>* steps = nullptr;
  uint64_t rank_bound = 2;

  std::map<std::pair<uint64_t, uint64_t>, uint64_t> level_memo;
  std::map<std::pair<uint64_t, uint64_t>, Ordinal> o_memo;

  struct ExponentViolation {
    uint64_t m = 0, k = 0;
    std::size_t j = 0;  // component whose o fails to decrease strictly
  };
  std::vector<ExponentViolation> exponent_violations;

  SeriesContext(const std::vector<TraceStep>& s, uint64_t rb) : steps(&s), rank_bound(rb) {}
  explicit SeriesContext(const Trace& t) : SeriesContext(t.steps, t.cr.rank_bound()) {}
  explicit SeriesContext(const HProcess& p) : SeriesContext(p.steps(), p.rank_bound()) {}

  uint64_t r(uint64_t i) const { return (*steps)[i].rn; }
  const TraceStep& step(uint64_t i) const { return (*steps)[i]; }
  uint64_t size() const { return steps->size(); }

  void check_range(uint64_t m, uint64_t k) const {
    if (!(m < k && k <= size())) throw SeriesError("series span out of range");
  }
};

// nd: positions whose rank attains the minimum of the remaining span.
inline std::vector<uint64_t> nd_set(const SeriesContext& ctx, uint64_t m, uint64_t k) {
  ctx.check_range(m, k);
  std::vector<uint64_t> out;
  uint64_t min_after = UINT64_MAX;
  for (uint64_t n = k; n-- > m;) {
    if (ctx.r(n) <= min_after) {
      out.push_back(n);
      min_after = ctx.r(n);
    }
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// rk of a span: minimum interior rank, RANK when the interior is empty.
inline uint64_t series_rank(const SeriesContext& ctx, uint64_t m, uint64_t k) {
  ctx.check_range(m, k);
  uint64_t rk = ctx.rank_bound;
  for (uint64_t i = m + 1; i < k; ++i)
    if (ctx.r(i) < rk) rk = ctx.r(i);
  return rk;
}

inline bool is_section(const SeriesContext& ctx, uint64_t m, uint64_t k) {
  return ctx.r(m) < series_rank(ctx, m, k);
}

// The span is a series in the sense required by decomposition: its first
// rank attains the span minimum (m is an nd position).
inline bool is_valid_series(const SeriesContext& ctx, uint64_t m, uint64_t k) {
  return ctx.r(m) <= series_rank(ctx, m, k);
}

// Split [m,k) at its nd positions into components, each a section.
inline std::vector<std::pair<uint64_t, uint64_t>> decompose(const SeriesContext& ctx, uint64_t m,
                                                            uint64_t k) {
  if (!is_valid_series(ctx, m, k)) throw SeriesError("decompose: first rank above the span minimum");
  std::vector<uint64_t> nd = nd_set(ctx, m, k);
  std::vector<std::pair<uint64_t, uint64_t>> comps;
  comps.reserve(nd.size());
  for (std::size_t j = 0; j < nd.size(); ++j)
    comps.emplace_back(nd[j], j + 1 < nd.size() ? nd[j + 1] : k);
  return comps;
}

// Least p such that [m,k) is a p-series: singletons are 0-series, and a span
// is a (p+1)-series when every decomposition component is a p-series.
inline uint64_t p_level(SeriesContext& ctx, uint64_t m, uint64_t k) {
  ctx.check_range(m, k);
  auto key = std::make_pair(m, k);
  auto it = ctx.level_memo.find(key);
  if (it != ctx.level_memo.end()) return it->second;
  uint64_t level = 0;
  if (k > m + 1) {
    for (const auto& [cm, ck] : decompose(ctx, m, k)) {
      uint64_t l = p_level(ctx, cm, ck);
      if (l + 1 > level) level = l + 1;
    }
  }
  ctx.level_memo.emplace(key, level);
  return level;
}

inline bool is_p_series(SeriesContext& ctx, uint64_t m, uint64_t k, uint64_t p) {
  return p_level(ctx, m, k) <= p;
}

// S1 before S0 in the well-founded series comparison: the start substitutions
// are Ackermann-dominated and either the index sequences first differ with
// the S0 entry larger, or S1 is a strictly shorter prefix-equal series.
inline bool precedes(SeriesContext& ctx, uint64_t m1, uint64_t k1, uint64_t m0, uint64_t k0) {
  if (!is_valid_series(ctx, m0, k0) || !is_valid_series(ctx, m1, k1))
    throw SeriesError("precedes: spans must be series");
  if (!sqsub_a(ctx.step(m1).subst, ctx.step(m0).subst)) return false;
  uint64_t l0 = k0 - m0, l1 = k1 - m1;
  uint64_t lmin = l0 < l1 ? l0 : l1;
  for (uint64_t i = 0; i < lmin; ++i) {
    int c = iv_cmp(ctx.step(m0 + i).an, ctx.step(m1 + i).an);
    if (c > 0) return true;
    if (c < 0) return false;
  }
  return l1 < l0;
}

// o of a span: the positional index ordinal on singletons, and the base-2
// normal-form sum over the decomposition otherwise. Components must deliver
// strictly decreasing o-values; failures are recorded, never masked.
inline const Ordinal& o_value(SeriesContext& ctx, uint64_t m, uint64_t k) {
  ctx.check_range(m, k);
  auto key = std::make_pair(m, k);
  auto it = ctx.o_memo.find(key);
  if (it != ctx.o_memo.end()) return it->second;
  Ordinal o;
  if (k == m + 1) {
    o = index_ordinal(ctx.step(m).an);
  } else {
    auto comps = decompose(ctx, m, k);
    std::vector<Ordinal> os;
    os.reserve(comps.size());
    for (const auto& [cm, ck] : comps) os.push_back(o_value(ctx, cm, ck));
    for (std::size_t j = 0; j + 1 < os.size(); ++j)
      if (!(os[j] > os[j + 1]))
        ctx.exponent_violations.push_back(SeriesContext::ExponentViolation{m, k, j});
    for (const Ordinal& c : os) o = ord_add(o, two_pow(c));
  }
  return ctx.o_memo.emplace(key, std::move(o)).first->second;
}

struct DecompositionNode {
  uint64_t m = 0, k = 0;
  uint64_t rk = 0;
  bool section = false;
  uint64_t level = 0;
  Ordinal o;
  std::vector<DecompositionNode> children;
};

inline DecompositionNode decomposition_tree(SeriesContext& ctx, uint64_t m, uint64_t k) {
  DecompositionNode node;
  node.m = m;
  node.k = k;
  node.rk = series_rank(ctx, m, k);
  node.section = is_section(ctx, m, k);
  node.level = p_level(ctx, m, k);
  node.o = o_value(ctx, m, k);
  if (k > m + 1)
    for (const auto& [cm, ck] : decompose(ctx, m, k)) node.children.push_back(decomposition_tree(ctx, cm, ck));
  return node;
}

struct CertificateEntry {
  uint64_t n = 0;     // n_i
  uint64_t beta = 0;  // least rank occurring after n_i (before the solution)
  Ordinal o;          // o of the span [n_i, n_{i+1})
};

// Cut points n_0 = 0 < n_1 < ... where each n_{i+1} is the first later
// nonsolving step attaining the least remaining rank; the attached o-values
// must decrease strictly.
inline std::vector<CertificateEntry> termination_certificate(SeriesContext& ctx, const Trace& t) {
  if (!t.solved()) throw NotTerminated("termination certificate requires a solved trace");
  uint64_t h = t.solution_index();
  std::vector<CertificateEntry> out;
  uint64_t ni = 0;
  while (ni + 1 < h) {
    uint64_t beta = UINT64_MAX, next = 0;
    for (uint64_t n = ni + 1; n < h; ++n) {
      if (ctx.r(n) < beta) {
        beta = ctx.r(n);
        next = n;
      }
    }
    out.push_back(CertificateEntry{ni, beta, o_value(ctx, ni, next)});
    ni = next;
  }
  return out;
}

}  // namespace epsforge
