#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "epsforge/bound.hpp"
#include "epsforge/hprocess.hpp"
#include "epsforge/series.hpp"
#include "epsforge/sexpr.hpp"

namespace epsforge {

struct CheckResult {
  std::string name;
  uint64_t checked = 0;
  uint64_t violation_count = 0;
  std::vector<std::string> samples;  // first few violation descriptions

  CheckResult() = default;
  explicit CheckResult(std::string n) : name(std::move(n)) {}

  bool passed() const { return violation_count == 0; }

  void violation(const std::string& what) {
    ++violation_count;
    if (samples.size() < 16) samples.push_back(what);
  }
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed()) return false;
    return true;
  }

  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

inline VerifyReport merge_reports(const std::vector<VerifyReport>& reports) {
  VerifyReport out;
  for (const auto& rep : reports) {
    for (const auto& c : rep.checks) {
      CheckResult* dst = nullptr;
      for (auto& existing : out.checks)
        if (existing.name == c.name) dst = &existing;
      if (!dst) {
        out.checks.push_back(CheckResult(c.name));
        dst = &out.checks.back();
      }
      dst->checked += c.checked;
      dst->violation_count += c.violation_count;
      for (const auto& s : c.samples)
        if (dst->samples.size() < 16) dst->samples.push_back(s);
    }
  }
  return out;
}

struct VerifyOptions {
  uint64_t budget = kDefaultBudget;
  ValueRule rule = ValueRule::paper;
  std::size_t pair_cap = 200000;  // sampling cap for the quadratic/cubic span enumerations
  uint64_t sample_seed = 0xE55ED;
};

struct VerifyRun {
  VerifyReport report;
  Trace trace;
  BoundResult bound;
  bool bound_computed = false;
};

namespace detail {

struct Span {
  uint64_t m = 0, k = 0;
  uint64_t rk = 0;
  bool section = false;
};

class Harness {
 public:
  Harness(const Trace& trace, SeriesContext& ctx, const VerifyOptions& opt)
      : t_(trace), ctx_(ctx), opt_(opt), h_(trace.solution_index()), rank_bound_(trace.cr.rank_bound()) {
    collect_spans();
    build_sqsub();
  }

  // All valid spans [m,k) inside the nonsolving prefix, with rk and section flags.
  const std::vector<Span>& spans() const { return spans_; }

  bool sq(uint64_t i, uint64_t j) const { return sqsub_[i * (h_ + 1) + j]; }  // S^i below S^j

  uint64_t h() const { return h_; }
  uint64_t rank_bound() const { return rank_bound_; }

  // ---- checks ----

  CheckResult value_progress() const {
    CheckResult c{"value-progress"};
    c.checked = h_;
    for (const auto& v : check_correctness(t_))
      c.violation("n=" + std::to_string(v.n) + ": new value " + std::to_string(v.vn) +
                  " must be nonzero and below stored " + std::to_string(v.stored));
    return c;
  }

  // Ackermann domination of start states forces index monotonicity, and equal
  // indices force equal selections plus domination one step later.
  CheckResult index_monotonicity() const {
    CheckResult c{"index-monotonicity"};
    for (uint64_t n = 0; n < h_; ++n) {
      for (uint64_t m = 0; m < h_; ++m) {
        if (n == m || !sq(m, n)) continue;
        ++c.checked;
        const TraceStep& sn = t_.steps[n];
        const TraceStep& sm = t_.steps[m];
        int cmp = iv_cmp(sn.an, sm.an);
        if (cmp < 0) {
          c.violation("n=" + std::to_string(n) + " m=" + std::to_string(m) + ": a_n < a_m");
          continue;
        }
        if (cmp != 0) continue;
        if (*sn.selected != *sm.selected || *sn.en != *sm.en || *sn.vn != *sm.vn)
          c.violation("n=" + std::to_string(n) + " m=" + std::to_string(m) +
                      ": equal indices but different selections");
        if (!sqsub_a(t_.steps[m + 1].subst, t_.steps[n + 1].subst))
          c.violation("n=" + std::to_string(n) + " m=" + std::to_string(m) +
                      ": successors lose Ackermann domination");
        if (rank_of(t_.steps[m + 1].subst) != rank_of(t_.steps[n + 1].subst))
          c.violation("n=" + std::to_string(n) + " m=" + std::to_string(m) + ": successor ranks differ");
      }
    }
    return c;
  }

  // Finite spot check of the pointwise reading of Ackermann domination over
  // the closed eps terms of Cr and both domains.
  CheckResult ack_domination() const {
    CheckResult c{"ack-domination"};
    for (uint64_t n = 0; n <= h_; ++n) {
      for (uint64_t m = 0; m <= h_; ++m) {
        if (n == m || !sq(m, n)) continue;
        ++c.checked;
        const Substitution& sn = t_.steps[n].subst;
        const Substitution& sm = t_.steps[m].subst;
        std::vector<Expr> probes = t_.cr.cl_eps();
        for (const auto& [e, v] : sn) probes.push_back(e);
        for (const auto& [e, v] : sm) probes.push_back(e);
        for (const Expr& e : probes) {
          if (!ack_leq(reduce_nat(e, sm), reduce_nat(e, sn))) {
            c.violation("n=" + std::to_string(n) + " m=" + std::to_string(m) + " e=" + print_expr(e) +
                        ": |e| not Ackermann-dominated");
            break;
          }
        }
      }
    }
    return c;
  }

  // Consecutive sections with r_{m0} <= r_{m1} < rk(S0) are Ackermann-related
  // and ordered by the series comparison.
  CheckResult consecutive_sections() {
    CheckResult c{"consecutive-sections"};
    for (uint64_t m0 = 0; m0 < h_; ++m0) {
      uint64_t rk0 = rank_bound_;  // rk of [m0, m1), maintained incrementally
      for (uint64_t m1 = m0 + 1; m1 < h_; ++m1) {
        if (m1 > m0 + 1) rk0 = std::min(rk0, ctx_.r(m1 - 1));
        if (!(ctx_.r(m0) <= ctx_.r(m1) && ctx_.r(m1) < rk0)) continue;
        uint64_t rk1 = rank_bound_;
        for (uint64_t k1 = m1 + 1; k1 <= h_; ++k1) {
          if (k1 > m1 + 1) rk1 = std::min(rk1, ctx_.r(k1 - 1));
          if (!(ctx_.r(m1) < rk1)) continue;  // the right span must be a section
          ++c.checked;
          if (!sq(m1, m0)) {
            c.violation(span_pair(m0, m1, m1, k1) + ": start states not Ackermann-related");
            continue;
          }
          if (!precedes(ctx_, m1, k1, m0, m1))
            c.violation(span_pair(m0, m1, m1, k1) + ": right section does not precede the left");
        }
      }
    }
    return c;
  }

  // Whenever one strict section precedes another, its o-value must be
  // strictly smaller.
  CheckResult precedence_o_descent() {
    CheckResult c{"precedence-o-descent"};
    std::vector<const Span*> sections;
    for (const Span& s : spans_)
      if (s.section) sections.push_back(&s);
    uint64_t total = sections.size() * sections.size();
    sample_pairs(total, [&](uint64_t pair_idx) {
      const Span& s0 = *sections[pair_idx / sections.size()];
      const Span& s1 = *sections[pair_idx % sections.size()];
      if (s0.m == s1.m && s0.k == s1.k) return;
      if (!precedes(ctx_, s1.m, s1.k, s0.m, s0.k)) return;
      ++c.checked;
      if (!(o_value(ctx_, s1.m, s1.k) < o_value(ctx_, s0.m, s0.k)))
        c.violation(span_pair(s0.m, s0.k, s1.m, s1.k) + ": no strict o-descent");
    });
    return c;
  }

  // nd of a concatenation matches the cut-and-join of the parts' nd sets.
  CheckResult nd_concatenation() {
    CheckResult c{"nd-concatenation"};
    each_consecutive([&](const Span& s0, const Span& s1) {
      if (!(ctx_.r(s0.m) <= ctx_.r(s1.m))) return;
      ++c.checked;
      uint64_t cut = s0.m;
      for (uint64_t n = s0.m; n < s0.k; ++n)
        if (ctx_.r(n) <= ctx_.r(s1.m)) cut = n;
      std::vector<uint64_t> expected;
      for (uint64_t n : nd_set(ctx_, s0.m, s0.k))
        if (n <= cut) expected.push_back(n);
      for (uint64_t n : nd_set(ctx_, s1.m, s1.k)) expected.push_back(n);
      if (nd_set(ctx_, s0.m, s1.k) != expected)
        c.violation(span_pair(s0.m, s0.k, s1.m, s1.k) + ": nd of concatenation mismatch");
    });
    return c;
  }

  // Rank-counting facts: a proper p-section shows at least p+1 distinct
  // ranks, a proper p-series at least p, no series from step 0 reaches the
  // rank bound, decompositions are sections with nondecreasing start ranks,
  // and overlapping unions stay within the larger level.
  CheckResult p_series_counting() {
    CheckResult c{"p-series-counting"};
    for (const Span& s : spans_) {
      ++c.checked;
      uint64_t level = p_level(ctx_, s.m, s.k);
      std::set<uint64_t> ranks;
      for (uint64_t n = s.m; n < s.k; ++n) ranks.insert(ctx_.r(n));
      if (s.section && ranks.size() < level + 1)
        c.violation(span_str(s.m, s.k) + ": proper " + std::to_string(level) + "-section with only " +
                    std::to_string(ranks.size()) + " ranks");
      if (ranks.size() < level)
        c.violation(span_str(s.m, s.k) + ": proper " + std::to_string(level) + "-series with only " +
                    std::to_string(ranks.size()) + " ranks");
      if (s.m == 0 && level >= rank_bound_)
        c.violation(span_str(s.m, s.k) + ": series from step 0 reaches level " + std::to_string(level));
      auto comps = decompose(ctx_, s.m, s.k);
      for (std::size_t j = 0; j < comps.size(); ++j) {
        if (!is_section(ctx_, comps[j].first, comps[j].second))
          c.violation(span_str(s.m, s.k) + ": component " + std::to_string(j) + " is not a section");
        if (j + 1 < comps.size() && ctx_.r(comps[j].first) > ctx_.r(comps[j + 1].first))
          c.violation(span_str(s.m, s.k) + ": component start ranks decrease at " + std::to_string(j));
      }
    }
    uint64_t total = spans_.size() * spans_.size();
    sample_pairs(total, [&](uint64_t pair_idx) {
      const Span& a = spans_[pair_idx / spans_.size()];
      const Span& b = spans_[pair_idx % spans_.size()];
      if (a.k <= b.m || b.k <= a.m) return;  // no overlap
      uint64_t m = std::min(a.m, b.m), k = std::max(a.k, b.k);
      if (m == a.m && k == a.k) return;  // one contains the other trivially
      ++c.checked;
      uint64_t p = std::max(p_level(ctx_, a.m, a.k), p_level(ctx_, b.m, b.k));
      if (!is_valid_series(ctx_, m, k))
        c.violation(span_pair(a.m, a.k, b.m, b.k) + ": overlapping union is not a series");
      else if (p_level(ctx_, m, k) > p)
        c.violation(span_pair(a.m, a.k, b.m, b.k) + ": union level exceeds " + std::to_string(p));
    });
    return c;
  }

  // A p-series followed by a (p+1)-series concatenates to a (p+1)-series.
  CheckResult series_concatenation() {
    CheckResult c{"series-concatenation"};
    each_consecutive([&](const Span& s0, const Span& s1) {
      if (!(ctx_.r(s0.m) <= ctx_.r(s1.m))) return;
      ++c.checked;
      uint64_t l0 = p_level(ctx_, s0.m, s0.k);
      uint64_t l1 = p_level(ctx_, s1.m, s1.k);
      uint64_t p = std::max(l0, l1 >= 1 ? l1 - 1 : 0);
      if (!is_valid_series(ctx_, s0.m, s1.k))
        c.violation(span_pair(s0.m, s0.k, s1.m, s1.k) + ": concatenation is not a series");
      else if (p_level(ctx_, s0.m, s1.k) > p + 1)
        c.violation(span_pair(s0.m, s0.k, s1.m, s1.k) + ": concatenation exceeds level " +
                    std::to_string(p + 1));
    });
    return c;
  }

  // Consecutive series with nondecreasing start rank lose o strictly.
  CheckResult consecutive_o_descent() {
    CheckResult c{"consecutive-o-descent"};
    each_consecutive([&](const Span& s0, const Span& s1) {
      if (!(ctx_.r(s0.m) <= ctx_.r(s1.m))) return;
      ++c.checked;
      if (!(o_value(ctx_, s1.m, s1.k) < o_value(ctx_, s0.m, s0.k)))
        c.violation(span_pair(s0.m, s0.k, s1.m, s1.k) + ": no strict o-descent");
    });
    return c;
  }

  // The (p,n) table: spans [n, M(p,n)) are maximal normal p-series, the
  // table is monotone along a span, and every entry satisfies the defining
  // case split recomputed from scratch.
  CheckResult bound_normality(const BoundResult& bound) {
    CheckResult c{"bound-normality"};
    for (const auto& [pn, k] : bound.m_table) {
      auto [p, n] = pn;
      if (n >= h_) continue;  // solving row
      ++c.checked;
      std::string at = "(p=" + std::to_string(p) + ",n=" + std::to_string(n) + ")";
      if (!(n < k && k <= h_)) {
        c.violation(at + ": M=" + std::to_string(k) + " outside (n, H]");
        continue;
      }
      if (!is_valid_series(ctx_, n, k)) {
        c.violation(at + ": [n,M) is not a series");
        continue;
      }
      if (p_level(ctx_, n, k) > p)
        c.violation(at + ": [n,M) has level " + std::to_string(p_level(ctx_, n, k)));
      for (uint64_t n2 = n; n2 < k; ++n2) {
        auto it = bound.m_table.find({p, n2});
        if (it != bound.m_table.end() && it->second > k)
          c.violation(at + ": M(p," + std::to_string(n2) + ") overshoots M(p,n)");
      }
    }
    for (const Span& s : spans_) {
      uint64_t level = p_level(ctx_, s.m, s.k);
      for (uint64_t p = level; p < rank_bound_; ++p) {
        ++c.checked;
        auto it = bound.m_table.find({p, s.m});
        if (it == bound.m_table.end() || it->second < s.k) {
          c.violation(span_str(s.m, s.k) + ": normal " + std::to_string(p) +
                      "-series extends past M(p,m)");
          break;
        }
      }
    }
    table_recurrence(bound, c);
    return c;
  }

  CheckResult solution_oracle(const BoundResult& bound) const {
    CheckResult c{"solution-index-oracle"};
    c.checked = 1;
    if (bound.h != h_)
      c.violation("H=" + std::to_string(bound.h) + " but direct iteration solves at " + std::to_string(h_));
    else if (!is_solving(t_.steps[h_].subst, t_.cr))
      c.violation("S^H fails an axiom");
    return c;
  }

  CheckResult descent_audit(const BoundResult& bound) const {
    CheckResult c{"descent-audit"};
    c.checked = bound.audit.calls;
    if (bound.audit.violation_count > 0)
      c.violation(std::to_string(bound.audit.violation_count) + " non-descending calls");
    std::size_t cap = rank_bound_ * t_.steps.size() + 1;
    if (bound.audit.max_depth > cap)
      c.violation("audit depth " + std::to_string(bound.audit.max_depth) + " exceeds cap " +
                  std::to_string(cap));
    for (const auto& e : bound.audit.entries) {
      bool strict = e.callee_p < e.caller_p || (e.callee_p == e.caller_p && e.callee_y < e.caller_y);
      if (!strict) {
        c.violation("logged call at " + e.site + " is not lexicographically decreasing");
        break;
      }
    }
    return c;
  }

  CheckResult rank_bounds() const {
    CheckResult c{"rank-bound"};
    for (const TraceStep& st : t_.steps) {
      ++c.checked;
      if (rank_of(st.subst) >= rank_bound_)
        c.violation("n=" + std::to_string(st.n) + ": rk(S) reaches the rank bound");
    }
    for (const Expr& inst : t_.cr.instances()) {
      ++c.checked;
      if (rank(inst) + 1 > rank_bound_) c.violation("axiom rank exceeds the rank bound");
    }
    return c;
  }

  CheckResult index_bounds() const {
    CheckResult c{"index-bound"};
    for (uint64_t n = 0; n < h_; ++n) {
      ++c.checked;
      if (!(index_ordinal(t_.steps[n].an) < t_.cr.ind_bound()))
        c.violation("n=" + std::to_string(n) + ": index reaches the bound");
      if (n >= 1 && !(iv_cmp(t_.steps[0].an, t_.steps[n].an) > 0))
        c.violation("n=" + std::to_string(n) + ": start index is not the unique maximum");
    }
    return c;
  }

  CheckResult certificate_descent() {
    CheckResult c{"certificate-descent"};
    auto cert = termination_certificate(ctx_, t_);
    Ordinal bound = tower(rank_bound_);
    for (std::size_t i = 0; i < cert.size(); ++i) {
      ++c.checked;
      if (!(cert[i].o < bound))
        c.violation("entry " + std::to_string(i) + ": o reaches w_RANK");
      if (i + 1 < cert.size() && !(cert[i + 1].o < cert[i].o))
        c.violation("entry " + std::to_string(i + 1) + ": certificate o-values fail to decrease");
    }
    return c;
  }

  CheckResult o_exponents() const {
    CheckResult c{"o-exponents"};
    c.checked = ctx_.o_memo.size();
    for (const auto& v : ctx_.exponent_violations)
      c.violation("span [" + std::to_string(v.m) + "," + std::to_string(v.k) + "): component " +
                  std::to_string(v.j) + " fails strict exponent descent");
    return c;
  }

 private:
  void collect_spans() {
    for (uint64_t m = 0; m < h_; ++m) {
      uint64_t rk = rank_bound_;
      for (uint64_t k = m + 1; k <= h_; ++k) {
        if (k > m + 1) rk = std::min(rk, ctx_.r(k - 1));
        else rk = rank_bound_;
        if (ctx_.r(m) <= rk) spans_.push_back(Span{m, k, rk, ctx_.r(m) < rk});
      }
    }
    by_m_.assign(h_ + 1, {});
    for (std::size_t i = 0; i < spans_.size(); ++i) by_m_[spans_[i].m].push_back(i);
  }

  void build_sqsub() {
    sqsub_.assign((h_ + 1) * (h_ + 1), false);
    for (uint64_t i = 0; i <= h_; ++i)
      for (uint64_t j = 0; j <= h_; ++j)
        sqsub_[i * (h_ + 1) + j] = sqsub_a(t_.steps[i].subst, t_.steps[j].subst);
  }

  template <class F>
  void each_consecutive(F&& f) {
    uint64_t total = 0;
    for (const Span& s0 : spans_)
      if (s0.k <= h_) total += by_m_[s0.k].size();
    if (total <= opt_.pair_cap) {
      for (const Span& s0 : spans_)
        for (std::size_t j : by_m_[s0.k]) f(s0, spans_[j]);
      return;
    }
    std::mt19937_64 rng(opt_.sample_seed);
    for (std::size_t i = 0; i < opt_.pair_cap; ++i) {
      const Span& s0 = spans_[rng() % spans_.size()];
      const auto& next = by_m_[s0.k];
      if (next.empty()) continue;
      f(s0, spans_[next[rng() % next.size()]]);
    }
  }

  template <class F>
  void sample_pairs(uint64_t total, F&& f) {
    if (total == 0) return;
    if (total <= opt_.pair_cap) {
      for (uint64_t i = 0; i < total; ++i) f(i);
      return;
    }
    std::mt19937_64 rng(opt_.sample_seed);
    for (uint64_t i = 0; i < opt_.pair_cap; ++i) f(rng() % total);
  }

  void table_recurrence(const BoundResult& bound, CheckResult& c) {
    auto fetch = [&](uint64_t pp, uint64_t nn) -> const uint64_t* {
      auto it = bound.m_table.find({pp, nn});
      return it == bound.m_table.end() ? nullptr : &it->second;
    };
    for (const auto& [pn, m] : bound.m_table) {
      auto [p, n] = pn;
      ++c.checked;
      std::string at = "(p=" + std::to_string(p) + ",n=" + std::to_string(n) + ")";
      if (p == 0) {
        if (m != n + 1) c.violation(at + ": base row must be n+1");
        continue;
      }
      if (n == h_) {
        if (m != n) c.violation(at + ": solving row must be n");
        continue;
      }
      try {
        const uint64_t* kp = fetch(p - 1, n);
        if (!kp) throw SeriesError("missing table entry");
        uint64_t k = *kp;
        Ordinal e_n = o_value(ctx_, n, k);
        const uint64_t* kkp = fetch(p - 1, k);
        if (!kkp) throw SeriesError("missing table entry");
        Ordinal e_k = k == *kkp ? Ordinal() : o_value(ctx_, k, *kkp);
        uint64_t expected;
        if (!(e_k < e_n))
          expected = k;
        else if (ctx_.r(k) < ctx_.r(n))
          expected = k;
        else {
          const uint64_t* ep = fetch(p, k);
          if (!ep) throw SeriesError("missing table entry");
          expected = *ep;
        }
        if (m != expected)
          c.violation(at + ": table entry " + std::to_string(m) + " disagrees with the case split (" +
                      std::to_string(expected) + ")");
      } catch (const std::exception& e) {
        c.violation(at + ": case split not checkable: " + e.what());
      }
    }
  }

  static std::string span_str(uint64_t m, uint64_t k) {
    return "[" + std::to_string(m) + "," + std::to_string(k) + ")";
  }

  static std::string span_pair(uint64_t m0, uint64_t k0, uint64_t m1, uint64_t k1) {
    return span_str(m0, k0) + "+" + span_str(m1, k1);
  }

  const Trace& t_;
  SeriesContext& ctx_;
  const VerifyOptions& opt_;
  uint64_t h_;
  uint64_t rank_bound_;
  std::vector<Span> spans_;
  std::vector<std::vector<std::size_t>> by_m_;
  std::vector<bool> sqsub_;
};

}  // namespace detail

// Run the process and every trace-level check; the o-exponent check comes
// last so it sees all o-values computed by the other checks.
inline VerifyRun verify_instance(const CriticalFormulaSet& cr, const VerifyOptions& opt = {}) {
  VerifyRun run;
  run.trace = run_h_process(cr, opt.budget, opt.rule);
  if (run.trace.budget_exceeded) {
    CheckResult c{"termination"};
    c.checked = 1;
    c.violation("no solution within budget " + std::to_string(opt.budget));
    run.report.checks.push_back(std::move(c));
    return run;
  }

  SeriesContext ctx(run.trace);
  detail::Harness hx(run.trace, ctx, opt);

  run.report.checks.push_back(hx.value_progress());
  run.report.checks.push_back(hx.index_monotonicity());
  run.report.checks.push_back(hx.ack_domination());
  run.report.checks.push_back(hx.consecutive_sections());
  run.report.checks.push_back(hx.precedence_o_descent());
  run.report.checks.push_back(hx.nd_concatenation());
  run.report.checks.push_back(hx.p_series_counting());
  run.report.checks.push_back(hx.series_concatenation());
  run.report.checks.push_back(hx.consecutive_o_descent());

  std::string bound_error;
  try {
    run.bound = h_bound(cr, opt.budget, opt.rule);
    run.bound_computed = true;
  } catch (const std::exception& e) {
    bound_error = e.what();
  }
  if (run.bound_computed) {
    run.report.checks.push_back(hx.bound_normality(run.bound));
    run.report.checks.push_back(hx.solution_oracle(run.bound));
    run.report.checks.push_back(hx.descent_audit(run.bound));
  } else {
    CheckResult c{"solution-index-oracle"};
    c.checked = 1;
    c.violation("bound engine failed: " + bound_error);
    run.report.checks.push_back(std::move(c));
  }

  run.report.checks.push_back(hx.rank_bounds());
  run.report.checks.push_back(hx.index_bounds());
  run.report.checks.push_back(hx.certificate_descent());
  run.report.checks.push_back(hx.o_exponents());
  return run;
}

}  // namespace epsforge
