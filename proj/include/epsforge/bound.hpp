#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "epsforge/errors.hpp"
#include "epsforge/hprocess.hpp"
#include "epsforge/ordinal.hpp"
#include "epsforge/series.hpp"

namespace epsforge {

struct DescentAuditEntry {
  std::string site;
  uint64_t caller_p = 0;
  Ordinal caller_y;
  uint64_t callee_p = 0;
  Ordinal callee_y;
  bool ok = true;
};

// Every recursive unfolding of a guarded recursion lands here with its
// measure pair; a completed computation must have zero failing verdicts.
struct DescentAuditLog {
  std::vector<DescentAuditEntry> entries;
  uint64_t calls = 0;
  std::size_t max_depth = 0;
  uint64_t violation_count = 0;

  void log(std::string site, uint64_t cp, Ordinal cy, uint64_t qp, Ordinal qy, bool ok) {
    ++calls;
    if (!ok) ++violation_count;
    entries.push_back(DescentAuditEntry{std::move(site), cp, std::move(cy), qp, std::move(qy), ok});
  }

  void depth(std::size_t d) {
    if (d > max_depth) max_depth = d;
  }
};

using NatFn = std::function<uint64_t(uint64_t)>;

// f(x) = g(x)               if not d(x) <: x
//      = h(x, f(d(x)))      otherwise,
// with <: a supplied well-ordering of argument codes. Each unfolding logs its
// descent check; the depth cap is the defensive trip wire for ill-founded
// orderings.
inline NatFn alpha_rec(NatFn g, std::function<uint64_t(uint64_t, uint64_t)> h, NatFn d,
                       std::function<bool(uint64_t, uint64_t)> less, DescentAuditLog* audit = nullptr,
                       std::size_t depth_cap = 100000) {
  struct State {
    NatFn g;
    std::function<uint64_t(uint64_t, uint64_t)> h;
    NatFn d;
    std::function<bool(uint64_t, uint64_t)> less;
    DescentAuditLog* audit;
    std::size_t cap;

    uint64_t eval(uint64_t x, std::size_t depth) const {
      if (audit) audit->depth(depth);
      if (depth > cap) throw DescentViolation("alpha_rec: recursion depth cap exceeded");
      uint64_t dx = d(x);
      if (!less(dx, x)) return g(x);
      if (audit) audit->log("alpha-rec", 0, Ordinal::finite(x), 0, Ordinal::finite(dx), true);
      return h(x, eval(dx, depth + 1));
    }
  };
  auto st = std::make_shared<State>(State{std::move(g), std::move(h), std::move(d), std::move(less), audit, depth_cap});
  return [st](uint64_t x) { return st->eval(x, 0); };
}

// External recursion: descent is guarded on an ordinal measure of the
// argument rather than the argument itself.
inline NatFn external_rec(NatFn g, std::function<uint64_t(uint64_t, uint64_t)> h, NatFn d,
                          std::function<Ordinal(uint64_t)> e, DescentAuditLog* audit = nullptr,
                          std::size_t depth_cap = 100000) {
  struct State {
    NatFn g;
    std::function<uint64_t(uint64_t, uint64_t)> h;
    NatFn d;
    std::function<Ordinal(uint64_t)> e;
    DescentAuditLog* audit;
    std::size_t cap;

    uint64_t eval(uint64_t x, std::size_t depth) const {
      if (audit) audit->depth(depth);
      if (depth > cap) throw DescentViolation("external_rec: recursion depth cap exceeded");
      uint64_t dx = d(x);
      Ordinal mx = e(x), mdx = e(dx);
      if (!(mdx < mx)) return g(x);
      if (audit) audit->log("external-rec", 0, std::move(mx), 0, std::move(mdx), true);
      return h(x, eval(dx, depth + 1));
    }
  };
  auto st = std::make_shared<State>(State{std::move(g), std::move(h), std::move(d), std::move(e), audit, depth_cap});
  return [st](uint64_t x) { return st->eval(x, 0); };
}

struct BoundResult {
  uint64_t h = 0;
  std::map<std::pair<uint64_t, uint64_t>, uint64_t> m_table;   // (p,n) -> M(p,n)
  std::map<std::pair<uint64_t, uint64_t>, Ordinal> ep_values;  // (p,n) -> e_p(n) for nonsolving n
  DescentAuditLog audit;
};

// Nested recursion computing M(p,n) through M'(p,n,y), y seeded at w_(RANK+2).
// Every recursive call is audited against strict lexicographic descent of
// (p, y). The trace is extended lazily, only as far as the recursion looks.
class MEngine {
 public:
  explicit MEngine(HProcess& proc) : proc_(proc), ctx_(proc.steps(), proc.rank_bound()) {}

  uint64_t m_bound(uint64_t p, uint64_t n) { return m_prime(p, n, seed(), 0); }

  Ordinal seed() const { return tower(proc_.rank_bound() + 2); }

  const DescentAuditLog& audit() const { return audit_; }
  SeriesContext& ctx() { return ctx_; }

  // o of the span [a,b); 0 for the empty span (reached when the recursion
  // hits the solving frontier).
  Ordinal span_o(uint64_t a, uint64_t b) {
    if (a == b) return Ordinal();
    proc_.ensure(b - 1);
    return o_value(ctx_, a, b);
  }

 private:
  struct KeyLess {
    bool operator()(const std::tuple<uint64_t, uint64_t, Ordinal>& a,
                    const std::tuple<uint64_t, uint64_t, Ordinal>& b) const {
      if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
      if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
      return ord_cmp(std::get<2>(a), std::get<2>(b)) < 0;
    }
  };

  uint64_t call(uint64_t p, const Ordinal& y, uint64_t qp, const Ordinal& qy, const char* site,
                uint64_t n, std::size_t depth) {
    bool ok = qp < p || (qp == p && qy < y);
    audit_.log(site, p, y, qp, qy, ok);
    if (!ok) throw DescentViolation(std::string("M': non-descending call at ") + site);
    return m_prime(qp, n, qy, depth + 1);
  }

  uint64_t m_prime(uint64_t p, uint64_t n, const Ordinal& y, std::size_t depth) {
    audit_.depth(depth);
    proc_.ensure(n);
    auto key = std::make_tuple(p, n, y);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    uint64_t result;
    if (p == 0) {
      result = n + 1;
    } else if (ctx_.step(n).solving) {
      result = n;
    } else {
      uint64_t q = p - 1;
      uint64_t a = call(p, y, q, y, "inner", n, depth);
      uint64_t b = call(p, y, q, y, "frontier", a, depth);
      Ordinal z = span_o(a, b);
      if (!(z < y)) {
        result = a;  // budget guard not passed
      } else if (ctx_.r(a) < ctx_.r(n)) {
        result = a;  // rank dropped below the start
      } else {
        result = call(p, y, p, z, "descend", a, depth);
      }
    }
    memo_.emplace(std::move(key), result);
    return result;
  }

  HProcess& proc_;
  SeriesContext ctx_;
  std::map<std::tuple<uint64_t, uint64_t, Ordinal>, uint64_t, KeyLess> memo_;
  DescentAuditLog audit_;
};

// H(Cr) with the full (p,n) table, the e_p values and the descent audit.
// Asserts that S^H solves Cr and that H equals the first solving index of
// the directly iterated process.
inline BoundResult h_bound(const CriticalFormulaSet& cr, uint64_t budget = kDefaultBudget,
                           ValueRule rule = ValueRule::paper) {
  HProcess proc(cr, budget, rule);
  MEngine engine(proc);
  uint64_t rank_bound = cr.rank_bound();
  BoundResult res;
  res.h = engine.m_bound(rank_bound - 1, 0);

  uint64_t direct = proc.run_to_solution();
  if (res.h != direct)
    throw SolutionMismatch("H = " + std::to_string(res.h) + " but direct iteration solves at " +
                           std::to_string(direct));
  if (!is_solving(proc.steps()[res.h].subst, cr))
    throw SolutionMismatch("S^H fails to validate some axiom");

  for (uint64_t p = 0; p < rank_bound; ++p)
    for (uint64_t n = 0; n <= res.h; ++n) res.m_table[{p, n}] = engine.m_bound(p, n);
  for (const auto& [pn, m] : res.m_table) {
    if (proc.steps()[pn.second].solving) continue;
    res.ep_values[pn] = engine.span_o(pn.second, m);
  }
  res.audit = engine.audit();
  return res;
}

}  // namespace epsforge
