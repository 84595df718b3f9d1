// Acceptance suite: every criterion prints one [PASS]/[FAIL] line and is
// asserted. The corpus is the deterministic seed-1 batch of 50 instances.

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <set>

#include "epsforge/epsforge.hpp"
#include "ordinal_oracle.hpp"

using namespace epsforge;
using Clock = std::chrono::steady_clock;

namespace {

struct Instance {
  std::string text;
  CriticalFormulaSet cr;
  VerifyRun run;
  double seconds = 0.0;
};

struct CorpusState {
  Corpus corpus;
  std::vector<Instance> instances;
  double total_seconds = 0.0;
};

const CorpusState& corpus_state() {
  static CorpusState state = [] {
    CorpusState st;
    st.corpus = gen_corpus(1, 50);
    auto t0 = Clock::now();
    for (const std::string& text : st.corpus.files) {
      Instance inst;
      inst.text = text;
      inst.cr = parse_critical_set(text);
      auto i0 = Clock::now();
      inst.run = verify_instance(inst.cr);
      inst.seconds = std::chrono::duration<double>(Clock::now() - i0).count();
      st.instances.push_back(std::move(inst));
    }
    st.total_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return st;
  }();
  return state;
}

void report(int criterion, const char* what, bool ok) {
  std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << what << std::endl;
}

// On failure, leave a self-contained reproduction bundle next to the test.
void emit_bundle(std::size_t idx, const Instance& inst) {
  char name[64];
  std::snprintf(name, sizeof name, "counterexample_%02zu.json", idx);
  ordered_json bundle;
  bundle["cr"] = inst.text;
  bundle["trace"] = trace_to_jsonl(inst.run.trace);
  ordered_json checks = ordered_json::array();
  for (const auto& c : inst.run.report.checks)
    if (!c.passed())
      checks.push_back(ordered_json{{"name", c.name}, {"violations", c.violation_count}, {"samples", c.samples}});
  bundle["failed_checks"] = std::move(checks);
  std::ofstream out(name);
  out << bundle.dump(2) << "\n";
  std::cerr << "counterexample bundle: " << name << "\n";
}

bool check_named(const char* name, bool emit_on_fail = true) {
  bool ok = true;
  const auto& st = corpus_state();
  for (std::size_t i = 0; i < st.instances.size(); ++i) {
    const CheckResult* c = st.instances[i].run.report.find(name);
    if (c == nullptr || !c->passed()) {
      ok = false;
      if (emit_on_fail) emit_bundle(i, st.instances[i]);
    }
  }
  return ok;
}

}  // namespace

TEST_CASE("corpus quality") {
  const auto& st = corpus_state();
  REQUIRE(st.instances.size() == 50);
  // regeneration is byte-identical
  Corpus again = gen_corpus(1, 50);
  bool identical = again.files == st.corpus.files;
  CHECK(identical);
  // every instance solves, and nesting is actually exercised
  for (const auto& inst : st.instances) CHECK(inst.run.trace.solved());
  CHECK(st.corpus.stats.rank2_instances >= 10);
  // the generated matrices cover the whole term/connective vocabulary
  std::set<Expr::Kind> seen;
  for (const auto& inst : st.instances)
    for (const auto& cf : inst.cr.axioms()) {
      for_each_subexpr(cf.matrix, [&](const Expr& e) { seen.insert(e.kind()); });
      for_each_subexpr(cf.witness, [&](const Expr& e) { seen.insert(e.kind()); });
    }
  for (Expr::Kind k : {Expr::Kind::Plus, Expr::Kind::Times, Expr::Kind::Monus, Expr::Kind::Eq,
                       Expr::Kind::Lt, Expr::Kind::Not, Expr::Kind::And, Expr::Kind::Or,
                       Expr::Kind::Imp, Expr::Kind::Eps})
    CHECK(seen.count(k) == 1);
}

TEST_CASE("criterion 1: exact solution index against direct iteration") {
  const auto& st = corpus_state();
  bool ok = true;
  for (std::size_t i = 0; i < st.instances.size(); ++i) {
    const Instance& inst = st.instances[i];
    bool this_ok = inst.run.bound_computed && inst.run.trace.solved() &&
                   inst.run.bound.h == inst.run.trace.solution_index() &&
                   is_solving(inst.run.trace.steps[inst.run.bound.h].subst, inst.cr) &&
                   inst.seconds < 10.0;
    if (!this_ok) {
      ok = false;
      emit_bundle(i, inst);
    }
  }
  ok = ok && st.total_seconds < 300.0;
  report(1, "H equals the first solving index on all 50 instances, within time limits", ok);
  CHECK(ok);
}

TEST_CASE("criterion 2: value progress under the literal value rule") {
  bool ok = check_named("value-progress");
  report(2, "no value-progress violations across all corpus traces", ok);
  CHECK(ok);
}

TEST_CASE("criterion 3: trace invariant suite") {
  bool ok = true;
  for (const char* name :
       {"index-monotonicity", "consecutive-sections", "precedence-o-descent", "nd-concatenation",
        "p-series-counting", "series-concatenation", "consecutive-o-descent", "bound-normality"})
    ok = check_named(name) && ok;
  report(3, "index monotonicity, section ordering, o-descent, nd/series structure, bound table", ok);
  CHECK(ok);
}

TEST_CASE("criterion 4: descent audit of the nested recursion") {
  const auto& st = corpus_state();
  bool ok = check_named("descent-audit");
  for (const auto& inst : st.instances) {
    if (!inst.run.bound_computed) continue;
    std::size_t cap = inst.cr.rank_bound() * inst.run.trace.steps.size() + 1;
    if (inst.run.bound.audit.max_depth > cap) ok = false;
    if (inst.run.bound.audit.violation_count != 0) ok = false;
  }
  report(4, "every recursive call decreases (p, y) lexicographically, depth within cap", ok);
  CHECK(ok);
}

TEST_CASE("criterion 5: termination certificates") {
  const auto& st = corpus_state();
  bool ok = check_named("certificate-descent");
  // strictness and the tower bound, re-derived here
  for (const auto& inst : st.instances) {
    SeriesContext ctx(inst.run.trace);
    auto cert = termination_certificate(ctx, inst.run.trace);
    Ordinal bound = tower(inst.cr.rank_bound());
    for (std::size_t i = 0; i < cert.size(); ++i) {
      if (!(cert[i].o < bound)) ok = false;
      if (i + 1 < cert.size() && !(cert[i + 1].o < cert[i].o)) ok = false;
    }
  }
  report(5, "strictly decreasing certificate o-values below w_RANK on every trace", ok);
  CHECK(ok);
}

TEST_CASE("criterion 6: randomized ordinal arithmetic") {
  bool ok = true;
  std::mt19937_64 rng(60206);
  auto expect = [&](bool cond) { ok = ok && cond; };

  for (int i = 0; i < 10000; ++i) {
    Ordinal a = oracle::random_ordinal(rng);
    Ordinal b = oracle::random_ordinal(rng);
    Ordinal c = oracle::random_ordinal(rng);
    int ab = ord_cmp(a, b);
    expect(((ab < 0) + (ab == 0) + (ab > 0)) == 1);
    if (ab <= 0 && ord_cmp(b, c) <= 0) expect(ord_cmp(a, c) <= 0);
    expect(ord_add(ord_add(a, b), c) == ord_add(a, ord_add(b, c)));
    if (ab < 0) {
      expect(omega_pow(a) < omega_pow(b));
      try {
        expect(two_pow(a) < two_pow(b));
      } catch (const OrdinalOverflow&) {
      }
    }
    try {
      expect(two_pow(a) == oracle::two_pow(a));
    } catch (const OrdinalOverflow&) {
    }
  }
  for (uint64_t i = 0; i <= 8; ++i)
    expect(omega_plus_one_pow(i) == oracle::pow_nat(oracle::omega_plus_one(), i));
  // pinned identities
  expect(omega_plus_one_pow(2) ==
         ord_add(ord_add(Ordinal::single(Ordinal::finite(2), 1), Ordinal::omega()), Ordinal::finite(1)));
  expect(two_pow(ord_add(Ordinal::single(Ordinal::finite(1), 2), Ordinal::finite(3))) ==
         Ordinal::single(Ordinal::finite(2), 8));
  report(6, "trichotomy, transitivity, associativity, monotonicity, oracle agreement", ok);
  CHECK(ok);
}

TEST_CASE("criterion 7: determinism and round trips") {
  const auto& st = corpus_state();
  bool ok = true;
  for (std::size_t i = 0; i < st.instances.size(); ++i) {
    const Instance& inst = st.instances[i];
    // byte-identical rerun
    Trace again = run_h_process(inst.cr);
    if (trace_to_jsonl(again) != trace_to_jsonl(inst.run.trace)) ok = false;
    // parse/print identity on the corpus file
    if (print_critical_set(inst.cr) != inst.text) ok = false;
    for (const auto& cf : inst.cr.axioms()) {
      if (parse_expr(print_expr(eps_term(cf))) != eps_term(cf)) ok = false;
      if (parse_expr(print_expr(cf.witness)) != cf.witness) ok = false;
    }
    // save/load identity
    Trace loaded = trace_from_jsonl(inst.cr, trace_to_jsonl(inst.run.trace));
    if (!(loaded.steps.size() == inst.run.trace.steps.size())) ok = false;
    for (std::size_t j = 0; j < loaded.steps.size() && ok; ++j)
      if (!(loaded.steps[j] == inst.run.trace.steps[j])) ok = false;
  }
  report(7, "byte-identical traces, parse/print and save/load round trips", ok);
  CHECK(ok);
}

TEST_CASE("remaining invariant checks stay green") {
  bool ok = true;
  for (const char* name : {"ack-domination", "rank-bound", "index-bound", "o-exponents",
                           "solution-index-oracle"})
    ok = check_named(name) && ok;
  report(0, "supporting invariants (domination, bounds, o-exponents)", ok);
  CHECK(ok);
}
