#include <catch2/catch_amalgamated.hpp>

#include "epsforge/epsforge.hpp"

using namespace epsforge;

namespace {
const char* kTwo = "(crit x (< 0 x) 2)\n(crit x (< 0 x) 1)\n";
const char* kNested = "(crit x (and (< 0 x) (< (eps y (< y x)) x)) 2)\n(crit x (= x (eps y (= (+ y y) 2))) 1)\n";
}  // namespace

TEST_CASE("trace save/load round trip") {
  CriticalFormulaSet cr = parse_critical_set(kNested);
  Trace t = run_h_process(cr);
  std::string jsonl = trace_to_jsonl(t);
  Trace back = trace_from_jsonl(cr, jsonl);
  REQUIRE(back.steps.size() == t.steps.size());
  for (std::size_t i = 0; i < t.steps.size(); ++i) CHECK(back.steps[i] == t.steps[i]);
  CHECK(back.budget_exceeded == t.budget_exceeded);
  CHECK(trace_to_jsonl(back) == jsonl);
}

TEST_CASE("trace records carry the conventional solving values") {
  Trace t = run_h_process(parse_critical_set(kTwo));
  ordered_json last = ordered_json::parse(trace_to_jsonl(t).substr(trace_to_jsonl(t).rfind("{\"n\":2")));
  CHECK(last["solving"] == true);
  CHECK(last["rn"] == 0);
  CHECK_FALSE(last.contains("selected"));
  CHECK_FALSE(last.contains("en"));
  // index arrays print most significant first, "w" for omega
  ordered_json first = ordered_json::parse(trace_to_jsonl(t).substr(0, trace_to_jsonl(t).find('\n')));
  CHECK(first["an"][0] == "w");
}

TEST_CASE("analysis document") {
  Trace t = run_h_process(parse_critical_set(kTwo));
  ordered_json j = analysis_to_json(t);
  CHECK(j["solved"] == true);
  CHECK(j["solution_index"] == 2);
  CHECK(j["rank_bound"] == 2);
  CHECK(j["decomposition"]["m"] == 0);
  CHECK(j["decomposition"]["k"] == 2);
  CHECK(j["decomposition"]["level"] == 1);
  REQUIRE(j["certificate"].size() == 1);
  CHECK(j["certificate"][0]["n"] == 0);
  CHECK(j["certificate"][0]["beta"] == 1);
  CHECK(j["certificate"][0]["o"] == "w");
  CHECK_FALSE(j.contains("o_exponent_violations"));
}

TEST_CASE("bound document") {
  BoundResult res = h_bound(parse_critical_set(kTwo));
  ordered_json j = bound_to_json(res);
  CHECK(j["h"] == 2);
  CHECK(j["audit"]["violations"] == 0);
  CHECK(j["m_table"].size() == res.m_table.size());
}

TEST_CASE("corpus generation is deterministic") {
  Corpus a = gen_corpus(1, 5);
  Corpus b = gen_corpus(1, 5);
  REQUIRE(a.files.size() == 5);
  CHECK(a.files == b.files);
  Corpus c = gen_corpus(2, 5);
  CHECK(a.files != c.files);
  for (const std::string& f : a.files) {
    CriticalFormulaSet cr = parse_critical_set(f);
    CHECK(cr.axioms().size() >= 1);
    CHECK(print_critical_set(cr) == f);  // print/parse round trip on corpus files
  }
}

TEST_CASE("verify passes on the bundled examples") {
  for (const char* src : {kTwo, kNested, "(crit x (= (* x 2) 2) 1)"}) {
    VerifyRun run = verify_instance(parse_critical_set(src));
    CAPTURE(src);
    for (const auto& c : run.report.checks) {
      CAPTURE(c.name, c.samples);
      CHECK(c.passed());
    }
    CHECK(run.report.all_passed());
  }
}

TEST_CASE("verify reports budget exhaustion") {
  VerifyOptions opt;
  opt.budget = 1;
  VerifyRun run = verify_instance(parse_critical_set(kTwo), opt);
  CHECK_FALSE(run.report.all_passed());
  REQUIRE(run.report.find("termination") != nullptr);
}

TEST_CASE("report merging sums counts") {
  VerifyRun a = verify_instance(parse_critical_set(kTwo));
  VerifyRun b = verify_instance(parse_critical_set(kNested));
  VerifyReport merged = merge_reports({a.report, b.report});
  const CheckResult* vp = merged.find("value-progress");
  REQUIRE(vp != nullptr);
  const CheckResult* va = a.report.find("value-progress");
  const CheckResult* vb = b.report.find("value-progress");
  CHECK(vp->checked == va->checked + vb->checked);
  CHECK(merged.all_passed());
}

TEST_CASE("verify is deterministic") {
  VerifyRun a = verify_instance(parse_critical_set(kNested));
  VerifyRun b = verify_instance(parse_critical_set(kNested));
  REQUIRE(a.report.checks.size() == b.report.checks.size());
  for (std::size_t i = 0; i < a.report.checks.size(); ++i) {
    CHECK(a.report.checks[i].name == b.report.checks[i].name);
    CHECK(a.report.checks[i].checked == b.report.checks[i].checked);
    CHECK(a.report.checks[i].violation_count == b.report.checks[i].violation_count);
  }
  CHECK(trace_to_jsonl(a.trace) == trace_to_jsonl(b.trace));
}
