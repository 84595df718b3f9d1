// epsilon-forge: run, analyze and bound epsilon-substitution processes for
// first-order arithmetic, and machine-check the invariants of their
// termination analysis on concrete traces.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epsforge/epsforge.hpp"

namespace fs = std::filesystem;
using namespace epsforge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitResourceError = 3;

struct Options {
  std::string input;
  std::string trace_out;
  uint64_t budget = kDefaultBudget;
  std::string value_rule = "paper";
  uint64_t seed = 1;
  uint64_t count = 50;
  std::string format = "json";
};

ValueRule rule_of(const Options& opt) {
  return opt.value_rule == "min-witness" ? ValueRule::min_witness : ValueRule::paper;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Options& opt, const std::string& text) {
  if (opt.trace_out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.trace_out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + opt.trace_out);
  out << text;
}

CriticalFormulaSet load_set(const Options& opt) { return parse_critical_set(slurp(opt.input)); }

void add_common(CLI::App* cmd, Options& opt, bool with_input) {
  if (with_input) cmd->add_option("--input", opt.input, "critical-formula file")->required();
  cmd->add_option("--trace-out", opt.trace_out, "output path (stdout when omitted)");
  cmd->add_option("--budget", opt.budget, "largest step index the process may reach")
      ->envname("EPSILON_FORGE_BUDGET");
  cmd->add_option("--value-rule", opt.value_rule, "paper | min-witness")
      ->check(CLI::IsMember({"paper", "min-witness"}));
  cmd->add_option("--format", opt.format, "json | text")->check(CLI::IsMember({"json", "text"}));
}

int cmd_run(const Options& opt) {
  Trace t = run_h_process(load_set(opt), opt.budget, rule_of(opt));
  emit(opt, trace_to_jsonl(t));
  if (t.budget_exceeded) {
    std::cerr << "budget exceeded before a solution\n";
    return kExitResourceError;
  }
  return kExitOk;
}

int cmd_analyze(const Options& opt) {
  Trace t = run_h_process(load_set(opt), opt.budget, rule_of(opt));
  if (t.budget_exceeded) {
    std::cerr << "budget exceeded before a solution\n";
    return kExitResourceError;
  }
  ordered_json j = analysis_to_json(t);
  if (opt.format == "text") {
    std::ostringstream ss;
    ss << "solution index: " << j["solution_index"] << "\n";
    for (const auto& e : j["certificate"])
      ss << "  cut n=" << e["n"] << " beta=" << e["beta"] << " o=" << e["o"].get<std::string>() << "\n";
    emit(opt, ss.str());
  } else {
    emit(opt, j.dump(2) + "\n");
  }
  return j.contains("o_exponent_violations") ? kExitCheckFailed : kExitOk;
}

int cmd_bound(const Options& opt) {
  CriticalFormulaSet cr = load_set(opt);
  BoundResult res = h_bound(cr, opt.budget, rule_of(opt));
  if (opt.format == "text") {
    std::ostringstream ss;
    ss << "H = " << res.h << " (audit: " << res.audit.calls << " calls, depth " << res.audit.max_depth
       << ", " << res.audit.violation_count << " violations)\n";
    emit(opt, ss.str());
  } else {
    emit(opt, bound_to_json(res).dump(2) + "\n");
  }
  return res.audit.violation_count == 0 ? kExitOk : kExitCheckFailed;
}

ordered_json report_json(const VerifyReport& rep) {
  ordered_json j;
  j["all_passed"] = rep.all_passed();
  ordered_json checks = ordered_json::array();
  for (const auto& c : rep.checks) {
    ordered_json cj;
    cj["name"] = c.name;
    cj["checked"] = c.checked;
    cj["violations"] = c.violation_count;
    if (!c.samples.empty()) cj["samples"] = c.samples;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  return j;
}

std::string report_text(const VerifyReport& rep) {
  std::ostringstream ss;
  for (const auto& c : rep.checks)
    ss << (c.passed() ? "[pass] " : "[FAIL] ") << c.name << " (" << c.checked << " checked, "
       << c.violation_count << " violations)\n";
  ss << (rep.all_passed() ? "all checks passed\n" : "CHECKS FAILED\n");
  return ss.str();
}

int cmd_verify(const Options& opt) {
  std::vector<std::pair<std::string, std::string>> inputs;  // name, text
  fs::path p(opt.input);
  if (fs::is_directory(p)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(p))
      if (e.path().extension() == ".cr") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) inputs.emplace_back(f.string(), slurp(f.string()));
  } else {
    inputs.emplace_back(opt.input, slurp(opt.input));
  }

  VerifyOptions vopt;
  vopt.budget = opt.budget;
  vopt.rule = rule_of(opt);

  std::vector<VerifyReport> reports;
  bool resource_trouble = false;
  ordered_json bundles = ordered_json::array();
  for (const auto& [name, text] : inputs) {
    VerifyRun run = verify_instance(parse_critical_set(text), vopt);
    if (!run.report.all_passed()) {
      ordered_json bundle;
      bundle["input"] = name;
      bundle["cr"] = text;
      bundle["trace"] = trace_to_jsonl(run.trace);
      bundle["report"] = report_json(run.report);
      bundles.push_back(std::move(bundle));
      if (run.trace.budget_exceeded) resource_trouble = true;
    }
    reports.push_back(std::move(run.report));
  }
  VerifyReport merged = merge_reports(reports);

  if (opt.format == "text") {
    std::cout << report_text(merged);
  } else {
    ordered_json j = report_json(merged);
    j["instances"] = inputs.size();
    std::cout << j.dump(2) << "\n";
  }
  // A failing run leaves a self-contained counterexample bundle.
  if (!bundles.empty() && !opt.trace_out.empty()) {
    std::ofstream out(opt.trace_out, std::ios::binary);
    out << bundles.dump(2) << "\n";
    std::cerr << "counterexample bundle written to " << opt.trace_out << "\n";
  }
  if (resource_trouble) return kExitResourceError;
  return merged.all_passed() ? kExitOk : kExitCheckFailed;
}

int cmd_gen(const Options& opt) {
  if (opt.trace_out.empty()) throw std::runtime_error("gen requires --trace-out (output directory)");
  fs::create_directories(opt.trace_out);
  Corpus corpus = gen_corpus(opt.seed, opt.count, GenLimits{}, opt.budget);
  for (std::size_t i = 0; i < corpus.files.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "corpus_%03zu.cr", i);
    std::ofstream out(fs::path(opt.trace_out) / name, std::ios::binary);
    out << corpus.files[i];
  }
  std::cerr << "wrote " << corpus.files.size() << " instances (" << corpus.stats.resamples
            << " resamples, " << corpus.stats.rank2_instances << " with rank>=2 states)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"epsilon-forge: epsilon-substitution processes, ordinal bounds and trace audits"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* run = app.add_subcommand("run", "run the process and write a JSONL trace");
  add_common(run, opt, true);
  CLI::App* analyze = app.add_subcommand("analyze", "series decomposition, o-values and certificate");
  add_common(analyze, opt, true);
  CLI::App* bound = app.add_subcommand("bound", "compute H with the audited nested recursion");
  add_common(bound, opt, true);
  CLI::App* verify = app.add_subcommand("verify", "run every trace-level check (file or directory)");
  add_common(verify, opt, true);
  CLI::App* gen = app.add_subcommand("gen", "generate a deterministic instance corpus");
  add_common(gen, opt, false);
  gen->add_option("--seed", opt.seed, "corpus seed");
  gen->add_option("--count", opt.count, "number of instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitInputError : kExitOk;
  }

  try {
    if (run->parsed()) return cmd_run(opt);
    if (analyze->parsed()) return cmd_analyze(opt);
    if (bound->parsed()) return cmd_bound(opt);
    if (verify->parsed()) return cmd_verify(opt);
    if (gen->parsed()) return cmd_gen(opt);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitResourceError;
  } catch (const DescentViolation& e) {
    std::cerr << "descent violation: " << e.what() << "\n";
    return kExitResourceError;
  } catch (const OrdinalOverflow& e) {
    std::cerr << "ordinal overflow: " << e.what() << "\n";
    return kExitResourceError;
  } catch (const SolutionMismatch& e) {
    std::cerr << "solution mismatch: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}
