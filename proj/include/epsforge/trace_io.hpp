#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "epsforge/bound.hpp"
#include "epsforge/hprocess.hpp"
#include "epsforge/series.hpp"
#include "epsforge/sexpr.hpp"

namespace epsforge {

using ordered_json = nlohmann::ordered_json;

// Index vectors serialize most significant coordinate first, with "w" for
// omega entries, so the array order matches the comparison order.
inline ordered_json index_to_json(const IndexVector& iv) {
  ordered_json arr = ordered_json::array();
  for (std::size_t i = iv.size(); i-- > 0;) {
    if (iv.coords[i].is_omega)
      arr.push_back("w");
    else
      arr.push_back(iv.coords[i].n);
  }
  return arr;
}

inline IndexVector index_from_json(const ordered_json& arr) {
  IndexVector iv;
  iv.coords.resize(arr.size());
  std::size_t i = arr.size();
  for (const auto& v : arr) {
    --i;
    if (v.is_string())
      iv.coords[i] = IndexCoord{true, 0};
    else
      iv.coords[i] = IndexCoord{false, v.get<uint64_t>()};
  }
  return iv;
}

inline ordered_json subst_to_json(const Substitution& s) {
  std::vector<std::pair<std::string, uint64_t>> entries;
  entries.reserve(s.size());
  for (const auto& [e, v] : s) entries.emplace_back(print_expr(e), v);
  std::sort(entries.begin(), entries.end());
  ordered_json arr = ordered_json::array();
  for (const auto& [txt, v] : entries) arr.push_back(ordered_json::array({txt, v}));
  return arr;
}

inline ordered_json step_to_json(const TraceStep& st) {
  ordered_json j;
  j["n"] = st.n;
  j["subst"] = subst_to_json(st.subst);
  j["solving"] = st.solving;
  j["rn"] = st.rn;
  if (!st.solving) {
    j["selected"] = *st.selected;
    j["en"] = print_expr(*st.en);
    j["vn"] = *st.vn;
  }
  j["an"] = index_to_json(st.an);
  return j;
}

inline std::string trace_to_jsonl(const Trace& t) {
  std::string out;
  for (const TraceStep& st : t.steps) {
    out += step_to_json(st).dump();
    out += '\n';
  }
  return out;
}

inline Trace trace_from_jsonl(const CriticalFormulaSet& cr, std::string_view text) {
  Trace t;
  t.cr = cr;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ordered_json j = ordered_json::parse(line);
    TraceStep st;
    st.n = j.at("n").get<uint64_t>();
    for (const auto& entry : j.at("subst")) {
      Expr key = parse_expr(entry.at(0).get<std::string>());
      if (!is_canonical(key)) throw EvalError("trace load: non-canonical substitution key");
      st.subst[key] = entry.at(1).get<uint64_t>();
    }
    st.solving = j.at("solving").get<bool>();
    st.rn = j.at("rn").get<uint64_t>();
    if (!st.solving) {
      st.selected = j.at("selected").get<std::size_t>();
      st.en = parse_expr(j.at("en").get<std::string>());
      st.vn = j.at("vn").get<uint64_t>();
    }
    st.an = index_from_json(j.at("an"));
    t.steps.push_back(std::move(st));
  }
  t.budget_exceeded = !t.steps.empty() && !t.steps.back().solving;
  return t;
}

inline ordered_json tree_to_json(const DecompositionNode& node) {
  ordered_json j;
  j["m"] = node.m;
  j["k"] = node.k;
  j["rk"] = node.rk;
  j["section"] = node.section;
  j["level"] = node.level;
  j["o"] = node.o.display();
  ordered_json kids = ordered_json::array();
  for (const auto& c : node.children) kids.push_back(tree_to_json(c));
  j["children"] = std::move(kids);
  return j;
}

// Analysis of a solved trace: nd set and decomposition of the nonsolving
// prefix [0,H), per-node levels and o-values, and the termination
// certificate.
inline ordered_json analysis_to_json(const Trace& t) {
  ordered_json j;
  j["rank_bound"] = t.cr.rank_bound();
  j["n_cl_eps"] = t.cr.n_cl_eps();
  j["trace_length"] = t.steps.size();
  j["solved"] = t.solved();
  if (!t.solved()) return j;
  uint64_t h = t.solution_index();
  j["solution_index"] = h;
  SeriesContext ctx(t);
  if (h >= 1) {
    ordered_json nd = ordered_json::array();
    for (uint64_t n : nd_set(ctx, 0, h)) nd.push_back(n);
    j["nd"] = std::move(nd);
    j["decomposition"] = tree_to_json(decomposition_tree(ctx, 0, h));
  }
  ordered_json cert = ordered_json::array();
  for (const auto& entry : termination_certificate(ctx, t)) {
    ordered_json e;
    e["n"] = entry.n;
    e["beta"] = entry.beta;
    e["o"] = entry.o.display();
    cert.push_back(std::move(e));
  }
  j["certificate"] = std::move(cert);
  if (!ctx.exponent_violations.empty()) {
    ordered_json viols = ordered_json::array();
    for (const auto& v : ctx.exponent_violations)
      viols.push_back(ordered_json{{"m", v.m}, {"k", v.k}, {"component", v.j}});
    j["o_exponent_violations"] = std::move(viols);
  }
  return j;
}

inline ordered_json bound_to_json(const BoundResult& res, std::size_t audit_sample = 16) {
  ordered_json j;
  j["h"] = res.h;
  ordered_json table = ordered_json::array();
  for (const auto& [pn, m] : res.m_table)
    table.push_back(ordered_json{{"p", pn.first}, {"n", pn.second}, {"m", m}});
  j["m_table"] = std::move(table);
  ordered_json eps = ordered_json::array();
  for (const auto& [pn, o] : res.ep_values)
    eps.push_back(ordered_json{{"p", pn.first}, {"n", pn.second}, {"o", o.display()}});
  j["ep_values"] = std::move(eps);
  ordered_json audit;
  audit["calls"] = res.audit.calls;
  audit["max_depth"] = res.audit.max_depth;
  audit["violations"] = res.audit.violation_count;
  ordered_json sample = ordered_json::array();
  for (std::size_t i = 0; i < res.audit.entries.size() && i < audit_sample; ++i) {
    const auto& e = res.audit.entries[i];
    sample.push_back(ordered_json{{"site", e.site},
                                  {"from", ordered_json::array({e.caller_p, e.caller_y.display()})},
                                  {"to", ordered_json::array({e.callee_p, e.callee_y.display()})},
                                  {"ok", e.ok}});
  }
  audit["entries_sample"] = std::move(sample);
  j["audit"] = std::move(audit);
  return j;
}

}  // namespace epsforge
