#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "acmeter/graphs.hpp"

namespace acmeter {

/// One attacking-case evaluation, split the way the result tables report it:
/// total = 2*i_part + tc_part + rc_part.
struct AttackingCase {
  std::int64_t i_part = 0;
  std::int64_t tc_part = 0;
  std::int64_t rc_part = 0;

  std::int64_t total() const { return 2 * i_part + tc_part + rc_part; }

  friend bool operator==(const AttackingCase&, const AttackingCase&) = default;
};

struct EdgeContribution {
  int from = 0;
  int to = 0;
  int w_i = 0;
  int w_tc = 0;
  int w_rc = 0;
  std::int64_t contribution = 0;
};

struct MetricsReport {
  std::optional<AttackingCase> improved;
  std::optional<AttackingCase> liew;
  std::vector<EdgeContribution> per_edge;  // filled on request, improved formula

  std::int64_t ac_improved() const {
    if (!improved) throw std::logic_error("improved metric not computed");
    return improved->total();
  }
  std::int64_t ac_liew() const {
    if (!liew) throw std::logic_error("liew metric not computed");
    return liew->total();
  }
};

enum class MetricFormula { improved, liew };

/// Component sums of the chosen formula over all ordered pairs. The weighted
/// formula counts tc and rc contributions whenever the pair has no i-edge;
/// the unweighted one additionally excludes tc-edges from the rc term.
inline AttackingCase component_breakdown(const InterferenceGraphSet& gs, MetricFormula formula) {
  if (formula == MetricFormula::improved && gs.mode != GraphMode::improved)
    throw std::invalid_argument("improved metric requires graphs built in improved mode");
  if (formula == MetricFormula::liew && gs.mode != GraphMode::liew)
    throw std::invalid_argument("liew metric requires graphs built in liew mode");

  AttackingCase ac;
  if (formula == MetricFormula::improved) {
    for (const Edge& e : gs.i_graph.edges) ac.i_part += e.weight;
    for (const Edge& e : gs.tc_graph.edges)
      if (!gs.i_graph.has_edge(e.from, e.to)) ac.tc_part += e.weight;
    for (const Edge& e : gs.rc_graph.edges)
      if (!gs.i_graph.has_edge(e.from, e.to)) ac.rc_part += e.weight;
  } else {
    ac.i_part = static_cast<std::int64_t>(gs.i_graph.edges.size());
    for (const Edge& e : gs.tc_graph.edges)
      if (!gs.i_graph.has_edge(e.from, e.to)) ac.tc_part += 1;
    for (const Edge& e : gs.rc_graph.edges)
      if (!gs.i_graph.has_edge(e.from, e.to) && !gs.tc_graph.has_edge(e.from, e.to)) ac.rc_part += 1;
  }
  return ac;
}

inline std::vector<EdgeContribution> per_edge_contributions(const InterferenceGraphSet& gs) {
  std::vector<EdgeContribution> rows;
  for (int from : gs.i_graph.vertices)
    for (int to : gs.i_graph.vertices) {
      if (from == to) continue;
      EdgeContribution row;
      row.from = from;
      row.to = to;
      row.w_i = gs.i_graph.weight(from, to);
      row.w_tc = gs.tc_graph.weight(from, to);
      row.w_rc = gs.rc_graph.weight(from, to);
      if (row.w_i > 0)
        row.contribution = 2 * row.w_i;
      else
        row.contribution = row.w_tc + row.w_rc;
      if (row.w_i + row.w_tc + row.w_rc > 0) rows.push_back(row);
    }
  return rows;
}

inline MetricsReport attacking_case_improved(const InterferenceGraphSet& gs, bool with_detail = false) {
  MetricsReport r;
  r.improved = component_breakdown(gs, MetricFormula::improved);
  if (with_detail) r.per_edge = per_edge_contributions(gs);
  return r;
}

inline MetricsReport attacking_case_liew(const InterferenceGraphSet& gs) {
  MetricsReport r;
  r.liew = component_breakdown(gs, MetricFormula::liew);
  return r;
}

/// Relative throughput gain of a directional run over an omni run, percent.
inline double throughput_gain(double tput_da, double tput_oa) {
  if (tput_oa <= 0.0) throw std::invalid_argument("undefined gain: omni throughput must be > 0");
  return (tput_da - tput_oa) * 100.0 / tput_oa;
}

}  // namespace acmeter
