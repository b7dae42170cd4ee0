#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ratioref/composition.hpp"
#include "ratioref/decision.hpp"
#include "ratioref/meaning.hpp"
#include "ratioref/multidim.hpp"

namespace ratioref::io {

using json = nlohmann::ordered_json;

/// Parses a scalar for the given backend. Rational accepts "p/q", integer
/// and exact-decimal strings and JSON integers; non-integer JSON numbers are
/// float-only.
template <class S>
S parse_scalar(std::string_view text);
template <class S>
S scalar_from_json(const json& j);

template <class V>
std::string format(const V& v) {
  return ratioref::to_string(v);
}

template <class V>
json margin_to_json(const Margin<V>& m) {
  switch (m.kind) {
    case Margin<V>::Kind::Finite: return format(m.value);
    case Margin<V>::Kind::Infinite: return "inf";
    default: return nullptr;
  }
}

/// Dictionary schema:
///   {"variant":"finite","items":[{"id":"o1","scale":"1/4"}, ...]}
///     ("scales":[...] is shorthand with ids o1..oN; a scale may be a list for d-D)
///   {"variant":"interval","lo":"2","hi":"5"}
///   {"variant":"logbox","lo":[-1,-1],"hi":[1,1]}
///   {"variant":"logpolytope","halfspaces":[{"normal":[1,0],"offset":1}, ...]}
template <class S>
Dictionary<S> dictionary_from_json(const json& j);
template <class S>
json dictionary_to_json(const Dictionary<S>& dict);

/// Reads and parses a dictionary file.
json read_json_file(const std::string& path);

/// {"minimizers": [...], "cost": ..., "margin": ...}; continuous minimizers
/// are listed by scale and accompanied by "scales"/"log_coordinates".
template <class V>
json meaning_to_json(const MeaningResult<V>& m) {
  json out;
  if (!m.minimizers.empty()) {
    out["minimizers"] = m.minimizers;
    if (!m.scales.empty() && m.scales.front().size() > 1) {
      json scales = json::array();
      for (const auto& y : m.scales) {
        json row = json::array();
        for (Eigen::Index k = 0; k < y.size(); ++k) row.push_back(format(y[k]));
        scales.push_back(row);
      }
      out["scales"] = scales;
    }
  } else {
    json mins = json::array();
    json logs = json::array();
    for (const auto& y : m.scales) {
      if (y.size() == 1) {
        mins.push_back(format(y[0]));
      } else {
        json row = json::array();
        json lrow = json::array();
        for (Eigen::Index k = 0; k < y.size(); ++k) {
          row.push_back(format(y[k]));
          lrow.push_back(format(std::log(to_double(y[k]))));
        }
        mins.push_back(row);
        logs.push_back(lrow);
      }
    }
    out["minimizers"] = mins;
    if (!logs.empty()) out["log_coordinates"] = logs;
  }
  out["cost"] = format(m.optimal_cost);
  out["margin"] = margin_to_json(m.margin);
  return out;
}

template <class V>
json window_to_json(const ScaleWindow<V>& w) {
  return {{"lo", format(w.lo)}, {"hi", format(w.hi)}, {"lo_approx", to_double(w.lo)}, {"hi_approx", to_double(w.hi)}};
}

template <class S>
json mediation_to_json(const MediationPlan<S>& plan) {
  json chosen = json::array();
  for (const auto& b : plan.chosen) chosen.push_back(format(b));
  json hops = json::array();
  for (const auto& h : plan.hop_costs) hops.push_back(format(h));
  json out{{"chosen", chosen},          {"total", format(plan.total_cost)}, {"direct", format(plan.direct_cost)},
           {"gain", format(plan.gain)}, {"hop_costs", hops},               {"balance_point", format(plan.balance_point)}};
  if (!plan.chosen_ids.empty()) out["chosen_ids"] = plan.chosen_ids;
  return out;
}

template <class V>
json chain_to_json(const ChainPlan<V>& plan) {
  json ratios = json::array();
  for (const auto& r : plan.ratios) ratios.push_back(format(r));
  return {{"steps", plan.steps},
          {"hop_ratio", format(plan.hop_ratio)},
          {"ratios", ratios},
          {"per_step_cost", format(plan.per_step_cost)},
          {"total", format(plan.total_cost)}};
}

/// CSV with columns x, cell, margin, then one cost column per object id.
/// Cells are 1-based; a boundary tie prints as "k|k+1".
void write_sweep_csv(std::ostream& out, const FiniteDictionary<double>& dict, const std::vector<SweepRow>& rows);
json sweep_to_json(const FiniteDictionary<double>& dict, const std::vector<SweepRow>& rows);

}  // namespace ratioref::io
