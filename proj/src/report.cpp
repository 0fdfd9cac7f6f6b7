#include "ctcog/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace ctcog::io {

namespace {

using nlohmann::ordered_json;

ordered_json vec_to_json(const la::vec& v) {
  ordered_json out = ordered_json::array();
  for (const la::cplx& a : v) out.push_back({quantize(a.real()), quantize(a.imag())});
  return out;
}

ordered_json event_to_json(const sim::EventStats& e) {
  ordered_json out;
  out["mean"] = quantize(e.mean);
  out["variance"] = quantize(e.variance);
  out["p_high"] = quantize(e.p_high);
  out["p_low"] = quantize(e.p_low);
  return out;
}

}  // namespace

double quantize(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", quantize(x));
  return buf;
}

nlohmann::ordered_json scenario_to_json(const sim::Scenario& s) {
  ordered_json j;
  j["name"] = s.name;
  j["kind"] =
      s.kind == sim::ScenarioKind::ClassicalJoint ? "classical_joint" : "quantum_sequential";
  if (s.kind == sim::ScenarioKind::ClassicalJoint) {
    ordered_json t;
    t["p11"] = quantize(s.joint.p11);
    t["p10"] = quantize(s.joint.p10);
    t["p01"] = quantize(s.joint.p01);
    t["p00"] = quantize(s.joint.p00);
    j["table"] = std::move(t);
  } else {
    j["psi"] = ordered_json{{"vector", vec_to_json(s.psi)}};
    j["basis_x"] = ordered_json{{"vector", vec_to_json(s.basis_x)}};
    j["basis_y"] = ordered_json{{"vector", vec_to_json(s.basis_y)}};
    j["order"] = s.order == sim::MeasurementOrder::XThenY ? "x_then_y" : "y_then_x";
  }
  j["noise_rate"] = quantize(s.noise_rate);
  j["samples_per_subject"] = s.samples_per_subject;
  j["cohort_size"] = s.cohort_size;
  j["seed"] = s.seed;
  return j;
}

nlohmann::ordered_json stats_to_json(const sim::ConjunctionStats& s) {
  ordered_json j;
  j["cohort"] = s.cohort;
  j["n"] = s.n;
  j["mean_conjunction_error_x"] = quantize(s.mean_error_x);
  j["mean_conjunction_error_y"] = quantize(s.mean_error_y);
  j["sd_error_x"] = quantize(s.sd_error_x);
  j["sd_error_y"] = quantize(s.sd_error_y);
  j["pct_conjunction_errors"] = quantize(s.pct_conjunction);
  j["pct_ranking_errors"] = quantize(s.pct_ranking);
  j["pct_double_errors"] = quantize(s.pct_double);
  ordered_json events;
  events["x"] = event_to_json(s.x);
  events["y"] = event_to_json(s.y);
  events["xy"] = event_to_json(s.xy);
  j["events"] = std::move(events);
  return j;
}

nlohmann::ordered_json record_to_json(const sim::JudgementRecord& r) {
  ordered_json j;
  j["n"] = r.n;
  if (r.analytic) {
    j["analytic"] = true;
  } else {
    j["count_x"] = r.count_x;
    j["count_y"] = r.count_y;
    j["count_xy"] = r.count_xy;
  }
  j["j_x"] = quantize(r.j_x());
  j["j_y"] = quantize(r.j_y());
  j["j_xy"] = quantize(r.j_xy());
  return j;
}

nlohmann::ordered_json verdict_to_json(const PossibilityVerdict& v) {
  ordered_json j;
  j["possible"] = v.possible;
  j["reason"] = v.reason;
  if (v.witness) j["witness"] = *v.witness;
  if (!v.overlaps.empty()) {
    ordered_json entries = ordered_json::array();
    for (const OverlapEntry& e : v.overlaps)
      entries.push_back({{"i", e.i}, {"j", e.j}, {"overlap", quantize(e.overlap)}});
    j["overlaps"] = std::move(entries);
  }
  return j;
}

std::string dump_report(const nlohmann::ordered_json& report) { return report.dump(2) + "\n"; }

}  // namespace ctcog::io
