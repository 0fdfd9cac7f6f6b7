#pragma once

// Report building blocks. Every floating-point value is quantized to 12
// significant digits before it reaches a document, and field order is fixed,
// so identical inputs always produce byte-identical files.

#include <string>

#include "json.hpp"

#include "ctcog/judgement.hpp"
#include "ctcog/oracle.hpp"

namespace ctcog::io {

double quantize(double x);            // round to 12 significant digits
std::string format_double(double x);  // fixed %.12g rendering

nlohmann::ordered_json scenario_to_json(const sim::Scenario& scenario);
nlohmann::ordered_json stats_to_json(const sim::ConjunctionStats& stats);
nlohmann::ordered_json record_to_json(const sim::JudgementRecord& record);
nlohmann::ordered_json verdict_to_json(const PossibilityVerdict& verdict);

// 2-space indentation plus a trailing newline; the only dump used for files.
std::string dump_report(const nlohmann::ordered_json& report);

}  // namespace ctcog::io
