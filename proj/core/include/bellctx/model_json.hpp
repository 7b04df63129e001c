#pragma once

#include <filesystem>
#include <string>

#include "bellctx/contextuality.hpp"
#include "bellctx/scenario.hpp"

namespace bellctx::io {

// Model files carry a "format_version" field; the parser rejects unknown
// major versions.
inline constexpr int kFormatMajor = 1;
inline constexpr int kFormatMinor = 0;
std::string format_version();

// Parses the scenario+model JSON document:
//   observables: [{id, outcomes, values?}, ...]
//   contexts:    [[id, ...], ...]
//   tables:      {"A|B": {"+1|+1": 0.5 or "1/2", ...}, ...}
// Probabilities given as "p/q" strings make a table exact; any JSON-number
// probability makes the whole model approximate. Throws input_error with
// line/field diagnostics.
EmpiricalModel parse_model_json(const std::string& text);
EmpiricalModel load_model_file(const std::filesystem::path& path);

std::string model_to_json(const EmpiricalModel& model, int indent = 2);

// ContextualityReport serialization; the scenario provides assignment and
// row labels for the certificate.
std::string report_to_json(const ContextualityReport& report,
                           const MeasurementScenario& scenario, int indent = 2);

}  // namespace bellctx::io
