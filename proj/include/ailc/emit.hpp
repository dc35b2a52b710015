#pragma once

#include <string>
#include <vector>

#include "ailc/scenario.hpp"

namespace ailc {

enum class EmitFormat { csv, json };

/// Per-step rows of one run as CSV text with header
/// k,t,x,r,e,u,epsilon,a,w_hat and >= 15 significant digits per value
/// (values round-trip to the exact doubles).
std::string csv_text(const std::vector<IterationTrace>& traces);

/// Same rows as a JSON array of objects.
std::string json_rows_text(const std::vector<IterationTrace>& traces);

/// Summary document: per-iteration error metrics, final estimates, audit
/// values and the full config echo.
std::string summary_json_text(const ScenarioResult& result);

/// Writes the trace file(s) (one per controller and channel) plus the summary
/// JSON into out_dir. Returns the paths written. Throws IoError on failure.
std::vector<std::string> emit_results(const ScenarioResult& result, const std::string& out_dir,
                                      EmitFormat format);

/// Parses CSV text produced by csv_text back into (k, t, x, r, e, u, epsilon,
/// a, w_hat) tuples; used by round-trip checks.
struct CsvRow {
    int k = 0, t = 0;
    double x = 0, r = 0, e = 0, u = 0, epsilon = 0, a = 0, w_hat = 0;
};
std::vector<CsvRow> parse_csv(const std::string& text);

}  // namespace ailc
