#pragma once

#include <string>

#include "legimpact/scenario.hpp"

namespace legimpact {

// All emitters write LF-terminated CSV with full double precision; emitting
// the same record twice produces byte-identical files.

// Full per-tick join (plant + filter + impact), parseable back into a
// RunRecord together with the events file.
void emit_run_csv(const RunRecord& record, const std::string& path);

// Filter trace columns:
// step,theta_h,theta_k,omega_h,omega_k,tm_h,tm_k,tp_h,tp_k,tf_h,tf_k,
// innov_h,innov_k,cp00,cp01,cp11
void emit_trace_csv(const RunRecord& record, const std::string& path);

// Event log columns: run_id,step,f_h,f_k,latched
void emit_events_csv(const RunRecord& record, const std::string& run_id, const std::string& path);

// Human-readable report of aggregated runs.
void emit_summary_text(const SummaryStats& stats, const std::string& path);
std::string format_summary(const SummaryStats& stats);

// Writes run.csv, trace.csv and events.csv under dir (created if missing).
void emit_run_record(const RunRecord& record, const std::string& run_id, const std::string& dir);

// Rebuilds a RunRecord from run.csv + events.csv.
RunRecord parse_run_record(const std::string& dir);

}  // namespace legimpact
