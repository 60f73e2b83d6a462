// Copyright 2026 the devlab authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DEVLAB_IO_HPP
#define DEVLAB_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "devlab/experiments.hpp"
#include "devlab/graph.hpp"
#include "devlab/process.hpp"
#include "devlab/rates.hpp"

namespace devlab {

// Shortest round-trip decimal form; deterministic across runs.
std::string format_double(double v);

// Edge-list text format: header "n m", then one "u w" line per edge,
// 0-indexed with u < w, in canonical rank order.
void write_edge_list(std::ostream& os, const GraphSnapshot& g);
GraphSnapshot read_edge_list(std::istream& is);
void write_edge_list_file(const std::string& path, const GraphSnapshot& g);
GraphSnapshot read_edge_list_file(const std::string& path);

// Trace serialization: JSON {n, m, seed, edges: [[u, w], ...]}.
std::string trace_to_json(const ProcessTrace& trace);
ProcessTrace trace_from_json(const std::string& text);
void write_trace_file(const std::string& path, const ProcessTrace& trace);
ProcessTrace read_trace_file(const std::string& path);

// StepRecord dump: CSV, one row per step, columns in field order.
void write_steps_csv(std::ostream& os, const TraceAnalysis& analysis);

// regime_map CSV: gamma, theta_or_eta, normal, star, hub, clique, M, argmax.
void write_regime_map_csv(std::ostream& os, const std::vector<MapPoint>& points);

// mc_tail CSV, schema:
// model,n,density,statistic,threshold,trials,exceed,p_hat,log_p_hat,ci_lo,ci_hi,seed,plant
void write_tail_estimate_csv(std::ostream& os, const TailEstimate& est);

// diagnostics CSV: one row per (name, index, value).
void write_diagnostics_csv(std::ostream& os, const DiagnosticsReport& rep);

}  // namespace devlab

#endif  // DEVLAB_IO_HPP
