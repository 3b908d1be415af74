#pragma once

#include <iosfwd>
#include <string>

#include "rcplan/mission.hpp"

namespace rcplan {

// JSON-Lines step records: one line per agent step, copter and rover phases
// interleaved in execution order.
void write_trace_jsonl(const RunTrace& trace, const GridWorld& world, std::ostream& os);

void write_summary_json(const RunTrace& trace, std::ostream& os);

// Final belief of one prop as a CSV grid (row = j, column = i).
void write_belief_csv(const std::vector<double>& values, const GridWorld& world, int ap,
                      std::ostream& os);

// Per-cell value grid (b_max, value maps) as CSV.
void write_grid_csv(const std::vector<double>& per_cell, const GridWorld& world,
                    std::ostream& os);

void write_snapshots_jsonl(const RunTrace& trace, std::ostream& os);

void write_convergence_csv(const std::vector<ConvergenceMetrics>& metrics,
                           std::ostream& os);

}  // namespace rcplan
