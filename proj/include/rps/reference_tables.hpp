#pragma once

#include <vector>

namespace rps::reftab {

/// One row of a published delay-comparison table: the per-node arrival
/// rates that were driven, the per-node simulated mean delays reported for
/// them, and the closed-form value printed alongside (all delays in ms).
struct ReferenceRow {
  std::vector<double> lambda;            // pkts/s per node
  std::vector<double> published_sim_ms;  // one entry per node
  double published_analytic_ms;
};

struct ReferenceTable {
  int id;                // 1..4
  int n_nodes;           // 3 for tables 1-2, 4 for tables 3-4
  double aggregate_pps;  // nominal aggregate arrival rate of the table
  std::vector<ReferenceRow> rows;
};

/// Published validation tables (1500-byte payloads at 1 Mbps, C = 72.5).
const ReferenceTable& reference_table(int id);

}  // namespace rps::reftab
