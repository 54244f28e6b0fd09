#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rps/sim/rng.hpp"
#include "rps/sim/stats.hpp"

namespace rps::sim {

/// Runs `reps` independent replications of an experiment. Replication r
/// draws all of its randomness from RngStream(master_seed, r); the
/// experiment returns one value per metric in a fixed order, and results
/// are aggregated per metric in replication-index order.
template <class Experiment>
std::vector<ReplicationStats> run_replications(Experiment&& experiment,
                                               int reps,
                                               std::uint64_t master_seed) {
  if (reps < 1) throw std::invalid_argument("run_replications: reps >= 1");
  std::vector<ReplicationStats> per_metric;
  for (int r = 0; r < reps; ++r) {
    RngStream stream(master_seed, static_cast<std::uint64_t>(r));
    std::vector<double> metrics;
    try {
      metrics = experiment(stream);
    } catch (const std::exception& e) {
      throw std::runtime_error("replication " + std::to_string(r) +
                               " failed: " + e.what());
    }
    if (r == 0) per_metric.resize(metrics.size());
    if (metrics.size() != per_metric.size())
      throw std::runtime_error("replication " + std::to_string(r) +
                               " returned a different metric count");
    for (std::size_t i = 0; i < metrics.size(); ++i)
      per_metric[i].push(metrics[i]);
  }
  return per_metric;
}

}  // namespace rps::sim
