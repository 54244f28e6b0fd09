#pragma once

#include <cstdint>
#include <vector>

#include "rps/polling.hpp"
#include "rps/sim/rng.hpp"
#include "rps/sim/stats.hpp"

namespace rps::pollsim {

/// lee: the server draws queue j with probability gamma_j at every decision
/// epoch and always takes the (nonzero) switchover afterwards.
/// zero_switchover: the server picks uniformly among non-empty queues and
/// moves instantly; when everything is empty it sleeps until the next
/// arrival and serves it immediately.
enum class Mode { lee, zero_switchover };

enum class Dist { deterministic, exponential };

struct PollingSimConfig {
  polling::PollingConfig base;
  Mode mode = Mode::zero_switchover;
  Dist service_dist = Dist::deterministic;
  Dist switch_dist = Dist::deterministic;
  double horizon_s = 1000.0;
  double warmup_s = 50.0;

  void validate() const;
};

struct QueueSimStats {
  double mean_sojourn_s;  // arrival to departure
  double mean_qlen;       // lee: queue length seen at polls;
                          // zero_switchover: time-average number in system
  double frac_nonempty;   // lee: fraction of polls finding the queue
                          // non-empty; zero_switchover: time fraction
  long long served;       // departures inside the measurement window
};

struct PollingSimReport {
  std::vector<QueueSimStats> queues;
  double served_rate_pps;  // aggregate departures per second
  double busy_fraction;    // fraction of measured time spent serving
};

PollingSimReport simulate_polling(const PollingSimConfig& cfg,
                                  sim::RngStream& stream);

/// Per-queue replication statistics across independent runs.
struct PollingSimSummary {
  std::vector<sim::ReplicationStats> sojourn;
  std::vector<sim::ReplicationStats> qlen;
  std::vector<sim::ReplicationStats> nonempty;
  sim::ReplicationStats served_rate;
  sim::ReplicationStats busy_fraction;
};

PollingSimSummary run_polling_replications(const PollingSimConfig& cfg,
                                           int reps,
                                           std::uint64_t master_seed);

}  // namespace rps::pollsim
