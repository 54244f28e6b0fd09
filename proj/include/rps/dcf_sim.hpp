#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rps/dcf.hpp"
#include "rps/sim/rng.hpp"
#include "rps/sim/stats.hpp"

namespace rps::dcfsim {

enum class Traffic { saturated, poisson };

struct DcfSimConfig {
  int n = 3;
  dcf::DcfParams params;
  Traffic traffic = Traffic::poisson;
  Eigen::ArrayXd lambda;  // per-node Poisson rates (pkts/s), poisson mode
  double horizon_s = 1000.0;
  double warmup_s = 50.0;

  void validate() const;
};

struct DcfNodeStats {
  double mean_sojourn_s;    // NaN in saturated mode
  long long sojourn_count;
  long long delivered;      // departures inside the measurement window
  double throughput_pps;
};

struct DcfSimReport {
  std::vector<DcfNodeStats> nodes;
  double aggregate_throughput_pps;  // success slots per measured second
  double beta_hat;                  // attempts / (n * slots), measured window
  double p_hat;                     // colliding attempts / attempts
  // Measurement-window slot tallies.
  long long idle_slots, success_slots, collision_slots;
  // Whole-run accounting; time is tracked in microseconds so that with
  // integer-valued slot durations these identities hold bit-exactly.
  long long total_idle_slots, total_success_slots, total_collision_slots;
  double total_slotted_time_us;
  double total_empty_time_us;  // stretches with no contender (poisson)
  double final_time_us;
};

/// One run of the slotted single-cell DCF channel: every contending node
/// whose backoff counter is zero at a slot boundary transmits; exactly one
/// transmitter makes a success slot, two or more a collision slot, none an
/// idle slot. Counters of non-transmitting contenders decrement once per
/// slot of any kind, which is what makes the measured attempt rate match
/// the backoff-curve fixed point.
DcfSimReport simulate_dcf(const DcfSimConfig& cfg, sim::RngStream& stream);

struct DcfSimSummary {
  std::vector<sim::ReplicationStats> sojourn;     // per node (s)
  std::vector<sim::ReplicationStats> throughput;  // per node (pkts/s)
  sim::ReplicationStats pooled_sojourn;           // all nodes pooled (s)
  sim::ReplicationStats aggregate_throughput;
  sim::ReplicationStats beta_hat;
  sim::ReplicationStats p_hat;
};

DcfSimSummary run_dcf_replications(const DcfSimConfig& cfg, int reps,
                                   std::uint64_t master_seed);

struct SweepRow {
  double x;  // per-node lambda (load sweep) or n (n sweep)
  bool stable;
  double sim_delay_ms;      // NaN when unstable
  double ci_halfwidth_ms;   // NaN when unstable
  double analytic_ms;       // NaN when unstable
};

/// Mean-delay sweep over per-node arrival rate at fixed n. Grid points with
/// n*lambda at or above the computed capacity C(n) are flagged unstable and
/// not simulated. The analytic column is the zero-switchover closed form
/// evaluated at C(n).
std::vector<SweepRow> delay_vs_load_sweep(int n,
                                          const Eigen::ArrayXd& lambda_grid,
                                          const dcf::DcfParams& params,
                                          int reps, std::uint64_t seed,
                                          double horizon_s, double warmup_s);

/// Mean-delay sweep over n at fixed per-node arrival rate.
std::vector<SweepRow> delay_vs_n_sweep(double lambda_per_node,
                                       const std::vector<int>& n_grid,
                                       const dcf::DcfParams& params, int reps,
                                       std::uint64_t seed, double horizon_s,
                                       double warmup_s);

}  // namespace rps::dcfsim
