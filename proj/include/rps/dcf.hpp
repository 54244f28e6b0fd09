#pragma once

#include <vector>

namespace rps::dcf {

/// PHY/MAC timing and backoff parameters of a single-cell DCF network.
/// Durations are in microseconds, data_rate in bits/second. Defaults are
/// 802.11b DSSS with long preamble, 1500-byte payloads at 1 Mbps.
struct DcfParams {
  int cw_min_W = 32;               // initial contention window (slots)
  int max_stage_m = 5;             // maximum backoff doubling stage
  double slot_time = 20.0;         // idle slot length sigma (us)
  double sifs = 10.0;              // us
  double difs = 50.0;              // us
  double phy_header_time = 192.0;  // preamble + PHY header (us)
  int mac_header_bits = 272;
  int payload_bits = 12000;
  int ack_bits = 112;
  double data_rate = 1e6;          // bits/s
  double propagation_delay = 0.0;  // us

  void validate() const;  // throws rps::ConfigError
};

/// Solution of the attempt-probability fixed point for n contending nodes.
struct FixedPointSolution {
  double beta = 0.0;      // per-slot attempt probability
  double p = 0.0;         // conditional collision probability
  double residual = 0.0;  // |backoff curve - collision curve| at the root
  int iterations = 0;
};

struct SlotDurations {
  double t_idle;       // us
  double t_success;    // us
  double t_collision;  // us
};

struct SlotProbabilities {
  double p_success;
  double p_idle;
  double p_collision;
};

/// Per-slot channel model at the fixed point, plus the renewal-reward
/// saturation throughput in packets/second.
struct SlotModel {
  double p_success, p_idle, p_collision;
  double t_success, t_idle, t_collision;  // us
  double throughput_pps;
};

/// Attempt probability as a function of the conditional collision
/// probability, from the backoff process with initial window W and at most
/// m doublings. Strictly decreasing from 2/(W+1) to 2/(2^m W + 1); the
/// p = 1/2 singularity of the textbook form is removed algebraically.
double beta_from_backoff(double p, int W, int m);

/// Attempt probability implied by a collision probability p seen against
/// n-1 independent peers: 1 - (1-p)^(1/(n-1)). Strictly increasing.
double beta_from_collision(double p, int n);

/// Bisection on the difference of the two curves above over p in [0,1].
/// The opposing monotonicities guarantee a unique bracketed root.
FixedPointSolution solve_fixed_point(int n, const DcfParams& params,
                                     double tol = 1e-9);

/// Durations of idle, success and collision slots for basic access:
/// a success carries DATA + SIFS + ACK + DIFS, a collision carries the
/// full DATA frame + DIFS, an idle slot is one backoff slot.
SlotDurations slot_durations(const DcfParams& params);

/// Slot-outcome probabilities for n nodes attempting with probability beta.
SlotProbabilities slot_probabilities(double beta, int n);

SlotModel slot_model(int n, const DcfParams& params, double tol = 1e-9);

/// Aggregate saturation throughput S(n) in packets/second.
double aggregate_throughput(int n, const DcfParams& params, double tol = 1e-9);

struct ThroughputPoint {
  int n;
  double throughput_pps;
};

std::vector<ThroughputPoint> throughput_curve(int n_min, int n_max,
                                              const DcfParams& params);

}  // namespace rps::dcf
