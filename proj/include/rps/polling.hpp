#pragma once

#include <Eigen/Dense>

namespace rps::polling {

using Eigen::ArrayXd;

/// An n-queue, single-server, 1-limited random polling system. The server
/// picks queue j with probability gamma_j, serves at most one packet, then
/// takes a switchover. Times are in seconds, rates in packets/second.
struct PollingConfig {
  ArrayXd lambda;        // Poisson arrival rates, all > 0
  ArrayXd gamma;         // selection probabilities, sum to 1
  ArrayXd service_mean;  // E[service] per queue
  ArrayXd service_m2;    // E[service^2]
  ArrayXd switch_mean;   // E[switchover after visiting queue i]
  ArrayXd switch_m2;     // E[switchover^2]

  int n() const { return static_cast<int>(lambda.size()); }

  /// Mean switchover per period, s = sum_j gamma_j s_j.
  double mean_switchover() const { return (gamma * switch_mean).sum(); }

  void validate() const;  // throws rps::ConfigError
};

struct Utilization {
  ArrayXd per_queue;  // rho_i = lambda_i * service_mean_i
  double total;       // rho
};

/// Analytic steady-state summary of a polling config.
struct DelayReport {
  ArrayXd rho_i;
  double rho;
  ArrayXd e_w;         // mean sojourn per queue (s)
  ArrayXd e_q;         // mean queue length at poll epochs (packets)
  ArrayXd p_nonempty;  // P{queue non-empty when polled}
};

Utilization utilization(const PollingConfig& cfg);

/// Second-moment coupling matrix of the queue-length solution for
/// uncorrelated Poisson input. Symmetric; identically zero when every
/// switchover moment vanishes. Requires rho < 1.
Eigen::MatrixXd nabla_matrix(const PollingConfig& cfg);
double nabla(const PollingConfig& cfg, int i, int j);

struct ChiPsi {
  double chi;
  double psi;
};

/// chi_i = 1 - s lambda_i / gamma_i - rho s lambda_i / (2 gamma_i (1-rho)),
/// psi_i = nabla_ii/(2 gamma_i)
///         + lambda_i/(2 gamma_i (1-rho)) * sum_l service_mean_l nabla_il.
/// Throws FeasibilityError if chi_i <= 0.
ChiPsi chi_psi(const PollingConfig& cfg, int i);

/// Mean queue length of queue i at its poll epochs.
double mean_queue_length(const PollingConfig& cfg, int i);

/// P{queue i non-empty when polled} = s lambda_i / (gamma_i (1 - rho)).
double prob_nonempty(const PollingConfig& cfg, int i);

/// Mean sojourn (arrival to departure) of queue-i packets. Valid only for
/// nonzero switchover; the zero-switchover system has its own closed form.
double mean_delay(const PollingConfig& cfg, int i);

DelayReport delay_report(const PollingConfig& cfg);

/// Closed-form mean sojourn of the zero-switchover WLAN instantiation,
///   (2 - rho) / (2 C (1 - rho)),   rho = sum(lambda)/C.
/// Identical for every queue: it depends on lambda only through its sum.
double mean_delay_zero_switchover(const ArrayXd& lambda, double capacity_pps);

/// WLAN instantiation: deterministic service 1/C, uniform selection,
/// deterministic switchover epsilon (zero allowed).
PollingConfig wlan_config(const ArrayXd& lambda, double capacity_pps,
                          double epsilon_s);

}  // namespace rps::polling
