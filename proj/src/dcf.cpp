#include "rps/dcf.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rps/errors.hpp"

namespace rps::dcf {

void DcfParams::validate() const {
  if (cw_min_W < 2) throw ConfigError("cw_min_W must be >= 2");
  if (max_stage_m < 0) throw ConfigError("max_stage_m must be >= 0");
  if (slot_time < 0 || sifs < 0 || difs < 0 || phy_header_time < 0 ||
      propagation_delay < 0)
    throw ConfigError("durations must be nonnegative");
  if (mac_header_bits < 0 || ack_bits < 0)
    throw ConfigError("header/ack bit counts must be nonnegative");
  if (payload_bits <= 0) throw ConfigError("payload_bits must be positive");
  if (data_rate <= 0) throw ConfigError("data_rate must be positive");
}

double beta_from_backoff(double p, int W, int m) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("beta_from_backoff: p must lie in [0,1]");
  if (W < 2) throw std::domain_error("beta_from_backoff: W must be >= 2");
  if (m < 0) throw std::domain_error("beta_from_backoff: m must be >= 0");
  // Factor 1 - (2p)^m = (1 - 2p) * sum_{k<m} (2p)^k, which cancels the
  // (1 - 2p) in the numerator and keeps p = 1/2 finite.
  double geom = 0.0;
  double term = 1.0;
  for (int k = 0; k < m; ++k) {
    geom += term;
    term *= 2.0 * p;
  }
  return 2.0 / ((W + 1.0) + p * W * geom);
}

double beta_from_collision(double p, int n) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("beta_from_collision: p must lie in [0,1]");
  if (n < 2) throw std::domain_error("beta_from_collision: n must be >= 2");
  return 1.0 - std::pow(1.0 - p, 1.0 / (n - 1));
}

FixedPointSolution solve_fixed_point(int n, const DcfParams& params,
                                     double tol) {
  params.validate();
  if (n < 2) throw std::domain_error("solve_fixed_point: n must be >= 2");
  if (!(tol > 0)) throw std::domain_error("solve_fixed_point: tol must be > 0");

  const int W = params.cw_min_W;
  const int m = params.max_stage_m;
  auto f = [&](double p) {
    return beta_from_backoff(p, W, m) - beta_from_collision(p, n);
  };

  // f(0) = 2/(W+1) > 0 and f(1) = 2/(2^m W + 1) - 1 < 0.
  double lo = 0.0, hi = 1.0;
  const int max_iters = 200;
  int it = 0;
  while (hi - lo > tol && it < max_iters) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) > 0)
      lo = mid;
    else
      hi = mid;
    ++it;
  }
  if (hi - lo > tol)
    throw SolverError("solve_fixed_point: no convergence after " +
                      std::to_string(max_iters) + " iterations");

  FixedPointSolution sol;
  sol.p = 0.5 * (lo + hi);
  sol.beta = beta_from_backoff(sol.p, W, m);
  sol.residual = std::abs(f(sol.p));
  sol.iterations = it;
  return sol;
}

SlotDurations slot_durations(const DcfParams& params) {
  params.validate();
  const double us_per_bit = 1e6 / params.data_rate;
  const double data_time =
      params.phy_header_time +
      (params.mac_header_bits + params.payload_bits) * us_per_bit +
      params.propagation_delay;
  const double ack_time =
      params.phy_header_time + params.ack_bits * us_per_bit +
      params.propagation_delay;
  SlotDurations d;
  d.t_idle = params.slot_time;
  d.t_success = data_time + params.sifs + ack_time + params.difs;
  d.t_collision = data_time + params.difs;
  return d;
}

SlotProbabilities slot_probabilities(double beta, int n) {
  SlotProbabilities pr;
  pr.p_success = n * beta * std::pow(1.0 - beta, n - 1);
  pr.p_idle = std::pow(1.0 - beta, n);
  pr.p_collision = 1.0 - pr.p_success - pr.p_idle;
  return pr;
}

SlotModel slot_model(int n, const DcfParams& params, double tol) {
  const FixedPointSolution fp = solve_fixed_point(n, params, tol);
  const SlotProbabilities pr = slot_probabilities(fp.beta, n);
  const SlotDurations dur = slot_durations(params);
  SlotModel model;
  model.p_success = pr.p_success;
  model.p_idle = pr.p_idle;
  model.p_collision = pr.p_collision;
  model.t_success = dur.t_success;
  model.t_idle = dur.t_idle;
  model.t_collision = dur.t_collision;
  const double mean_slot_us = pr.p_idle * dur.t_idle +
                              pr.p_success * dur.t_success +
                              pr.p_collision * dur.t_collision;
  model.throughput_pps = pr.p_success / mean_slot_us * 1e6;
  return model;
}

double aggregate_throughput(int n, const DcfParams& params, double tol) {
  return slot_model(n, params, tol).throughput_pps;
}

std::vector<ThroughputPoint> throughput_curve(int n_min, int n_max,
                                              const DcfParams& params) {
  if (n_min < 2 || n_min > n_max)
    throw std::domain_error("throughput_curve: need 2 <= n_min <= n_max");
  std::vector<ThroughputPoint> curve;
  curve.reserve(n_max - n_min + 1);
  for (int n = n_min; n <= n_max; ++n)
    curve.push_back({n, aggregate_throughput(n, params)});
  return curve;
}

}  // namespace rps::dcf
