#include "rps/polling.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rps/errors.hpp"

namespace rps::polling {

namespace {

void check_index(const PollingConfig& cfg, int i) {
  if (i < 0 || i >= cfg.n())
    throw std::out_of_range("queue index " + std::to_string(i) +
                            " out of range [0," + std::to_string(cfg.n()) +
                            ")");
}

double stable_rho(const PollingConfig& cfg) {
  const double rho = (cfg.lambda * cfg.service_mean).sum();
  if (!(rho < 1.0))
    throw InstabilityError("utilization rho = " + std::to_string(rho) +
                           " >= 1");
  return rho;
}

ArrayXd chi_vector(const PollingConfig& cfg, double rho, double s) {
  return 1.0 - s * cfg.lambda / cfg.gamma -
         rho * s * cfg.lambda / (2.0 * cfg.gamma * (1.0 - rho));
}

ArrayXd psi_vector(const PollingConfig& cfg, const Eigen::MatrixXd& nab,
                   double rho) {
  const ArrayXd diag = nab.diagonal().array();
  const ArrayXd weighted = (nab * cfg.service_mean.matrix()).array();
  return diag / (2.0 * cfg.gamma) +
         cfg.lambda * weighted / (2.0 * cfg.gamma * (1.0 - rho));
}

}  // namespace

void PollingConfig::validate() const {
  const auto n = lambda.size();
  if (n < 1) throw ConfigError("polling config needs at least one queue");
  if (gamma.size() != n || service_mean.size() != n || service_m2.size() != n ||
      switch_mean.size() != n || switch_m2.size() != n)
    throw ConfigError("polling config vectors must all have length n");
  if (!(lambda > 0.0).all())
    throw ConfigError("all arrival rates must be positive");
  if (!(gamma > 0.0).all() || !(gamma <= 1.0).all())
    throw ConfigError("selection probabilities must lie in (0,1]");
  if (std::abs(gamma.sum() - 1.0) > 1e-12)
    throw ConfigError("selection probabilities must sum to 1");
  if ((service_mean < 0.0).any() || (switch_mean < 0.0).any())
    throw ConfigError("service/switchover means must be nonnegative");
  // Second moments must dominate the squared means (allow rounding slack).
  if ((service_m2 < service_mean.square() * (1.0 - 1e-9)).any())
    throw ConfigError("service_m2 < service_mean^2");
  if ((switch_m2 < switch_mean.square() * (1.0 - 1e-9)).any())
    throw ConfigError("switch_m2 < switch_mean^2");
}

Utilization utilization(const PollingConfig& cfg) {
  cfg.validate();
  Utilization u;
  u.per_queue = cfg.lambda * cfg.service_mean;
  u.total = u.per_queue.sum();
  return u;
}

Eigen::MatrixXd nabla_matrix(const PollingConfig& cfg) {
  cfg.validate();
  const double rho = stable_rho(cfg);
  const double s = cfg.mean_switchover();
  const double one_m = 1.0 - rho;

  // Queue-independent moment sum over a fresh dummy index.
  const double moment_sum =
      (cfg.gamma * cfg.switch_m2 +
       (cfg.service_m2 + 2.0 * cfg.switch_mean * cfg.service_mean) *
           cfg.lambda * s / one_m)
          .sum();

  const Eigen::VectorXd lam = cfg.lambda.matrix();
  const Eigen::VectorXd cost =
      (cfg.lambda * (cfg.switch_mean + cfg.service_mean)).matrix();

  Eigen::MatrixXd nab = moment_sum * (lam * lam.transpose());
  nab.diagonal().array() += 2.0 * cfg.lambda * s / one_m;
  // lambda_i lambda_j (s_i + s_j + p_i + p_j) as a sum of two outer products.
  nab -= (s / one_m) * (cost * lam.transpose() + lam * cost.transpose());
  return nab;
}

double nabla(const PollingConfig& cfg, int i, int j) {
  check_index(cfg, i);
  check_index(cfg, j);
  return nabla_matrix(cfg)(i, j);
}

ChiPsi chi_psi(const PollingConfig& cfg, int i) {
  check_index(cfg, i);
  const Eigen::MatrixXd nab = nabla_matrix(cfg);  // validates, checks rho
  const double rho = (cfg.lambda * cfg.service_mean).sum();
  const double s = cfg.mean_switchover();
  const ArrayXd chi = chi_vector(cfg, rho, s);
  if (chi(i) <= 0.0)
    throw FeasibilityError("chi_" + std::to_string(i) +
                           " <= 0: switchover load too high for queue");
  const ArrayXd psi = psi_vector(cfg, nab, rho);
  return {chi(i), psi(i)};
}

double mean_queue_length(const PollingConfig& cfg, int i) {
  check_index(cfg, i);
  const Eigen::MatrixXd nab = nabla_matrix(cfg);
  const double rho = (cfg.lambda * cfg.service_mean).sum();
  const double s = cfg.mean_switchover();
  const ArrayXd chi = chi_vector(cfg, rho, s);
  if ((chi <= 0.0).any())
    throw FeasibilityError("some chi_l <= 0: switchover load too high");
  const ArrayXd psi = psi_vector(cfg, nab, rho);

  const double denom =
      1.0 - (cfg.service_mean * cfg.lambda.square() * s /
             (2.0 * cfg.gamma * (1.0 - rho) * chi))
                .sum();
  if (denom <= 0.0)
    throw FeasibilityError("queue-length denominator <= 0: config infeasible");
  const double coupling = (cfg.service_mean * psi / chi).sum();

  return psi(i) / chi(i) +
         s * cfg.lambda(i) * cfg.lambda(i) /
             (2.0 * cfg.gamma(i) * (1.0 - rho) * chi(i)) * coupling / denom;
}

double prob_nonempty(const PollingConfig& cfg, int i) {
  check_index(cfg, i);
  cfg.validate();
  const double rho = stable_rho(cfg);
  const double s = cfg.mean_switchover();
  const double p = s * cfg.lambda(i) / (cfg.gamma(i) * (1.0 - rho));
  if (p > 1.0)
    throw FeasibilityError("P{Q_" + std::to_string(i) +
                           " >= 1} > 1: config infeasible");
  return p;
}

double mean_delay(const PollingConfig& cfg, int i) {
  check_index(cfg, i);
  cfg.validate();
  if (cfg.mean_switchover() <= 0.0)
    throw std::domain_error(
        "mean_delay requires nonzero switchover; "
        "use mean_delay_zero_switchover for the zero-switchover system");
  const double eq = mean_queue_length(cfg, i);
  const double pn = prob_nonempty(cfg, i);
  const double rho_i = cfg.lambda(i) * cfg.service_mean(i);
  return eq / (cfg.lambda(i) * pn) - (1.0 - rho_i) / cfg.lambda(i);
}

DelayReport delay_report(const PollingConfig& cfg) {
  cfg.validate();
  const Utilization u = utilization(cfg);
  DelayReport rep;
  rep.rho_i = u.per_queue;
  rep.rho = u.total;
  const int n = cfg.n();
  rep.e_w.resize(n);
  rep.e_q.resize(n);
  rep.p_nonempty.resize(n);
  if (cfg.mean_switchover() <= 0.0) {
    // Zero-switchover system: poll epochs are dense, the per-poll queue
    // length and non-empty probability vanish and the sojourn takes the
    // closed form. That form assumes one service rate shared by all queues.
    const double p0 = cfg.service_mean(0);
    if (!(p0 > 0.0) || !((cfg.service_mean - p0).abs() < 1e-12 * p0).all())
      throw std::domain_error(
          "zero-switchover closed form needs equal positive service means");
    rep.e_w.setConstant(mean_delay_zero_switchover(cfg.lambda, 1.0 / p0));
    rep.e_q.setZero();
    rep.p_nonempty.setZero();
    return rep;
  }
  for (int i = 0; i < n; ++i) {
    rep.e_w(i) = mean_delay(cfg, i);
    rep.e_q(i) = mean_queue_length(cfg, i);
    rep.p_nonempty(i) = prob_nonempty(cfg, i);
  }
  return rep;
}

double mean_delay_zero_switchover(const ArrayXd& lambda, double capacity_pps) {
  if (!(capacity_pps > 0.0))
    throw std::domain_error("capacity must be positive");
  if (lambda.size() < 1) throw std::domain_error("empty rate vector");
  if ((lambda < 0.0).any())
    throw std::domain_error("arrival rates must be nonnegative");
  const double rho = lambda.sum() / capacity_pps;
  if (!(rho < 1.0))
    throw InstabilityError("sum(lambda) = " + std::to_string(lambda.sum()) +
                           " >= capacity " + std::to_string(capacity_pps));
  return (2.0 - rho) / (2.0 * capacity_pps * (1.0 - rho));
}

PollingConfig wlan_config(const ArrayXd& lambda, double capacity_pps,
                          double epsilon_s) {
  if (!(capacity_pps > 0.0))
    throw std::domain_error("capacity must be positive");
  if (epsilon_s < 0.0)
    throw std::domain_error("switchover epsilon must be nonnegative");
  const auto n = lambda.size();
  PollingConfig cfg;
  cfg.lambda = lambda;
  cfg.gamma = ArrayXd::Constant(n, 1.0 / static_cast<double>(n));
  cfg.service_mean = ArrayXd::Constant(n, 1.0 / capacity_pps);
  cfg.service_m2 = ArrayXd::Constant(n, 1.0 / (capacity_pps * capacity_pps));
  cfg.switch_mean = ArrayXd::Constant(n, epsilon_s);
  cfg.switch_m2 = ArrayXd::Constant(n, epsilon_s * epsilon_s);
  cfg.validate();
  return cfg;
}

}  // namespace rps::polling
