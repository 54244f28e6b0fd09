#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "rps/errors.hpp"
#include "rps/polling.hpp"

using namespace rps;
using doctest::Approx;
using Eigen::ArrayXd;

namespace {

ArrayXd rates(std::initializer_list<double> v) {
  ArrayXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Symmetric two-queue system with deterministic service 1/72.5 and
// deterministic switchover 1e-3: reference values from 40-digit arithmetic.
polling::PollingConfig config_b() {
  const double c = 72.5;
  polling::PollingConfig cfg;
  cfg.lambda = rates({20.0, 20.0});
  cfg.gamma = rates({0.5, 0.5});
  cfg.service_mean = ArrayXd::Constant(2, 1.0 / c);
  cfg.service_m2 = ArrayXd::Constant(2, 1.0 / (c * c));
  cfg.switch_mean = ArrayXd::Constant(2, 1e-3);
  cfg.switch_m2 = ArrayXd::Constant(2, 1e-6);
  return cfg;
}

// Asymmetric three-queue system mixing exponential-style service moments
// (m2 = 2 m^2) with deterministic switchover moments.
polling::PollingConfig config_c() {
  polling::PollingConfig cfg;
  cfg.lambda = rates({5.0, 15.0, 25.0});
  cfg.gamma = rates({0.2, 0.3, 0.5});
  cfg.service_mean = rates({0.004, 0.006, 0.008});
  cfg.service_m2 = 2.0 * cfg.service_mean.square();
  cfg.switch_mean = rates({0.0005, 0.001, 0.0015});
  cfg.switch_m2 = cfg.switch_mean.square();
  return cfg;
}

}  // namespace

TEST_CASE("PollingConfig validation") {
  auto cfg = config_b();
  CHECK_NOTHROW(cfg.validate());

  cfg.lambda(0) = 0.0;  // silent queues are rejected
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = config_b();
  cfg.gamma(0) = 0.7;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = config_b();
  cfg.service_m2(1) = 0.5 * cfg.service_mean(1) * cfg.service_mean(1);
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = config_b();
  cfg.switch_mean = ArrayXd::Constant(3, 1e-3);
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  // A single queue is allowed; its gamma must then be exactly one.
  const auto single = polling::wlan_config(rates({30.0}), 72.5, 0.0);
  CHECK(single.gamma(0) == 1.0);
}

TEST_CASE("utilization") {
  const double c = 72.5;
  auto cfg = polling::wlan_config(rates({10.0, 10.0, 10.0}), c, 0.0);
  auto u = polling::utilization(cfg);
  CHECK(u.total == Approx(0.41379310344827586).epsilon(1e-14));

  cfg = polling::wlan_config(rates({10.0, 30.3, 20.0}), c, 0.0);
  u = polling::utilization(cfg);
  CHECK(u.total == Approx(0.83172413793103448).epsilon(1e-14));
  CHECK(u.per_queue(1) == Approx(30.3 / c).epsilon(1e-14));
}

TEST_CASE("utilization with zero service time") {
  polling::PollingConfig cfg;
  cfg.lambda = rates({12.0});
  cfg.gamma = rates({1.0});
  cfg.service_mean = ArrayXd::Zero(1);
  cfg.service_m2 = ArrayXd::Zero(1);
  cfg.switch_mean = ArrayXd::Zero(1);
  cfg.switch_m2 = ArrayXd::Zero(1);
  const auto u = polling::utilization(cfg);
  CHECK(u.total == 0.0);
}

TEST_CASE("nabla vanishes with zero switchover") {
  const auto cfg = polling::wlan_config(rates({10.0, 20.0, 30.0}), 72.5, 0.0);
  const auto nab = polling::nabla_matrix(cfg);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(nab(i, j) == 0.0);
}

TEST_CASE("nabla matrix: frozen values and symmetry") {
  const auto cfg = config_b();
  CHECK(polling::nabla(cfg, 0, 0) ==
        Approx(0.071005835543766578).epsilon(1e-12));
  CHECK(polling::nabla(cfg, 0, 1) ==
        Approx(-0.018224933687002653).epsilon(1e-12));

  const auto cfg_c = config_c();
  const auto nab = polling::nabla_matrix(cfg_c);
  CHECK(nab(0, 0) == Approx(0.016546875).epsilon(1e-12));
  CHECK(nab(0, 1) == Approx(-0.000671875).epsilon(1e-12));
  CHECK(nab(0, 2) == Approx(-0.001640625).epsilon(1e-12));
  CHECK(nab(1, 1) == Approx(0.047046875).epsilon(1e-12));
  CHECK(nab(1, 2) == Approx(-0.006484375).epsilon(1e-12));
  CHECK(nab(2, 2) == Approx(0.069921875).epsilon(1e-12));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(nab(i, j) == Approx(nab(j, i)).epsilon(1e-14));

  CHECK_THROWS_AS(polling::nabla(cfg, 2, 0), std::out_of_range);
}

TEST_CASE("nabla rejects unstable load") {
  const auto cfg = polling::wlan_config(rates({40.0, 40.0}), 72.5, 1e-3);
  CHECK_THROWS_AS(polling::nabla_matrix(cfg), InstabilityError);
}

TEST_CASE("chi and psi") {
  SUBCASE("zero switchover gives chi = 1, psi = 0") {
    const auto cfg = polling::wlan_config(rates({10.0, 10.0, 10.0}), 72.5, 0.0);
    const auto cp = polling::chi_psi(cfg, 0);
    CHECK(cp.chi == 1.0);
    CHECK(cp.psi == 0.0);
  }
  SUBCASE("frozen values, symmetric two-queue system") {
    const auto cp = polling::chi_psi(config_b(), 0);
    CHECK(cp.chi == Approx(0.93538461538461538).epsilon(1e-12));
    CHECK(cp.psi == Approx(0.10348639053254438).epsilon(1e-12));
  }
  SUBCASE("frozen values, asymmetric system") {
    const auto cfg = config_c();
    const double chi[3] = {0.96479166666666667, 0.92958333333333333,
                           0.92958333333333333};
    const double psi[3] = {0.042255434782608696, 0.086662137681159420,
                           0.088541666666666667};
    for (int i = 0; i < 3; ++i) {
      const auto cp = polling::chi_psi(cfg, i);
      CHECK(cp.chi == Approx(chi[i]).epsilon(1e-12));
      CHECK(cp.psi == Approx(psi[i]).epsilon(1e-12));
    }
  }
  SUBCASE("WLAN instantiation at epsilon 1e-6 keeps chi within 1e-4 of 1") {
    const auto cfg = polling::wlan_config(rates({10.0, 10.0, 10.0}), 72.5, 1e-6);
    const auto cp = polling::chi_psi(cfg, 0);
    CHECK(cp.chi == Approx(0.99995941176470588).epsilon(1e-12));
    CHECK(1.0 - cp.chi < 2e-4);
    CHECK(cp.chi < 1.0);
  }
  SUBCASE("switchover load beyond feasibility") {
    const auto cfg = polling::wlan_config(rates({20.0, 20.0}), 72.5, 0.1);
    CHECK_THROWS_AS(polling::chi_psi(cfg, 0), FeasibilityError);
  }
}

TEST_CASE("mean queue length") {
  SUBCASE("zero switchover gives exactly zero") {
    const auto cfg = polling::wlan_config(rates({10.0, 10.0, 10.0}), 72.5, 0.0);
    CHECK(polling::mean_queue_length(cfg, 0) == 0.0);
    CHECK(polling::mean_queue_length(cfg, 2) == 0.0);
  }
  SUBCASE("frozen values") {
    CHECK(polling::mean_queue_length(config_b(), 0) ==
          Approx(0.11362525987525988).epsilon(1e-12));
    const auto cfg = config_c();
    const double eq[3] = {0.043961248981611421, 0.094246751083256328,
                          0.096948581526940280};
    for (int i = 0; i < 3; ++i)
      CHECK(polling::mean_queue_length(cfg, i) == Approx(eq[i]).epsilon(1e-12));
  }
}

TEST_CASE("prob_nonempty") {
  SUBCASE("zero switchover gives zero") {
    const auto cfg = polling::wlan_config(rates({10.0, 10.0, 10.0}), 72.5, 0.0);
    CHECK(polling::prob_nonempty(cfg, 1) == 0.0);
  }
  SUBCASE("frozen arithmetic example") {
    const auto cfg = polling::wlan_config(rates({10.0, 10.0, 10.0}), 72.5, 1e-3);
    CHECK(polling::prob_nonempty(cfg, 0) ==
          Approx(0.051176470588235294).epsilon(1e-12));
  }
  SUBCASE("linear in the switchover mean") {
    const auto lam = rates({10.0, 10.0, 10.0});
    const double p1 = polling::prob_nonempty(polling::wlan_config(lam, 72.5, 1e-3), 0);
    const double p2 = polling::prob_nonempty(polling::wlan_config(lam, 72.5, 2e-3), 0);
    CHECK(p2 == Approx(2.0 * p1).epsilon(1e-12));
  }
  SUBCASE("values above one are infeasible") {
    const auto cfg = polling::wlan_config(rates({20.0, 20.0}), 72.5, 0.05);
    CHECK_THROWS_AS(polling::prob_nonempty(cfg, 0), FeasibilityError);
  }
}

TEST_CASE("mean delay, general path") {
  SUBCASE("frozen values") {
    CHECK(polling::mean_delay(config_b(), 0) ==
          Approx(0.027462430102516309).epsilon(1e-12));
    const auto cfg = config_c();
    const double ew[3] = {0.015013995111734822, 0.014730734199938396,
                          0.014535319132931334};
    for (int i = 0; i < 3; ++i)
      CHECK(polling::mean_delay(cfg, i) == Approx(ew[i]).epsilon(1e-12));
  }
  SUBCASE("zero switchover is out of the general path's domain") {
    const auto cfg = polling::wlan_config(rates({10.0, 10.0}), 72.5, 0.0);
    CHECK_THROWS_AS(polling::mean_delay(cfg, 0), std::domain_error);
  }
  SUBCASE("tiny switchover approaches the closed form") {
    const auto lam = rates({10.0, 10.0, 10.0});
    const auto cfg = polling::wlan_config(lam, 72.5, 1e-9);
    CHECK(polling::mean_delay(cfg, 0) ==
          Approx(0.018661262473273128).epsilon(1e-10));
  }
  SUBCASE("symmetric config gives identical delays") {
    const auto cfg = config_b();
    CHECK(polling::mean_delay(cfg, 0) ==
          Approx(polling::mean_delay(cfg, 1)).epsilon(1e-15));
  }
}

TEST_CASE("mean_delay_zero_switchover: frozen table values") {
  const double c = 72.5;
  CHECK(polling::mean_delay_zero_switchover(rates({10.0, 30.3, 20.0}), c) ==
        Approx(0.047880158281514956).epsilon(1e-13));
  CHECK(polling::mean_delay_zero_switchover(rates({20.0, 20.0, 20.0}), c) ==
        Approx(0.046896551724137931).epsilon(1e-13));
  CHECK(polling::mean_delay_zero_switchover(rates({10.0, 10.0, 10.0}), c) ==
        Approx(0.018661257606490872).epsilon(1e-13));
  // rho -> 0 leaves the bare service time 1/C (13.79 ms at C = 72.5).
  CHECK(polling::mean_delay_zero_switchover(rates({0.0, 0.0}), c) ==
        Approx(1.0 / c).epsilon(1e-15));
  CHECK_THROWS_AS(polling::mean_delay_zero_switchover(rates({40.0, 40.0}), c),
                  InstabilityError);
  CHECK_THROWS_AS(polling::mean_delay_zero_switchover(rates({10.0}), 0.0),
                  std::domain_error);
}

TEST_CASE("mean_delay_zero_switchover depends on lambda only through its sum") {
  const double c = 72.5;
  const double base =
      polling::mean_delay_zero_switchover(rates({10.0, 10.0, 10.0}), c);
  // Equal sums must give bit-identical outputs.
  CHECK(polling::mean_delay_zero_switchover(rates({5.0, 10.0, 15.0}), c) ==
        base);
  CHECK(polling::mean_delay_zero_switchover(rates({1.0, 1.0, 28.0}), c) ==
        base);
  CHECK(polling::mean_delay_zero_switchover(rates({29.5, 0.25, 0.25}), c) ==
        base);
  CHECK(polling::mean_delay_zero_switchover(rates({30.0}), c) == base);
}

TEST_CASE("mean_delay_zero_switchover strictly increasing in rho") {
  const double c = 72.5;
  double prev = 0.0;
  for (int k = 1; k <= 99; ++k) {
    const double rho = k / 100.0;
    const double w = polling::mean_delay_zero_switchover(rates({rho * c}), c);
    CHECK(w > prev);
    prev = w;
  }
}

TEST_CASE("sojourn identity: rho_i/lambda_i - 1/lambda_i = -(1-rho_i)/lambda_i") {
  const auto cfg = config_c();
  for (int i = 0; i < cfg.n(); ++i) {
    const double lam = cfg.lambda(i);
    const double rho_i = lam * cfg.service_mean(i);
    CHECK(rho_i / lam - 1.0 / lam ==
          Approx(-(1.0 - rho_i) / lam).epsilon(1e-15));
  }
}

TEST_CASE("wlan_config instantiation") {
  const auto lam = rates({7.5, 7.5, 7.5, 7.5});
  const auto cfg = polling::wlan_config(lam, 72.5, 1e-6);
  CHECK(cfg.n() == 4);
  CHECK(cfg.gamma.sum() == Approx(1.0).epsilon(1e-15));
  CHECK(cfg.gamma(2) == Approx(0.25).epsilon(1e-15));
  CHECK(cfg.service_mean(0) == Approx(1.0 / 72.5).epsilon(1e-15));
  CHECK(cfg.service_m2(0) == Approx(1.0 / (72.5 * 72.5)).epsilon(1e-15));
  CHECK(cfg.switch_mean(3) == 1e-6);
  CHECK(cfg.switch_m2(3) == Approx(1e-12).epsilon(1e-15));

  const auto zero = polling::wlan_config(lam, 72.5, 0.0);
  CHECK(zero.mean_switchover() == 0.0);

  const auto u = polling::utilization(
      polling::wlan_config(rates({10.0, 10.0, 10.0}), 72.5, 0.0));
  CHECK(u.total == Approx(0.41379310344827586).epsilon(1e-14));

  CHECK_THROWS_AS(polling::wlan_config(lam, -1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(polling::wlan_config(lam, 72.5, -1e-9), std::domain_error);
}

TEST_CASE("delay_report matches the individual operations") {
  const auto cfg = config_c();
  const auto rep = polling::delay_report(cfg);
  CHECK(rep.rho == Approx(0.31).epsilon(1e-14));
  for (int i = 0; i < cfg.n(); ++i) {
    CHECK(rep.e_w(i) == Approx(polling::mean_delay(cfg, i)).epsilon(1e-15));
    CHECK(rep.e_q(i) ==
          Approx(polling::mean_queue_length(cfg, i)).epsilon(1e-15));
    CHECK(rep.p_nonempty(i) ==
          Approx(polling::prob_nonempty(cfg, i)).epsilon(1e-15));
  }

  const auto zero = polling::wlan_config(rates({10.0, 10.0, 10.0}), 72.5, 0.0);
  const auto zrep = polling::delay_report(zero);
  CHECK(zrep.e_w(0) == Approx(0.018661257606490872).epsilon(1e-13));
  CHECK(zrep.e_q(2) == 0.0);
  CHECK(zrep.p_nonempty(1) == 0.0);
}
