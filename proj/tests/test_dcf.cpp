#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "rps/dcf.hpp"
#include "rps/errors.hpp"

using namespace rps;
using doctest::Approx;

namespace {

// High-precision reference values computed with 50-digit arithmetic from
// the two attempt-probability curves (W = 32, m = 5).
constexpr double kBeta1At0p105 = 0.053689217650526625;
constexpr double kBeta2At0p105N3 = 0.053955603578774956;
constexpr double kFixedPointP3 = 0.10455761949320164;
constexpr double kFixedPointBeta3 = 0.053721827100086618;
constexpr double kThroughput3 = 73.156556224751118;
constexpr double kThroughput5 = 70.273674676206997;

double curve_gap(double p, int n, const dcf::DcfParams& params) {
  return dcf::beta_from_backoff(p, params.cw_min_W, params.max_stage_m) -
         dcf::beta_from_collision(p, n);
}

}  // namespace

TEST_CASE("beta_from_backoff endpoints and frozen value") {
  CHECK(dcf::beta_from_backoff(0.0, 32, 5) == Approx(2.0 / 33).epsilon(1e-14));
  CHECK(dcf::beta_from_backoff(1.0, 32, 5) ==
        Approx(2.0 / 1025).epsilon(1e-14));
  CHECK(dcf::beta_from_backoff(0.105, 32, 5) ==
        Approx(kBeta1At0p105).epsilon(1e-14));
}

TEST_CASE("beta_from_backoff is continuous through p = 1/2") {
  // Analytic continuation: 2 / (W + 1 + W*m/2) at p = 1/2.
  const double at_half = dcf::beta_from_backoff(0.5, 32, 5);
  CHECK(at_half == Approx(2.0 / 113.0).epsilon(1e-14));
  CHECK(dcf::beta_from_backoff(0.5 - 1e-9, 32, 5) ==
        Approx(at_half).epsilon(1e-7));
  CHECK(dcf::beta_from_backoff(0.5 + 1e-9, 32, 5) ==
        Approx(at_half).epsilon(1e-7));
}

TEST_CASE("beta_from_backoff domain errors") {
  CHECK_THROWS_AS(dcf::beta_from_backoff(-0.1, 32, 5), std::domain_error);
  CHECK_THROWS_AS(dcf::beta_from_backoff(1.1, 32, 5), std::domain_error);
  CHECK_THROWS_AS(dcf::beta_from_backoff(std::nan(""), 32, 5),
                  std::domain_error);
  CHECK_THROWS_AS(dcf::beta_from_backoff(0.3, 1, 5), std::domain_error);
  CHECK_THROWS_AS(dcf::beta_from_backoff(0.3, 32, -1), std::domain_error);
}

TEST_CASE("beta_from_backoff strictly decreasing") {
  double prev = dcf::beta_from_backoff(0.0, 32, 5);
  for (int k = 1; k <= 1000; ++k) {
    const double cur = dcf::beta_from_backoff(k / 1000.0, 32, 5);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("beta_from_collision endpoints, frozen value, monotonicity") {
  CHECK(dcf::beta_from_collision(0.0, 5) == 0.0);
  CHECK(dcf::beta_from_collision(1.0, 3) == 1.0);
  CHECK(dcf::beta_from_collision(0.105, 3) ==
        Approx(kBeta2At0p105N3).epsilon(1e-14));
  CHECK_THROWS_AS(dcf::beta_from_collision(0.3, 1), std::domain_error);
  CHECK_THROWS_AS(dcf::beta_from_collision(-0.2, 3), std::domain_error);

  double prev = -1.0;
  for (int k = 0; k <= 1000; ++k) {
    const double cur = dcf::beta_from_collision(k / 1000.0, 4);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("solve_fixed_point matches the grid-scan oracle at n = 3") {
  const dcf::DcfParams params;
  const auto sol = dcf::solve_fixed_point(3, params, 1e-9);

  // Brute-force oracle: scan the curve gap at step 1e-6 for its sign change.
  double bracket_lo = -1.0;
  double prev = curve_gap(0.0, 3, params);
  for (int k = 1; k <= 1000000; ++k) {
    const double p = k * 1e-6;
    const double cur = curve_gap(p, 3, params);
    if (prev > 0 && cur <= 0) {
      bracket_lo = (k - 1) * 1e-6;
      break;
    }
    prev = cur;
  }
  REQUIRE(bracket_lo > 0);
  CHECK(sol.p >= bracket_lo);
  CHECK(sol.p <= bracket_lo + 1e-6);

  CHECK(sol.p == Approx(kFixedPointP3).epsilon(1e-7));
  CHECK(sol.beta == Approx(kFixedPointBeta3).epsilon(1e-7));
  CHECK(sol.residual <= 1e-8);
  CHECK(sol.iterations <= 200);
}

TEST_CASE("fixed point bracket: gap positive at 0, negative at 1") {
  const dcf::DcfParams params;
  for (int n : {2, 3, 10, 50}) {
    CHECK(curve_gap(0.0, n, params) > 0);
    CHECK(curve_gap(1.0, n, params) < 0);
  }
}

TEST_CASE("fixed point is unique: one sign change over [0,1]") {
  const dcf::DcfParams params;
  for (int n = 2; n <= 50; ++n) {
    int sign_changes = 0;
    double prev = curve_gap(0.0, n, params);
    for (int k = 1; k <= 10000; ++k) {
      const double cur = curve_gap(k * 1e-4, n, params);
      if ((prev > 0) != (cur > 0)) ++sign_changes;
      prev = cur;
    }
    CHECK(sign_changes == 1);
  }
}

TEST_CASE("solve_fixed_point rejects bad input") {
  const dcf::DcfParams params;
  CHECK_THROWS_AS(dcf::solve_fixed_point(1, params), std::domain_error);
  CHECK_THROWS_AS(dcf::solve_fixed_point(3, params, 0.0), std::domain_error);
}

TEST_CASE("slot durations for the default parameter set") {
  const auto d = dcf::slot_durations(dcf::DcfParams{});
  CHECK(d.t_idle == Approx(20.0).epsilon(1e-12));
  CHECK(d.t_success == Approx(12828.0).epsilon(1e-12));
  CHECK(d.t_collision == Approx(12514.0).epsilon(1e-12));
}

TEST_CASE("slot durations with zero overhead collapse to the payload time") {
  dcf::DcfParams p;
  p.slot_time = 0;
  p.sifs = 0;
  p.difs = 0;
  p.phy_header_time = 0;
  p.mac_header_bits = 0;
  p.ack_bits = 0;
  p.propagation_delay = 0;
  p.payload_bits = 12000;
  p.data_rate = 1e6;
  const auto d = dcf::slot_durations(p);
  CHECK(d.t_success == Approx(12000.0).epsilon(1e-12));
  CHECK(d.t_collision == Approx(12000.0).epsilon(1e-12));
}

TEST_CASE("DcfParams validation") {
  dcf::DcfParams p;
  p.cw_min_W = 1;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.data_rate = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.payload_bits = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.sifs = -1;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("slot probabilities: degenerate and frozen cases") {
  auto pr = dcf::slot_probabilities(0.0, 3);
  CHECK(pr.p_success == 0.0);
  CHECK(pr.p_idle == 1.0);
  CHECK(pr.p_collision == Approx(0.0).epsilon(1e-15));

  pr = dcf::slot_probabilities(1.0, 2);
  CHECK(pr.p_success == 0.0);
  CHECK(pr.p_idle == 0.0);
  CHECK(pr.p_collision == 1.0);

  pr = dcf::slot_probabilities(0.0538, 3);
  CHECK(pr.p_success == Approx(0.144500522616).epsilon(1e-11));
  CHECK(pr.p_idle == Approx(0.847127599128).epsilon(1e-11));
  CHECK(pr.p_collision == Approx(0.008371878256).epsilon(1e-9));
}

TEST_CASE("slot probabilities sum to one") {
  std::uint64_t state = 42;
  auto next = [&state]() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(state >> 11) * 0x1.0p-53;
  };
  for (int trial = 0; trial < 200; ++trial) {
    const double beta = next();
    const int n = 1 + static_cast<int>(next() * 40);
    const auto pr = dcf::slot_probabilities(beta, n);
    CHECK(std::abs(pr.p_success + pr.p_idle + pr.p_collision - 1.0) <= 1e-12);
    CHECK(pr.p_success >= 0.0);
    CHECK(pr.p_idle >= 0.0);
    CHECK(pr.p_collision >= -1e-15);
  }
}

TEST_CASE("aggregate throughput: frozen values and calibration") {
  const dcf::DcfParams params;
  const double s3 = dcf::aggregate_throughput(3, params);
  CHECK(s3 == Approx(kThroughput3).epsilon(1e-9));
  // Calibration anchor: within 2% of the 72.5 pkts/s constant the delay
  // formulas are evaluated with.
  CHECK(std::abs(s3 - 72.5) / 72.5 < 0.02);
  // With full-frame collisions the saturation throughput declines as n
  // grows; the flat-capacity reading only holds for small n.
  CHECK(dcf::aggregate_throughput(5, params) ==
        Approx(kThroughput5).epsilon(1e-9));
  CHECK(dcf::aggregate_throughput(2, params) ==
        Approx(74.784130316967371).epsilon(1e-9));
  CHECK(dcf::aggregate_throughput(30, params) ==
        Approx(56.663331970169937).epsilon(1e-9));
}

TEST_CASE("throughput is invariant under time rescaling") {
  const dcf::DcfParams base;
  const double s_base = dcf::aggregate_throughput(4, base);
  const double k = 3.7;
  dcf::DcfParams scaled = base;
  scaled.slot_time *= k;
  scaled.sifs *= k;
  scaled.difs *= k;
  scaled.phy_header_time *= k;
  scaled.propagation_delay *= k;
  scaled.data_rate /= k;  // bit times scale with k as well
  const double s_scaled = dcf::aggregate_throughput(4, scaled);
  CHECK(s_scaled == Approx(s_base / k).epsilon(1e-12));
}

TEST_CASE("throughput curve delegates to aggregate_throughput") {
  const dcf::DcfParams params;
  const auto single = dcf::throughput_curve(2, 2, params);
  REQUIRE(single.size() == 1);
  CHECK(single[0].n == 2);
  CHECK(single[0].throughput_pps ==
        Approx(dcf::aggregate_throughput(2, params)).epsilon(1e-15));

  const auto row3 = dcf::throughput_curve(3, 3, params);
  CHECK(row3[0].throughput_pps == Approx(kThroughput3).epsilon(1e-9));

  const auto curve = dcf::throughput_curve(2, 30, params);
  REQUIRE(curve.size() == 29);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    CHECK(curve[i].n == static_cast<int>(i) + 2);
    CHECK(curve[i].throughput_pps ==
          Approx(dcf::aggregate_throughput(curve[i].n, params))
              .epsilon(1e-15));
  }
  for (std::size_t i = 1; i < curve.size(); ++i)
    CHECK(curve[i].throughput_pps < curve[i - 1].throughput_pps);

  CHECK_THROWS_AS(dcf::throughput_curve(1, 5, params), std::domain_error);
  CHECK_THROWS_AS(dcf::throughput_curve(5, 4, params), std::domain_error);
}
