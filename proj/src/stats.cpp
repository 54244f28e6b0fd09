#include "rps/sim/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace rps::sim {

void ReplicationStats::push(double x) {
  ++count;
  const double delta = x - mean;
  mean += delta / static_cast<double>(count);
  m2 += delta * (x - mean);
}

void ReplicationStats::merge(const ReplicationStats& other) {
  if (other.count == 0) return;
  if (count == 0) {
    *this = other;
    return;
  }
  const double total = static_cast<double>(count + other.count);
  const double delta = other.mean - mean;
  const double combined_mean =
      (mean * static_cast<double>(count) +
       other.mean * static_cast<double>(other.count)) /
      total;
  m2 += other.m2 + delta * delta * static_cast<double>(count) *
                       static_cast<double>(other.count) / total;
  mean = combined_mean;
  count += other.count;
}

double ReplicationStats::variance() const {
  if (count < 2)
    throw std::invalid_argument("variance needs at least two samples");
  return m2 / static_cast<double>(count - 1);
}

namespace {

// Continued fraction for the regularized incomplete beta (Lentz's method).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

// Regularized incomplete beta I_x(a, b).
double ibeta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log1p(-x);
  const double bt = std::exp(ln_bt);
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

// CDF of Student's t at t >= 0 with dof degrees of freedom.
double student_t_cdf(double t, double dof) {
  const double x = dof / (dof + t * t);
  return 1.0 - 0.5 * ibeta(0.5 * dof, 0.5, x);
}

}  // namespace

double student_t_quantile_975(long long dof) {
  if (dof < 1) throw std::invalid_argument("t quantile needs dof >= 1");
  const double v = static_cast<double>(dof);
  // Monotone CDF; the 0.975 quantile is at most 12.71 (dof = 1).
  double lo = 0.0, hi = 20.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_cdf(mid, v) < 0.975)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

ConfidenceInterval ci95(const ReplicationStats& stats) {
  if (stats.count < 2)
    throw std::invalid_argument("ci95 needs at least two replications");
  const double t = student_t_quantile_975(stats.count - 1);
  const double hw =
      t * std::sqrt(stats.variance() / static_cast<double>(stats.count));
  return {stats.mean, hw};
}

}  // namespace rps::sim
