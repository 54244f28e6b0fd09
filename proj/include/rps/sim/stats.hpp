#pragma once

namespace rps::sim {

/// Welford's online mean/variance accumulator. Merging two accumulators
/// matches single-pass accumulation up to rounding.
struct ReplicationStats {
  long long count = 0;
  double mean = 0.0;
  double m2 = 0.0;  // running sum of squared deviations

  void push(double x);
  void merge(const ReplicationStats& other);

  /// Sample variance m2/(count-1); requires count >= 2.
  double variance() const;
};

struct ConfidenceInterval {
  double mean;
  double halfwidth;
};

/// Two-sided 95% Student-t interval over the replications seen so far.
ConfidenceInterval ci95(const ReplicationStats& stats);

/// Upper 0.975 quantile of Student's t with dof degrees of freedom.
double student_t_quantile_975(long long dof);

}  // namespace rps::sim
