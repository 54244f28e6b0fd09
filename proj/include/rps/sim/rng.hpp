#pragma once

#include <cstdint>
#include <random>

namespace rps::sim {

/// Reproducible random stream: the pair (master_seed, stream_id) fully
/// determines the sequence, and distinct stream ids give statistically
/// independent streams. One stream per replication.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  /// Uniform on the open interval (0,1).
  double uniform();

  /// Uniform integer in [0, bound); bound >= 1.
  std::uint64_t uniform_int(std::uint64_t bound);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

/// Inverse-CDF exponential sample, -ln(U)/rate. Throws std::domain_error
/// for rate <= 0.
double sample_exponential(RngStream& stream, double rate);

}  // namespace rps::sim
