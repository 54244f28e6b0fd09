#include "rps/sim/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rps::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id) {
  // Mix (seed, id) through splitmix64 so that nearby ids land far apart,
  // then spread the material over the full mt19937_64 state via seed_seq.
  std::uint64_t state = master_seed ^ (0xD1B54A32D192ED03ull * (stream_id + 1));
  std::seed_seq seq{splitmix64(state), splitmix64(state), splitmix64(state),
                    splitmix64(state)};
  engine_.seed(seq);
}

std::uint64_t RngStream::next_u64() { return engine_(); }

double RngStream::uniform() {
  // 53 random bits, offset by half an ulp: strictly inside (0,1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_int(std::uint64_t bound) {
  if (bound == 0) throw std::domain_error("uniform_int: bound must be >= 1");
  if (bound == 1) return 0;
  const std::uint64_t limit =
      bound * (std::numeric_limits<std::uint64_t>::max() / bound);
  std::uint64_t r;
  do {
    r = next_u64();
  } while (r >= limit);
  return r % bound;
}

double sample_exponential(RngStream& stream, double rate) {
  if (!(rate > 0.0))
    throw std::domain_error("sample_exponential: rate must be positive");
  return -std::log(stream.uniform()) / rate;
}

}  // namespace rps::sim
