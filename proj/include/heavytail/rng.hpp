#pragma once

#include <cstdint>

namespace heavytail {

// Stream tags keep independent random streams (rewards, perturbations, ...)
// decorrelated even though they share one base seed.
enum class StreamTag : std::uint64_t {
  kReward = 1,
  kPerturbation = 2,
  kEstimatorNoise = 3,
  kTest = 99,
};

namespace detail {
// splitmix64 finalizer; full-period mixing of a 64-bit word.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}
}  // namespace detail

// Derives a stream key by hashing the experiment coordinates together, so a
// trial's randomness is a pure function of (base seed, trial, policy, tag).
inline std::uint64_t derive_stream_key(std::uint64_t base_seed, std::uint64_t trial_index,
                                       std::uint64_t policy_id, StreamTag tag) {
  std::uint64_t h = detail::mix64(base_seed);
  h = detail::mix64(h ^ (trial_index * 0x9e3779b97f4a7c15ull));
  h = detail::mix64(h ^ (policy_id * 0xc2b2ae3d27d4eb4full));
  h = detail::mix64(h ^ static_cast<std::uint64_t>(tag));
  return h;
}

// Counter-based generator: output k is a hash of (key, k). State is two
// words, streams never interact, and skipping ahead would be O(1).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  CounterRng(std::uint64_t base_seed, std::uint64_t trial_index, std::uint64_t policy_id,
             StreamTag tag)
      : key_(derive_stream_key(base_seed, trial_index, policy_id, tag)) {}

  std::uint64_t next_u64() {
    ++counter_;
    return detail::mix64(key_ ^ (counter_ * 0xd6e8feb86659fd93ull));
  }

  // Uniform on the open interval (0,1). Exact endpoints are rejected because
  // quantile functions diverge there.
  double next_open01() {
    for (;;) {
      const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
      if (u > 0.0 && u < 1.0) return u;
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace heavytail
