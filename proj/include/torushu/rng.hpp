#pragma once

#include <cstdint>

namespace torushu {

struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

// Counter-based stream: output i depends only on (seed, stream_id, i), so
// replicates on distinct stream_ids are reproducible regardless of thread
// scheduling. Mixing is two splitmix64-style finalizer rounds.
class RngStream {
 public:
  explicit RngStream(RngSpec spec)
      : key_(mix(spec.seed ^ 0x9e3779b97f4a7c15ull) ^ mix(spec.stream_id + 0x632be59bd9b4e019ull)) {}

  std::uint64_t next_u64() {
    std::uint64_t x = key_ + counter_++ * 0x9e3779b97f4a7c15ull;
    return mix(mix(x) + key_);
  }

  // uniform in [0, 1)
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace torushu
