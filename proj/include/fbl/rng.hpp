#pragma once

#include <cmath>
#include <cstdint>

namespace fbl {

// splitmix64: tiny, seedable, platform-independent.  Used for every seeded
// numeric path so that identical (argv, seed) reproduce byte-identical output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1).
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo,hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_double(), u2 = next_double();
    if (u1 < 1e-300) u1 = 1e-300;
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::uint64_t next_below(std::uint64_t n) { return n ? next_u64() % n : 0; }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  Rng r(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
  return r.next_u64();
}

}  // namespace fbl
