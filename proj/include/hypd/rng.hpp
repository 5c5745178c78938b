#pragma once

// Deterministic, splittable randomness. All stochastic code in the library
// draws from Rng seeded explicitly; no global state.

#include <cmath>
#include <cstdint>

namespace hypd {

// SplitMix64. Passes standard statistical batteries, trivially seedable,
// and cheap to split into independent streams.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in (0,1); never returns 0 so Box-Muller's log is safe.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u = next_unit();
    const double v = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double a = 6.283185307179586476925287 * v;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Independent stream seed for substream `index` of a master seed.
// Used for per-replication / per-spin parallel draws.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  Rng r(master ^ (0x632be59bd9b4e019ULL + index * 0x9e3779b97f4a7c15ULL));
  r.next_u64();
  return r.next_u64();
}

} // namespace hypd
