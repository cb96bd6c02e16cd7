#pragma once

// Counter-based random streams: a draw is a pure function of
// (seed, stream, counter), so parallel trial order never affects output
// and identical seeds reproduce bit-identical results.

#include <cmath>
#include <complex>
#include <cstdint>

namespace bk {

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64() {
    std::uint64_t x = seed_ * 0x9e3779b97f4a7c15ull ^ stream_ * 0xbf58476d1ce4e5b9ull ^
                      (counter_++) * 0x94d049bb133111ebull;
    // splitmix64 finalizer, twice
    for (int r = 0; r < 2; ++r) {
      x ^= x >> 30;
      x *= 0xbf58476d1ce4e5b9ull;
      x ^= x >> 27;
      x *= 0x94d049bb133111ebull;
      x ^= x >> 31;
    }
    return x;
  }

  // uniform in [0, 1)
  double next_uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // radially symmetric complex gaussian with E|z|^2 = sigma^2
  std::complex<double> next_gaussian(double sigma = 1.0) {
    double u1 = next_uniform(), u2 = next_uniform();
    double r = sigma * std::sqrt(-std::log1p(-u1));
    return std::polar(r, 2.0 * M_PI * u2);
  }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_, stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace bk
