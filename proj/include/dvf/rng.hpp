#ifndef DVF_RNG_HPP
#define DVF_RNG_HPP

#include <cstdint>

namespace dvf {

/// PCG32 (O'Neill, pcg-random.org): 64-bit LCG state, xorshift-rotate output.
/// Used instead of the std engines so that random streams are identical on
/// every platform and compiler, keeping experiment outputs reproducible.
class Pcg32 {
 public:
  explicit Pcg32(uint64_t seed, uint64_t stream = 0x14057b7ef767814fULL) {
    inc_ = (stream << 1u) | 1u;
    state_ = 0u;
    next();
    state_ += seed;
    next();
  }

  uint32_t next() {
    const uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    const auto xorshifted = static_cast<uint32_t>(((old >> 18u) ^ old) >> 27u);
    const auto rot = static_cast<uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  /// Uniform double in [0, 1) with 32 bits of resolution.
  double uniform() { return next() * 0x1p-32; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  uint64_t state_ = 0;
  uint64_t inc_ = 0;
};

/// One SplitMix64 step; derives independent sub-seeds from a master seed.
inline uint64_t split_mix64(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace dvf

#endif
