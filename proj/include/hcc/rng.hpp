#ifndef HCC_RNG_HPP
#define HCC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace hcc {

// Deterministic RNG with hand-rolled distributions. std::mt19937_64 output is
// specified bit-exactly by the standard; the distribution mappings below avoid
// the implementation-defined std::*_distribution classes so that streams are
// reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  std::uint32_t next_u32() { return static_cast<std::uint32_t>(gen_() >> 32); }

  // Uniform in [0, 1) with 24 bits of randomness (exact float grid).
  float uniform() {
    return static_cast<float>(gen_() >> 40) * 0x1.0p-24f;
  }

  float uniform(float lo, float hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; consumes two uniforms per call.
  float normal() {
    float u1 = uniform();
    float u2 = uniform();
    if (u1 < 0x1.0p-24f) u1 = 0x1.0p-24f;
    const float r = std::sqrt(-2.0f * std::log(u1));
    return r * std::cos(6.2831853071795864769f * u2);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace hcc

#endif
