#pragma once

#include <cstdint>
#include <random>

namespace fos {

// Seeded PRNG used for every randomized routine (random grid functions,
// restart ensembles).  The core generator is std::mt19937_64, whose output
// stream is fixed by the standard; the double mapping below is explicit so
// that results do not depend on a library's distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform in [0,1) with 53 random mantissa bits
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  double symmetric() { return uniform(-1.0, 1.0); }

  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace fos
