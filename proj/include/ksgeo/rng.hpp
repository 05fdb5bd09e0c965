// ksgeo - seeded uniform generator for identity sweeps and property tests;
// bit-reproducible across runs of the same binary by construction
#pragma once

#include <cstdint>
#include <random>

namespace ksgeo {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // log-uniform in [lo, hi], lo > 0
  double log_uniform(double lo, double hi) {
    return lo * std::exp(uniform() * std::log(hi / lo));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ksgeo
