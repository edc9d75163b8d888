#pragma once

#include <cstdint>
#include <random>

namespace nsch {

// Seeded generator with an explicit bit-to-double mapping. The standard
// distributions are implementation-defined, which would make seeded initial
// conditions differ across standard libraries; mt19937_64 itself is pinned
// by the standard, so this mapping is reproducible everywhere.
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    // Uniform in [0,1) with 53 random bits.
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    // Uniform in (-1,1).
    double symmetric() { return 2.0 * uniform() - 1.0; }

  private:
    std::mt19937_64 eng_;
};

}  // namespace nsch
