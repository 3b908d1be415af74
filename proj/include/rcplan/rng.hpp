#pragma once

#include <cstdint>
#include <random>

namespace rcplan {

// Thin wrapper over mt19937_64 with an explicit uniform mapping, so draw
// sequences do not depend on the standard library's distribution
// implementation.  Fixed seed => bit-identical traces.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Uniform integer in [0, n).
    int uniform_int(int n) {
        return static_cast<int>(uniform() * n);
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace rcplan
