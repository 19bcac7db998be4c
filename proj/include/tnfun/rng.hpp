#pragma once

#include <cmath>
#include <cstdint>

namespace tnfun {

namespace detail {

// SplitMix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace detail

// Counter-based stream keyed by (seed, path, slot). Streams with distinct
// keys are independent for simulation purposes, so paths can be generated
// in any order with identical results.
class SplitStream {
  public:
    SplitStream(std::uint64_t seed, std::uint64_t path, std::uint64_t slot) {
        state_ = detail::mix64(seed + 0x9e3779b97f4a7c15ull);
        state_ = detail::mix64(state_ ^ (path * 0xd1342543de82ef95ull + 1));
        state_ = detail::mix64(state_ ^ (slot * 0xaf251af3b0f025b5ull + 1));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return detail::mix64(state_);
    }

    // uniform on (0, 1)
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential() { return -std::log(uniform()); }

    // Poisson by exponential inter-arrival counting; O(mean) but exact.
    int poisson(double mean) {
        if (mean <= 0.0) return 0;
        double t = exponential();
        int n = 0;
        while (t < mean) {
            ++n;
            t += exponential();
        }
        return n;
    }

  private:
    std::uint64_t state_;
};

}  // namespace tnfun
