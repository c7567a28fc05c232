#ifndef KDV_RNG_HPP
#define KDV_RNG_HPP

#include <cstdint>

namespace kdv {

/**
 * SplitMix64 pseudo-random generator (Steele, Lea & Flood 2014).
 *
 * Chosen for reproducible data generation: the update is pure 64-bit integer
 * arithmetic and the [0,1) mapping uses the top 53 bits, so the stream is
 * bit-identical on every platform and toolchain for a given seed.  That is a
 * stronger guarantee than std::mt19937_64 plus a standard distribution, whose
 * output is implementation-defined.
 */
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    /** Next raw 64-bit value. */
    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /** Uniform double in [0,1) with 53 bits of resolution. */
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

  private:
    std::uint64_t state_;
};

} // namespace kdv

#endif
