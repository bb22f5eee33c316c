#ifndef SRLI_RNG_HPP
#define SRLI_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace srli {

// Seeded random source with hand-rolled distributions. mt19937_64 output is
// pinned by the standard and the derived draws below avoid the
// implementation-defined std:: distributions, so a seed fixes the whole
// stream bitwise on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Unbiased integer in [0, n), n > 0, by rejection.
    std::uint64_t below(std::uint64_t n);

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Derives an independent stream seed from a base seed and stream tags.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

} // namespace srli

#endif
