#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dlp {

// Seeded generator with fixed derivations on top of the raw mt19937_64
// stream, so doubles and normals are bit-identical across platforms
// (std:: distributions are implementation-defined and not used here).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform in [0, n)
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>((static_cast<unsigned __int128>(eng_()) * n) >> 64);
    }

    // standard normal via Box-Muller; consumes exactly two raw draws
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643 * u2);
    }

    // independent child stream for a sub-task
    Rng fork() { return Rng(eng_() ^ 0x9e3779b97f4a7c15ull); }

private:
    std::mt19937_64 eng_;
};

}  // namespace dlp
