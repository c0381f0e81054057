#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace bsbs {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Per-shot generator. mt19937_64 output is fixed by the standard; the normal
// transform is done here because std::normal_distribution is not.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream) : engine_(splitmix64(seed ^ splitmix64(stream + 1))) {}

    // Uniform on (0, 1].
    double uniform() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

    // Circular complex Gaussian with E|z|^2 = 1 (Box-Muller).
    std::complex<double> complex_normal()
    {
        double r = std::sqrt(-std::log(uniform()));
        double phi = 6.283185307179586 * uniform();
        return {r * std::cos(phi), r * std::sin(phi)};
    }

private:
    std::mt19937_64 engine_;
};

} // namespace bsbs
