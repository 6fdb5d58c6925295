#include "tdpp/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace tdpp {

std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t combine_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b,
                           std::uint64_t c) {
    std::uint64_t h = mix_seed(root);
    h = mix_seed(h ^ a);
    h = mix_seed(h ^ b);
    h = mix_seed(h ^ c);
    return h;
}

double Rng::uniform() {
    return (engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal(double mean, double stddev) {
    if (have_spare_) {
        have_spare_ = false;
        return mean + stddev * spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double two_pi = 2.0 * std::acos(-1.0);
    spare_ = r * std::sin(two_pi * u2);
    have_spare_ = true;
    return mean + stddev * r * std::cos(two_pi * u2);
}

int Rng::uniform_int(int bound) {
    if (bound <= 0) throw std::invalid_argument("bound must be positive");
    return static_cast<int>(engine_() % static_cast<std::uint64_t>(bound));
}

} // namespace tdpp
