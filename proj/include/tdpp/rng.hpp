#pragma once

#include <cstdint>
#include <random>

namespace tdpp {

/// splitmix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Order-sensitive combination of seed components, so sweeps stay
/// reproducible point by point.
std::uint64_t combine_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b = 0,
                           std::uint64_t c = 0);

/// Deterministic random source. Gaussian draws go through Box-Muller on raw
/// 53-bit uniforms instead of std::normal_distribution, which keeps the
/// stream independent of the standard library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform();                       // [0, 1)
    double normal(double mean, double stddev);
    std::uint64_t next_u64() { return engine_(); }
    int uniform_int(int bound);             // [0, bound)

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace tdpp
