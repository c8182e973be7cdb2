#pragma once

#include <cstdint>
#include <random>

namespace occuflow {

using RngEngine = std::mt19937_64;

// Sampling phases within one sEM iteration. Each (iteration, phase, district)
// triple owns an independent, statically derived stream, so district-level
// parallelism cannot reorder draws.
enum class RngPhase : int {
    kBurnIn = 0,
    kEStep = 1,
    kUnconditionalSim = 2,
    kInnerEStep = 3,
    kCorrectedEStep = 4,
    kSimCovariates = 5,
    kSimInflows = 6,
    kSimOutflows = 7,
};

inline RngEngine make_stream(std::uint64_t seed, std::uint64_t iteration, RngPhase phase,
                             std::uint64_t district) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(iteration),
                      static_cast<std::uint32_t>(static_cast<int>(phase)),
                      static_cast<std::uint32_t>(district)};
    return RngEngine(seq);
}

// Uniform in [0, 1) with 53 random bits; independent of stdlib distribution
// internals, so draws depending on it are reproducible by construction.
inline double uniform01(RngEngine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline long draw_poisson(RngEngine& rng, double lambda) {
    if (lambda <= 0.0) return 0;
    std::poisson_distribution<long> dist(lambda);
    return dist(rng);
}

inline double draw_gamma(RngEngine& rng, double shape, double rate) {
    std::gamma_distribution<double> dist(shape, 1.0 / rate);
    return dist(rng);
}

// Negative Binomial with mean `mean` and dispersion `theta`, so that
// Var = mean + mean^2 / theta; drawn as a Gamma-Poisson mixture.
inline long draw_neg_binomial(RngEngine& rng, double mean, double theta) {
    if (mean <= 0.0) return 0;
    const double g = draw_gamma(rng, theta, theta / mean);
    return draw_poisson(rng, g);
}

}  // namespace occuflow
