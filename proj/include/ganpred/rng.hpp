#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ganpred {

// Deterministic random stream. All variates are derived from the raw
// mt19937_64 output with fixed arithmetic instead of the standard library
// distributions, whose exact sequences are implementation-defined; model
// files and reports must be byte-identical across rebuilds.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; the second variate of each pair is cached.
    double normal();

    // Uniform integer on [0, n). Rejection sampling, no modulo bias.
    std::size_t index(std::size_t n);

    // Fisher-Yates.
    void shuffle(std::vector<std::size_t>& items);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Derives an independent stream seed from a base seed (splitmix64 step).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace ganpred
