#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace diagsynth {

using Rng = std::mt19937_64;

// splitmix64 finaliser; used to derive independent per-row / per-worker streams.
std::uint64_t mix_seed(std::uint64_t value);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// Uniform integer in [lo, hi] (inclusive).
int uniform_int(Rng& rng, int lo, int hi);
std::size_t uniform_index(Rng& rng, std::size_t n);
double uniform_real(Rng& rng, double lo, double hi);
bool bernoulli(Rng& rng, double p);

}  // namespace diagsynth
