#pragma once

#include <cstdint>
#include <random>

namespace cmkt {

// Finalizer step of the splitmix64 generator (Steele, Lea, Flood 2014).
std::uint64_t mix64(std::uint64_t x);

// Deterministic, collision-resistant seed for replication `r` of a run at
// population size `n` under a base seed.  The three inputs are chained
// through mix64, so distinct (base, n, r) triples map to distinct seeds in
// any test matrix of realistic size, and workers can draw their seeds
// independently without coordination.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t n, std::uint64_t r);

// Uniform draw in [0, 1) built from the top 53 bits of the generator
// output.  std::uniform_real_distribution is implementation-defined; this
// is pinned so sampled populations are identical across platforms.
double uniform01(std::mt19937_64& gen);

}  // namespace cmkt
