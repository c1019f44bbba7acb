#pragma once

#include <cstdint>
#include <random>

namespace blockprop {

using Rng = std::mt19937_64;

/// Independent purposes that draw randomness during a run. Each gets its own
/// stream so that changing one model does not shift the draws of another.
enum class Stream : std::uint32_t {
  Topology = 1,
  Roles = 2,
  HashPower = 3,
  Mining = 4,
  Reconstruction = 5,
};

/// Deterministic stream for (seed, purpose, index). `index` distinguishes
/// sub-streams such as per-node mining clocks or topology rebuild attempts.
Rng make_stream(std::uint64_t seed, Stream purpose, std::uint64_t index = 0);

/// Uniform double in the open interval (0, 1).
double uniform_open01(Rng& rng);

}  // namespace blockprop
