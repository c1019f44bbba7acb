#include "blockprop/rng.hpp"

namespace blockprop {

Rng make_stream(std::uint64_t seed, Stream purpose, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(purpose),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

double uniform_open01(Rng& rng) {
  // 53 random bits mapped to the centres of 2^53 equal cells of (0,1).
  const std::uint64_t bits = rng() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace blockprop
