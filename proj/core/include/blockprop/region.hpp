#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace blockprop {

enum class Region : std::uint8_t {
  NorthAmerica,
  Europe,
  SouthAmerica,
  Asia,
  Japan,
  Australia,
};

inline constexpr std::size_t kRegionCount = 6;

inline constexpr std::array<Region, kRegionCount> kAllRegions = {
    Region::NorthAmerica, Region::Europe, Region::SouthAmerica,
    Region::Asia,         Region::Japan,  Region::Australia,
};

template <typename T>
using PerRegion = std::array<T, kRegionCount>;

template <typename T>
using RegionMatrix = std::array<std::array<T, kRegionCount>, kRegionCount>;

constexpr std::size_t index_of(Region r) { return static_cast<std::size_t>(r); }

std::string_view to_string(Region r);

/// Accepts the canonical names ("NorthAmerica") and the common short forms
/// used in data files ("NA", "EU", "SA", "AS", "JP", "AU"). Throws
/// std::invalid_argument otherwise.
Region parse_region(std::string_view text);

}  // namespace blockprop
