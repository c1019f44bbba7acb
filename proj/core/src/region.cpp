#include "blockprop/region.hpp"

#include <stdexcept>
#include <string>

namespace blockprop {

std::string_view to_string(Region r) {
  switch (r) {
    case Region::NorthAmerica: return "NorthAmerica";
    case Region::Europe: return "Europe";
    case Region::SouthAmerica: return "SouthAmerica";
    case Region::Asia: return "Asia";
    case Region::Japan: return "Japan";
    case Region::Australia: return "Australia";
  }
  return "?";
}

Region parse_region(std::string_view text) {
  struct Alias {
    std::string_view name;
    Region region;
  };
  static constexpr Alias kAliases[] = {
      {"NorthAmerica", Region::NorthAmerica}, {"NA", Region::NorthAmerica},
      {"Europe", Region::Europe},             {"EU", Region::Europe},
      {"SouthAmerica", Region::SouthAmerica}, {"SA", Region::SouthAmerica},
      {"Asia", Region::Asia},                 {"AS", Region::Asia},
      {"Japan", Region::Japan},               {"JP", Region::Japan},
      {"Australia", Region::Australia},       {"AU", Region::Australia},
  };
  for (const auto& alias : kAliases) {
    if (alias.name == text) return alias.region;
  }
  throw std::invalid_argument("unknown region '" + std::string(text) + "'");
}

}  // namespace blockprop
