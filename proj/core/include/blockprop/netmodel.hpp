#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blockprop/engine.hpp"
#include "blockprop/error.hpp"
#include "blockprop/region.hpp"

namespace blockprop {

/// Regional network parameters: one-way latency between regions, per-region
/// access bandwidth, and where nodes live.
struct NetParams {
  RegionMatrix<double> latency_ms{};
  PerRegion<double> upload_bps{};
  PerRegion<double> download_bps{};
  PerRegion<double> region_shares{};

  /// Throws ConfigError if any invariant is violated.
  void validate() const;

  double mean_latency_ms() const;

  friend bool operator==(const NetParams&, const NetParams&) = default;
};

/// Bottleneck bandwidth of a sender/receiver pair.
inline double effective_bps(const NetParams& p, Region from, Region to) {
  const double up = p.upload_bps[index_of(from)];
  const double down = p.download_bps[index_of(to)];
  return up < down ? up : down;
}

/// Time to put `size_bytes` on the wire at the pair's bottleneck bandwidth.
inline SimTime transmission_ms(std::uint64_t size_bytes, Region from, Region to,
                               const NetParams& p) {
  return round_half_up(static_cast<double>(size_bytes) * 8.0 /
                       effective_bps(p, from, to) * 1000.0);
}

inline SimTime latency_ms(Region from, Region to, const NetParams& p) {
  return round_half_up(p.latency_ms[index_of(from)][index_of(to)]);
}

/// One-way delay of a message: latency plus transmission time.
inline SimTime transfer_delay(std::uint64_t size_bytes, Region from, Region to,
                              const NetParams& p) {
  return latency_ms(from, to, p) + transmission_ms(size_bytes, from, to, p);
}

/// One row of per-country measurement input. `cities` lists the measurement
/// cities representing the country; a country with several cities splits its
/// node weight evenly among them.
struct CountryRow {
  std::string country;
  Region region = Region::NorthAmerica;
  std::uint64_t node_count = 0;
  std::vector<std::string> cities;
  std::optional<std::pair<double, double>> bandwidth_bps;  // (up, down)
};

/// Directional city-to-city latency in milliseconds.
using CityLatencyTable = std::map<std::pair<std::string, std::string>, double>;

PerRegion<double> derive_node_distribution(const std::vector<CountryRow>& rows);

/// Node-weighted mean latency between regions. A missing directional entry
/// falls back to the reverse direction; a city paired with itself uses its
/// self-measurement or a 1 ms floor.
RegionMatrix<double> derive_region_latency(const std::vector<CountryRow>& rows,
                                           const CityLatencyTable& latency);

struct RegionBandwidth {
  PerRegion<double> upload_bps{};
  PerRegion<double> download_bps{};
};

RegionBandwidth derive_region_bandwidth(const std::vector<CountryRow>& rows);

/// Reads `countries.csv` (country,region,node_count,city) and, when given,
/// joins `bandwidth.csv` (country,up_bps,down_bps). Multiple cities in the
/// city column are separated by '|'.
std::vector<CountryRow> read_countries(
    const std::filesystem::path& countries_csv,
    const std::optional<std::filesystem::path>& bandwidth_csv = std::nullopt);

/// Reads `city_latency.csv` (src_city,dst_city,ms).
CityLatencyTable read_city_latency(const std::filesystem::path& latency_csv);

/// Runs all three derivations over the raw inputs.
NetParams derive_netparams(const std::vector<CountryRow>& rows,
                           const CityLatencyTable& latency);

std::string netparams_to_json(const NetParams& params);
NetParams netparams_from_json(const std::string& text);
NetParams load_netparams(const std::filesystem::path& path);
void save_netparams(const NetParams& params, const std::filesystem::path& path);

/// Built-in regional parameters for the 2015 and 2019 Internet.
const NetParams& internet_preset(int year);

}  // namespace blockprop
