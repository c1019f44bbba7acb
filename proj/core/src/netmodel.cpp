#include "blockprop/netmodel.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <boost/algorithm/string/split.hpp>
#include <nlohmann/json.hpp>

#include "blockprop/csv.hpp"

namespace blockprop {

using nlohmann::json;

void NetParams::validate() const {
  for (std::size_t a = 0; a < kRegionCount; ++a) {
    for (std::size_t b = 0; b < kRegionCount; ++b) {
      if (!(latency_ms[a][b] > 0.0) || !std::isfinite(latency_ms[a][b])) {
        throw ConfigError("netparams: latency " +
                          std::string(to_string(kAllRegions[a])) + "->" +
                          std::string(to_string(kAllRegions[b])) +
                          " must be positive");
      }
    }
    if (!(upload_bps[a] > 0.0) || !(download_bps[a] > 0.0)) {
      throw ConfigError("netparams: bandwidth of " +
                        std::string(to_string(kAllRegions[a])) +
                        " must be positive");
    }
    if (region_shares[a] < 0.0) {
      throw ConfigError("netparams: negative region share");
    }
  }
  const double sum =
      std::accumulate(region_shares.begin(), region_shares.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("netparams: region shares sum to " + std::to_string(sum));
  }
}

double NetParams::mean_latency_ms() const {
  double total = 0.0;
  for (const auto& row : latency_ms) {
    total += std::accumulate(row.begin(), row.end(), 0.0);
  }
  return total / (kRegionCount * kRegionCount);
}

PerRegion<double> derive_node_distribution(const std::vector<CountryRow>& rows) {
  PerRegion<double> counts{};
  double total = 0.0;
  for (const auto& row : rows) {
    counts[index_of(row.region)] += static_cast<double>(row.node_count);
    total += static_cast<double>(row.node_count);
  }
  if (total <= 0.0) throw DataError("node distribution: all node counts are zero");
  for (auto& c : counts) c /= total;
  return counts;
}

namespace {

struct WeightedCity {
  const std::string* city;
  double weight;
};

// Splits each populated country's node weight evenly over its cities.
PerRegion<std::vector<WeightedCity>> weighted_cities(
    const std::vector<CountryRow>& rows) {
  PerRegion<std::vector<WeightedCity>> out;
  for (const auto& row : rows) {
    if (row.node_count == 0) continue;
    if (row.cities.empty()) {
      throw DataError("country '" + row.country + "' has nodes but no city");
    }
    const double w =
        static_cast<double>(row.node_count) / static_cast<double>(row.cities.size());
    for (const auto& city : row.cities) {
      out[index_of(row.region)].push_back({&city, w});
    }
  }
  return out;
}

double city_pair_latency(const CityLatencyTable& table, const std::string& a,
                         const std::string& b) {
  if (auto it = table.find({a, b}); it != table.end()) return it->second;
  if (auto it = table.find({b, a}); it != table.end()) return it->second;
  if (a == b) return 1.0;
  throw DataError("missing latency measurement for city pair " + a + " -> " + b);
}

}  // namespace

RegionMatrix<double> derive_region_latency(const std::vector<CountryRow>& rows,
                                           const CityLatencyTable& latency) {
  const auto cities = weighted_cities(rows);
  RegionMatrix<double> out{};
  for (std::size_t r1 = 0; r1 < kRegionCount; ++r1) {
    for (std::size_t r2 = 0; r2 < kRegionCount; ++r2) {
      if (cities[r1].empty() || cities[r2].empty()) {
        throw DataError("latency: no populated country in region " +
                        std::string(to_string(
                            kAllRegions[cities[r1].empty() ? r1 : r2])));
      }
      double num = 0.0;
      double den = 0.0;
      for (const auto& c1 : cities[r1]) {
        for (const auto& c2 : cities[r2]) {
          const double w = c1.weight * c2.weight;
          num += w * city_pair_latency(latency, *c1.city, *c2.city);
          den += w;
        }
      }
      out[r1][r2] = num / den;
    }
  }
  return out;
}

RegionBandwidth derive_region_bandwidth(const std::vector<CountryRow>& rows) {
  PerRegion<double> up{};
  PerRegion<double> down{};
  PerRegion<double> weight{};
  for (const auto& row : rows) {
    if (row.node_count == 0) continue;
    if (!row.bandwidth_bps) {
      throw DataError("missing bandwidth for country '" + row.country + "'");
    }
    const auto r = index_of(row.region);
    const auto w = static_cast<double>(row.node_count);
    up[r] += w * row.bandwidth_bps->first;
    down[r] += w * row.bandwidth_bps->second;
    weight[r] += w;
  }
  RegionBandwidth out;
  for (std::size_t r = 0; r < kRegionCount; ++r) {
    if (weight[r] <= 0.0) {
      throw DataError("bandwidth: no populated country in region " +
                      std::string(to_string(kAllRegions[r])));
    }
    out.upload_bps[r] = up[r] / weight[r];
    out.download_bps[r] = down[r] / weight[r];
  }
  return out;
}

std::vector<CountryRow> read_countries(
    const std::filesystem::path& countries_csv,
    const std::optional<std::filesystem::path>& bandwidth_csv) {
  const auto table = csv::Table::read(countries_csv);
  std::vector<CountryRow> rows;
  std::map<std::string, std::size_t> by_name;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    CountryRow row;
    row.country = table.at(i, "country");
    try {
      row.region = parse_region(table.at(i, "region"));
    } catch (const std::invalid_argument& e) {
      throw DataError(table.source() + ":" + std::to_string(table.line_of(i)) +
                      ": " + e.what());
    }
    const double count = table.number(i, "node_count");
    if (count < 0.0 || count != std::floor(count)) {
      throw DataError(table.source() + ":" + std::to_string(table.line_of(i)) +
                      ": node_count must be a non-negative integer");
    }
    row.node_count = static_cast<std::uint64_t>(count);
    const auto& city = table.at(i, "city");
    if (!city.empty()) {
      boost::algorithm::split(row.cities, city, [](char c) { return c == '|'; });
    }
    if (!by_name.emplace(row.country, rows.size()).second) {
      throw DataError(table.source() + ": duplicate country '" + row.country + "'");
    }
    rows.push_back(std::move(row));
  }

  if (bandwidth_csv) {
    const auto bw = csv::Table::read(*bandwidth_csv);
    for (std::size_t i = 0; i < bw.rows(); ++i) {
      const auto& name = bw.at(i, "country");
      auto it = by_name.find(name);
      if (it == by_name.end()) continue;  // measured country without nodes
      auto& row = rows[it->second];
      if (row.bandwidth_bps) {
        throw DataError(bw.source() + ": duplicate bandwidth row for '" + name + "'");
      }
      row.bandwidth_bps = std::pair{bw.number(i, "up_bps"), bw.number(i, "down_bps")};
    }
  }
  return rows;
}

CityLatencyTable read_city_latency(const std::filesystem::path& latency_csv) {
  const auto table = csv::Table::read(latency_csv);
  CityLatencyTable out;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    const auto key = std::pair{table.at(i, "src_city"), table.at(i, "dst_city")};
    if (!out.emplace(key, table.number(i, "ms")).second) {
      throw DataError(table.source() + ": duplicate pair " + key.first + " -> " +
                      key.second);
    }
  }
  return out;
}

NetParams derive_netparams(const std::vector<CountryRow>& rows,
                           const CityLatencyTable& latency) {
  NetParams p;
  p.region_shares = derive_node_distribution(rows);
  p.latency_ms = derive_region_latency(rows, latency);
  const auto bw = derive_region_bandwidth(rows);
  p.upload_bps = bw.upload_bps;
  p.download_bps = bw.download_bps;
  p.validate();
  return p;
}

namespace {

json per_region_json(const PerRegion<double>& values) {
  json out = json::object();
  for (std::size_t r = 0; r < kRegionCount; ++r) {
    out[std::string(to_string(kAllRegions[r]))] = values[r];
  }
  return out;
}

PerRegion<double> per_region_from_json(const json& j, const char* key) {
  PerRegion<double> out{};
  if (!j.contains(key) || !j.at(key).is_object()) {
    throw DataError(std::string("netparams: missing object '") + key + "'");
  }
  for (std::size_t r = 0; r < kRegionCount; ++r) {
    const std::string name(to_string(kAllRegions[r]));
    if (!j.at(key).contains(name)) {
      throw DataError(std::string("netparams: ") + key + " lacks region " + name);
    }
    out[r] = j.at(key).at(name).get<double>();
  }
  return out;
}

}  // namespace

std::string netparams_to_json(const NetParams& params) {
  json j;
  json regions = json::array();
  for (auto r : kAllRegions) regions.push_back(std::string(to_string(r)));
  j["regions"] = regions;
  j["latency_ms"] = params.latency_ms;
  j["upload_bps"] = per_region_json(params.upload_bps);
  j["download_bps"] = per_region_json(params.download_bps);
  j["region_shares"] = per_region_json(params.region_shares);
  return j.dump(2) + "\n";
}

NetParams netparams_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("netparams: ") + e.what());
  }
  NetParams p;
  try {
    p.latency_ms = j.at("latency_ms").get<RegionMatrix<double>>();
  } catch (const json::exception& e) {
    throw DataError(std::string("netparams: latency_ms must be a 6x6 matrix: ") +
                    e.what());
  }
  p.upload_bps = per_region_from_json(j, "upload_bps");
  p.download_bps = per_region_from_json(j, "download_bps");
  p.region_shares = per_region_from_json(j, "region_shares");
  p.validate();
  return p;
}

NetParams load_netparams(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return netparams_from_json(buffer.str());
}

void save_netparams(const NetParams& params, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << netparams_to_json(params);
}

namespace {

// Region-level values in data/<year>/; tests check these against a fresh
// derivation from those files and against data/presets/netparams_<year>.json.
NetParams make_2015() {
  NetParams p;
  p.latency_ms = {{{36, 119, 255, 310, 154, 208},
                   {119, 12, 221, 242, 266, 350},
                   {255, 221, 137, 347, 256, 269},
                   {310, 242, 347, 99, 172, 278},
                   {154, 266, 256, 172, 9, 163},
                   {208, 350, 269, 278, 163, 22}}};
  p.upload_bps = {4.7e6, 8.1e6, 1.8e6, 5.3e6, 3.4e6, 5.2e6};
  p.download_bps = {25.0e6, 24.0e6, 6.5e6, 10.0e6, 17.5e6, 14.0e6};
  p.region_shares = {0.3869, 0.5159, 0.0113, 0.0574, 0.0119, 0.0166};
  return p;
}

NetParams make_2019() {
  NetParams p;
  p.latency_ms = {{{32, 124, 184, 198, 151, 189},
                   {124, 11, 227, 237, 252, 294},
                   {184, 227, 88, 325, 301, 322},
                   {198, 237, 325, 85, 58, 198},
                   {151, 252, 301, 58, 12, 126},
                   {189, 294, 322, 198, 126, 16}}};
  p.upload_bps = {19.2e6, 20.7e6, 5.8e6, 15.7e6, 10.2e6, 11.3e6};
  p.download_bps = {52.0e6, 40.0e6, 18.0e6, 22.8e6, 22.8e6, 29.9e6};
  p.region_shares = {0.3316, 0.4998, 0.0090, 0.1177, 0.0224, 0.0195};
  return p;
}

}  // namespace

const NetParams& internet_preset(int year) {
  static const NetParams k2015 = make_2015();
  static const NetParams k2019 = make_2019();
  if (year == 2015) return k2015;
  if (year == 2019) return k2019;
  throw ConfigError("internet preset must be 2015 or 2019, got " +
                    std::to_string(year));
}

}  // namespace blockprop
