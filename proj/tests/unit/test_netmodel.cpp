#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <random>

#include "blockprop/netmodel.hpp"
#include "support.hpp"

using namespace blockprop;
using blockprop::testing::uniform_params;

namespace {

const std::filesystem::path kData = BLOCKPROP_DATA_DIR;

CountryRow row(std::string name, Region region, std::uint64_t nodes,
               std::vector<std::string> cities,
               std::optional<std::pair<double, double>> bw = std::nullopt) {
  return CountryRow{std::move(name), region, nodes, std::move(cities), bw};
}

// One country and one city per region, all pairs measured as 10*(i+1)+(j+1).
std::pair<std::vector<CountryRow>, CityLatencyTable> one_per_region() {
  std::vector<CountryRow> rows;
  CityLatencyTable lat;
  for (std::size_t i = 0; i < kRegionCount; ++i) {
    const auto name = std::string(to_string(kAllRegions[i]));
    rows.push_back(row(name, kAllRegions[i], 10, {name + "-city"},
                       std::pair{1e6 * (i + 1), 2e6 * (i + 1)}));
    for (std::size_t j = 0; j < kRegionCount; ++j) {
      lat[{name + "-city", std::string(to_string(kAllRegions[j])) + "-city"}] =
          10.0 * (i + 1) + (j + 1);
    }
  }
  return {rows, lat};
}

// Mean of min(up_i, down_j) over node pairs weighted by region shares.
double mean_effective_bps(const NetParams& p) {
  double sum = 0.0;
  for (Region a : kAllRegions) {
    for (Region b : kAllRegions) {
      sum += p.region_shares[index_of(a)] * p.region_shares[index_of(b)] *
             effective_bps(p, a, b);
    }
  }
  return sum;
}

}  // namespace

TEST(TransferDelay, ZeroSizeIsLatencyOnly) {
  const auto p = uniform_params(100.0, 10e6);
  EXPECT_EQ(transfer_delay(0, Region::Europe, Region::Asia, p), 100);
}

TEST(TransferDelay, OneMegabyteAtTenMegabitsAddsEightHundred) {
  const auto p = uniform_params(100.0, 10e6);
  EXPECT_EQ(transfer_delay(1'000'000, Region::Europe, Region::Asia, p), 900);
  EXPECT_EQ(transmission_ms(1'000'000, Region::Europe, Region::Asia, p), 800);
}

TEST(TransferDelay, CompactToFullTransmissionRatio) {
  // At 1 Mbps both transmission times are whole milliseconds.
  const auto p = uniform_params(50.0, 1e6);
  const double compact = static_cast<double>(transmission_ms(18'000, Region::Japan, Region::Japan, p));
  const double full = static_cast<double>(transmission_ms(1'000'000, Region::Japan, Region::Japan, p));
  EXPECT_NEAR(compact / full, 0.018, 1e-12);
}

TEST(TransferDelay, BottleneckIsSenderUploadOrReceiverDownload) {
  auto p = uniform_params(0.0, 10e6);
  p.upload_bps[index_of(Region::Europe)] = 1e6;
  p.download_bps[index_of(Region::Asia)] = 2e6;
  EXPECT_DOUBLE_EQ(effective_bps(p, Region::Europe, Region::Asia), 1e6);
  EXPECT_DOUBLE_EQ(effective_bps(p, Region::Asia, Region::Europe), 10e6);
  EXPECT_DOUBLE_EQ(effective_bps(p, Region::NorthAmerica, Region::Asia), 2e6);
}

TEST(TransferDelay, RoundsHalfUp) {
  const auto p = uniform_params(0.4, 8e6);
  EXPECT_EQ(latency_ms(Region::Europe, Region::Europe, p), 0);
  const auto q = uniform_params(0.5, 8e6);
  EXPECT_EQ(latency_ms(Region::Europe, Region::Europe, q), 1);
  // 500 B at 8 Mbps is exactly 0.5 ms.
  EXPECT_EQ(transmission_ms(500, Region::Europe, Region::Europe, q), 1);
}

TEST(NodeDistribution, EqualCountsGiveEqualShares) {
  const auto [rows, lat] = one_per_region();
  for (double s : derive_node_distribution(rows)) EXPECT_DOUBLE_EQ(s, 1.0 / 6.0);
}

TEST(NodeDistribution, DirectRatio) {
  const std::vector<CountryRow> rows = {
      row("eu", Region::Europe, 600, {"a"}),
      row("na", Region::NorthAmerica, 300, {"b"}),
      row("as", Region::Asia, 100, {"c"}),
  };
  const auto s = derive_node_distribution(rows);
  EXPECT_DOUBLE_EQ(s[index_of(Region::Europe)], 0.6);
  EXPECT_DOUBLE_EQ(s[index_of(Region::NorthAmerica)], 0.3);
  EXPECT_DOUBLE_EQ(s[index_of(Region::Asia)], 0.1);
  EXPECT_DOUBLE_EQ(s[index_of(Region::Japan)], 0.0);
}

TEST(NodeDistribution, AllZeroIsAnError) {
  EXPECT_THROW(derive_node_distribution({row("x", Region::Asia, 0, {"c"})}), DataError);
}

TEST(RegionLatency, SingleCountryPerRegionCopiesTheTable) {
  const auto [rows, lat] = one_per_region();
  const auto m = derive_region_latency(rows, lat);
  for (std::size_t i = 0; i < kRegionCount; ++i) {
    for (std::size_t j = 0; j < kRegionCount; ++j) {
      EXPECT_DOUBLE_EQ(m[i][j], 10.0 * (i + 1) + (j + 1));
    }
  }
}

TEST(RegionLatency, WeightedMeanOfTwoCountries) {
  auto [rows, lat] = one_per_region();
  // Replace Europe's single country with two: 10 nodes at 100 ms and 30
  // nodes at 200 ms from every Asia city, including Asia itself.
  std::erase_if(rows, [](const CountryRow& r) { return r.region == Region::Europe; });
  rows.push_back(row("e1", Region::Europe, 10, {"e1-city"}));
  rows.push_back(row("e2", Region::Europe, 30, {"e2-city"}));
  for (const auto& r : rows) {
    for (const auto& c : r.cities) {
      lat[{"e1-city", c}] = 100.0;
      lat[{"e2-city", c}] = 200.0;
    }
  }
  lat[{"e1-city", "e1-city"}] = 100.0;
  lat[{"e1-city", "e2-city"}] = 100.0;
  lat[{"e2-city", "e1-city"}] = 200.0;
  lat[{"e2-city", "e2-city"}] = 200.0;
  const auto m = derive_region_latency(rows, lat);
  EXPECT_DOUBLE_EQ(m[index_of(Region::Europe)][index_of(Region::Asia)], 175.0);
}

TEST(RegionLatency, ReverseDirectionAndSelfFloorFallbacks) {
  // Only pairs i <= j are measured, and city 0 has no self-measurement.
  std::vector<CountryRow> rows;
  CityLatencyTable lat;
  for (std::size_t i = 0; i < kRegionCount; ++i) {
    rows.push_back(row("c" + std::to_string(i), kAllRegions[i], 1, {"k" + std::to_string(i)}));
    for (std::size_t j = i; j < kRegionCount; ++j) {
      if (i == j && i == 0) continue;
      lat[{"k" + std::to_string(i), "k" + std::to_string(j)}] = i == j ? 5.0 : 10.0 * i + j;
    }
  }
  const auto m = derive_region_latency(rows, lat);
  EXPECT_DOUBLE_EQ(m[0][0], 1.0);
  EXPECT_DOUBLE_EQ(m[3][3], 5.0);
  EXPECT_DOUBLE_EQ(m[1][4], 14.0);
  EXPECT_DOUBLE_EQ(m[4][1], 14.0);
}

TEST(RegionLatency, MissingPairNamesBothCities) {
  auto [rows, lat] = one_per_region();
  lat.erase({"Europe-city", "Asia-city"});
  lat.erase({"Asia-city", "Europe-city"});
  try {
    derive_region_latency(rows, lat);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("Europe-city"), std::string::npos);
    EXPECT_NE(msg.find("Asia-city"), std::string::npos);
  }
}

TEST(RegionBandwidth, SingleCountryCopiesItsValues) {
  const auto [rows, lat] = one_per_region();
  const auto bw = derive_region_bandwidth(rows);
  for (std::size_t i = 0; i < kRegionCount; ++i) {
    EXPECT_DOUBLE_EQ(bw.upload_bps[i], 1e6 * (i + 1));
    EXPECT_DOUBLE_EQ(bw.download_bps[i], 2e6 * (i + 1));
  }
}

TEST(RegionBandwidth, WeightedMean) {
  auto [rows, lat] = one_per_region();
  std::erase_if(rows, [](const CountryRow& r) { return r.region == Region::Japan; });
  rows.push_back(row("j1", Region::Japan, 1, {"j"}, std::pair{10e6, 10e6}));
  rows.push_back(row("j2", Region::Japan, 3, {"j"}, std::pair{30e6, 30e6}));
  const auto bw = derive_region_bandwidth(rows);
  EXPECT_DOUBLE_EQ(bw.upload_bps[index_of(Region::Japan)], 25e6);
  EXPECT_DOUBLE_EQ(bw.download_bps[index_of(Region::Japan)], 25e6);
}

TEST(RegionBandwidth, MissingBandwidthNamesTheCountry) {
  try {
    derive_region_bandwidth({row("Narnia", Region::Europe, 5, {"c"})});
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("Narnia"), std::string::npos);
  }
}

TEST(NetmodelProperty, DerivationsArePermutationInvariant) {
  auto [rows, lat] = one_per_region();
  rows.push_back(row("extra", Region::Asia, 37, {"Europe-city", "Japan-city"},
                     std::pair{3e6, 9e6}));
  const auto reference = derive_netparams(rows, lat);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(rows.begin(), rows.end(), rng);
    const auto p = derive_netparams(rows, lat);
    for (std::size_t a = 0; a < kRegionCount; ++a) {
      EXPECT_NEAR(p.upload_bps[a], reference.upload_bps[a], 1e-6);
      EXPECT_NEAR(p.download_bps[a], reference.download_bps[a], 1e-6);
      EXPECT_NEAR(p.region_shares[a], reference.region_shares[a], 1e-12);
      for (std::size_t b = 0; b < kRegionCount; ++b) {
        EXPECT_NEAR(p.latency_ms[a][b], reference.latency_ms[a][b], 1e-9);
      }
    }
  }
}

TEST(NetmodelProperty, WeightedMeansStayWithinInputRange) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> bw(1e6, 1e8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<CountryRow> rows;
    double lo = 1e18, hi = 0;
    for (int c = 0; c < 5; ++c) {
      const double up = bw(rng);
      lo = std::min(lo, up);
      hi = std::max(hi, up);
      rows.push_back(row("c" + std::to_string(c), Region::Asia, 1 + rng() % 100,
                         {"k"}, std::pair{up, up}));
    }
    for (Region r : kAllRegions) {
      if (r != Region::Asia) rows.push_back(row(std::string(to_string(r)), r, 1, {"k"}, std::pair{1e6, 1e6}));
    }
    const double got = derive_region_bandwidth(rows).upload_bps[index_of(Region::Asia)];
    EXPECT_GE(got, lo * (1 - 1e-12));
    EXPECT_LE(got, hi * (1 + 1e-12));
  }
}

TEST(NetmodelProperty, TransferDelayIsMonotone) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 1000; ++i) {
    const double lat = static_cast<double>(rng() % 500);
    const double bps = 1e5 + static_cast<double>(rng() % 100'000'000);
    const std::uint64_t size = rng() % 2'000'000;
    const auto base = uniform_params(lat, bps);
    const auto d = transfer_delay(size, Region::Asia, Region::Europe, base);
    EXPECT_GE(transfer_delay(size + 1 + rng() % 1000, Region::Asia, Region::Europe, base), d);
    EXPECT_GE(transfer_delay(size, Region::Asia, Region::Europe, uniform_params(lat + 1, bps)), d);
    EXPECT_LE(transfer_delay(size, Region::Asia, Region::Europe, uniform_params(lat, bps * 1.5)), d);
  }
}

TEST(Presets, DerivedFromVendoredCsvEqualsBuiltInAndGoldenFile) {
  for (int year : {2015, 2019}) {
    const auto dir = kData / std::to_string(year);
    const auto derived = derive_netparams(
        read_countries(dir / "countries.csv", dir / "bandwidth.csv"),
        read_city_latency(dir / "city_latency.csv"));
    const auto golden =
        load_netparams(kData / "presets" / ("netparams_" + std::to_string(year) + ".json"));
    const auto& builtin = internet_preset(year);
    for (std::size_t a = 0; a < kRegionCount; ++a) {
      EXPECT_NEAR(derived.region_shares[a], builtin.region_shares[a], 1e-12) << year;
      EXPECT_DOUBLE_EQ(derived.upload_bps[a], builtin.upload_bps[a]) << year;
      EXPECT_DOUBLE_EQ(derived.download_bps[a], builtin.download_bps[a]) << year;
      for (std::size_t b = 0; b < kRegionCount; ++b) {
        EXPECT_DOUBLE_EQ(derived.latency_ms[a][b], builtin.latency_ms[a][b]) << year;
      }
    }
    EXPECT_EQ(golden, derived) << year;
    EXPECT_NO_THROW(builtin.validate());
  }
}

TEST(Presets, MeanLatencyShrinksByAboutEightNinths) {
  const double ratio = internet_preset(2019).mean_latency_ms() /
                       internet_preset(2015).mean_latency_ms();
  EXPECT_NEAR(ratio, 0.889, 0.02);
  // Oracle: plain average of the 36 entries.
  double s15 = 0, s19 = 0;
  for (std::size_t a = 0; a < kRegionCount; ++a) {
    for (std::size_t b = 0; b < kRegionCount; ++b) {
      s15 += internet_preset(2015).latency_ms[a][b];
      s19 += internet_preset(2019).latency_ms[a][b];
    }
  }
  EXPECT_DOUBLE_EQ(ratio, s19 / s15);
}

TEST(Presets, EffectiveBandwidthGrowsTwoToThreeFold) {
  const double ratio = mean_effective_bps(internet_preset(2019)) /
                       mean_effective_bps(internet_preset(2015));
  EXPECT_GE(ratio, 2.0);
  EXPECT_LE(ratio, 3.0);
}

TEST(Presets, UnknownYearIsAConfigError) {
  EXPECT_THROW(internet_preset(2017), ConfigError);
}

TEST(NetParamsJson, RoundTrip) {
  const auto& p = internet_preset(2015);
  EXPECT_EQ(netparams_from_json(netparams_to_json(p)), p);
}

TEST(NetParamsJson, MalformedInputIsADataError) {
  EXPECT_THROW(netparams_from_json("{"), DataError);
  EXPECT_THROW(netparams_from_json(R"({"latency_ms": [[1]]})"), DataError);
}

TEST(NetParamsValidate, RejectsNonPositiveBandwidthAndBadShares) {
  auto p = uniform_params(10, 1e6);
  EXPECT_NO_THROW(p.validate());
  p.upload_bps[2] = 0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = uniform_params(10, 1e6);
  p.region_shares[0] = 0.9;
  EXPECT_THROW(p.validate(), ConfigError);
}
