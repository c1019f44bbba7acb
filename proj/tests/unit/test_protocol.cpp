#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "blockprop/protocol.hpp"
#include "stats.hpp"
#include "support.hpp"

using namespace blockprop;
using blockprop::testing::make_graph;
using blockprop::testing::uniform_params;

namespace {

// Bisection on the survival function, independent of the closed-form inverse.
double solve_survival(const FailureSizeModel& m, NodeKind kind, double target) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (m.survival(kind, mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Harness around RelayProtocol: records accept times and counts messages by
// (kind, sender).
struct Harness {
  Network net;
  NetParams params;
  Engine engine;
  BlockLedger ledger;
  std::map<std::pair<NodeId, BlockId>, SimTime> accepted;
  std::map<std::pair<MessageKind, NodeId>, int> sent;
  std::size_t duplicate_accepts = 0;
  RelayProtocol protocol;

  Harness(Network n, NetParams p, ProtocolConfig config, std::uint64_t seed = 1)
      : net(std::move(n)),
        params(p),
        protocol(engine, net, params, ledger, config, Rng(seed),
                 [this](NodeId node, BlockId block, bool) {
                   if (!accepted.emplace(std::pair{node, block}, engine.now()).second) {
                     ++duplicate_accepts;
                   }
                 }) {}

  BlockId mint(NodeId minter, std::uint32_t size, BlockId parent = kGenesis) {
    const BlockId id = ledger.add(parent, size, minter, engine.now()).id;
    protocol.on_minted(minter, id);
    return id;
  }

  void drain() {
    engine.run(StopCondition::drain(), [this](const Event& e) {
      ++sent[{e.message, e.src}];
      protocol.handle_message(e);
    });
  }

  std::uint64_t messages(MessageKind k) const {
    return protocol.counters().messages[static_cast<std::size_t>(k)];
  }
};

ProtocolConfig legacy() { return ProtocolConfig{}; }

ProtocolConfig cbr(double p_fail) {
  ProtocolConfig c;
  c.cbr_enabled = true;
  c.failure.p_fail_churn = p_fail;
  c.failure.p_fail_control = p_fail;
  return c;
}

}  // namespace

TEST(FailureSize, UnitUniformGivesZeroRatio) {
  const FailureSizeModel m;
  EXPECT_DOUBLE_EQ(m.ratio_for(NodeKind::Churn, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(m.ratio_for(NodeKind::Control, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(m.survival(NodeKind::Churn, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(m.survival(NodeKind::Control, 0.0), 1.0);
}

TEST(FailureSize, ChurnMedianOfOneMegabyteBlock) {
  const FailureSizeModel m;
  const double r = m.ratio_for(NodeKind::Churn, 0.5);
  EXPECT_NEAR(r, std::log(2.0) / 2120.0, 1e-15);
  EXPECT_NEAR(r, solve_survival(m, NodeKind::Churn, 0.5), 1e-12);
  EXPECT_EQ(std::llround(r * 1e6), 327);
}

TEST(FailureSize, ControlMedianOfOneMegabyteBlock) {
  const FailureSizeModel m;
  const double r = m.ratio_for(NodeKind::Control, 0.5);
  EXPECT_NEAR(r, solve_survival(m, NodeKind::Control, 0.5), 1e-12);
  EXPECT_NEAR(r, 6.16e-3, 0.01e-3);
  EXPECT_EQ(std::llround(r * 1e6), 6155);
}

TEST(FailureSize, ControlInverseClampsAtWholeBlock) {
  const FailureSizeModel m;
  const double u_full = m.survival(NodeKind::Control, 1.0);
  EXPECT_NEAR(u_full, 0.0098, 0.0001);
  EXPECT_DOUBLE_EQ(m.ratio_for(NodeKind::Control, u_full * 0.5), 1.0);
  EXPECT_LT(m.ratio_for(NodeKind::Control, u_full * 1.01), 1.0);
}

TEST(FailureSize, OutcomeInvariants) {
  const FailureSizeModel m;
  Rng rng(8);
  for (int i = 0; i < 20000; ++i) {
    const auto kind = i % 2 ? NodeKind::Churn : NodeKind::Control;
    const auto o = sample_reconstruction(kind, 535'000, m, rng);
    if (!o.failed) EXPECT_EQ(o.missing_bytes, 0u);
    EXPECT_LE(o.missing_bytes, 535'000u);
  }
}

TEST(FailureSizeProperty, SampledRatiosMatchSurvivalFunctions) {
  const FailureSizeModel m;
  for (auto kind : {NodeKind::Churn, NodeKind::Control}) {
    Rng rng = make_stream(5, Stream::Reconstruction, static_cast<std::uint64_t>(kind));
    std::vector<double> r;
    constexpr int kSamples = 100000;
    while (r.size() < kSamples) {
      const auto o = sample_reconstruction(kind, 1'000'000, FailureSizeModel{}, rng);
      if (o.failed) r.push_back(o.missing_bytes / 1e6);
    }
    const auto cdf = [&](double x) { return x >= 1.0 ? 1.0 : 1.0 - m.survival(kind, x); };
    const auto cdf_left = [&](double x) { return x > 1.0 ? 1.0 : 1.0 - m.survival(kind, x); };
    EXPECT_LT(blockprop::testing::ks_statistic(r, cdf, cdf_left), 0.01) << to_string(kind);
  }
}

TEST(FailureSizeProperty, FailureFrequencyWithinThreeSigma) {
  const FailureSizeModel m;
  for (auto kind : {NodeKind::Churn, NodeKind::Control}) {
    Rng rng = make_stream(6, Stream::Reconstruction, static_cast<std::uint64_t>(kind));
    constexpr int kTrials = 100000;
    int failures = 0;
    for (int i = 0; i < kTrials; ++i) {
      failures += sample_reconstruction(kind, 1'000'000, m, rng).failed;
    }
    const double p = m.failure_probability(kind);
    const double sigma = std::sqrt(p * (1 - p) / kTrials);
    EXPECT_NEAR(failures / static_cast<double>(kTrials), p, 3 * sigma) << to_string(kind);
  }
}

TEST(MessageSize, ConfiguredSizes) {
  const ProtocolConfig c;
  EXPECT_EQ(message_size(MessageKind::CompactBlock, c), 18'000u);
  EXPECT_EQ(message_size(MessageKind::FullBlock, c, 535'000), 535'000u);
  EXPECT_EQ(message_size(MessageKind::Inv, c), 61u);
  EXPECT_EQ(message_size(MessageKind::GetData, c), 61u);
  EXPECT_EQ(message_size(MessageKind::GetBlockTxn, c), 61u);
  EXPECT_EQ(message_size(MessageKind::BlockTxn, c, 1'000'000, 4321), 4321u);
}

TEST(Relay, LegacyPairTakesThreeOneWayDelays) {
  const auto p = uniform_params(50, 10e6);
  Harness h(make_graph(2, {{0, 1}}), p, legacy());
  const BlockId b = h.mint(0, 1'000'000);
  h.drain();
  const SimTime expected = transfer_delay(61, Region::NorthAmerica, Region::NorthAmerica, p) * 2 +
                           transfer_delay(1'000'000, Region::NorthAmerica, Region::NorthAmerica, p);
  EXPECT_EQ(expected, 50 + 50 + 850);
  EXPECT_EQ(h.accepted.at({1, b}), expected);
  EXPECT_EQ(h.messages(MessageKind::GetData), 1u);
  EXPECT_EQ(h.messages(MessageKind::FullBlock), 1u);
}

TEST(Relay, CbrPairSuccessPathSendsCompactBlock) {
  const auto p = uniform_params(50, 10e6);
  Harness h(make_graph(2, {{0, 1}}, true), p, cbr(0.0));
  const BlockId b = h.mint(0, 1'000'000);
  h.drain();
  EXPECT_EQ(h.accepted.at({1, b}), 50 + 50 + 50 + 14);
  EXPECT_EQ(h.messages(MessageKind::GetDataCompact), 1u);
  EXPECT_EQ(h.messages(MessageKind::CompactBlock), 1u);
  EXPECT_EQ(h.messages(MessageKind::FullBlock), 0u);
  EXPECT_EQ(h.messages(MessageKind::GetBlockTxn), 0u);
}

TEST(Relay, CbrPairFailurePathAddsMissingTransactionRoundTrip) {
  const auto p = uniform_params(50, 10e6);
  const auto config = cbr(1.0);
  Harness h(make_graph(2, {{0, 1}}, true, NodeKind::Churn), p, config, 99);
  const BlockId b = h.mint(0, 1'000'000);
  h.drain();
  // Replay the receiver's draw from an identically seeded stream.
  Rng replay(99);
  const auto outcome = sample_reconstruction(NodeKind::Churn, 1'000'000, config.failure, replay);
  ASSERT_TRUE(outcome.failed);
  const SimTime blocktxn = transfer_delay(outcome.missing_bytes, Region::NorthAmerica,
                                          Region::NorthAmerica, p);
  EXPECT_EQ(h.accepted.at({1, b}), 50 + 50 + 64 + 50 + blocktxn);
  EXPECT_EQ(h.protocol.counters().bytes[static_cast<std::size_t>(MessageKind::BlockTxn)],
            outcome.missing_bytes);
  EXPECT_EQ(h.protocol.counters().reconstruction_failures[0], 1u);
}

TEST(Relay, MixedPairFallsBackToLegacy) {
  auto net = make_graph(2, {{0, 1}}, true);
  net.node(1).cbr_capable = false;
  Harness h(std::move(net), uniform_params(50, 10e6), cbr(0.0));
  h.mint(0, 1'000'000);
  h.drain();
  EXPECT_FALSE(h.protocol.uses_compact(0, 1));
  EXPECT_EQ(h.messages(MessageKind::GetDataCompact), 0u);
  EXPECT_EQ(h.messages(MessageKind::FullBlock), 1u);
}

TEST(Relay, MinterAnnouncesToEveryNeighbor) {
  std::vector<std::pair<NodeId, NodeId>> star;
  for (NodeId leaf = 1; leaf <= 8; ++leaf) star.emplace_back(0, leaf);
  Harness h(make_graph(9, star), uniform_params(50, 10e6), legacy());
  h.mint(0, 1000);
  h.drain();
  EXPECT_EQ((h.sent[{MessageKind::Inv, 0}]), 8);
  EXPECT_EQ(h.messages(MessageKind::Inv), 8u);
}

TEST(Relay, ReceiverSkipsItsSource) {
  Harness h(make_graph(4, {{0, 1}, {1, 2}, {1, 3}}), uniform_params(50, 10e6), legacy());
  h.mint(0, 1000);
  h.drain();
  EXPECT_EQ((h.sent[{MessageKind::Inv, 1}]), 2);
  EXPECT_EQ((h.sent[{MessageKind::Inv, 2}]), 0);
  EXPECT_EQ(h.messages(MessageKind::Inv), 3u);
}

TEST(Relay, DuplicateInvForInFlightBlockGetsNoReply) {
  Harness h(make_graph(3, {{0, 1}, {1, 2}, {0, 2}}), uniform_params(50, 10e6), legacy());
  const BlockId b = h.mint(0, 1'000'000);
  // Let node 2's first request leave, then announce again from node 1.
  h.engine.run(StopCondition::time_reached(50), [&](const Event& e) { h.protocol.handle_message(e); });
  ASSERT_TRUE(h.protocol.in_flight(2, b));
  const auto before = h.messages(MessageKind::GetData);
  h.protocol.handle_message(Event::arrival(50, 1, 2, MessageKind::Inv, b, 61));
  EXPECT_EQ(h.messages(MessageKind::GetData), before);
}

TEST(Relay, UnknownBlockRequestsCountAsProtocolErrors) {
  Harness h(make_graph(2, {{0, 1}}), uniform_params(50, 10e6), legacy());
  const BlockId b = h.mint(0, 1000);
  h.protocol.handle_message(Event::arrival(0, 0, 1, MessageKind::GetData, b, 61));
  h.protocol.handle_message(Event::arrival(0, 0, 1, MessageKind::GetBlockTxn, 7, 61, 10));
  EXPECT_EQ(h.protocol.counters().protocol_errors, 2u);
}

TEST(Relay, HighBandwidthModeIsRejected) {
  ProtocolConfig c;
  c.high_bandwidth = true;
  EXPECT_THROW(Harness(make_graph(2, {{0, 1}}), uniform_params(50, 10e6), c), ConfigError);
}

TEST(Relay, ChildArrivingBeforeParentWaitsForIt) {
  // Node 1 sits behind a 100 ms link and its request for A queues behind
  // node 2's on node 0's uplink. Node 2 mints a child of A, which reaches
  // node 1 at t=1131, before A itself at t=1730.
  auto p = uniform_params(10, 1e7);
  p.latency_ms[index_of(Region::NorthAmerica)][index_of(Region::Europe)] = 100;
  p.latency_ms[index_of(Region::Europe)][index_of(Region::NorthAmerica)] = 100;
  auto net = make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  net.node(1).region = Region::Europe;
  Harness h(std::move(net), p, legacy());
  const BlockId a = h.mint(0, 1'000'000);
  h.engine.run(StopCondition::time_reached(830),
               [&](const Event& e) { h.protocol.handle_message(e); });
  ASSERT_TRUE(h.protocol.knows(2, a));
  ASSERT_FALSE(h.protocol.knows(1, a));
  const BlockId child = h.mint(2, 1000, a);
  h.engine.run(StopCondition::time_reached(1200),
               [&](const Event& e) { h.protocol.handle_message(e); });
  EXPECT_FALSE(h.protocol.knows(1, child));
  EXPECT_EQ(h.messages(MessageKind::FullBlock), 4u);
  h.drain();
  EXPECT_EQ(h.accepted.at({1, a}), 1730);
  EXPECT_EQ(h.accepted.at({1, child}), 1730);
  EXPECT_EQ(h.protocol.head(1), child);
  EXPECT_EQ(h.protocol.head(0), child);
}

TEST(RelayProperty, FiftyNodeLegacyAudit) {
  const auto net = build_network(50, internet_preset(2019).region_shares,
                                 DegreeDistribution::constant(4), 12);
  Harness h(net, internet_preset(2019), legacy());
  constexpr std::uint32_t kSize = 1'000'000;
  const BlockId b = h.mint(3, kSize);
  h.drain();
  for (NodeId n = 0; n < 50; ++n) EXPECT_TRUE(h.protocol.knows(n, b));
  EXPECT_EQ(h.duplicate_accepts, 0u);
  EXPECT_EQ(h.accepted.size(), 50u);
  EXPECT_LE(h.messages(MessageKind::FullBlock), 49u);
  const auto& bytes = h.protocol.counters().bytes;
  EXPECT_GE(bytes[static_cast<std::size_t>(MessageKind::FullBlock)],
            std::uint64_t{kSize} * 49);
  // Quiescent: re-announcing from every node triggers no requests.
  const auto requests = h.messages(MessageKind::GetData);
  for (NodeId n = 0; n < 50; ++n) h.protocol.relay_block(n, b);
  h.drain();
  EXPECT_EQ(h.messages(MessageKind::GetData), requests);
  EXPECT_EQ(h.messages(MessageKind::FullBlock), 49u);
  EXPECT_EQ(h.protocol.counters().protocol_errors, 0u);
}

TEST(RelayProperty, CompactRelayWithoutFailuresReplacesFullBlocks) {
  const auto net = build_network(50, internet_preset(2019).region_shares,
                                 DegreeDistribution::constant(4), 12);
  Network all_cbr = net;
  for (NodeId n = 0; n < 50; ++n) all_cbr.node(n).cbr_capable = true;
  Harness h(all_cbr, internet_preset(2019), cbr(0.0));
  h.mint(3, 1'000'000);
  h.drain();
  EXPECT_EQ(h.messages(MessageKind::FullBlock), 0u);
  EXPECT_EQ(h.messages(MessageKind::CompactBlock), 49u);
  EXPECT_EQ(h.protocol.counters().bytes[static_cast<std::size_t>(MessageKind::CompactBlock)],
            18'000u * 49);
}

TEST(RelayProperty, EachNodeAcceptsEachBlockOnce) {
  const auto net = build_network(60, internet_preset(2015).region_shares,
                                 DegreeDistribution::constant(5), 4);
  Network mixed = net;
  Rng roles(3);
  mixed = assign_roles(std::move(mixed), 0.6, 0.5, roles);
  Harness h(mixed, internet_preset(2015), cbr(0.3), 5);
  BlockId last = kGenesis;
  for (int i = 0; i < 6; ++i) {
    NodeId minter = 0;
    while (!h.protocol.knows(minter, last)) ++minter;
    last = h.mint(minter, 500'000, last);
    h.engine.run(StopCondition::time_reached(h.engine.now() + 700),
                 [&](const Event& e) { h.protocol.handle_message(e); });
  }
  h.drain();
  EXPECT_EQ(h.duplicate_accepts, 0u);
  EXPECT_EQ(h.accepted.size(), 60u * 6);
  for (NodeId n = 0; n < 60; ++n) EXPECT_EQ(h.protocol.head(n), last);
}

TEST(UploadPolicy, SerialQueuesBlockTransfersOnTheUplink) {
  std::vector<std::pair<NodeId, NodeId>> star = {{0, 1}, {0, 2}};
  const auto p = uniform_params(50, 10e6);
  const auto run = [&](UploadPolicy policy) {
    ProtocolConfig c;
    c.upload = policy;
    Harness h(make_graph(3, star), p, c);
    const BlockId b = h.mint(0, 1'000'000);
    h.drain();
    return std::pair{h.accepted.at({1, b}), h.accepted.at({2, b})};
  };
  EXPECT_EQ(run(UploadPolicy::Parallel), (std::pair<SimTime, SimTime>{950, 950}));
  EXPECT_EQ(run(UploadPolicy::Serial), (std::pair<SimTime, SimTime>{950, 1750}));
  EXPECT_EQ(run(UploadPolicy::SerialDelivery), (std::pair<SimTime, SimTime>{950, 1800}));
  EXPECT_EQ(parse_upload_policy("serial_delivery"), UploadPolicy::SerialDelivery);
  EXPECT_THROW(parse_upload_policy("fast"), ConfigError);
}
