#include <gtest/gtest.h>

#include "multpim/partition_routines.hpp"

using namespace multpim;

namespace {

// k partitions of 3 columns each
PartitionMap parts(std::size_t k) {
  std::vector<Column> b;
  for (std::size_t p = 1; p < k; ++p) b.push_back(3 * p);
  return PartitionMap(3 * k, b);
}

std::size_t ceil_log2(std::size_t k) {
  std::size_t r = 0;
  while ((std::size_t{1} << r) < k) ++r;
  return r;
}

// Broadcasts `bit` from partition 0 and returns what each node reads.
std::vector<Bit> run_broadcast(const BroadcastResult& br, std::size_t k, Bit bit) {
  const auto pm = parts(k);
  Crossbar xb(1, pm.cols(), pm.boundaries());
  xb.write(0, 0, bit);
  std::vector<Column> targets;
  for (std::size_t p = 1; p < k; ++p) targets.push_back(3 * p);
  if (!targets.empty()) xb.apply_cycle(init_cycle(pm, targets));
  br.schedule.run(xb);
  std::vector<Bit> out;
  for (std::size_t p = 0; p < k; ++p) {
    const Bit v = xb.read(0, 3 * p);
    out.push_back(br.polarity[p] == Polarity::True ? v : !v);
  }
  return out;
}

}  // namespace

TEST(Broadcast, LogCyclesAndValues) {
  for (std::size_t k = 2; k <= 32; ++k) {
    const auto pm = parts(k);
    for (GateKind g : {GateKind::COPY, GateKind::NOT}) {
      const auto br = broadcast_log(pm, {0, k, 0}, g);
      EXPECT_EQ(br.schedule.size(), ceil_log2(k)) << k;
      for (Bit bit : {0, 1}) {
        for (Bit v : run_broadcast(br, k, bit)) EXPECT_EQ(v, bit) << k;
      }
    }
  }
}

TEST(Broadcast, NaiveCycles) {
  for (std::size_t k = 2; k <= 32; ++k) {
    const auto br = broadcast_naive(parts(k), {0, k, 0}, GateKind::NOT);
    EXPECT_EQ(br.schedule.size(), k - 1);
    for (Bit v : run_broadcast(br, k, 1)) EXPECT_EQ(v, 1);
  }
}

TEST(Broadcast, NotFlipsPolarityPerHop) {
  const auto br = broadcast_log(parts(4), {0, 4, 0}, GateKind::NOT);
  // 0 -> 2 in cycle one, then 0 -> 1 and 2 -> 3
  EXPECT_EQ(br.polarity,
            (PolarityMap{Polarity::True, Polarity::Complemented, Polarity::Complemented,
                         Polarity::True}));
}

TEST(Broadcast, BadArguments) {
  const auto pm = parts(4);
  EXPECT_THROW(broadcast_log(pm, {0, 5, 0}, GateKind::NOT), RoutingError);
  EXPECT_THROW(broadcast_log(pm, {0, 4, 3}, GateKind::NOT), RoutingError);
  EXPECT_THROW(broadcast_log(pm, {0, 4, 0}, GateKind::MIN3), RoutingError);
  EXPECT_EQ(broadcast_log(pm, {2, 1, 0}, GateKind::NOT).schedule.size(), 0u);
}

namespace {

// every partition p holds bit (pattern >> p) at offset 0; after the shift,
// offset 1 of partition p+1 must hold the (possibly complemented) bit of p
void check_shift(const Schedule& s, std::size_t k, GateKind kind, std::uint64_t pattern) {
  const auto pm = parts(k);
  Crossbar xb(1, pm.cols(), pm.boundaries());
  std::vector<Column> targets;
  for (std::size_t p = 0; p < k; ++p) {
    xb.write(0, 3 * p, pattern >> p & 1);
    targets.push_back(3 * p + 1);
  }
  xb.apply_cycle(init_cycle(pm, targets));
  s.run(xb);
  for (std::size_t p = 0; p + 1 < k; ++p) {
    const Bit src = pattern >> p & 1;
    const Bit want = kind == GateKind::NOT ? !src : src;
    EXPECT_EQ(xb.read(0, 3 * (p + 1) + 1), want) << "k=" << k << " p=" << p;
  }
}

}  // namespace

TEST(Shift, ParallelTwoCycles) {
  for (std::size_t k = 2; k <= 32; ++k) {
    const auto pm = parts(k);
    const HopGate hop{GateKind::NOT, {0}, 1};
    const auto s = shift_parallel(pm, {0, k, 0}, hop);
    EXPECT_EQ(s.size(), k == 2 ? 1u : 2u) << k;
    check_shift(s, k, GateKind::NOT, 0x5A5A5A5Bu);
    check_shift(s, k, GateKind::NOT, 0xFFFFFFFFu);
  }
}

TEST(Shift, NaiveMatchesParallel) {
  for (std::size_t k = 2; k <= 32; ++k) {
    const auto pm = parts(k);
    const HopGate hop{GateKind::COPY, {0}, 1};
    const auto s = shift_naive(pm, {0, k, 0}, hop);
    EXPECT_EQ(s.size(), k - 1);
    check_shift(s, k, GateKind::COPY, 0x13572468u);
  }
}

TEST(Shift, BadArguments) {
  const auto pm = parts(4);
  EXPECT_THROW(shift_parallel(pm, {0, 1, 0}, {GateKind::NOT, {0}, 1}), RoutingError);
  EXPECT_THROW(shift_parallel(pm, {0, 4, 0}, {GateKind::NOT, {0}, 0}), RoutingError);
  EXPECT_THROW(shift_parallel(pm, {0, 4, 0}, {GateKind::MIN3, {0}, 1}), RoutingError);
}
