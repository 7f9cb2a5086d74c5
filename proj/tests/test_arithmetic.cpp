#include <gtest/gtest.h>

#include <random>

#include "multpim/arithmetic.hpp"

using namespace multpim;

namespace {

const FullAdderCellLayout kFa{0, 1, 2, Column{3}, 4, 5, 6, 7};

// Row v holds the input combination (a, b, cin) = bits of v.
Crossbar adder_rows(bool with_cin_n) {
  Crossbar xb(8, 8, {});
  for (Row v = 0; v < 8; ++v) {
    xb.write(v, kFa.a, v & 1);
    xb.write(v, kFa.b, v >> 1 & 1);
    xb.write(v, kFa.cin, v >> 2 & 1);
    if (with_cin_n) xb.write(v, *kFa.cin_n, !(v >> 2 & 1));
  }
  return xb;
}

void expect_adds(const Crossbar& xb) {
  for (Row v = 0; v < 8; ++v) {
    const int total = (v & 1) + (v >> 1 & 1) + (v >> 2 & 1);
    EXPECT_EQ(2 * xb.read(v, kFa.cout) + xb.read(v, kFa.sum), total) << "row " << v;
  }
}

}  // namespace

TEST(FullAdder, FiveCyclesAllRows) {
  auto xb = adder_rows(false);
  const auto& pm = xb.partitions();
  xb.apply_cycle(init_cycle(pm, {3, 4, 5, 6, 7}));
  const auto s = full_adder_multpim(pm, kFa, false);
  EXPECT_EQ(s.size(), 5u);
  EXPECT_TRUE(s.profile_violations(GateProfile::NotMin3).empty());
  s.run(xb);
  expect_adds(xb);
  for (Row v = 0; v < 8; ++v) EXPECT_EQ(xb.read(v, kFa.t1), !xb.read(v, kFa.cout));
}

TEST(FullAdder, FourCyclesWithComplement) {
  auto xb = adder_rows(true);
  const auto& pm = xb.partitions();
  xb.apply_cycle(init_cycle(pm, {4, 5, 6, 7}));
  const auto s = full_adder_multpim(pm, kFa, true);
  EXPECT_EQ(s.size(), 4u);
  s.run(xb);
  expect_adds(xb);
}

TEST(FullAdder, LayoutCollision) {
  PartitionMap pm(8, {});
  auto bad = kFa;
  bad.t2 = bad.t1;
  EXPECT_THROW(full_adder_multpim(pm, bad, true), ArithmeticError);
  bad = kFa;
  bad.cin_n.reset();
  EXPECT_THROW(full_adder_multpim(pm, bad, true), ArithmeticError);
}

TEST(FullAdder, FelixSixCyclesTwoIntermediates) {
  auto xb = adder_rows(false);
  const auto& pm = xb.partitions();
  xb.apply_cycle(init_cycle(pm, {4, 5, 6, 7}));
  const auto s = full_adder_felix(pm, kFa);
  EXPECT_EQ(s.size(), 6u);
  s.run(xb);
  expect_adds(xb);
  // a, b, cin, two intermediates, cout, sum
  EXPECT_EQ(xb.cost_report().memristors_per_row, 7u);
}

TEST(FullAdder, FelixRejectedUnderNotMin3) {
  PartitionMap pm(8, {});
  EXPECT_THROW(full_adder_felix(pm, kFa, GateProfile::NotMin3), GateError);
}

TEST(HalfAdder, AllRows) {
  const HalfAdderCellLayout l{0, 1, 2, 3, 4, 5, 6};
  Crossbar xb(4, 7, {});
  for (Row v = 0; v < 4; ++v) {
    xb.write(v, l.s, v & 1);
    xb.write(v, l.c, v >> 1 & 1);
    xb.write(v, l.c_n, !(v >> 1 & 1));
  }
  xb.apply_cycle(init_cycle(xb.partitions(), {l.one, l.nor, l.carry_n, l.sum}));
  const auto s = half_adder(xb.partitions(), l);
  EXPECT_EQ(s.size(), 4u);
  s.run(xb);
  for (Row v = 0; v < 4; ++v) {
    const int total = (v & 1) + (v >> 1 & 1);
    const Bit carry = xb.read(v, l.s);
    EXPECT_EQ(2 * carry + xb.read(v, l.sum), total) << v;
    EXPECT_EQ(xb.read(v, l.carry_n), !carry) << v;
  }
}

TEST(RippleAdder, ExhaustiveFourBits) {
  for (std::uint64_t x = 0; x < 16; ++x) {
    for (std::uint64_t y = 0; y < 16; ++y) {
      for (bool cin : {false, true}) {
        const auto r = run_ripple_add(x, y, cin, 4);
        ASSERT_EQ(r.sum, x + y + cin) << x << "+" << y << "+" << cin;
        EXPECT_EQ(r.cost.cycles, 20u);
        EXPECT_EQ(r.cost.memristors_per_row, 3u * 4 + 5);
      }
    }
  }
  EXPECT_EQ(run_ripple_add(9, 7, false, 4).sum, 16u);
}

TEST(RippleAdder, RandomSixteenBits) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t x = rng() & 0xFFFF, y = rng() & 0xFFFF;
    ASSERT_EQ(run_ripple_add(x, y, false, 16).sum, x + y);
  }
}

TEST(RippleAdder, CostIsFiveNAndThreeNPlusFive) {
  for (std::size_t n : {1, 2, 8, 16, 32}) {
    const auto plan = ripple_adder(n);
    EXPECT_EQ(plan.schedule.size(), 5 * n);
    EXPECT_EQ(plan.layout.cols, 3 * n + 5);
  }
  EXPECT_EQ(ripple_adder(8).schedule.size(), 40u);
}

TEST(RippleAdder, Errors) {
  EXPECT_THROW(ripple_adder(0), ArithmeticError);
  EXPECT_THROW(run_ripple_add(16, 0, false, 4), ArithmeticError);
}
