#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "multpim/matvec.hpp"
#include "multpim/multiplier.hpp"
#include "multpim/partition_routines.hpp"

using namespace multpim;

namespace {

using Pairs = std::vector<std::pair<std::uint64_t, std::uint64_t>>;

// 2 = undefined
std::vector<Bit> snapshot(const Crossbar& xb) {
  std::vector<Bit> s;
  for (Row r = 0; r < xb.rows(); ++r) {
    for (Column c = 0; c < xb.cols(); ++c) s.push_back(xb.is_defined(r, c) ? xb.read(r, c) : 2);
  }
  return s;
}

Pairs seeded_pairs(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::uint64_t m = (1ull << n) - 1;
  Pairs p;
  for (std::size_t i = 0; i < count; ++i) p.emplace_back(rng() & m, rng() & m);
  return p;
}

std::set<Column> written_by(const CycleInstruction& c) {
  std::set<Column> out;
  for (const auto& ex : c.executions) {
    if (const auto* g = std::get_if<GateExecution>(&ex)) {
      out.insert(g->output);
    } else {
      for (const auto& t : std::get<InitExecution>(ex).targets) out.insert(t.column);
    }
  }
  return out;
}

}  // namespace

TEST(Property, ReplayIsDeterministic) {
  for (auto v : {Variant::Standard, Variant::Area}) {
    const auto plan = schedule_multiply(MultiplierConfig::square(8, v));
    const auto again = schedule_multiply(MultiplierConfig::square(8, v));
    EXPECT_EQ(plan.schedule.cycles, again.schedule.cycles);
    const auto pairs = seeded_pairs(8, 16, 1);
    auto x1 = load_operands(pairs, plan);
    auto x2 = load_operands(pairs, plan);
    plan.schedule.run(x1);
    plan.schedule.run(x2);
    EXPECT_EQ(snapshot(x1), snapshot(x2));
    EXPECT_EQ(x1.cost_report(), x2.cost_report());
  }
}

TEST(Property, ExecutionsCommuteWithinACycle) {
  std::mt19937_64 rng(11);
  for (auto v : {Variant::Standard, Variant::Area}) {
    const auto plan = schedule_multiply(MultiplierConfig::square(8, v));
    Schedule shuffled = plan.schedule;
    for (auto& c : shuffled.cycles) std::shuffle(c.executions.begin(), c.executions.end(), rng);
    const auto pairs = seeded_pairs(8, 8, 2);
    auto x1 = load_operands(pairs, plan);
    auto x2 = load_operands(pairs, plan);
    plan.schedule.run(x1);
    shuffled.run(x2);
    EXPECT_EQ(snapshot(x1), snapshot(x2));
  }
}

TEST(Property, OneCyclePerInstructionAndUntouchedCellsConserved) {
  const auto plan = schedule_matvec({2, 2, 4});
  Crossbar xb(2, plan.layout.cols, plan.layout.boundaries);
  for (Row r = 0; r < 2; ++r) {
    for (Column c = 0; c < xb.cols(); ++c) xb.write(r, c, (r + c) % 3 == 0);
  }
  // c_lo complement cells must read as "zero carry"
  for (Row r = 0; r < 2; ++r) {
    for (Column c : plan.macs.front().in.c_lo_n) xb.write(r, c, 1);
  }
  for (std::size_t i = 0; i < plan.schedule.size(); ++i) {
    const auto& instr = plan.schedule.cycles[i];
    const auto before = snapshot(xb);
    xb.apply_cycle(instr);
    ASSERT_EQ(xb.cost_report().cycles, i + 1);
    const auto after = snapshot(xb);
    const auto touched = written_by(instr);
    for (Row r = 0; r < 2; ++r) {
      for (Column c = 0; c < xb.cols(); ++c) {
        if (touched.count(c)) continue;
        ASSERT_EQ(before[r * xb.cols() + c], after[r * xb.cols() + c]) << "cycle " << i << " col " << c;
      }
    }
  }
}

TEST(Property, Min3IsComplementedMajority) {
  for (int v = 0; v < 8; ++v) {
    const Bit in[3] = {Bit(v & 1), Bit(v >> 1 & 1), Bit(v >> 2 & 1)};
    const bool maj = in[0] + in[1] + in[2] >= 2;
    EXPECT_EQ(eval(GateKind::MIN3, in), !maj);
  }
  for (int v = 0; v < 4; ++v) {
    const Bit m[3] = {Bit(v & 1), Bit(v >> 1), 1};
    const Bit n[2] = {Bit(v & 1), Bit(v >> 1)};
    EXPECT_EQ(eval(GateKind::MIN3, m), eval(GateKind::NOR2, n));
  }
}

TEST(Property, BroadcastLogEqualsNaive) {
  for (std::size_t k = 1; k <= 32; ++k) {
    std::vector<Column> b;
    for (std::size_t p = 1; p < k; ++p) b.push_back(2 * p);
    const PartitionMap pm(2 * k, b);
    for (GateKind g : {GateKind::COPY, GateKind::NOT}) {
      const auto log = broadcast_log(pm, {0, k, 0}, g);
      const auto naive = broadcast_naive(pm, {0, k, 0}, g);
      for (Bit bit : {0, 1}) {
        std::vector<Bit> got[2];
        int i = 0;
        for (const auto* br : {&log, &naive}) {
          Crossbar xb(1, pm.cols(), pm.boundaries());
          xb.write(0, 0, bit);
          std::vector<Column> t;
          for (std::size_t p = 1; p < k; ++p) t.push_back(2 * p);
          if (!t.empty()) xb.apply_cycle(init_cycle(pm, t));
          br->schedule.run(xb);
          for (std::size_t p = 0; p < k; ++p) {
            const Bit raw = xb.read(0, 2 * p);
            got[i].push_back(br->polarity[p] == Polarity::True ? raw : !raw);
          }
          ++i;
        }
        EXPECT_EQ(got[0], got[1]) << "k=" << k;
        EXPECT_EQ(got[0], std::vector<Bit>(k, bit)) << "k=" << k;
      }
    }
  }
}

TEST(Property, BroadcastDoubling) {
  for (std::size_t k = 2; k <= 32; ++k) {
    std::vector<Column> b;
    for (std::size_t p = 1; p < k; ++p) b.push_back(p);
    const PartitionMap pm(k, b);
    const auto br = broadcast_log(pm, {0, k, 0}, GateKind::COPY);
    std::set<Column> holders{0};
    for (std::size_t t = 0; t < br.schedule.size(); ++t) {
      for (Column c : written_by(br.schedule.cycles[t])) holders.insert(c);
      EXPECT_EQ(holders.size(), std::min<std::size_t>(std::size_t{1} << (t + 1), k)) << k << " " << t;
    }
  }
}

TEST(Property, EmittedSchedulesAreLegal) {
  // Schedule::run validates every cycle; a throw here is a legality failure
  for (std::size_t n : {2, 3, 5, 8, 16, 32}) {
    for (auto v : {Variant::Standard, Variant::Area}) {
      const auto plan = schedule_multiply(MultiplierConfig::square(n, v));
      auto xb = load_operands(seeded_pairs(n, 2, n), plan);
      EXPECT_NO_THROW(plan.schedule.run(xb)) << n;
    }
  }
}
