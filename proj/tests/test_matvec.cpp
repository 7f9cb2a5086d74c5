#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "multpim/matvec.hpp"

using namespace multpim;

namespace multpim {
inline void PrintTo(Variant v, std::ostream* os) { *os << to_string(v); }
}  // namespace multpim

namespace {

std::uint64_t mask(std::size_t bits) { return bits >= 64 ? ~0ull : (1ull << bits) - 1; }

Matrix random_matrix(std::size_t m, std::size_t n, std::size_t N, std::mt19937_64& rng) {
  Matrix a(m, std::vector<std::uint64_t>(n));
  for (auto& row : a) {
    for (auto& v : row) v = rng() & mask(N);
  }
  return a;
}

std::vector<std::uint64_t> random_vector(std::size_t n, std::size_t N, std::mt19937_64& rng) {
  std::vector<std::uint64_t> x(n);
  for (auto& v : x) v = rng() & mask(N);
  return x;
}

// inner products by repeated addition of shifted rows, wrapped at 2N bits
std::vector<std::uint64_t> reference(const Matrix& a, const std::vector<std::uint64_t>& x,
                                     std::size_t N) {
  std::vector<std::uint64_t> y;
  for (const auto& row : a) {
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      for (std::size_t i = 0; i < N; ++i) {
        if (x[k] >> i & 1) acc += row[k] << i;
      }
    }
    y.push_back(acc & mask(2 * N));
  }
  return y;
}

class MacVariant : public ::testing::TestWithParam<Variant> {};

}  // namespace

TEST_P(MacVariant, FusedMacZeroAccumulator) {
  for (std::size_t N : {2, 4, 8}) {
    std::mt19937_64 rng(N);
    for (int i = 0; i < 50; ++i) {
      const auto a = rng() & mask(N), b = rng() & mask(N);
      const auto r = run_fused_mac(a, b, {}, N, GetParam());
      EXPECT_EQ((r.out.s + r.out.c) & mask(2 * N), a * b);
    }
  }
}

TEST_P(MacVariant, FusedMacZeroMultiplicand) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const AccumulatorState in{rng() & mask(16), rng() & mask(16)};
    const auto r = run_fused_mac(0, rng() & 0xFF, in, 8, GetParam());
    EXPECT_EQ((r.out.s + r.out.c) & mask(16), (in.s + in.c) & mask(16));
  }
}

TEST_P(MacVariant, FusedMacIdentityRandom) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const auto a = rng() & 0xFF, b = rng() & 0xFF;
    const AccumulatorState in{rng() & 0xFFFF, rng() & 0xFFFF};
    const auto r = run_fused_mac(a, b, in, 8, GetParam());
    ASSERT_EQ((r.out.s + r.out.c) & 0xFFFF, (a * b + in.s + in.c) & 0xFFFF)
        << a << " " << b << " " << in.s << " " << in.c;
  }
}

TEST_P(MacVariant, FusedMacOddWidths) {
  for (std::size_t N : {3, 5, 7, 16}) {
    std::mt19937_64 rng(N * 7);
    for (int i = 0; i < 40; ++i) {
      const auto a = rng() & mask(N), b = rng() & mask(N);
      const AccumulatorState in{rng() & mask(2 * N), rng() & mask(2 * N)};
      const auto r = run_fused_mac(a, b, in, N, GetParam());
      ASSERT_EQ((r.out.s + r.out.c) & mask(2 * N), (a * b + in.s + in.c) & mask(2 * N)) << N;
    }
  }
}

TEST_P(MacVariant, MatVecAgainstOracle) {
  struct Shape {
    std::size_t m, n, N;
  };
  for (auto s : {Shape{2, 2, 4}, Shape{4, 3, 8}, Shape{2, 8, 32}, Shape{3, 5, 5}, Shape{1, 1, 2}}) {
    std::mt19937_64 rng(s.m * 1000 + s.n * 10 + s.N);
    auto a = random_matrix(s.m, s.n, s.N, rng);
    a.front().assign(s.n, mask(s.N));
    auto x = random_vector(s.n, s.N, rng);
    const MatVecConfig cfg{s.m, s.n, s.N, GetParam()};
    const auto r = run_matvec(a, x, cfg);
    EXPECT_EQ(r.y, reference(a, x, s.N));
    EXPECT_EQ(r.y, matvec_oracle(a, x, s.N));
    EXPECT_EQ(r.cost.cycles, matvec_predicted_cycles(cfg));
    EXPECT_EQ(r.cost.memristors_per_row, matvec_predicted_width(cfg));
    EXPECT_EQ(r.cost.partitions, s.N + 1);
  }
}

TEST_P(MacVariant, IdentityMatrix) {
  const std::size_t n = 4, N = 8;
  Matrix id(n, std::vector<std::uint64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
  const std::vector<std::uint64_t> x{0, 1, 0x80, 0xFF};
  EXPECT_EQ(run_matvec(id, x, MatVecConfig{n, n, N, GetParam()}).y, x);
}

TEST_P(MacVariant, LatencyIndependentOfRows) {
  std::mt19937_64 rng(5);
  const auto x = random_vector(3, 8, rng);
  const auto one = run_matvec(random_matrix(1, 3, 8, rng), x, MatVecConfig{1, 3, 8, GetParam()});
  const auto many = run_matvec(random_matrix(16, 3, 8, rng), x, MatVecConfig{16, 3, 8, GetParam()});
  EXPECT_EQ(one.cost.cycles, many.cost.cycles);
  EXPECT_EQ(one.cost.memristors_per_row, many.cost.memristors_per_row);
}

TEST_P(MacVariant, NotMin3Only) {
  const auto plan = schedule_matvec({1, 3, 8, GetParam()});
  EXPECT_TRUE(plan.schedule.profile_violations(GateProfile::NotMin3).empty());
}

INSTANTIATE_TEST_SUITE_P(Variants, MacVariant, ::testing::Values(Variant::Standard, Variant::Area),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(MatVec, LayoutWidthMatchesReference) {
  for (auto [n, N] : {std::pair<std::size_t, std::size_t>{8, 32}, {2, 4}, {4, 8}}) {
    const auto plan = schedule_matvec({1, n, N});
    EXPECT_EQ(plan.layout.cols, 2 * n * N + 14 * N + 5);
    EXPECT_EQ(plan.layout.partitions(), N + 1);
    EXPECT_EQ(matvec_reference_width(n, N, Variant::Standard), plan.layout.cols);
  }
}

TEST(MatVec, MacBoundariesChain) {
  const auto plan = schedule_matvec({1, 3, 4});
  ASSERT_EQ(plan.macs.size(), 3u);
  EXPECT_EQ(plan.macs[0].first_cycle, 0u);
  for (std::size_t k = 1; k < 3; ++k) {
    EXPECT_EQ(plan.macs[k].first_cycle, plan.macs[k - 1].end_cycle);
    EXPECT_EQ(plan.macs[k].in.s_hi, plan.macs[k - 1].out.s_hi);
  }
  EXPECT_EQ(plan.macs.back().end_cycle + plan.final_sum_cycles, plan.schedule.size());
}

TEST(MatVec, Wraparound) {
  const std::size_t N = 4;
  Matrix a(1, std::vector<std::uint64_t>(5, 15));
  const std::vector<std::uint64_t> x(5, 15);
  EXPECT_EQ(run_matvec(a, x, MatVecConfig{1, 5, N}).y.front(), (5 * 225) & 0xFF);
}

TEST(MatVec, DimensionErrors) {
  const Matrix a{{1, 2}, {3, 4}};
  EXPECT_THROW(run_matvec(a, {1, 2, 3}, MatVecConfig{2, 2, 4}), MatVecError);
  EXPECT_THROW(run_matvec(a, {1, 2}, MatVecConfig{3, 2, 4}), MatVecError);
  EXPECT_THROW(run_matvec(a, {1, 16}, MatVecConfig{2, 2, 4}), MatVecError);
  EXPECT_THROW(run_matvec({{1, 2}, {3}}, {1, 2}, MatVecConfig{2, 2, 4}), MatVecError);
  EXPECT_THROW(schedule_matvec({0, 2, 4}), MatVecError);
  EXPECT_THROW(schedule_matvec({1, 2, 1}), MatVecError);
  EXPECT_THROW(run_fused_mac(16, 1, {}, 4), MatVecError);
}

TEST(FloatPim, Formulas) {
  const auto c = floatpim_cost(8, 32);
  EXPECT_EQ(c.cycles, 109616u);
  EXPECT_EQ(c.row_width, 1723u);
  EXPECT_EQ(floatpim_cost(8, 32, 64).cycles, c.cycles);
  EXPECT_EQ(naive_substitution_cycles(8, 32), 11544u);
  EXPECT_NEAR(double(c.cycles) / double(naive_substitution_cycles(8, 32)), 9.5, 0.05);
}

TEST(Parsing, MatrixAndVector) {
  std::istringstream m("# comment\n1 0x10\n\n3 4 # trailing\n");
  EXPECT_EQ(parse_matrix(m), (Matrix{{1, 16}, {3, 4}}));
  std::istringstream v("5\n0xff 7\n");
  EXPECT_EQ(parse_vector(v), (std::vector<std::uint64_t>{5, 255, 7}));
  std::istringstream ragged("1 2\n3\n");
  EXPECT_THROW(parse_matrix(ragged), MatVecError);
  std::istringstream empty("# nothing\n");
  EXPECT_THROW(parse_matrix(empty), MatVecError);
  EXPECT_THROW(parse_element("12a"), MatVecError);
  EXPECT_THROW(parse_element("0x"), MatVecError);
  EXPECT_THROW(parse_element("-1"), MatVecError);
}
