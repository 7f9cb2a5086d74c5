#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "multpim/crossbar.hpp"
#include "multpim/multiplier.hpp"
#include "multpim/schedule.hpp"

namespace multpim {

class MatVecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// y = A x with A m-by-n and N-bit unsigned elements. Accumulation wraps
/// modulo 2^(2N).
struct MatVecConfig {
  std::size_t m = 1;
  std::size_t n = 1;
  std::size_t N = 8;
  Variant variant = Variant::Standard;
};

/// Incoming and outgoing carry-save accumulator, 2N bits each.
struct AccumulatorState {
  std::uint64_t s = 0;
  std::uint64_t c = 0;
};

/// Cells holding a 2N-bit accumulator pair. `c_lo_n` stores the complement
/// of the low half of c; the other fields hold plain bits.
struct AccumulatorCells {
  std::vector<Column> s_lo, s_hi, c_lo_n, c_hi;
};

/// Partition 0 holds both operand stores and the feeder that streams the
/// upper accumulator bits into the top unit. Partitions 1..N hold one unit
/// each, partition N also the result region.
struct MatVecLayout {
  std::size_t cols = 0;
  std::vector<Column> boundaries;
  std::vector<std::vector<Column>> a;  // a[k][i]: bit i of A[row][k]
  std::vector<std::vector<Column>> x;  // x[k][i]: bit i of x[k]
  std::vector<Column> feed;            // feeder cells
  std::vector<UnitCells> units;        // units[p - 1] lives in partition p
  std::vector<Column> result;          // 2N bits of y, little-endian

  std::size_t partitions() const { return boundaries.size() + 1; }
};

/// Where one multiply-accumulate pass starts and ends.
struct MacBoundary {
  std::size_t index = 0;
  std::uint64_t first_cycle = 0;
  std::uint64_t end_cycle = 0;
  AccumulatorCells in, out;
};

struct MatVecPlan {
  MatVecConfig config;
  MatVecLayout layout;
  Schedule schedule;
  std::vector<MacBoundary> macs;
  std::uint64_t final_sum_cycles = 0;
};

/// Closed forms met by the emitted schedules.
std::uint64_t matvec_predicted_cycles(const MatVecConfig& config);
std::size_t matvec_predicted_width(const MatVecConfig& config);
std::size_t matvec_predicted_partitions(const MatVecConfig& config);

/// Reference totals for the same task, used by the comparison tables.
std::uint64_t matvec_reference_cycles(std::size_t n, std::size_t N, Variant v);
std::size_t matvec_reference_width(std::size_t n, std::size_t N, Variant v);

/// n fused passes followed by the final carry-propagating sum.
MatVecPlan schedule_matvec(const MatVecConfig& config);

/// A single fused pass: s_o + c_o = a*b + s_i + c_i (mod 2^(2N)).
/// Equivalent to schedule_matvec with n = 1 and no final sum.
MatVecPlan schedule_fused_mac(std::size_t N, Variant variant = Variant::Standard);

struct FusedMacResult {
  AccumulatorState out;
  CostReport cost;
};
FusedMacResult run_fused_mac(std::uint64_t a, std::uint64_t b, const AccumulatorState& in,
                             std::size_t N, Variant variant = Variant::Standard);

using Matrix = std::vector<std::vector<std::uint64_t>>;

struct MatVecResult {
  std::vector<std::uint64_t> y;
  CostReport cost;
};

/// Row j of the crossbar holds row j of A and a copy of x.
MatVecResult run_matvec(const Matrix& a, const std::vector<std::uint64_t>& x,
                        const MatVecConfig& config);

/// Same, reusing a schedule built for matching dimensions.
MatVecResult run_matvec(const Matrix& a, const std::vector<std::uint64_t>& x,
                        const MatVecPlan& plan);

/// Integer reference, wrapping at 2N bits.
std::vector<std::uint64_t> matvec_oracle(const Matrix& a, const std::vector<std::uint64_t>& x,
                                         std::size_t N);

struct FloatPimCost {
  std::uint64_t cycles = 0;
  std::size_t row_width = 0;
};

/// Fixed-point FloatPIM: n * (13N^2 + 12N + 6) cycles, 4nN + 22N - 5 cells
/// per row. Independent of m.
FloatPimCost floatpim_cost(std::uint64_t n, std::uint64_t N, std::uint64_t m = 1);

/// FloatPIM with only its multiplier swapped for MultPIM. FloatPIM spends
/// 13N^2 - 14N + 6 per product and 26N per addition; the substitution keeps
/// the additions: n * (N log2 N + 40N + 3). A formula, not a schedule.
std::uint64_t naive_substitution_cycles(std::uint64_t n, std::uint64_t N);

/// Whitespace-separated matrix text: one row per line, decimal or 0x hex.
Matrix parse_matrix(std::istream& in);
std::vector<std::uint64_t> parse_vector(std::istream& in);
std::uint64_t parse_element(const std::string& token);

}  // namespace multpim
