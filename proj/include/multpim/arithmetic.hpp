#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "multpim/crossbar.hpp"
#include "multpim/schedule.hpp"

namespace multpim {

class ArithmeticError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Cells of one full adder. For the MultPIM adder `cin_n` holds Cin' (given or
/// computed), `t1` ends up as Cout' and `t2` is Min3(A, B, Cin'). The FELIX
/// adder uses `t1`/`t2` as its two intermediates and ignores `cin_n`.
struct FullAdderCellLayout {
  Column a = 0, b = 0, cin = 0;
  std::optional<Column> cin_n;
  Column t1 = 0, cout = 0, t2 = 0, sum = 0;
};

/// Cout = NOT Min3(A, B, Cin); S = Min3(Cout, Cin', Min3(A, B, Cin')).
/// Five cycles, or four when Cin' is already resident. Init excluded: t1,
/// cout, t2, sum (and cin_n when computed) must be initialized by the caller.
Schedule full_adder_multpim(const PartitionMap& pm, const FullAdderCellLayout& layout,
                            bool have_cin_complement);

/// Six-cycle NOT/OR/NAND/Min3 adder with two intermediates:
/// X = OR(A,B); X &= NAND(A,B); S = OR(X,Cin); S &= NAND(X,Cin);
/// Y = Min3(A,B,Cin); Cout = NOT(Y). Rejected under the not_min3 profile.
Schedule full_adder_felix(const PartitionMap& pm, const FullAdderCellLayout& layout,
                          GateProfile profile = GateProfile::Extended);

/// Half adder on resident s, c, c' with an initialized `one` cell:
///   nor = Min3(s, c, one); s &= NOT(c') (s now holds the carry);
///   carry_n = NOT(s); sum = Min3(s, nor, one).
/// The last gate is the one MultPIM fuses into its shift.
struct HalfAdderCellLayout {
  Column s = 0, c = 0, c_n = 0, one = 0, nor = 0, carry_n = 0, sum = 0;
};

Schedule half_adder(const PartitionMap& pm, const HalfAdderCellLayout& layout);

/// Ripple-carry adder over N-bit operands inside a single partition.
/// Columns: x[0..N), y[0..N), s[0..N), then five working cells; the carry-in
/// and its complement are written into the first two working cells with the
/// operands. Each bit costs one init cycle plus the four-cycle adder.
struct RippleAdderLayout {
  std::size_t width = 0;
  std::vector<Column> x, y, sum;
  std::vector<Column> work;  // 5 cells
  Column carry_in = 0, carry_in_n = 0;
  Column carry_out = 0;      // where the final carry lands
  std::size_t cols = 0;
};

struct RippleAdderPlan {
  RippleAdderLayout layout;
  Schedule schedule;
};

RippleAdderPlan ripple_adder(std::size_t width);

struct RippleAddResult {
  std::uint64_t sum = 0;  // width + 1 bits
  CostReport cost;
};

/// Loads x, y and the carry-in, replays the schedule, reads the sum back.
RippleAddResult run_ripple_add(std::uint64_t x, std::uint64_t y, bool carry_in, std::size_t width);

}  // namespace multpim
