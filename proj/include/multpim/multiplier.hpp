#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "multpim/crossbar.hpp"
#include "multpim/partition_routines.hpp"
#include "multpim/schedule.hpp"

namespace multpim {

enum class Variant : std::uint8_t { Standard, Area };

std::string_view to_string(Variant v);
Variant variant_from_string(std::string_view name);

class MultiplierError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operand widths. `a_bits` sets the number of full-adder units, `b_bits` the
/// number of first-phase stages. Both must be >= 2 and sum to <= 64.
struct MultiplierConfig {
  std::size_t a_bits = 32;
  std::size_t b_bits = 32;
  Variant variant = Variant::Standard;

  static MultiplierConfig square(std::size_t n, Variant v = Variant::Standard) {
    return {n, n, v};
  }
  std::size_t product_bits() const { return a_bits + b_bits; }
};

/// Columns of one full-adder unit.
struct UnitCells {
  std::size_t partition = 0;
  std::size_t position = 0;      // bit of `a` held by the unit
  Column a_n = 0;                // stored complement of a_position
  Column b = 0;                  // broadcast holder, doubles as the product cell
  std::vector<Column> scratch;   // standard: {pp, t2}; area: {c', t}
  std::vector<Column> state;     // standard: six rotating cells; area: {s, c}
};

/// Where every value lives in the row.
struct MultiplierLayout {
  std::size_t cols = 0;
  std::vector<Column> boundaries;
  std::vector<Column> a_in, b_in;  // operand bits, little-endian
  std::vector<Column> out;         // product bits, little-endian
  std::vector<UnitCells> units;    // ordered by partition (unit 0 holds the top bit)
  Column top_a_n = 0;              // complement of the most significant bit of a
  Column top_one = 0;              // constant 1 for the top partial product
  Column top_s = 0;                // initial (zero) sum of unit 0

  std::size_t partitions() const { return boundaries.size() + 1; }
};

/// Sum and carry register locations after a first-phase stage.
struct StageBoundary {
  std::size_t stage = 0;           // stages completed (0 = after setup)
  std::uint64_t cycle = 0;         // cycles executed at this point
  std::vector<Column> sum;         // by bit position, low to high
  std::vector<Column> carry;
};

struct MultiplierPlan {
  MultiplierConfig config;
  MultiplierLayout layout;
  Schedule schedule;
  CostReport predicted;
  std::vector<StageBoundary> stages;  // 0..b_bits
};

/// Closed forms the schedule is built to meet.
std::uint64_t predicted_cycles(const MultiplierConfig& config);
std::size_t predicted_memristors(const MultiplierConfig& config);
std::size_t predicted_partitions(const MultiplierConfig& config);

/// Lowers the carry-save add-shift multiplier to a legal NOT/Min3 schedule.
MultiplierPlan schedule_multiply(const MultiplierConfig& config);

struct MultiplyResult {
  std::uint64_t product = 0;
  CostReport cost;
};

/// Writes the operands, replays the schedule, reads the product back.
MultiplyResult run_multiply(std::uint64_t a, std::uint64_t b, const MultiplierConfig& config);

/// Row-parallel batch: pair i runs in row i of one crossbar.
struct BatchResult {
  std::vector<std::uint64_t> products;
  CostReport cost;
};
BatchResult run_multiply_batch(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs,
                               const MultiplierPlan& plan);

/// Loads `pairs` into a fresh crossbar sized for `plan`.
Crossbar load_operands(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs,
                       const MultiplierPlan& plan);

struct StageProbe {
  std::uint64_t emitted = 0;  // low product bits already in the output region
  std::uint64_t sum = 0;
  std::uint64_t carry = 0;
};

/// Reads the carry-save registers of `row` when the crossbar has executed
/// exactly the cycles of the first `k` first-phase stages. Then
/// emitted + 2^k (sum + carry) == a * (b mod 2^k).
StageProbe stage_invariant_probe(const Crossbar& xb, const MultiplierPlan& plan, std::size_t k,
                                 Row row = 0);

class ProbeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Closed-form cost models of the compared multipliers.
enum class CostModel : std::uint8_t { HajAli, Rime, MultPim, MultPimArea };

std::string_view to_string(CostModel m);
CostModel cost_model_from_string(std::string_view name);

std::uint64_t baseline_latency(CostModel model, std::uint64_t n);
std::uint64_t baseline_area(CostModel model, std::uint64_t n);

}  // namespace multpim
