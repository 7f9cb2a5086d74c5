#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "multpim/gates.hpp"

namespace multpim {

using Column = std::size_t;
using Row = std::size_t;

class CrossbarError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid crossbar geometry (bad sizes or boundary positions).
class ConfigurationError : public CrossbarError {
 public:
  using CrossbarError::CrossbarError;
};

/// A cycle instruction broke one of the legality rules. `rule()` is one of
/// 'a'..'e' (see Crossbar::apply_cycle), or 'x' for malformed executions.
class SchedulingError : public CrossbarError {
 public:
  SchedulingError(char rule, const std::string& what);
  char rule() const noexcept { return rule_; }

 private:
  char rule_;
};

/// Out-of-range coordinates or reads of never-defined cells.
class CellError : public CrossbarError {
 public:
  using CrossbarError::CrossbarError;
};

/// Either every row of the crossbar or an explicit list of rows.
struct RowSet {
  bool all = true;
  std::vector<Row> rows;

  static RowSet All() { return {}; }
  static RowSet Of(std::vector<Row> rows) { return {false, std::move(rows)}; }
  bool operator==(const RowSet&) const = default;
};

enum class InitMode : std::uint8_t { Standard, NoInit };

/// One stateful gate applied to the same columns in every masked row.
/// Result semantics: out = old(out) AND f(inputs), where old(out) is the
/// freshly initialized 1 in Standard mode.
struct GateExecution {
  GateKind kind = GateKind::NOT;
  std::vector<Column> inputs;
  Column output = 0;
  RowSet rows;
  InitMode mode = InitMode::Standard;
  bool operator==(const GateExecution&) const = default;
};

struct InitTarget {
  RowSet rows;
  Column column = 0;
  bool operator==(const InitTarget&) const = default;
};

/// Sets every target cell to 1 (the gate-output precondition).
struct InitExecution {
  std::vector<InitTarget> targets;
  bool operator==(const InitExecution&) const = default;
};

using Execution = std::variant<GateExecution, InitExecution>;

/// conducting[i] describes the transistor at the i-th partition boundary.
struct TransistorConfig {
  std::vector<bool> conducting;
  bool operator==(const TransistorConfig&) const = default;
};

/// Everything that happens in one clock cycle.
struct CycleInstruction {
  TransistorConfig config;
  std::vector<Execution> executions;
  std::string phase;
  bool operator==(const CycleInstruction&) const = default;
};

struct CostReport {
  std::uint64_t cycles = 0;
  std::size_t memristors_per_row = 0;
  std::size_t partitions = 0;
  std::map<std::string, std::uint64_t> phase_breakdown;
  bool operator==(const CostReport&) const = default;
};

struct CellWrite {
  Row row;
  Column column;
  Bit value;
};

/// Ordered partition boundaries; a boundary at j separates column j-1 from j.
class PartitionMap {
 public:
  PartitionMap() = default;
  PartitionMap(std::size_t cols, std::vector<Column> boundaries);

  std::size_t cols() const noexcept { return cols_; }
  std::size_t count() const noexcept { return boundaries_.size() + 1; }
  const std::vector<Column>& boundaries() const noexcept { return boundaries_; }
  std::size_t partition_of(Column c) const;
  Column first_column(std::size_t partition) const;
  Column end_column(std::size_t partition) const;

  /// Config with the boundaries inside each [lo, hi] partition range conducting
  /// and every other boundary isolated.
  TransistorConfig connect(std::span<const std::pair<std::size_t, std::size_t>> spans) const;
  TransistorConfig isolated() const;

 private:
  std::size_t cols_ = 0;
  std::vector<Column> boundaries_;
};

/// Binary memristor array with partitions. Single writer; cheap to move.
class Crossbar {
 public:
  Crossbar(std::size_t rows, std::size_t cols, std::vector<Column> boundaries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return partitions_.cols(); }
  const PartitionMap& partitions() const noexcept { return partitions_; }

  /// External input writes. Not counted as cycles.
  void write_cells(std::span<const CellWrite> writes);
  void write(Row row, Column col, Bit value);

  Bit read(Row row, Column col) const;
  std::vector<Bit> read_cells(std::span<const std::pair<Row, Column>> coords) const;
  bool is_defined(Row row, Column col) const;

  /// Validates `instr` against the legality rules, then executes it.
  ///  (a) a gate's columns lie in one maximal conducting segment;
  ///  (b) per row, distinct executions touch disjoint segments
  ///      (targets of a single InitExecution may share a segment);
  ///  (c) one execution applies one column pattern to all its rows;
  ///  (d) init targets obey (b) against the gates of the cycle;
  ///  (e) Standard outputs must be freshly initialized, NoInit outputs defined.
  /// Throws SchedulingError and leaves the state untouched on violation.
  void apply_cycle(const CycleInstruction& instr);

  /// Validation only; throws like apply_cycle.
  void check_cycle(const CycleInstruction& instr) const;

  CostReport cost_report() const;

  /// Optional per-cycle JSON-lines trace.
  void set_trace(std::ostream* out) noexcept { trace_ = out; }

 private:
  enum CellState : std::uint8_t { Undefined = 0, Fresh = 1, Written = 2 };

  std::size_t index(Row r, Column c) const { return r * cols() + c; }
  void check_coord(Row r, Column c) const;
  void touch(Column c);
  template <typename F>
  void for_rows(const RowSet& rs, F&& f) const;

  std::size_t rows_;
  PartitionMap partitions_;
  std::vector<Bit> value_;
  std::vector<std::uint8_t> state_;
  std::vector<bool> touched_;
  std::size_t touched_count_ = 0;
  std::uint64_t cycles_ = 0;
  std::map<std::string, std::uint64_t> phases_;
  std::ostream* trace_ = nullptr;
};

}  // namespace multpim
