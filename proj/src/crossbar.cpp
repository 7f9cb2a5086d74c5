#include "multpim/crossbar.hpp"

#include <algorithm>
#include <numeric>

#include "multpim/trace.hpp"

namespace multpim {

SchedulingError::SchedulingError(char rule, const std::string& what)
    : CrossbarError("rule (" + std::string(1, rule) + "): " + what), rule_(rule) {}

PartitionMap::PartitionMap(std::size_t cols, std::vector<Column> boundaries)
    : cols_(cols), boundaries_(std::move(boundaries)) {
  if (cols_ == 0) throw ConfigurationError("crossbar needs at least one column");
  for (std::size_t i = 0; i < boundaries_.size(); ++i) {
    if (boundaries_[i] == 0 || boundaries_[i] >= cols_) {
      throw ConfigurationError("boundary " + std::to_string(boundaries_[i]) +
                               " outside (0, " + std::to_string(cols_) + ")");
    }
    if (i > 0 && boundaries_[i] <= boundaries_[i - 1]) {
      throw ConfigurationError("boundaries must be strictly increasing");
    }
  }
}

std::size_t PartitionMap::partition_of(Column c) const {
  if (c >= cols_) throw CellError("column " + std::to_string(c) + " out of range");
  return static_cast<std::size_t>(std::upper_bound(boundaries_.begin(), boundaries_.end(), c) -
                                  boundaries_.begin());
}

Column PartitionMap::first_column(std::size_t p) const { return p == 0 ? 0 : boundaries_.at(p - 1); }

Column PartitionMap::end_column(std::size_t p) const {
  return p == boundaries_.size() ? cols_ : boundaries_.at(p);
}

TransistorConfig PartitionMap::connect(
    std::span<const std::pair<std::size_t, std::size_t>> spans) const {
  TransistorConfig cfg = isolated();
  for (auto [lo, hi] : spans) {
    if (lo > hi) std::swap(lo, hi);
    for (std::size_t b = lo; b < hi; ++b) cfg.conducting.at(b) = true;
  }
  return cfg;
}

TransistorConfig PartitionMap::isolated() const {
  return TransistorConfig{std::vector<bool>(boundaries_.size(), false)};
}

Crossbar::Crossbar(std::size_t rows, std::size_t cols, std::vector<Column> boundaries)
    : rows_(rows), partitions_(cols, std::move(boundaries)) {
  if (rows_ == 0) throw ConfigurationError("crossbar needs at least one row");
  value_.assign(rows_ * cols, 0);
  state_.assign(rows_ * cols, Undefined);
  touched_.assign(cols, false);
}

void Crossbar::check_coord(Row r, Column c) const {
  if (r >= rows_ || c >= cols()) {
    throw CellError("cell (" + std::to_string(r) + ", " + std::to_string(c) + ") out of range");
  }
}

void Crossbar::touch(Column c) {
  if (!touched_[c]) {
    touched_[c] = true;
    ++touched_count_;
  }
}

template <typename F>
void Crossbar::for_rows(const RowSet& rs, F&& f) const {
  if (rs.all) {
    for (Row r = 0; r < rows_; ++r) f(r);
  } else {
    for (Row r : rs.rows) f(r);
  }
}

void Crossbar::write_cells(std::span<const CellWrite> writes) {
  for (const auto& w : writes) check_coord(w.row, w.column);
  for (const auto& w : writes) {
    value_[index(w.row, w.column)] = w.value ? 1 : 0;
    state_[index(w.row, w.column)] = Written;
    touch(w.column);
  }
}

void Crossbar::write(Row row, Column col, Bit value) {
  CellWrite w{row, col, value};
  write_cells(std::span<const CellWrite>(&w, 1));
}

bool Crossbar::is_defined(Row row, Column col) const {
  check_coord(row, col);
  return state_[index(row, col)] != Undefined;
}

Bit Crossbar::read(Row row, Column col) const {
  if (!is_defined(row, col)) {
    throw CellError("read of undefined cell (" + std::to_string(row) + ", " + std::to_string(col) +
                    ")");
  }
  return value_[index(row, col)];
}

std::vector<Bit> Crossbar::read_cells(std::span<const std::pair<Row, Column>> coords) const {
  std::vector<Bit> out;
  out.reserve(coords.size());
  for (auto [r, c] : coords) out.push_back(read(r, c));
  return out;
}

void Crossbar::check_cycle(const CycleInstruction& instr) const {
  const auto& pm = partitions_;
  if (instr.config.conducting.size() != pm.boundaries().size()) {
    throw SchedulingError('x', "transistor config has " +
                                   std::to_string(instr.config.conducting.size()) +
                                   " entries, crossbar has " +
                                   std::to_string(pm.boundaries().size()) + " boundaries");
  }
  // segment id of every partition under this cycle's configuration
  std::vector<std::size_t> seg(pm.count(), 0);
  for (std::size_t p = 1; p < pm.count(); ++p) {
    seg[p] = seg[p - 1] + (instr.config.conducting[p - 1] ? 0 : 1);
  }
  const std::size_t nseg = seg.back() + 1;
  auto segment_of = [&](Column c) { return seg[pm.partition_of(c)]; };

  // owner[row * nseg + segment] = execution index + 1
  std::vector<std::uint32_t> owner(rows_ * nseg, 0);
  auto claim = [&](const RowSet& rs, std::size_t s, std::uint32_t who) {
    auto one = [&](Row r) {
      if (r >= rows_) throw SchedulingError('x', "row " + std::to_string(r) + " out of range");
      auto& o = owner[r * nseg + s];
      if (o != 0 && o != who) {
        throw SchedulingError('b', "executions " + std::to_string(o - 1) + " and " +
                                       std::to_string(who - 1) + " share segment " +
                                       std::to_string(s) + " in row " + std::to_string(r));
      }
      o = who;
    };
    for_rows(rs, one);
  };

  for (std::size_t i = 0; i < instr.executions.size(); ++i) {
    const auto who = static_cast<std::uint32_t>(i + 1);
    if (const auto* g = std::get_if<GateExecution>(&instr.executions[i])) {
      if (g->inputs.size() != arity(g->kind)) {
        throw SchedulingError('x', std::string(to_string(g->kind)) + " with " +
                                       std::to_string(g->inputs.size()) + " inputs");
      }
      for (std::size_t a = 0; a < g->inputs.size(); ++a) {
        if (g->inputs[a] == g->output) {
          throw SchedulingError('x', "output column " + std::to_string(g->output) +
                                         " is also an input");
        }
        for (std::size_t b = a + 1; b < g->inputs.size(); ++b) {
          if (g->inputs[a] == g->inputs[b]) {
            throw SchedulingError('x', "repeated input column " + std::to_string(g->inputs[a]));
          }
        }
      }
      if (g->output >= cols()) throw SchedulingError('x', "output column out of range");
      const std::size_t s = segment_of(g->output);
      for (Column c : g->inputs) {
        if (c >= cols()) throw SchedulingError('x', "input column out of range");
        if (segment_of(c) != s) {
          throw SchedulingError('a', std::string(to_string(g->kind)) + " spans columns " +
                                         std::to_string(c) + " and " + std::to_string(g->output) +
                                         " across an isolated boundary");
        }
      }
      claim(g->rows, s, who);
      auto check_row = [&](Row r) {
        for (Column c : g->inputs) {
          if (state_[index(r, c)] == Undefined) {
            throw SchedulingError('e', "input cell (" + std::to_string(r) + ", " +
                                           std::to_string(c) + ") is undefined");
          }
        }
        const auto st = state_[index(r, g->output)];
        if (g->mode == InitMode::Standard && st != Fresh) {
          throw SchedulingError('e', "output cell (" + std::to_string(r) + ", " +
                                         std::to_string(g->output) + ") not initialized");
        }
        if (g->mode == InitMode::NoInit && st == Undefined) {
          throw SchedulingError('e', "no-init output cell (" + std::to_string(r) + ", " +
                                         std::to_string(g->output) + ") is undefined");
        }
      };
      for_rows(g->rows, check_row);
    } else {
      const auto& init = std::get<InitExecution>(instr.executions[i]);
      for (const auto& t : init.targets) {
        if (t.column >= cols()) throw SchedulingError('x', "init column out of range");
        claim(t.rows, segment_of(t.column), who);
      }
    }
  }
}

void Crossbar::apply_cycle(const CycleInstruction& instr) {
  check_cycle(instr);

  struct Pending {
    std::size_t idx;
    Bit value;
    std::uint8_t state;
  };
  std::vector<Pending> pending;
  Bit buf[3];
  for (const auto& ex : instr.executions) {
    if (const auto* g = std::get_if<GateExecution>(&ex)) {
      for_rows(g->rows, [&](Row r) {
        for (std::size_t a = 0; a < g->inputs.size(); ++a) buf[a] = value_[index(r, g->inputs[a])];
        const Bit f = eval(g->kind, std::span<const Bit>(buf, g->inputs.size()));
        const auto idx = index(r, g->output);
        const Bit old = g->mode == InitMode::Standard ? Bit{1} : value_[idx];
        pending.push_back({idx, static_cast<Bit>(old & f), Written});
      });
    } else {
      for (const auto& t : std::get<InitExecution>(ex).targets) {
        for_rows(t.rows, [&](Row r) { pending.push_back({index(r, t.column), 1, Fresh}); });
      }
    }
  }
  for (const auto& p : pending) {
    value_[p.idx] = p.value;
    state_[p.idx] = p.state;
  }
  for (const auto& ex : instr.executions) {
    if (const auto* g = std::get_if<GateExecution>(&ex)) {
      for (Column c : g->inputs) touch(c);
      touch(g->output);
    } else {
      for (const auto& t : std::get<InitExecution>(ex).targets) touch(t.column);
    }
  }
  if (trace_ != nullptr) write_trace_record(*trace_, cycles_, instr);
  ++cycles_;
  ++phases_[instr.phase];
}

CostReport Crossbar::cost_report() const {
  return CostReport{cycles_, touched_count_, partitions_.count(), phases_};
}

}  // namespace multpim
