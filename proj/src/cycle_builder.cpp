#include "multpim/cycle_builder.hpp"

#include <algorithm>

namespace multpim {

CycleBuilder& CycleBuilder::add(GateExecution g) {
  std::size_t lo = pm_->partition_of(g.output);
  std::size_t hi = lo;
  for (Column c : g.inputs) {
    const auto p = pm_->partition_of(c);
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  for (auto [a, b] : spans_) {
    if (lo <= b && a <= hi) {
      throw SchedulingError('b', "gate on partitions [" + std::to_string(lo) + ", " +
                                     std::to_string(hi) + "] overlaps another gate's segment");
    }
  }
  spans_.emplace_back(lo, hi);
  gates_.push_back(std::move(g));
  return *this;
}

CycleBuilder& CycleBuilder::add(GateKind kind, std::vector<Column> inputs, Column output,
                                InitMode mode) {
  return add(gate(kind, std::move(inputs), output, mode));
}

CycleBuilder& CycleBuilder::init(Column c) {
  inits_.push_back(c);
  return *this;
}

CycleBuilder& CycleBuilder::init(const std::vector<Column>& cols) {
  inits_.insert(inits_.end(), cols.begin(), cols.end());
  return *this;
}

CycleInstruction CycleBuilder::build(std::string phase) const {
  CycleInstruction c;
  c.config = pm_->connect(spans_);
  for (const auto& g : gates_) c.executions.emplace_back(g);
  if (!inits_.empty()) {
    InitExecution init;
    for (Column col : inits_) init.targets.push_back({RowSet::All(), col});
    c.executions.emplace_back(std::move(init));
  }
  c.phase = std::move(phase);
  return c;
}

}  // namespace multpim
