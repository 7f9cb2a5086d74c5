#pragma once

#include <string>
#include <utility>
#include <vector>

#include "multpim/crossbar.hpp"
#include "multpim/schedule.hpp"

namespace multpim {

/// Accumulates the executions of one cycle and derives the transistor
/// configuration: boundaries inside the partition span of each gate conduct,
/// every other boundary is isolated. Spans of distinct gates must not overlap.
class CycleBuilder {
 public:
  explicit CycleBuilder(const PartitionMap& pm) : pm_(&pm) {}

  CycleBuilder& add(GateExecution g);
  CycleBuilder& add(GateKind kind, std::vector<Column> inputs, Column output,
                    InitMode mode = InitMode::Standard);
  CycleBuilder& init(Column c);
  CycleBuilder& init(const std::vector<Column>& cols);

  bool empty() const noexcept { return gates_.empty() && inits_.empty(); }
  CycleInstruction build(std::string phase) const;

 private:
  const PartitionMap* pm_;
  std::vector<std::pair<std::size_t, std::size_t>> spans_;
  std::vector<GateExecution> gates_;
  std::vector<Column> inits_;
};

}  // namespace multpim
