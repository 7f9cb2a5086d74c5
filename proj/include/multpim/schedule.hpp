#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "multpim/crossbar.hpp"

namespace multpim {

/// Ordered cycle instructions realizing an algorithm. Replayable.
struct Schedule {
  std::vector<CycleInstruction> cycles;

  std::size_t size() const noexcept { return cycles.size(); }
  bool empty() const noexcept { return cycles.empty(); }
  void append(const Schedule& other);
  void push(CycleInstruction c) { cycles.push_back(std::move(c)); }

  /// Re-tags every cycle with `phase`.
  Schedule& tag(const std::string& phase);

  std::map<std::string, std::uint64_t> phase_cycles() const;

  /// Every gate kind emitted (init excluded).
  std::vector<GateKind> gate_kinds() const;

  /// Kinds outside `profile`, empty when the schedule is pure.
  std::vector<GateKind> profile_violations(GateProfile profile) const;

  void run(Crossbar& xb) const;
};

/// One cycle holding a single gate in an all-isolated configuration.
CycleInstruction single_gate(const PartitionMap& pm, GateExecution g, std::string phase = {});

/// One cycle initializing `columns` in all rows.
CycleInstruction init_cycle(const PartitionMap& pm, const std::vector<Column>& columns,
                            std::string phase = {});

GateExecution gate(GateKind kind, std::vector<Column> inputs, Column output,
                   InitMode mode = InitMode::Standard);

}  // namespace multpim
