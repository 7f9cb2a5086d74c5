#include "multpim/schedule.hpp"

#include <algorithm>

namespace multpim {

void Schedule::append(const Schedule& other) {
  cycles.insert(cycles.end(), other.cycles.begin(), other.cycles.end());
}

Schedule& Schedule::tag(const std::string& phase) {
  for (auto& c : cycles) c.phase = phase;
  return *this;
}

std::map<std::string, std::uint64_t> Schedule::phase_cycles() const {
  std::map<std::string, std::uint64_t> out;
  for (const auto& c : cycles) ++out[c.phase];
  return out;
}

std::vector<GateKind> Schedule::gate_kinds() const {
  std::vector<GateKind> kinds;
  for (const auto& c : cycles) {
    for (const auto& ex : c.executions) {
      if (const auto* g = std::get_if<GateExecution>(&ex)) {
        if (std::find(kinds.begin(), kinds.end(), g->kind) == kinds.end()) kinds.push_back(g->kind);
      }
    }
  }
  std::sort(kinds.begin(), kinds.end());
  return kinds;
}

std::vector<GateKind> Schedule::profile_violations(GateProfile profile) const {
  std::vector<GateKind> bad;
  for (auto k : gate_kinds()) {
    if (!profile_allows(profile, k)) bad.push_back(k);
  }
  return bad;
}

void Schedule::run(Crossbar& xb) const {
  for (const auto& c : cycles) xb.apply_cycle(c);
}

CycleInstruction single_gate(const PartitionMap& pm, GateExecution g, std::string phase) {
  CycleInstruction c;
  c.config = pm.isolated();
  c.executions.emplace_back(std::move(g));
  c.phase = std::move(phase);
  return c;
}

CycleInstruction init_cycle(const PartitionMap& pm, const std::vector<Column>& columns,
                            std::string phase) {
  CycleInstruction c;
  c.config = pm.isolated();
  InitExecution init;
  for (Column col : columns) init.targets.push_back({RowSet::All(), col});
  c.executions.emplace_back(std::move(init));
  c.phase = std::move(phase);
  return c;
}

GateExecution gate(GateKind kind, std::vector<Column> inputs, Column output, InitMode mode) {
  return GateExecution{kind, std::move(inputs), output, RowSet::All(), mode};
}

}  // namespace multpim
