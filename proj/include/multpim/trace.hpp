#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "multpim/crossbar.hpp"
#include "multpim/schedule.hpp"

namespace multpim {

// Line-delimited JSON, one record per cycle:
//   {"cycle":0,"phase":"load_a","config":[0,1],
//    "executions":[{"kind":"NOT","inputs":[3],"output":7,"rows":"all","init_mode":"standard"}]}
// Init targets are emitted as kind "INIT" with no inputs and a "group" index
// identifying their InitExecution. "rows" is "all" or an array of row indices.

void write_trace_record(std::ostream& out, std::uint64_t cycle, const CycleInstruction& instr);

void write_trace(std::ostream& out, const Schedule& schedule);

/// Parses a single record. Throws std::invalid_argument on malformed input.
CycleInstruction parse_trace_record(const std::string& line);

Schedule read_trace(std::istream& in);

}  // namespace multpim
