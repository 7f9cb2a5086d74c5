#pragma once

#include <cstddef>
#include <vector>

#include "multpim/crossbar.hpp"
#include "multpim/schedule.hpp"

namespace multpim {

/// k consecutive partitions starting at `first`; `cell_offset` is the column
/// within each partition that holds the routed bit.
struct PartitionSpan {
  std::size_t first = 0;
  std::size_t count = 1;
  Column cell_offset = 0;
};

enum class Polarity : std::uint8_t { True, Complemented };

/// Polarity of each routed copy relative to the source bit.
using PolarityMap = std::vector<Polarity>;

struct BroadcastResult {
  Schedule schedule;
  PolarityMap polarity;
};

class RoutingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Recursive-doubling broadcast over `nodes` (ordered along the row, node 0
/// holds the source). Each cycle every range of >= 2 nodes sends from its
/// first node to the node at ceil(size/2), then both halves recurse in
/// parallel: ceil(log2 n) cycles. With NOT every hop flips polarity.
BroadcastResult broadcast_nodes(const PartitionMap& pm, const std::vector<Column>& nodes,
                                GateKind gate);

/// Serial broadcast: the source sends to each other node in turn, n-1 cycles.
BroadcastResult broadcast_nodes_naive(const PartitionMap& pm, const std::vector<Column>& nodes,
                                      GateKind gate);

BroadcastResult broadcast_log(const PartitionMap& pm, const PartitionSpan& span, GateKind gate);
BroadcastResult broadcast_naive(const PartitionMap& pm, const PartitionSpan& span, GateKind gate);

/// Gate applied on each hop: inputs are offsets within the sending partition,
/// the result lands at `target_offset` in the next partition.
struct HopGate {
  GateKind kind = GateKind::COPY;
  std::vector<Column> input_offsets;
  Column target_offset = 0;
};

/// Odd-to-even then even-to-odd transfer (1-based partition numbering):
/// 2 cycles, or 1 when k == 2.
Schedule shift_parallel(const PartitionMap& pm, const PartitionSpan& span, const HopGate& hop);

/// One hop per cycle, k-1 cycles.
Schedule shift_naive(const PartitionMap& pm, const PartitionSpan& span, const HopGate& hop);

}  // namespace multpim
