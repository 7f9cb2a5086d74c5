#include "multpim/partition_routines.hpp"

#include <algorithm>

#include "multpim/cycle_builder.hpp"

namespace multpim {

namespace {

void check_routing_gate(GateKind gate) {
  if (gate != GateKind::COPY && gate != GateKind::NOT) {
    throw RoutingError("broadcast gate must be COPY or NOT");
  }
}

Polarity hop(Polarity p, GateKind gate) {
  if (gate == GateKind::COPY) return p;
  return p == Polarity::True ? Polarity::Complemented : Polarity::True;
}

std::vector<Column> span_nodes(const PartitionMap& pm, const PartitionSpan& span) {
  if (span.count == 0) throw RoutingError("span must cover at least one partition");
  if (span.first + span.count > pm.count()) throw RoutingError("span exceeds crossbar");
  std::vector<Column> nodes;
  for (std::size_t i = 0; i < span.count; ++i) {
    const auto p = span.first + i;
    const Column c = pm.first_column(p) + span.cell_offset;
    if (c >= pm.end_column(p)) throw RoutingError("cell offset outside partition");
    nodes.push_back(c);
  }
  return nodes;
}

}  // namespace

BroadcastResult broadcast_nodes(const PartitionMap& pm, const std::vector<Column>& nodes,
                                GateKind gate) {
  check_routing_gate(gate);
  BroadcastResult out;
  out.polarity.assign(nodes.size(), Polarity::True);
  struct Range {
    std::size_t lo, hi;
  };
  std::vector<Range> ranges{{0, nodes.size()}};
  for (;;) {
    CycleBuilder cyc(pm);
    std::vector<Range> next;
    for (auto r : ranges) {
      const auto n = r.hi - r.lo;
      if (n < 2) {
        next.push_back(r);
        continue;
      }
      const auto mid = r.lo + (n + 1) / 2;
      cyc.add(gate, {nodes[r.lo]}, nodes[mid]);
      out.polarity[mid] = hop(out.polarity[r.lo], gate);
      next.push_back({r.lo, mid});
      next.push_back({mid, r.hi});
    }
    if (cyc.empty()) break;
    out.schedule.push(cyc.build("broadcast"));
    ranges = std::move(next);
  }
  return out;
}

BroadcastResult broadcast_nodes_naive(const PartitionMap& pm, const std::vector<Column>& nodes,
                                      GateKind gate) {
  check_routing_gate(gate);
  BroadcastResult out;
  out.polarity.assign(nodes.size(), hop(Polarity::True, gate));
  if (!nodes.empty()) out.polarity[0] = Polarity::True;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    out.schedule.push(CycleBuilder(pm).add(gate, {nodes[0]}, nodes[i]).build("broadcast"));
  }
  return out;
}

BroadcastResult broadcast_log(const PartitionMap& pm, const PartitionSpan& span, GateKind gate) {
  return broadcast_nodes(pm, span_nodes(pm, span), gate);
}

BroadcastResult broadcast_naive(const PartitionMap& pm, const PartitionSpan& span, GateKind gate) {
  return broadcast_nodes_naive(pm, span_nodes(pm, span), gate);
}

namespace {

GateExecution hop_gate(const PartitionMap& pm, const PartitionSpan& span, const HopGate& hop,
                       std::size_t i) {
  const auto src = span.first + i;
  const auto dst = src + 1;
  std::vector<Column> inputs;
  for (Column off : hop.input_offsets) {
    if (off == hop.target_offset) throw RoutingError("hop target collides with a hop input");
    const Column c = pm.first_column(src) + off;
    if (c >= pm.end_column(src)) throw RoutingError("input offset outside partition");
    inputs.push_back(c);
  }
  const Column out = pm.first_column(dst) + hop.target_offset;
  if (out >= pm.end_column(dst)) throw RoutingError("target offset outside partition");
  return gate(hop.kind, std::move(inputs), out);
}

void check_shift_span(const PartitionMap& pm, const PartitionSpan& span, const HopGate& hop) {
  if (span.count < 2) throw RoutingError("shift needs at least two partitions");
  if (span.first + span.count > pm.count()) throw RoutingError("span exceeds crossbar");
  if (hop.input_offsets.size() != arity(hop.kind)) throw RoutingError("hop gate arity mismatch");
}

}  // namespace

Schedule shift_parallel(const PartitionMap& pm, const PartitionSpan& span, const HopGate& hop) {
  check_shift_span(pm, span, hop);
  Schedule s;
  // hop i sends from the (i+1)-th partition of the span: odd senders first
  for (std::size_t parity : {0u, 1u}) {
    CycleBuilder cyc(pm);
    for (std::size_t i = parity; i + 1 < span.count; i += 2) cyc.add(hop_gate(pm, span, hop, i));
    if (!cyc.empty()) s.push(cyc.build("shift"));
  }
  return s;
}

Schedule shift_naive(const PartitionMap& pm, const PartitionSpan& span, const HopGate& hop) {
  check_shift_span(pm, span, hop);
  Schedule s;
  for (std::size_t i = span.count - 1; i-- > 0;) {
    s.push(CycleBuilder(pm).add(hop_gate(pm, span, hop, i)).build("shift"));
  }
  return s;
}

}  // namespace multpim
