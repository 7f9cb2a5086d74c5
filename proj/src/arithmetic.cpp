#include "multpim/arithmetic.hpp"

#include <algorithm>
#include <set>

#include "multpim/cycle_builder.hpp"

namespace multpim {

namespace {

void require_distinct(std::initializer_list<Column> cols) {
  std::set<Column> seen;
  for (Column c : cols) {
    if (!seen.insert(c).second) {
      throw ArithmeticError("adder layout reuses column " + std::to_string(c));
    }
  }
}

CycleInstruction one(const PartitionMap& pm, GateKind k, std::vector<Column> in, Column out,
                     const char* phase, InitMode mode = InitMode::Standard) {
  return CycleBuilder(pm).add(k, std::move(in), out, mode).build(phase);
}

}  // namespace

Schedule full_adder_multpim(const PartitionMap& pm, const FullAdderCellLayout& l,
                            bool have_cin_complement) {
  if (!l.cin_n) throw ArithmeticError("MultPIM adder needs a Cin' cell");
  const Column cn = *l.cin_n;
  require_distinct({l.a, l.b, l.cin, cn, l.t1, l.cout, l.t2, l.sum});
  Schedule s;
  if (!have_cin_complement) s.push(one(pm, GateKind::NOT, {l.cin}, cn, "full_adder"));
  s.push(one(pm, GateKind::MIN3, {l.a, l.b, l.cin}, l.t1, "full_adder"));
  s.push(one(pm, GateKind::NOT, {l.t1}, l.cout, "full_adder"));
  s.push(one(pm, GateKind::MIN3, {l.a, l.b, cn}, l.t2, "full_adder"));
  s.push(one(pm, GateKind::MIN3, {l.cout, cn, l.t2}, l.sum, "full_adder"));
  return s;
}

Schedule full_adder_felix(const PartitionMap& pm, const FullAdderCellLayout& l,
                          GateProfile profile) {
  if (!profile_allows(profile, GateKind::OR2) || !profile_allows(profile, GateKind::NAND2)) {
    throw GateError("FELIX adder needs OR2 and NAND2, not available in this gate profile");
  }
  require_distinct({l.a, l.b, l.cin, l.t1, l.cout, l.t2, l.sum});
  const Column x = l.t1, y = l.t2;
  Schedule s;
  s.push(one(pm, GateKind::OR2, {l.a, l.b}, x, "full_adder"));
  s.push(one(pm, GateKind::NAND2, {l.a, l.b}, x, "full_adder", InitMode::NoInit));  // x = a ^ b
  s.push(one(pm, GateKind::OR2, {x, l.cin}, l.sum, "full_adder"));
  s.push(one(pm, GateKind::NAND2, {x, l.cin}, l.sum, "full_adder", InitMode::NoInit));
  s.push(one(pm, GateKind::MIN3, {l.a, l.b, l.cin}, y, "full_adder"));
  s.push(one(pm, GateKind::NOT, {y}, l.cout, "full_adder"));
  return s;
}

Schedule half_adder(const PartitionMap& pm, const HalfAdderCellLayout& l) {
  require_distinct({l.s, l.c, l.c_n, l.one, l.nor, l.carry_n, l.sum});
  Schedule s;
  s.push(one(pm, GateKind::MIN3, {l.s, l.c, l.one}, l.nor, "half_adder"));
  s.push(one(pm, GateKind::NOT, {l.c_n}, l.s, "half_adder", InitMode::NoInit));
  s.push(one(pm, GateKind::NOT, {l.s}, l.carry_n, "half_adder"));
  s.push(one(pm, GateKind::MIN3, {l.s, l.nor, l.one}, l.sum, "half_adder"));
  return s;
}

RippleAdderPlan ripple_adder(std::size_t width) {
  if (width == 0 || width > 63) throw ArithmeticError("ripple adder width must be in [1, 63]");
  RippleAdderPlan plan;
  auto& l = plan.layout;
  l.width = width;
  Column next = 0;
  for (std::size_t i = 0; i < width; ++i) l.x.push_back(next++);
  for (std::size_t i = 0; i < width; ++i) l.y.push_back(next++);
  for (std::size_t i = 0; i < width; ++i) l.sum.push_back(next++);
  for (int i = 0; i < 5; ++i) l.work.push_back(next++);
  l.cols = next;
  l.carry_in = l.work[0];
  l.carry_in_n = l.work[1];

  PartitionMap pm(l.cols, {});
  Column c = l.work[0], cn = l.work[1];
  std::vector<Column> free{l.work[2], l.work[3], l.work[4]};
  for (std::size_t i = 0; i < width; ++i) {
    const Column t1 = free[0], cout = free[1], t2 = free[2];
    plan.schedule.push(CycleBuilder(pm).init({t1, cout, t2, l.sum[i]}).build("init"));
    FullAdderCellLayout fa{l.x[i], l.y[i], c, cn, t1, cout, t2, l.sum[i]};
    plan.schedule.append(full_adder_multpim(pm, fa, true));
    free = {c, cn, t2};
    c = cout;
    cn = t1;
  }
  l.carry_out = c;
  return plan;
}

RippleAddResult run_ripple_add(std::uint64_t x, std::uint64_t y, bool carry_in, std::size_t width) {
  auto plan = ripple_adder(width);
  const auto& l = plan.layout;
  const std::uint64_t mask = (std::uint64_t{1} << width) - 1;
  if ((x & ~mask) != 0 || (y & ~mask) != 0) throw ArithmeticError("operand exceeds adder width");
  Crossbar xb(1, l.cols, {});
  std::vector<CellWrite> w;
  for (std::size_t i = 0; i < width; ++i) {
    w.push_back({0, l.x[i], static_cast<Bit>((x >> i) & 1)});
    w.push_back({0, l.y[i], static_cast<Bit>((y >> i) & 1)});
  }
  w.push_back({0, l.carry_in, static_cast<Bit>(carry_in)});
  w.push_back({0, l.carry_in_n, static_cast<Bit>(!carry_in)});
  xb.write_cells(w);
  plan.schedule.run(xb);
  RippleAddResult r;
  for (std::size_t i = 0; i < width; ++i) r.sum |= std::uint64_t{xb.read(0, l.sum[i])} << i;
  r.sum |= std::uint64_t{xb.read(0, l.carry_out)} << width;
  r.cost = xb.cost_report();
  return r;
}

}  // namespace multpim
