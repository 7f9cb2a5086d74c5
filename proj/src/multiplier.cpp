#include "multpim/multiplier.hpp"

#include <algorithm>
#include <functional>

#include "multpim/cycle_builder.hpp"

namespace multpim {

namespace {

std::uint64_t ceil_log2(std::uint64_t n) {
  std::uint64_t l = 0;
  while ((std::uint64_t{1} << l) < n) ++l;
  return l;
}

void validate(const MultiplierConfig& c) {
  if (c.a_bits < 2 || c.b_bits < 2) throw MultiplierError("operand widths must be at least 2");
  if (c.a_bits + c.b_bits > 64) throw MultiplierError("product wider than 64 bits");
}

std::uint64_t mask(std::size_t bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

// Column allocator that records partition starts.
struct Alloc {
  Column next = 0;
  std::vector<Column> boundaries;
  Column take() { return next++; }
  std::vector<Column> take(std::size_t n) {
    std::vector<Column> v(n);
    for (auto& c : v) c = next++;
    return v;
  }
  void new_partition() { boundaries.push_back(next); }
};

// Per-unit live registers while the schedule is being emitted.
struct Regs {
  Column s = 0, c = 0, cn = 0;
  std::vector<Column> free;

  Column fresh() {
    Column x = free.back();
    free.pop_back();
    return x;
  }
};

class Builder {
 public:
  explicit Builder(const MultiplierConfig& cfg) : cfg_(cfg), na_(cfg.a_bits), nb_(cfg.b_bits) {}

  MultiplierPlan run() {
    if (cfg_.variant == Variant::Standard) {
      layout_standard();
    } else {
      layout_area();
    }
    pm_ = PartitionMap(plan_.layout.cols, plan_.layout.boundaries);
    if (cfg_.variant == Variant::Standard) {
      emit_standard();
    } else {
      emit_area();
    }
    plan_.config = cfg_;
    plan_.predicted = CostReport{predicted_cycles(cfg_), predicted_memristors(cfg_),
                                 predicted_partitions(cfg_), plan_.schedule.phase_cycles()};
    return std::move(plan_);
  }

 private:
  MultiplierLayout& L() { return plan_.layout; }
  std::vector<UnitCells>& units() { return plan_.layout.units; }

  void push(CycleBuilder& cb, const char* phase) { plan_.schedule.push(cb.build(phase)); }

  Column shift_target(std::size_t p, Column out_bit, const std::vector<Column>& recv) const {
    return p + 1 == regs_.size() ? out_bit : recv[p + 1];
  }

  void record_boundary(std::size_t k) {
    StageBoundary sb;
    sb.stage = k;
    sb.cycle = plan_.schedule.size();
    const std::size_t n = regs_.size();
    sb.sum.resize(n);
    sb.carry.resize(n);
    for (std::size_t p = 0; p < n; ++p) {
      const std::size_t j = units()[p].position;
      sb.sum[j] = regs_[p].s;
      sb.carry[j] = regs_[p].c;
    }
    plan_.stages.push_back(std::move(sb));
  }

  // ---- standard ----------------------------------------------------------

  // Partition 0: operands, top unit, unit 0. Last partition: output region.
  void layout_standard() {
    Alloc a;
    auto& l = L();
    l.a_in = a.take(na_);
    l.b_in = a.take(nb_);
    l.top_a_n = a.take();
    l.top_one = a.take();
    l.top_s = a.take();
    const std::size_t parts = na_ - 1;
    for (std::size_t p = 0; p < parts; ++p) {
      if (p > 0) a.new_partition();
      UnitCells u;
      u.partition = p;
      u.position = parts - 1 - p;
      u.a_n = a.take();
      u.b = a.take();
      u.scratch = a.take(2);
      u.state = a.take(6);
      l.units.push_back(std::move(u));
    }
    l.out = a.take(na_ + nb_);
    l.cols = a.next;
    l.boundaries = a.boundaries;
  }

  void emit_standard() {
    auto& l = L();
    const std::size_t parts = units().size();
    regs_.resize(parts);

    CycleBuilder init(pm_);
    init.init(l.top_a_n).init(l.top_one).init(l.top_s);
    for (std::size_t p = 0; p < parts; ++p) {
      const auto& u = units()[p];
      auto& r = regs_[p];
      r.s = p == 0 ? l.top_s : u.state[0];
      r.c = u.state[1];
      r.cn = u.state[2];
      r.free.assign(u.state.begin() + 3, u.state.end());
      if (p == 0) r.free.push_back(u.state[0]);
      init.init(u.a_n).init(r.c).init(r.cn);
      if (p != 0) init.init(r.s);
    }
    push(init, "setup_init");

    CycleBuilder top(pm_);
    top.add(GateKind::NOT, {l.a_in[na_ - 1]}, l.top_a_n);
    push(top, "load_a");
    for (std::size_t p = 0; p < parts; ++p) {
      CycleBuilder cb(pm_);
      cb.add(GateKind::NOT, {l.a_in[units()[p].position]}, units()[p].a_n);
      push(cb, "load_a");
    }

    CycleBuilder z1(pm_), z2(pm_);
    for (auto& r : regs_) {
      z1.add(GateKind::NOT, {r.cn}, r.c);
      z2.add(GateKind::NOT, {r.cn}, r.s);
    }
    push(z1, "setup_zero");
    push(z2, "setup_zero");
    record_boundary(0);

    for (std::size_t k = 0; k < nb_; ++k) {
      standard_stage(k);
      record_boundary(k + 1);
    }
    for (std::size_t k = 0; k < na_; ++k) standard_last_stage(nb_ + k);
  }

  void standard_stage(std::size_t k) {
    auto& l = L();
    const std::size_t parts = units().size();
    std::vector<Column> t1(parts), cout(parts), snext(parts);

    CycleBuilder init(pm_);
    for (std::size_t p = 0; p < parts; ++p) {
      const auto& u = units()[p];
      t1[p] = regs_[p].fresh();
      cout[p] = regs_[p].fresh();
      snext[p] = regs_[p].fresh();
      init.init(u.b).init(u.scratch).init({t1[p], cout[p], snext[p]});
    }
    init.init(l.out[k]);
    push(init, "stage_init");

    std::vector<Column> nodes{l.b_in[k]};
    for (const auto& u : units()) nodes.push_back(u.b);
    auto bc = broadcast_nodes(pm_, nodes, GateKind::NOT);
    plan_.schedule.append(bc.schedule.tag("broadcast"));

    // true-polarity holders become the product in place; complemented ones
    // use the still-fresh t2 cell as the constant 1
    std::vector<Column> pp(parts);
    CycleBuilder ppc(pm_);
    for (std::size_t p = 0; p < parts; ++p) {
      const auto& u = units()[p];
      if (bc.polarity[p + 1] == Polarity::True) {
        ppc.add(GateKind::NOT, {u.a_n}, u.b, InitMode::NoInit);
        pp[p] = u.b;
      } else {
        ppc.add(GateKind::MIN3, {u.a_n, u.b, u.scratch[1]}, u.scratch[0]);
        pp[p] = u.scratch[0];
      }
    }
    push(ppc, "partial_product");

    CycleBuilder f1(pm_), f2(pm_), f3(pm_);
    for (std::size_t p = 0; p < parts; ++p) {
      const auto& r = regs_[p];
      f1.add(GateKind::MIN3, {r.s, pp[p], r.c}, t1[p]);
      f2.add(GateKind::NOT, {t1[p]}, cout[p]);
      f3.add(GateKind::MIN3, {r.s, pp[p], r.cn}, units()[p].scratch[1]);
    }
    push(f1, "full_adder");
    push(f2, "full_adder");
    push(f3, "full_adder");

    // unit 0's holder is always one hop from the source, so it holds b'
    if (bc.polarity[1] != Polarity::Complemented) throw MultiplierError("unit 0 holder polarity");
    CycleBuilder sa(pm_), sb(pm_);
    for (std::size_t p = 0; p < parts; ++p) {
      auto& cb = p % 2 == 0 ? sa : sb;
      cb.add(GateKind::MIN3, {cout[p], regs_[p].cn, units()[p].scratch[1]},
             shift_target(p, l.out[k], snext));
    }
    sb.add(GateKind::MIN3, {l.top_a_n, units()[0].b, l.top_one}, snext[0]);
    push(sa, "shift");
    push(sb, "shift");

    for (std::size_t p = 0; p < parts; ++p) {
      auto& r = regs_[p];
      r.free.insert(r.free.end(), {r.s, r.c, r.cn});
      r.s = snext[p];
      r.c = cout[p];
      r.cn = t1[p];
    }
    // the initial top sum never rotates back into use
    auto& f0 = regs_[0].free;
    f0.erase(std::remove(f0.begin(), f0.end(), l.top_s), f0.end());
  }

  // Half-adder stage: t2 <- NOR(s, c), s <- s AND c in place, the XOR moves on.
  void standard_last_stage(std::size_t bit) {
    auto& l = L();
    const std::size_t parts = units().size();
    std::vector<Column> cn_out(parts), snext(parts);

    CycleBuilder init(pm_);
    for (std::size_t p = 0; p < parts; ++p) {
      const auto& u = units()[p];
      cn_out[p] = regs_[p].fresh();
      snext[p] = regs_[p].fresh();
      init.init(u.b).init(u.scratch).init({cn_out[p], snext[p]});
    }
    init.init(l.out[bit]);
    push(init, "last_init");

    CycleBuilder h1(pm_), h2(pm_), h3(pm_);
    for (std::size_t p = 0; p < parts; ++p) {
      const auto& u = units()[p];
      const auto& r = regs_[p];
      h1.add(GateKind::MIN3, {r.s, r.c, u.scratch[0]}, u.scratch[1]);
      h2.add(GateKind::NOT, {r.cn}, r.s, InitMode::NoInit);
      h3.add(GateKind::NOT, {r.s}, cn_out[p]);
    }
    push(h1, "half_adder");
    push(h2, "half_adder");
    push(h3, "half_adder");

    CycleBuilder sa(pm_), sb(pm_);
    for (std::size_t p = 0; p < parts; ++p) {
      const auto& u = units()[p];
      auto& cb = p % 2 == 0 ? sa : sb;
      cb.add(GateKind::MIN3, {regs_[p].s, u.scratch[1], u.scratch[0]},
             shift_target(p, l.out[bit], snext));
    }
    sb.add(GateKind::MIN3, {l.top_a_n, units()[0].b, l.top_one}, snext[0]);
    push(sa, "last_shift");
    push(sb, "last_shift");

    for (std::size_t p = 0; p < parts; ++p) {
      auto& r = regs_[p];
      r.free.insert(r.free.end(), {r.c, r.cn});
      r.c = r.s;
      r.cn = cn_out[p];
      r.s = snext[p];
    }
  }

  // ---- area --------------------------------------------------------------

  // One six-cell unit per bit of a; unit 0 (top bit) never receives a sum,
  // so its s cell stays at zero.
  void layout_area() {
    Alloc a;
    auto& l = L();
    l.a_in = a.take(na_);
    l.b_in = a.take(nb_);
    for (std::size_t p = 0; p < na_; ++p) {
      if (p > 0) a.new_partition();
      UnitCells u;
      u.partition = p;
      u.position = na_ - 1 - p;
      u.a_n = a.take();
      u.b = a.take();
      u.scratch = a.take(2);
      u.state = a.take(2);
      l.units.push_back(std::move(u));
    }
    l.out = a.take(na_ + nb_);
    l.cols = a.next;
    l.boundaries = a.boundaries;
  }

  void emit_area() {
    auto& l = L();
    regs_.resize(na_);

    CycleBuilder init(pm_);
    for (std::size_t p = 0; p < na_; ++p) {
      const auto& u = units()[p];
      regs_[p].s = u.state[0];
      regs_[p].c = u.state[1];
      init.init({u.a_n, u.b, u.state[0], u.state[1]});
    }
    push(init, "setup_init");
    for (std::size_t p = 0; p < na_; ++p) {
      CycleBuilder cb(pm_);
      cb.add(GateKind::NOT, {l.a_in[units()[p].position]}, units()[p].a_n);
      push(cb, "load_a");
    }
    CycleBuilder z1(pm_), z2(pm_);
    for (std::size_t p = 0; p < na_; ++p) {
      z1.add(GateKind::NOT, {units()[p].b}, regs_[p].c);
      z2.add(GateKind::NOT, {units()[p].b}, regs_[p].s);
    }
    push(z1, "setup_zero");
    push(z2, "setup_zero");
    record_boundary(0);

    for (std::size_t k = 0; k < nb_; ++k) {
      area_stage(k);
      record_boundary(k + 1);
    }
    // the operand of a is dead from here on; its cell joins the rotation
    for (std::size_t p = 1; p < na_; ++p) regs_[p].free = {units()[p].a_n};
    for (std::size_t k = 0; k < na_; ++k) area_last_stage(nb_ + k);
  }

  // Emits `slots` lockstep cycles; partition p runs ops[p] in order, idling
  // once its list is exhausted.
  using Op = std::function<void(CycleBuilder&)>;
  void run_slots(const std::vector<std::vector<Op>>& ops, std::size_t slots, const char* phase) {
    for (std::size_t i = 0; i < slots; ++i) {
      CycleBuilder cb(pm_);
      for (const auto& list : ops) {
        if (i < list.size()) list[i](cb);
      }
      push(cb, phase);
    }
  }

  static Op gate_op(GateKind kind, std::vector<Column> in, Column out,
                    InitMode mode = InitMode::Standard) {
    return [=](CycleBuilder& cb) { cb.add(kind, in, out, mode); };
  }
  static Op init_op(Column c) {
    return [=](CycleBuilder& cb) { cb.init(c); };
  }

  void area_stage(std::size_t k) {
    auto& l = L();
    CycleBuilder init(pm_);
    for (const auto& u : units()) init.init(u.b).init(u.scratch);
    init.init(l.out[k]);
    push(init, "stage_init");

    // doubling over the holders of units 1.., then the source feeds unit 0
    // while the others form their products
    std::vector<Column> nodes{l.b_in[k]};
    for (std::size_t p = 1; p < na_; ++p) nodes.push_back(units()[p].b);
    auto bc = broadcast_nodes(pm_, nodes, GateKind::NOT);
    plan_.schedule.append(bc.schedule.tag("broadcast"));

    std::vector<Column> pp(na_), t(na_);
    CycleBuilder last(pm_), ppc(pm_);
    last.add(GateKind::NOT, {l.b_in[k]}, units()[0].b);
    for (std::size_t p = 0; p < na_; ++p) {
      const auto& u = units()[p];
      const bool complemented = p == 0 || bc.polarity[p] == Polarity::Complemented;
      auto& cb = p == 0 ? ppc : last;
      if (complemented) {
        cb.add(GateKind::MIN3, {u.a_n, u.b, u.scratch[0]}, u.scratch[1]);
        pp[p] = u.scratch[1];
        t[p] = u.b;
      } else {
        cb.add(GateKind::NOT, {u.a_n}, u.b, InitMode::NoInit);
        pp[p] = u.b;
        t[p] = u.scratch[1];
      }
      if (p != 0) ppc.add(GateKind::NOT, {regs_[p].c}, u.scratch[0]);
    }
    push(last, "broadcast");
    push(ppc, "partial_product");

    // t1, cout, t2 share one scratch cell through re-initialization
    std::vector<std::vector<Op>> ops(na_);
    for (std::size_t p = 0; p < na_; ++p) {
      const auto& u = units()[p];
      const auto& r = regs_[p];
      const Column cn = u.scratch[0];
      auto& o = ops[p];
      if (p == 0) o.push_back(gate_op(GateKind::NOT, {r.c}, cn));
      if (t[p] == u.b) o.push_back(init_op(t[p]));
      o.push_back(gate_op(GateKind::MIN3, {r.s, pp[p], r.c}, t[p]));
      o.push_back(init_op(r.c));
      o.push_back(gate_op(GateKind::NOT, {t[p]}, r.c));
      o.push_back(init_op(t[p]));
      o.push_back(gate_op(GateKind::MIN3, {r.s, pp[p], cn}, t[p]));
      if (p != 0) o.push_back(init_op(r.s));
    }
    run_slots(ops, 7, "full_adder");

    std::vector<Column> recv(na_);
    for (std::size_t p = 0; p < na_; ++p) recv[p] = regs_[p].s;
    CycleBuilder sa(pm_), sb(pm_);
    for (std::size_t p = 0; p < na_; ++p) {
      auto& cb = p % 2 == 0 ? sa : sb;
      cb.add(GateKind::MIN3, {regs_[p].c, units()[p].scratch[0], t[p]},
             shift_target(p, l.out[k], recv));
    }
    push(sa, "shift");
    push(sb, "shift");
  }

  // Same adder with a zero operand in place of the partial product.
  void area_last_stage(std::size_t bit) {
    auto& l = L();
    std::vector<Column> recv(na_);
    CycleBuilder init(pm_);
    for (std::size_t p = 0; p < na_; ++p) {
      const auto& u = units()[p];
      init.init(u.b).init(u.scratch);
      recv[p] = p == 0 ? regs_[0].s : regs_[p].fresh();
      if (p != 0) init.init(recv[p]);
    }
    init.init(l.out[bit]);
    push(init, "last_init");

    std::vector<std::vector<Op>> ops(na_);
    for (std::size_t p = 0; p < na_; ++p) {
      const auto& u = units()[p];
      const auto& r = regs_[p];
      const Column zero = u.b, cn = u.scratch[0], t = u.scratch[1];
      ops[p] = {gate_op(GateKind::NOT, {cn}, zero),
                gate_op(GateKind::NOT, {r.c}, cn),
                gate_op(GateKind::MIN3, {r.s, zero, r.c}, t),
                init_op(r.c),
                gate_op(GateKind::NOT, {t}, r.c),
                init_op(t),
                gate_op(GateKind::MIN3, {r.s, zero, cn}, t)};
    }
    run_slots(ops, 7, "last_adder");

    CycleBuilder sa(pm_), sb(pm_);
    for (std::size_t p = 0; p < na_; ++p) {
      const auto& u = units()[p];
      auto& cb = p % 2 == 0 ? sa : sb;
      cb.add(GateKind::MIN3, {regs_[p].c, u.scratch[0], u.scratch[1]},
             shift_target(p, l.out[bit], recv));
    }
    push(sa, "last_shift");
    push(sb, "last_shift");

    for (std::size_t p = 1; p < na_; ++p) {
      regs_[p].free.push_back(regs_[p].s);
      regs_[p].s = recv[p];
    }
  }

  MultiplierConfig cfg_;
  std::size_t na_, nb_;
  MultiplierPlan plan_;
  PartitionMap pm_;
  std::vector<Regs> regs_;
};

}  // namespace

std::string_view to_string(Variant v) { return v == Variant::Standard ? "standard" : "area"; }

Variant variant_from_string(std::string_view name) {
  if (name == "standard") return Variant::Standard;
  if (name == "area") return Variant::Area;
  throw MultiplierError("unknown variant '" + std::string(name) + "'");
}

std::uint64_t predicted_cycles(const MultiplierConfig& c) {
  validate(c);
  const std::uint64_t na = c.a_bits, nb = c.b_bits;
  if (c.variant == Variant::Standard) {
    return na + 3 + nb * (ceil_log2(na) + 7) + 6 * na;
  }
  return na + 3 + nb * (ceil_log2(na) + 12) + 10 * na;
}

std::size_t predicted_memristors(const MultiplierConfig& c) {
  validate(c);
  const std::size_t io = 2 * (c.a_bits + c.b_bits);
  if (c.variant == Variant::Standard) return io + 10 * (c.a_bits - 1) + 3;
  return io + 6 * c.a_bits;
}

std::size_t predicted_partitions(const MultiplierConfig& c) {
  validate(c);
  return c.variant == Variant::Standard ? c.a_bits - 1 : c.a_bits;
}

MultiplierPlan schedule_multiply(const MultiplierConfig& config) {
  validate(config);
  return Builder(config).run();
}

Crossbar load_operands(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs,
                       const MultiplierPlan& plan) {
  if (pairs.empty()) throw MultiplierError("no operand pairs");
  const auto& l = plan.layout;
  Crossbar xb(pairs.size(), l.cols, l.boundaries);
  std::vector<CellWrite> writes;
  for (Row r = 0; r < pairs.size(); ++r) {
    auto [a, b] = pairs[r];
    if ((a & ~mask(l.a_in.size())) != 0 || (b & ~mask(l.b_in.size())) != 0) {
      throw MultiplierError("operand does not fit its width");
    }
    for (std::size_t i = 0; i < l.a_in.size(); ++i) writes.push_back({r, l.a_in[i], Bit((a >> i) & 1)});
    for (std::size_t i = 0; i < l.b_in.size(); ++i) writes.push_back({r, l.b_in[i], Bit((b >> i) & 1)});
  }
  xb.write_cells(writes);
  return xb;
}

namespace {

std::uint64_t read_word(const Crossbar& xb, Row r, const std::vector<Column>& cols, std::size_t n) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < n; ++i) v |= std::uint64_t{xb.read(r, cols[i])} << i;
  return v;
}

}  // namespace

BatchResult run_multiply_batch(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs,
                               const MultiplierPlan& plan) {
  Crossbar xb = load_operands(pairs, plan);
  plan.schedule.run(xb);
  BatchResult res;
  for (Row r = 0; r < pairs.size(); ++r) {
    res.products.push_back(read_word(xb, r, plan.layout.out, plan.layout.out.size()));
  }
  res.cost = xb.cost_report();
  return res;
}

MultiplyResult run_multiply(std::uint64_t a, std::uint64_t b, const MultiplierConfig& config) {
  const auto plan = schedule_multiply(config);
  auto batch = run_multiply_batch({{a, b}}, plan);
  return {batch.products.front(), batch.cost};
}

StageProbe stage_invariant_probe(const Crossbar& xb, const MultiplierPlan& plan, std::size_t k,
                                 Row row) {
  if (k >= plan.stages.size()) {
    throw ProbeError("stage " + std::to_string(k) + " outside 0.." +
                     std::to_string(plan.stages.size() - 1));
  }
  const auto& sb = plan.stages[k];
  const auto done = xb.cost_report().cycles;
  if (done != sb.cycle) {
    throw ProbeError("crossbar is at cycle " + std::to_string(done) + ", stage " +
                     std::to_string(k) + " ends at cycle " + std::to_string(sb.cycle));
  }
  StageProbe p;
  p.emitted = read_word(xb, row, plan.layout.out, k);
  p.sum = read_word(xb, row, sb.sum, sb.sum.size());
  p.carry = read_word(xb, row, sb.carry, sb.carry.size());
  return p;
}

std::string_view to_string(CostModel m) {
  switch (m) {
    case CostModel::HajAli: return "haj_ali";
    case CostModel::Rime: return "rime";
    case CostModel::MultPim: return "multpim";
    case CostModel::MultPimArea: return "multpim_area";
  }
  return "?";
}

CostModel cost_model_from_string(std::string_view name) {
  for (auto m : {CostModel::HajAli, CostModel::Rime, CostModel::MultPim, CostModel::MultPimArea}) {
    if (to_string(m) == name) return m;
  }
  throw MultiplierError("unknown cost model '" + std::string(name) + "'");
}

std::uint64_t baseline_latency(CostModel model, std::uint64_t n) {
  if (n < 2) throw MultiplierError("width must be at least 2");
  switch (model) {
    case CostModel::HajAli: return 13 * n * n - 14 * n + 6;
    case CostModel::Rime: return 2 * n * n + 16 * n - 19;
    case CostModel::MultPim: return n * ceil_log2(n) + 14 * n + 3;
    case CostModel::MultPimArea: return n * ceil_log2(n) + 23 * n + 3;
  }
  throw MultiplierError("unknown cost model");
}

std::uint64_t baseline_area(CostModel model, std::uint64_t n) {
  if (n < 2) throw MultiplierError("width must be at least 2");
  switch (model) {
    case CostModel::HajAli: return 20 * n - 5;
    case CostModel::Rime: return 15 * n - 12;
    case CostModel::MultPim: return 14 * n - 7;
    case CostModel::MultPimArea: return 10 * n;
  }
  throw MultiplierError("unknown cost model");
}

}  // namespace multpim
