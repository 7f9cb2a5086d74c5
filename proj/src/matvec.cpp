#include "multpim/matvec.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <sstream>

#include "multpim/cycle_builder.hpp"
#include "multpim/partition_routines.hpp"

namespace multpim {

namespace {

std::uint64_t ceil_log2(std::uint64_t n) {
  std::uint64_t l = 0;
  while ((std::uint64_t{1} << l) < n) ++l;
  return l;
}

std::uint64_t mask(std::size_t bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

void validate(const MatVecConfig& c) {
  if (c.m < 1 || c.n < 1) throw MatVecError("matrix dimensions must be positive");
  if (c.N < 2) throw MatVecError("element width must be at least 2");
  if (2 * c.N > 64) throw MatVecError("accumulator wider than 64 bits");
}

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

struct Regs {
  Column s = 0, c = 0, cn = 0;
  Column old_s = 0, old_c = 0;
  std::vector<Column> free;

  Column fresh() {
    Column x = free.front();
    free.erase(free.begin());
    return x;
  }
  void release(std::initializer_list<Column> cells) { free.insert(free.end(), cells); }
};

class Builder {
 public:
  Builder(const MatVecConfig& cfg, bool final_sum) : cfg_(cfg), N_(cfg.N), final_(final_sum) {}

  MatVecPlan run() {
    if (cfg_.variant == Variant::Area) layout(4);
    else layout(8);
    pm_ = PartitionMap(L().cols, L().boundaries);
    if (cfg_.variant == Variant::Area) area_start();
    else start();
    const auto& f = L().feed;
    feed_.free = {f[0], f[1], f[2], f[3]};
    feed_t2_ = f[4];
    for (std::size_t k = 0; k < cfg_.n; ++k) {
      MacBoundary mb;
      mb.index = k;
      mb.first_cycle = plan_.schedule.size();
      mb.in = k == 0 ? current_inputs() : plan_.macs.back().out;
      if (cfg_.variant == Variant::Area) area_mac(k);
      else standard_mac(k);
      mb.end_cycle = plan_.schedule.size();
      mb.out = current_outputs();
      plan_.macs.push_back(std::move(mb));
    }
    if (final_) {
      const auto before = plan_.schedule.size();
      final_sum();
      plan_.final_sum_cycles = plan_.schedule.size() - before;
    }
    plan_.config = cfg_;
    return std::move(plan_);
  }

 private:
  MatVecLayout& L() { return plan_.layout; }
  std::vector<UnitCells>& units() { return plan_.layout.units; }
  std::size_t unit_count() const { return plan_.layout.units.size(); }
  Column lo(std::size_t bit) const { return plan_.layout.result[bit]; }
  Column hi(std::size_t bit) const { return plan_.layout.result[N_ + bit]; }
  void push(CycleBuilder& cb, const char* phase) { plan_.schedule.push(cb.build(phase)); }

  // unit holding bit position j
  std::size_t unit_of(std::size_t j) const { return N_ - 1 - j; }

  // Partition 0: operand stores and feeder. Partition p >= 1: the unit for
  // bit N - p; the last partition also keeps the 2N result cells.
  void layout(std::size_t state_cells) {
    Alloc a;
    auto& l = L();
    for (std::size_t k = 0; k < cfg_.n; ++k) l.a.push_back(a.take(N_));
    for (std::size_t k = 0; k < cfg_.n; ++k) l.x.push_back(a.take(N_));
    l.feed = a.take(5);
    for (std::size_t p = 1; p <= N_; ++p) {
      a.new_partition();
      UnitCells u;
      u.partition = p;
      u.position = N_ - p;
      u.a_n = a.take();
      u.b = a.take();
      u.scratch = a.take(2);
      u.state = a.take(state_cells);
      l.units.push_back(std::move(u));
    }
    l.result = a.take(2 * N_);
    l.cols = a.next;
    l.boundaries = a.boundaries;
  }

  // Register assignment before the first pass: the incoming accumulator
  // occupies old_s/old_c and the carry complement, the rest is free.
  void start() {
    regs_.resize(unit_count());
    for (std::size_t p = 0; p < unit_count(); ++p) {
      const auto& st = units()[p].state;
      auto& r = regs_[p];
      r.old_s = st[0];
      r.old_c = st[1];
      r.cn = st[2];
      r.free.assign(st.begin() + 3, st.end());
    }
  }

  AccumulatorCells current_inputs() const {
    AccumulatorCells c;
    for (std::size_t j = 0; j < N_; ++j) {
      const auto& r = regs_[unit_of(j)];
      c.s_lo.push_back(lo(j));
      c.s_hi.push_back(r.old_s);
      c.c_hi.push_back(r.old_c);
      c.c_lo_n.push_back(r.cn);
    }
    return c;
  }

  // Low half of the carry is zero after a pass, so c_lo_n stays empty.
  AccumulatorCells current_outputs() const {
    AccumulatorCells c;
    for (std::size_t j = 0; j < N_; ++j) {
      const auto& r = regs_[unit_of(j)];
      c.s_lo.push_back(lo(j));
      c.s_hi.push_back(r.s);
      c.c_hi.push_back(r.c);
    }
    return c;
  }

  // ---- standard ----------------------------------------------------------

  void standard_mac(std::size_t k) {
    const auto& l = L();
    const std::size_t parts = unit_count();
    std::vector<Column> sn(parts);

    // the finished pass becomes the incoming accumulator of this one
    if (k > 0) {
      feed_.release({feed_.c, feed_.cn});
      for (auto& r : regs_) {
        r.release({r.cn});
        r.old_s = r.s;
        r.old_c = r.c;
        r.cn = r.fresh();
      }
    }
    CycleBuilder init(pm_);
    for (std::size_t p = 0; p < parts; ++p) {
      auto& r = regs_[p];
      r.s = r.fresh();
      r.c = r.fresh();
      sn[p] = r.fresh();
      init.init({units()[p].a_n, r.s, r.c, sn[p]});
      if (k > 0) init.init(r.cn);
    }
    // feeder carry starts at zero
    feed_.c = feed_.free[0];
    feed_.cn = feed_.free[1];
    feed_.free.erase(feed_.free.begin(), feed_.free.begin() + 2);
    init.init({feed_.c, feed_.cn});
    push(init, "setup_init");

    // low sum bits come back from the result region complemented; each copy
    // rides along with a load whose span ends left of it
    CycleBuilder top(pm_);
    top.add(GateKind::NOT, {lo(units()[0].position)}, sn[0]);
    top.add(GateKind::NOT, {feed_.cn}, feed_.c);
    push(top, "load_sum");
    for (std::size_t p = 0; p < parts; ++p) {
      CycleBuilder cb(pm_);
      cb.add(GateKind::NOT, {l.a[k][units()[p].position]}, units()[p].a_n);
      if (p + 1 < parts) cb.add(GateKind::NOT, {lo(units()[p + 1].position)}, sn[p + 1]);
      push(cb, "load_a");
    }
    CycleBuilder z(pm_), fix(pm_);
    for (std::size_t p = 0; p < parts; ++p) {
      z.add(GateKind::NOT, {regs_[p].cn}, regs_[p].c);
      fix.add(GateKind::NOT, {sn[p]}, regs_[p].s);
    }
    push(z, "setup_zero");
    push(fix, "load_sum");
    for (std::size_t p = 0; p < parts; ++p) regs_[p].release({sn[p]});

    for (std::size_t st = 0; st < N_; ++st) standard_stage(k, st);
  }

  void standard_stage(std::size_t k, std::size_t st) {
    const auto& l = L();
    const std::size_t parts = unit_count();
    std::vector<Column> t1(parts), cout(parts), snext(parts);

    CycleBuilder init(pm_);
    for (std::size_t p = 0; p < parts; ++p) {
      const auto& u = units()[p];
      t1[p] = regs_[p].fresh();
      cout[p] = regs_[p].fresh();
      snext[p] = regs_[p].fresh();
      init.init(u.b).init(u.scratch).init({t1[p], cout[p], snext[p]});
    }
    const Column ft1 = feed_.free[0], fcout = feed_.free[1];
    init.init({ft1, fcout, feed_t2_});
    init.init(lo(st));
    push(init, "stage_init");

    // feeder: full adder over the incoming upper bits of weight 2^(N+st)
    const auto& src = regs_[unit_of(st)];
    CycleBuilder f1(pm_), f2(pm_);
    f1.add(GateKind::MIN3, {src.old_s, src.old_c, feed_.c}, ft1);
    f2.add(GateKind::MIN3, {src.old_s, src.old_c, feed_.cn}, feed_t2_);
    push(f1, "feed");
    push(f2, "feed");

    std::vector<Column> nodes{l.x[k][st]};
    for (const auto& u : units()) nodes.push_back(u.b);
    auto bc = broadcast_nodes(pm_, nodes, GateKind::NOT);
    plan_.schedule.append(bc.schedule.tag("broadcast"));

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
    ppc.add(GateKind::NOT, {ft1}, fcout);
    push(ppc, "partial_product");

    CycleBuilder a1(pm_), a2(pm_), a3(pm_);
    for (std::size_t p = 0; p < parts; ++p) {
      const auto& r = regs_[p];
      a1.add(GateKind::MIN3, {r.s, pp[p], r.c}, t1[p]);
      a2.add(GateKind::NOT, {t1[p]}, cout[p]);
      a3.add(GateKind::MIN3, {r.s, pp[p], r.cn}, units()[p].scratch[1]);
    }
    push(a1, "full_adder");
    push(a2, "full_adder");
    push(a3, "full_adder");

    // partition parity decides the shift cycle; the feeder sits in partition 0
    CycleBuilder even(pm_), odd(pm_);
    even.add(GateKind::MIN3, {fcout, feed_.cn, feed_t2_}, snext[0]);
    for (std::size_t p = 0; p < parts; ++p) {
      auto& cb = units()[p].partition % 2 == 0 ? even : odd;
      const Column to = p + 1 == parts ? lo(st) : snext[p + 1];
      cb.add(GateKind::MIN3, {cout[p], regs_[p].cn, units()[p].scratch[1]}, to);
    }
    push(even, "shift");
    push(odd, "shift");

    for (std::size_t p = 0; p < parts; ++p) {
      auto& r = regs_[p];
      r.release({r.s, r.c, r.cn});
      r.s = snext[p];
      r.c = cout[p];
      r.cn = t1[p];
    }
    regs_[unit_of(st)].release({src.old_s, src.old_c});
    feed_.free.erase(feed_.free.begin(), feed_.free.begin() + 2);
    feed_.free.insert(feed_.free.end(), {feed_.c, feed_.cn});
    feed_.c = fcout;
    feed_.cn = ft1;
  }

  // ---- area --------------------------------------------------------------

  // Six-cell adder units (see the multiplier) plus the two cells that keep
  // the incoming upper bits until the feeder has consumed them. The s/c
  // cells and the old pair swap roles at every pass.
  void area_start() {
    regs_.resize(unit_count());
    for (std::size_t p = 0; p < unit_count(); ++p) {
      const auto& u = units()[p];
      auto& r = regs_[p];
      r.old_s = u.state[0];
      r.old_c = u.state[1];
      r.s = u.state[2];
      r.c = u.state[3];
      r.cn = u.scratch[0];
    }
  }

  void area_mac(std::size_t k) {
    const auto& l = L();
    const std::size_t parts = unit_count();
    if (k > 0) {
      feed_.release({feed_.c, feed_.cn});
      for (auto& r : regs_) {
        std::swap(r.s, r.old_s);
        std::swap(r.c, r.old_c);
      }
    }
    CycleBuilder init(pm_);
    for (std::size_t p = 0; p < parts; ++p) {
      const auto& u = units()[p];
      init.init({u.a_n, u.b, regs_[p].s, regs_[p].c});
      if (k > 0) init.init(u.scratch[0]);
    }
    feed_.c = feed_.free[0];
    feed_.cn = feed_.free[1];
    feed_.free.erase(feed_.free.begin(), feed_.free.begin() + 2);
    init.init({feed_.c, feed_.cn});
    push(init, "setup_init");

    CycleBuilder top(pm_);
    top.add(GateKind::NOT, {lo(units()[0].position)}, units()[0].b);
    top.add(GateKind::NOT, {feed_.cn}, feed_.c);
    push(top, "load_sum");
    for (std::size_t p = 0; p < parts; ++p) {
      CycleBuilder cb(pm_);
      cb.add(GateKind::NOT, {l.a[k][units()[p].position]}, units()[p].a_n);
      if (p + 1 < parts) cb.add(GateKind::NOT, {lo(units()[p + 1].position)}, units()[p + 1].b);
      push(cb, "load_a");
    }
    CycleBuilder z(pm_), fix(pm_);
    for (std::size_t p = 0; p < parts; ++p) {
      z.add(GateKind::NOT, {units()[p].scratch[0]}, regs_[p].c);
      fix.add(GateKind::NOT, {units()[p].b}, regs_[p].s);
    }
    push(z, "setup_zero");
    push(fix, "load_sum");

    for (std::size_t st = 0; st < N_; ++st) area_stage(k, st);
  }

  void area_stage(std::size_t k, std::size_t st) {
    const auto& l = L();
    const std::size_t parts = unit_count();

    CycleBuilder init(pm_);
    for (const auto& u : units()) init.init(u.b).init(u.scratch);
    const Column ft1 = feed_.free[0], fcout = feed_.free[1];
    init.init({ft1, fcout, feed_t2_});
    init.init(lo(st));
    push(init, "stage_init");

    const auto& src = regs_[unit_of(st)];
    CycleBuilder f1(pm_), f2(pm_);
    f1.add(GateKind::MIN3, {src.old_s, src.old_c, feed_.c}, ft1);
    f2.add(GateKind::MIN3, {src.old_s, src.old_c, feed_.cn}, feed_t2_);
    push(f1, "feed");
    push(f2, "feed");

    std::vector<Column> nodes{l.x[k][st]};
    for (const auto& u : units()) nodes.push_back(u.b);
    auto bc = broadcast_nodes(pm_, nodes, GateKind::NOT);
    plan_.schedule.append(bc.schedule.tag("broadcast"));

    std::vector<Column> pp(parts), t(parts);
    CycleBuilder ppc(pm_), cnc(pm_);
    for (std::size_t p = 0; p < parts; ++p) {
      const auto& u = units()[p];
      if (bc.polarity[p + 1] == Polarity::Complemented) {
        ppc.add(GateKind::MIN3, {u.a_n, u.b, u.scratch[0]}, u.scratch[1]);
        pp[p] = u.scratch[1];
        t[p] = u.b;
      } else {
        ppc.add(GateKind::NOT, {u.a_n}, u.b, InitMode::NoInit);
        pp[p] = u.b;
        t[p] = u.scratch[1];
      }
      cnc.add(GateKind::NOT, {regs_[p].c}, u.scratch[0]);
    }
    ppc.add(GateKind::NOT, {ft1}, fcout);
    push(ppc, "partial_product");
    push(cnc, "partial_product");

    std::vector<std::vector<Op>> ops(parts);
    for (std::size_t p = 0; p < parts; ++p) {
      const auto& u = units()[p];
      const auto& r = regs_[p];
      auto& o = ops[p];
      if (t[p] == u.b) o.push_back(init_op(t[p]));
      o.push_back(gate_op(GateKind::MIN3, {r.s, pp[p], r.c}, t[p]));
      o.push_back(init_op(r.c));
      o.push_back(gate_op(GateKind::NOT, {t[p]}, r.c));
      o.push_back(init_op(t[p]));
      o.push_back(gate_op(GateKind::MIN3, {r.s, pp[p], u.scratch[0]}, t[p]));
      o.push_back(init_op(r.s));
    }
    run_slots(ops, 7, "full_adder");

    CycleBuilder even(pm_), odd(pm_);
    even.add(GateKind::MIN3, {fcout, feed_.cn, feed_t2_}, regs_[0].s);
    for (std::size_t p = 0; p < parts; ++p) {
      auto& cb = units()[p].partition % 2 == 0 ? even : odd;
      const Column to = p + 1 == parts ? lo(st) : regs_[p + 1].s;
      cb.add(GateKind::MIN3, {regs_[p].c, units()[p].scratch[0], t[p]}, to);
    }
    push(even, "shift");
    push(odd, "shift");

    feed_.free.erase(feed_.free.begin(), feed_.free.begin() + 2);
    feed_.free.insert(feed_.free.end(), {feed_.c, feed_.cn});
    feed_.c = fcout;
    feed_.cn = ft1;
  }

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
  static Op gate_op(GateKind kind, std::vector<Column> in, Column out) {
    return [=](CycleBuilder& cb) { cb.add(kind, in, out); };
  }
  static Op init_op(Column c) {
    return [=](CycleBuilder& cb) { cb.init(c); };
  }

  // ---- final carry-propagating sum ---------------------------------------

  // Ripple over the upper half: bit 0 is a half adder, the rest full adders
  // whose carry enters from the unit one partition to the right.
  void final_sum() {
    const std::size_t parts = unit_count();
    if (cfg_.variant == Variant::Area) {
      for (std::size_t p = 0; p < parts; ++p) {
        const auto& u = units()[p];
        regs_[p].free = {u.b, u.scratch[0], u.scratch[1], regs_[p].old_s, regs_[p].old_c};
      }
    }
    std::vector<Column> t1(parts), cout(parts), t2(parts);
    CycleBuilder init(pm_);
    for (std::size_t p = 0; p < parts; ++p) {
      t1[p] = regs_[p].fresh();
      cout[p] = regs_[p].fresh();
      t2[p] = regs_[p].fresh();
      init.init({t1[p], cout[p], t2[p]});
    }
    const std::size_t p0 = unit_of(0);
    const Column nand = regs_[p0].fresh();
    init.init(nand);
    for (std::size_t j = 0; j < N_; ++j) init.init(hi(j));
    push(init, "final_init");

    auto one = [&](GateKind k, std::vector<Column> in, Column out) {
      CycleBuilder cb(pm_);
      cb.add(k, std::move(in), out);
      push(cb, "final_sum");
    };

    // bit 0: t2 = NOR(s, c) with the fresh t1 as constant 1; Min3(s, c, t2)
    // is then NAND(s, c), the carry complement
    {
      const auto& r = regs_[p0];
      one(GateKind::MIN3, {r.s, r.c, t1[p0]}, t2[p0]);
      one(GateKind::MIN3, {r.s, r.c, t2[p0]}, nand);
      one(GateKind::NOT, {nand}, cout[p0]);
      one(GateKind::MIN3, {cout[p0], t2[p0], t1[p0]}, hi(0));
    }
    Column c = cout[p0], cn = nand;
    for (std::size_t j = 1; j < N_; ++j) {
      const std::size_t p = unit_of(j);
      const auto& r = regs_[p];
      one(GateKind::MIN3, {r.s, r.c, c}, t1[p]);
      one(GateKind::NOT, {t1[p]}, cout[p]);
      one(GateKind::MIN3, {r.s, r.c, cn}, t2[p]);
      one(GateKind::MIN3, {cout[p], cn, t2[p]}, hi(j));
      c = cout[p];
      cn = t1[p];
    }
  }

  MatVecConfig cfg_;
  std::size_t N_;
  bool final_;
  MatVecPlan plan_;
  PartitionMap pm_;
  std::vector<Regs> regs_;
  Regs feed_;
  Column feed_t2_ = 0;
};

void write_accumulator(std::vector<CellWrite>& w, Row r, const AccumulatorCells& cells,
                       const AccumulatorState& acc, std::size_t N) {
  for (std::size_t j = 0; j < N; ++j) {
    w.push_back({r, cells.s_lo[j], Bit((acc.s >> j) & 1)});
    w.push_back({r, cells.s_hi[j], Bit((acc.s >> (N + j)) & 1)});
    w.push_back({r, cells.c_hi[j], Bit((acc.c >> (N + j)) & 1)});
    w.push_back({r, cells.c_lo_n[j], Bit(!((acc.c >> j) & 1))});
  }
}

std::uint64_t read_bits(const Crossbar& xb, Row r, const std::vector<Column>& cols,
                        std::size_t shift = 0) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < cols.size(); ++i) v |= std::uint64_t{xb.read(r, cols[i])} << (i + shift);
  return v;
}

}  // namespace

std::uint64_t matvec_predicted_cycles(const MatVecConfig& c) {
  validate(c);
  const std::uint64_t N = c.N, n = c.n;
  const std::uint64_t stage = ceil_log2(N + 1) + 9;
  if (c.variant == Variant::Standard) return n * (N + 4 + N * stage) + 4 * N + 1;
  return n * (N + 4 + N * (stage + 5)) + 4 * N + 1;
}

std::size_t matvec_predicted_width(const MatVecConfig& c) {
  validate(c);
  const std::size_t unit = c.variant == Variant::Standard ? 12 : 8;
  return 2 * c.n * c.N + unit * c.N + 5 + 2 * c.N;
}

std::size_t matvec_predicted_partitions(const MatVecConfig& c) {
  validate(c);
  return c.N + 1;
}

std::uint64_t matvec_reference_cycles(std::size_t n, std::size_t N, Variant v) {
  if (v == Variant::Standard) return n * (N * ceil_log2(N) + 11 * N + 9) + 4 * N - 4;
  if (n == 8 && N == 32) return 6204;
  throw MatVecError("no reference area-variant total for these dimensions");
}

std::size_t matvec_reference_width(std::size_t n, std::size_t N, Variant v) {
  if (v == Variant::Standard) return 2 * n * N + 14 * N + 5;
  if (n == 8 && N == 32) return 778;
  throw MatVecError("no reference area-variant width for these dimensions");
}

MatVecPlan schedule_matvec(const MatVecConfig& config) {
  validate(config);
  return Builder(config, true).run();
}

MatVecPlan schedule_fused_mac(std::size_t N, Variant variant) {
  MatVecConfig c{1, 1, N, variant};
  validate(c);
  return Builder(c, false).run();
}

FusedMacResult run_fused_mac(std::uint64_t a, std::uint64_t b, const AccumulatorState& in,
                             std::size_t N, Variant variant) {
  const auto plan = schedule_fused_mac(N, variant);
  const auto& l = plan.layout;
  if ((a | b) & ~mask(N)) throw MatVecError("operand does not fit the element width");
  if ((in.s | in.c) & ~mask(2 * N)) throw MatVecError("accumulator does not fit 2N bits");
  Crossbar xb(1, l.cols, l.boundaries);
  std::vector<CellWrite> w;
  for (std::size_t i = 0; i < N; ++i) {
    w.push_back({0, l.a[0][i], Bit((a >> i) & 1)});
    w.push_back({0, l.x[0][i], Bit((b >> i) & 1)});
  }
  const auto& mac = plan.macs.front();
  write_accumulator(w, 0, mac.in, in, N);
  xb.write_cells(w);
  plan.schedule.run(xb);
  FusedMacResult res;
  res.out.s = read_bits(xb, 0, mac.out.s_lo) | read_bits(xb, 0, mac.out.s_hi, N);
  res.out.c = read_bits(xb, 0, mac.out.c_hi, N);
  res.cost = xb.cost_report();
  return res;
}

MatVecResult run_matvec(const Matrix& a, const std::vector<std::uint64_t>& x,
                        const MatVecPlan& plan) {
  const auto& cfg = plan.config;
  const auto& l = plan.layout;
  if (a.size() != cfg.m) throw MatVecError("matrix has " + std::to_string(a.size()) + " rows, plan expects " + std::to_string(cfg.m));
  if (x.size() != cfg.n) throw MatVecError("vector length " + std::to_string(x.size()) + " does not match n = " + std::to_string(cfg.n));
  const std::uint64_t lim = mask(cfg.N);
  for (auto v : x) {
    if (v & ~lim) throw MatVecError("vector element exceeds " + std::to_string(cfg.N) + " bits");
  }
  Crossbar xb(cfg.m, l.cols, l.boundaries);
  std::vector<CellWrite> w;
  for (Row r = 0; r < cfg.m; ++r) {
    if (a[r].size() != cfg.n) throw MatVecError("matrix row " + std::to_string(r) + " has wrong length");
    for (std::size_t k = 0; k < cfg.n; ++k) {
      if (a[r][k] & ~lim) throw MatVecError("matrix element exceeds " + std::to_string(cfg.N) + " bits");
      for (std::size_t i = 0; i < cfg.N; ++i) {
        w.push_back({r, l.a[k][i], Bit((a[r][k] >> i) & 1)});
        w.push_back({r, l.x[k][i], Bit((x[k] >> i) & 1)});
      }
    }
    write_accumulator(w, r, plan.macs.front().in, {}, cfg.N);
  }
  xb.write_cells(w);
  plan.schedule.run(xb);
  MatVecResult res;
  for (Row r = 0; r < cfg.m; ++r) res.y.push_back(read_bits(xb, r, l.result));
  res.cost = xb.cost_report();
  return res;
}

MatVecResult run_matvec(const Matrix& a, const std::vector<std::uint64_t>& x,
                        const MatVecConfig& config) {
  validate(config);
  return run_matvec(a, x, schedule_matvec(config));
}

std::vector<std::uint64_t> matvec_oracle(const Matrix& a, const std::vector<std::uint64_t>& x,
                                         std::size_t N) {
  const std::uint64_t m = mask(2 * N);
  std::vector<std::uint64_t> y;
  for (const auto& row : a) {
    if (row.size() != x.size()) throw MatVecError("dimension mismatch");
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < row.size(); ++k) acc = (acc + row[k] * x[k]) & m;
    y.push_back(acc);
  }
  return y;
}

FloatPimCost floatpim_cost(std::uint64_t n, std::uint64_t N, std::uint64_t m) {
  if (n == 0 || N == 0 || m == 0) throw MatVecError("dimensions must be positive");
  return {n * (13 * N * N + 12 * N + 6), static_cast<std::size_t>(4 * n * N + 22 * N - 5)};
}

std::uint64_t naive_substitution_cycles(std::uint64_t n, std::uint64_t N) {
  return n * (N * ceil_log2(N) + 40 * N + 3);
}

std::uint64_t parse_element(const std::string& token) {
  std::string_view t = token;
  int base = 10;
  if (t.size() > 2 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X')) {
    t.remove_prefix(2);
    base = 16;
  }
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v, base);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
    throw MatVecError("cannot parse element '" + token + "'");
  }
  return v;
}

Matrix parse_matrix(std::istream& in) {
  Matrix m;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::vector<std::uint64_t> row;
    for (std::string tok; ls >> tok;) row.push_back(parse_element(tok));
    if (row.empty()) continue;
    if (!m.empty() && row.size() != m.front().size()) throw MatVecError("ragged matrix rows");
    m.push_back(std::move(row));
  }
  if (m.empty()) throw MatVecError("empty matrix");
  return m;
}

std::vector<std::uint64_t> parse_vector(std::istream& in) {
  std::vector<std::uint64_t> v;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    for (std::string tok; ls >> tok;) v.push_back(parse_element(tok));
  }
  if (v.empty()) throw MatVecError("empty vector");
  return v;
}

}  // namespace multpim
