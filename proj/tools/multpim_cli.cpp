// multpim: run, verify and tabulate in-memory multiplication schedules.
//
// Exit status: 0 success, 1 a check failed, 2 usage error.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "multpim/matvec.hpp"
#include "multpim/multiplier.hpp"
#include "multpim/trace.hpp"

using namespace multpim;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t mask(std::size_t bits) { return bits >= 64 ? ~0ull : (1ull << bits) - 1; }

std::uint64_t operand(const std::string& text, std::size_t bits, const char* name) {
  std::uint64_t v = 0;
  try {
    v = parse_element(text);
  } catch (const MatVecError&) {
    throw UsageError(std::string("--") + name + ": cannot parse '" + text + "'");
  }
  if (v & ~mask(bits)) {
    throw UsageError(std::string("--") + name + " = " + text + " does not fit in " +
                     std::to_string(bits) + " bits");
  }
  return v;
}

Variant variant_arg(const std::string& s) {
  try {
    return variant_from_string(s);
  } catch (const MultiplierError& e) {
    throw UsageError(e.what());
  }
}

void print_cost(std::ostream& os, const CostReport& c) {
  os << "cycles      " << c.cycles << "\n";
  os << "memristors  " << c.memristors_per_row << "\n";
  os << "partitions  " << c.partitions << "\n";
}

std::uint64_t env_seed() {
  if (const char* s = std::getenv("MULTPIM_SEED")) {
    try {
      return parse_element(s);
    } catch (const MatVecError&) {
      throw UsageError(std::string("MULTPIM_SEED: cannot parse '") + s + "'");
    }
  }
  return 0;
}

// ---- mult ---------------------------------------------------------------

struct MultArgs {
  std::size_t n = 32;
  std::size_t b_bits = 0;
  std::string a = "0", b = "0", variant = "standard", trace;
};

int cmd_mult(const MultArgs& args) {
  const MultiplierConfig cfg{args.n, args.b_bits ? args.b_bits : args.n, variant_arg(args.variant)};
  if (cfg.a_bits < 2 || cfg.b_bits < 2 || cfg.a_bits + cfg.b_bits > 64) {
    throw UsageError("operand widths must be >= 2 and sum to at most 64");
  }
  const auto a = operand(args.a, cfg.a_bits, "a");
  const auto b = operand(args.b, cfg.b_bits, "b");
  const auto plan = schedule_multiply(cfg);
  auto xb = load_operands({{a, b}}, plan);
  std::ofstream trace;
  if (!args.trace.empty()) {
    trace.open(args.trace);
    if (!trace) throw UsageError("cannot write " + args.trace);
    xb.set_trace(&trace);
  }
  plan.schedule.run(xb);
  std::uint64_t p = 0;
  for (std::size_t i = 0; i < plan.layout.out.size(); ++i) {
    p |= std::uint64_t{xb.read(0, plan.layout.out[i])} << i;
  }
  const auto cost = xb.cost_report();
  const std::uint64_t want = a * b;
  std::cout << "product     0x" << std::hex << p << std::dec << " (" << p << ")\n";
  print_cost(std::cout, cost);
  int rc = kOk;
  if (p != want) {
    std::cout << "FAIL product, oracle gives " << want << "\n";
    rc = kCheckFailed;
  }
  if (cost.cycles != plan.predicted.cycles ||
      cost.memristors_per_row != plan.predicted.memristors_per_row) {
    std::cout << "FAIL cost differs from closed form (" << plan.predicted.cycles << " cycles, "
              << plan.predicted.memristors_per_row << " memristors)\n";
    rc = kCheckFailed;
  }
  return rc;
}

// ---- matvec -------------------------------------------------------------

struct MatVecArgs {
  std::size_t N = 8;
  std::string matrix, vector, variant = "standard", trace;
};

template <typename T, typename F>
T read_file(const std::string& path, F parse) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  try {
    return parse(in);
  } catch (const MatVecError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

int cmd_matvec(const MatVecArgs& args) {
  const auto a = read_file<Matrix>(args.matrix, [](std::istream& s) { return parse_matrix(s); });
  const auto x = read_file<std::vector<std::uint64_t>>(
      args.vector, [](std::istream& s) { return parse_vector(s); });
  if (a.front().size() != x.size()) {
    throw UsageError("matrix has " + std::to_string(a.front().size()) + " columns, vector has " +
                     std::to_string(x.size()) + " elements");
  }
  if (args.N < 2 || 2 * args.N > 64) throw UsageError("--n must be in [2, 32]");
  for (const auto& row : a) {
    for (auto v : row) {
      if (v & ~mask(args.N)) throw UsageError("matrix element exceeds " + std::to_string(args.N) + " bits");
    }
  }
  for (auto v : x) {
    if (v & ~mask(args.N)) throw UsageError("vector element exceeds " + std::to_string(args.N) + " bits");
  }
  const MatVecConfig cfg{a.size(), x.size(), args.N, variant_arg(args.variant)};
  const auto plan = schedule_matvec(cfg);
  if (!args.trace.empty()) {
    std::ofstream out(args.trace);
    if (!out) throw UsageError("cannot write " + args.trace);
    write_trace(out, plan.schedule);
  }
  const auto r = run_matvec(a, x, plan);
  const auto want = matvec_oracle(a, x, args.N);
  int rc = kOk;
  for (std::size_t i = 0; i < r.y.size(); ++i) {
    std::cout << "y[" << i << "] = " << r.y[i];
    if (r.y[i] != want[i]) {
      std::cout << "  FAIL oracle " << want[i];
      rc = kCheckFailed;
    }
    std::cout << "\n";
  }
  print_cost(std::cout, r.cost);
  if (r.cost.cycles != matvec_predicted_cycles(cfg)) {
    std::cout << "FAIL cycles differ from closed form " << matvec_predicted_cycles(cfg) << "\n";
    rc = kCheckFailed;
  }
  return rc;
}

// ---- tables -------------------------------------------------------------

struct Cell {
  std::uint64_t value = 0;
  std::uint64_t formula = 0;
  bool simulated = false;
  bool blank = false;
  bool ok() const { return !simulated || value == formula; }
};

struct TableRow {
  std::string design;
  std::vector<Cell> cells;
};

struct Table {
  std::string name, title;
  std::vector<std::string> columns;
  std::vector<TableRow> rows;
};

int render(const Table& t, bool csv) {
  int rc = kOk;
  if (csv) {
    std::cout << "table,design,column,value,formula,status\n";
    for (const auto& r : t.rows) {
      for (std::size_t i = 0; i < r.cells.size(); ++i) {
        const auto& c = r.cells[i];
        if (c.blank) continue;
        std::cout << t.name << "," << r.design << "," << t.columns[i] << "," << c.value << ","
                  << c.formula << "," << (c.simulated ? (c.ok() ? "ok" : "FAIL") : "formula")
                  << "\n";
        if (!c.ok()) rc = kCheckFailed;
      }
    }
    return rc;
  }
  std::cout << t.title << "\n";
  std::printf("%-14s", "design");
  for (const auto& c : t.columns) std::printf("%12s", c.c_str());
  std::printf("\n");
  std::vector<std::string> fails;
  for (const auto& r : t.rows) {
    std::printf("%-14s", r.design.c_str());
    for (std::size_t i = 0; i < r.cells.size(); ++i) {
      const auto& c = r.cells[i];
      std::string v = c.blank ? "-" : std::to_string(c.value) + (c.ok() ? "" : "*");
      std::printf("%12s", v.c_str());
      if (!c.ok()) {
        fails.push_back("FAIL " + r.design + " " + t.columns[i] + ": simulated " +
                        std::to_string(c.value) + ", formula " + std::to_string(c.formula));
      }
    }
    std::printf("\n");
  }
  std::fflush(stdout);
  for (const auto& f : fails) std::cout << f << "\n";
  return fails.empty() ? kOk : kCheckFailed;
}

Table latency_table(const std::vector<std::size_t>& ns) {
  Table t{"latency", "Latency (clock cycles)", {}, {}};
  for (auto n : ns) t.columns.push_back("N=" + std::to_string(n));
  for (auto m : {CostModel::HajAli, CostModel::Rime, CostModel::MultPim, CostModel::MultPimArea}) {
    TableRow r{std::string(to_string(m)), {}};
    for (auto n : ns) {
      Cell c{baseline_latency(m, n), baseline_latency(m, n), false};
      if (m == CostModel::MultPim || m == CostModel::MultPimArea) {
        const auto v = m == CostModel::MultPim ? Variant::Standard : Variant::Area;
        c.value = run_multiply(1, 1, MultiplierConfig::square(n, v)).cost.cycles;
        c.simulated = true;
      }
      r.cells.push_back(c);
    }
    t.rows.push_back(r);
  }
  return t;
}

Table area_table(const std::vector<std::size_t>& ns) {
  Table t{"area", "Area (memristors per row)", {}, {}};
  for (auto n : ns) t.columns.push_back("N=" + std::to_string(n));
  for (auto m : {CostModel::HajAli, CostModel::Rime, CostModel::MultPim, CostModel::MultPimArea}) {
    TableRow r{std::string(to_string(m)), {}};
    for (auto n : ns) {
      Cell c{baseline_area(m, n), baseline_area(m, n), false};
      if (m == CostModel::MultPim || m == CostModel::MultPimArea) {
        const auto v = m == CostModel::MultPim ? Variant::Standard : Variant::Area;
        c.value = run_multiply(1, 1, MultiplierConfig::square(n, v)).cost.memristors_per_row;
        c.simulated = true;
      }
      r.cells.push_back(c);
    }
    t.rows.push_back(r);
  }
  return t;
}

Table matvec_table(std::size_t n, std::size_t N, std::size_t m) {
  Table t{"matvec",
          "Matrix-vector multiplication (m=" + std::to_string(m) + ", n=" + std::to_string(n) +
              ", N=" + std::to_string(N) + "); width is per row of an m-row crossbar",
          {"cycles", "width", "partitions"},
          {}};
  const auto fp = floatpim_cost(n, N, m);
  t.rows.push_back({"floatpim", {{fp.cycles, fp.cycles, false}, {fp.row_width, fp.row_width, false}, {0, 0, false, true}}});
  for (auto v : {Variant::Standard, Variant::Area}) {
    const MatVecConfig cfg{m, n, N, v};
    const auto plan = schedule_matvec(cfg);
    Crossbar xb(m, plan.layout.cols, plan.layout.boundaries);
    for (Row r = 0; r < m; ++r) {
      for (Column c = 0; c < xb.cols(); ++c) xb.write(r, c, 1);
    }
    plan.schedule.run(xb);
    const auto cost = xb.cost_report();
    TableRow row{v == Variant::Standard ? "multpim" : "multpim_area", {}};
    std::uint64_t ref_c = 0, ref_w = 0;
    bool have_ref = true;
    try {
      ref_c = matvec_reference_cycles(n, N, v);
      ref_w = matvec_reference_width(n, N, v);
    } catch (const MatVecError&) {
      have_ref = false;
    }
    row.cells.push_back({cost.cycles, have_ref ? ref_c : cost.cycles, true});
    row.cells.push_back({cost.memristors_per_row, have_ref ? ref_w : cost.memristors_per_row, true});
    row.cells.push_back({cost.partitions, N + 1, true});
    t.rows.push_back(row);
  }
  return t;
}

struct TableArgs {
  std::string which = "latency";
  std::vector<std::size_t> ns{16, 32};
  std::size_t n = 8, N = 32, m = 1;
  bool csv = false;
};

int cmd_tables(const TableArgs& args) {
  if (args.which == "latency" || args.which == "area") {
    for (auto n : args.ns) {
      if (n < 2 || n > 32) throw UsageError("table widths must be in [2, 32]");
    }
  }
  if (args.which == "latency") return render(latency_table(args.ns), args.csv);
  if (args.which == "area") return render(area_table(args.ns), args.csv);
  if (args.N < 2 || args.N > 32 || args.n < 1 || args.m < 1) {
    throw UsageError("matvec table needs n, m >= 1 and N in [2, 32]");
  }
  return render(matvec_table(args.n, args.N, args.m), args.csv);
}

// ---- verify -------------------------------------------------------------

struct VerifyArgs {
  std::size_t n = 8;
  std::size_t samples = 1000;
  std::optional<std::uint64_t> seed;
  std::string variant = "standard";
};

int cmd_verify(const VerifyArgs& args) {
  const auto v = variant_arg(args.variant);
  if (args.n < 2 || args.n > 32) throw UsageError("--n must be in [2, 32]");
  const std::uint64_t seed = args.seed ? *args.seed : env_seed();
  const auto cfg = MultiplierConfig::square(args.n, v);
  const auto plan = schedule_multiply(cfg);

  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  const bool exhaustive = args.n <= 4;
  if (exhaustive) {
    for (std::uint64_t a = 0; a <= mask(args.n); ++a) {
      for (std::uint64_t b = 0; b <= mask(args.n); ++b) pairs.emplace_back(a, b);
    }
  } else {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < args.samples; ++i) {
      pairs.emplace_back(rng() & mask(args.n), rng() & mask(args.n));
    }
  }
  if (pairs.empty()) throw UsageError("--samples must be positive");

  auto xb = load_operands(pairs, plan);
  std::size_t probe_fail = 0, next = 0;
  for (std::size_t k = 0; k < plan.stages.size(); ++k) {
    while (next < plan.stages[k].cycle) xb.apply_cycle(plan.schedule.cycles[next++]);
    for (Row r = 0; r < pairs.size(); ++r) {
      const auto p = stage_invariant_probe(xb, plan, k, r);
      if (p.emitted + ((p.sum + p.carry) << k) != pairs[r].first * (pairs[r].second & mask(k))) {
        ++probe_fail;
      }
    }
  }
  while (next < plan.schedule.size()) xb.apply_cycle(plan.schedule.cycles[next++]);

  std::size_t wrong = 0;
  for (Row r = 0; r < pairs.size(); ++r) {
    std::uint64_t p = 0;
    for (std::size_t i = 0; i < plan.layout.out.size(); ++i) {
      p |= std::uint64_t{xb.read(r, plan.layout.out[i])} << i;
    }
    if (p != pairs[r].first * pairs[r].second) ++wrong;
  }
  const auto cost = xb.cost_report();
  const auto model = v == Variant::Standard ? CostModel::MultPim : CostModel::MultPimArea;
  const bool profile_ok = plan.schedule.profile_violations(GateProfile::NotMin3).empty();

  auto line = [](const char* what, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << what << "  " << detail << "\n";
    return ok;
  };
  std::cout << "verify N=" << args.n << " variant=" << to_string(v) << " "
            << (exhaustive ? "exhaustive" : "sampled") << " pairs=" << pairs.size();
  if (!exhaustive) std::cout << " seed=" << seed;
  std::cout << "\n";
  bool ok = true;
  ok &= line("products", wrong == 0, std::to_string(wrong) + " mismatches");
  ok &= line("cycles", cost.cycles == baseline_latency(model, args.n),
             std::to_string(cost.cycles) + " vs " + std::to_string(baseline_latency(model, args.n)));
  ok &= line("memristors", cost.memristors_per_row == baseline_area(model, args.n),
             std::to_string(cost.memristors_per_row) + " vs " +
                 std::to_string(baseline_area(model, args.n)));
  ok &= line("stage invariant", probe_fail == 0,
             std::to_string(plan.stages.size() * pairs.size() - probe_fail) + " probes held");
  ok &= line("gate profile", profile_ok, "not_min3");
  return ok ? kOk : kCheckFailed;
}

// ---- trace-replay -------------------------------------------------------

struct ReplayArgs {
  std::string trace, variant = "standard";
  std::size_t n = 8;
  std::string a = "0", b = "0";
};

int cmd_replay(const ReplayArgs& args) {
  std::ifstream in(args.trace);
  if (!in) throw UsageError("cannot read " + args.trace);
  Schedule s;
  try {
    s = read_trace(in);
  } catch (const std::invalid_argument& e) {
    throw UsageError(args.trace + ": " + e.what());
  }
  const auto cfg = MultiplierConfig::square(args.n, variant_arg(args.variant));
  if (args.n < 2 || args.n > 32) throw UsageError("--n must be in [2, 32]");
  const auto a = operand(args.a, args.n, "a");
  const auto b = operand(args.b, args.n, "b");
  const auto plan = schedule_multiply(cfg);
  auto xb = load_operands({{a, b}}, plan);
  try {
    s.run(xb);
  } catch (const CrossbarError& e) {
    std::cout << "FAIL replay: " << e.what() << "\n";
    return kCheckFailed;
  }
  const auto cost = xb.cost_report();
  print_cost(std::cout, cost);
  std::uint64_t p = 0;
  for (std::size_t i = 0; i < plan.layout.out.size(); ++i) {
    if (!xb.is_defined(0, plan.layout.out[i])) {
      std::cout << "FAIL product bit " << i << " never written\n";
      return kCheckFailed;
    }
    p |= std::uint64_t{xb.read(0, plan.layout.out[i])} << i;
  }
  std::cout << "product     " << p << "\n";
  int rc = kOk;
  if (p != a * b) {
    std::cout << "FAIL product, oracle gives " << a * b << "\n";
    rc = kCheckFailed;
  }
  if (cost.cycles != plan.predicted.cycles ||
      cost.memristors_per_row != plan.predicted.memristors_per_row) {
    std::cout << "FAIL cost differs from the schedule's (" << plan.predicted.cycles << " cycles, "
              << plan.predicted.memristors_per_row << " memristors)\n";
    rc = kCheckFailed;
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycle-accurate stateful-logic multiplier and matrix-vector schedules"};
  app.require_subcommand(1);

  MultArgs mult;
  auto* m = app.add_subcommand("mult", "multiply two operands and report the cost");
  m->add_option("--n", mult.n, "width of a (and of b unless --b-bits)")->check(CLI::Range(2, 62));
  m->add_option("--b-bits", mult.b_bits, "width of b");
  m->add_option("--a", mult.a, "multiplicand, decimal or 0x hex");
  m->add_option("--b", mult.b, "multiplier, decimal or 0x hex");
  m->add_option("--variant", mult.variant, "standard or area");
  m->add_option("--trace", mult.trace, "write a JSON-lines trace here");

  MatVecArgs mv;
  auto* v = app.add_subcommand("matvec", "row-parallel y = A x");
  v->add_option("--n", mv.N, "element width in bits");
  v->add_option("--matrix", mv.matrix, "matrix file, one row per line")->required();
  v->add_option("--vector", mv.vector, "vector file")->required();
  v->add_option("--variant", mv.variant, "standard or area");
  v->add_option("--trace", mv.trace, "write the schedule as a JSON-lines trace");

  TableArgs tab;
  auto* t = app.add_subcommand("tables", "latency, area and matvec comparison tables");
  t->add_option("which", tab.which, "latency, area or matvec")
      ->check(CLI::IsMember({"latency", "area", "matvec"}));
  t->add_option("--widths", tab.ns, "operand widths for latency/area");
  t->add_option("--elements", tab.n, "matvec: vector length n");
  t->add_option("--bits", tab.N, "matvec: element width N");
  t->add_option("--rows", tab.m, "matvec: matrix rows m");
  t->add_flag("--csv", tab.csv, "comma-separated output");

  VerifyArgs ver;
  auto* w = app.add_subcommand("verify", "check products, costs and the stage invariant");
  w->add_option("--n", ver.n, "operand width");
  w->add_option("--samples", ver.samples, "random pairs when N > 4");
  w->add_option("--seed", ver.seed, "RNG seed (default $MULTPIM_SEED or 0)");
  w->add_option("--variant", ver.variant, "standard or area");

  ReplayArgs rep;
  auto* r = app.add_subcommand("trace-replay", "re-execute a multiplier trace and re-check it");
  r->add_option("--trace", rep.trace, "trace file")->required();
  r->add_option("--n", rep.n, "operand width the trace was built for");
  r->add_option("--variant", rep.variant, "standard or area");
  r->add_option("--a", rep.a, "multiplicand");
  r->add_option("--b", rep.b, "multiplier");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*m) return cmd_mult(mult);
    if (*v) return cmd_matvec(mv);
    if (*t) return cmd_tables(tab);
    if (*w) return cmd_verify(ver);
    if (*r) return cmd_replay(rep);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kUsage;
}
