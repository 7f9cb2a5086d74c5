#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "multpim/matvec.hpp"
#include "multpim/multiplier.hpp"
#include "multpim/trace.hpp"

namespace py = pybind11;
using namespace multpim;

namespace {

MultiplierConfig config(std::size_t n, std::optional<std::size_t> b_bits, const std::string& v) {
  return {n, b_bits.value_or(n), variant_from_string(v)};
}

}  // namespace

PYBIND11_MODULE(_multpim, m) {
  m.doc() = "Cycle-accurate stateful-logic multiplier and matrix-vector schedules";

  py::register_exception<CrossbarError>(m, "CrossbarError", PyExc_RuntimeError);

  py::class_<CostReport>(m, "CostReport")
      .def_readonly("cycles", &CostReport::cycles)
      .def_readonly("memristors_per_row", &CostReport::memristors_per_row)
      .def_readonly("partitions", &CostReport::partitions)
      .def_readonly("phase_breakdown", &CostReport::phase_breakdown)
      .def("__repr__", [](const CostReport& c) {
        std::ostringstream os;
        os << "CostReport(cycles=" << c.cycles << ", memristors_per_row=" << c.memristors_per_row
           << ", partitions=" << c.partitions << ")";
        return os.str();
      });

  m.def(
      "multiply",
      [](std::uint64_t a, std::uint64_t b, std::size_t n, std::optional<std::size_t> b_bits,
         const std::string& variant) {
        auto r = run_multiply(a, b, config(n, b_bits, variant));
        return py::make_tuple(r.product, r.cost);
      },
      py::arg("a"), py::arg("b"), py::arg("n") = 32, py::arg("b_bits") = py::none(),
      py::arg("variant") = "standard", "Multiply in a simulated crossbar row: (product, cost).");

  m.def(
      "multiply_batch",
      [](const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs, std::size_t n,
         const std::string& variant) {
        auto r = run_multiply_batch(pairs, schedule_multiply(config(n, std::nullopt, variant)));
        return py::make_tuple(r.products, r.cost);
      },
      py::arg("pairs"), py::arg("n") = 32, py::arg("variant") = "standard",
      "One pair per row, all rows share the schedule.");

  m.def(
      "predicted_cycles",
      [](std::size_t n, const std::string& v) { return predicted_cycles(config(n, std::nullopt, v)); },
      py::arg("n"), py::arg("variant") = "standard");
  m.def(
      "predicted_memristors",
      [](std::size_t n, const std::string& v) {
        return predicted_memristors(config(n, std::nullopt, v));
      },
      py::arg("n"), py::arg("variant") = "standard");

  m.def(
      "baseline_latency",
      [](const std::string& model, std::uint64_t n) {
        return baseline_latency(cost_model_from_string(model), n);
      },
      py::arg("model"), py::arg("n"));
  m.def(
      "baseline_area",
      [](const std::string& model, std::uint64_t n) {
        return baseline_area(cost_model_from_string(model), n);
      },
      py::arg("model"), py::arg("n"));

  m.def(
      "fused_mac",
      [](std::uint64_t a, std::uint64_t b, std::uint64_t s, std::uint64_t c, std::size_t n,
         const std::string& variant) {
        auto r = run_fused_mac(a, b, {s, c}, n, variant_from_string(variant));
        return py::make_tuple(r.out.s, r.out.c, r.cost);
      },
      py::arg("a"), py::arg("b"), py::arg("s") = 0, py::arg("c") = 0, py::arg("n") = 8,
      py::arg("variant") = "standard", "One fused pass: (s_o, c_o, cost).");

  m.def(
      "matvec",
      [](const Matrix& a, const std::vector<std::uint64_t>& x, std::size_t n,
         const std::string& variant) {
        if (a.empty()) throw MatVecError("empty matrix");
        auto r = run_matvec(a, x, MatVecConfig{a.size(), x.size(), n, variant_from_string(variant)});
        return py::make_tuple(r.y, r.cost);
      },
      py::arg("a"), py::arg("x"), py::arg("n") = 8, py::arg("variant") = "standard",
      "Row-parallel y = A x, wrapping at 2n bits: (y, cost).");
  m.def("matvec_oracle", &matvec_oracle, py::arg("a"), py::arg("x"), py::arg("n"));

  m.def(
      "floatpim_cost",
      [](std::uint64_t n, std::uint64_t N, std::uint64_t rows) {
        auto c = floatpim_cost(n, N, rows);
        return py::make_tuple(c.cycles, c.row_width);
      },
      py::arg("n"), py::arg("N"), py::arg("m") = 1);

  m.def(
      "trace",
      [](std::size_t n, const std::string& variant) {
        std::ostringstream os;
        write_trace(os, schedule_multiply(config(n, std::nullopt, variant)).schedule);
        return os.str();
      },
      py::arg("n"), py::arg("variant") = "standard", "Multiplier schedule as JSON lines.");
}
