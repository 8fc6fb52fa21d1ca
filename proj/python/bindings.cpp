#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "tilestencil/accelsim.hpp"
#include "tilestencil/axpy.hpp"
#include "tilestencil/calibrate.hpp"
#include "tilestencil/errors.hpp"
#include "tilestencil/harness.hpp"
#include "tilestencil/machine.hpp"
#include "tilestencil/matmul.hpp"
#include "tilestencil/reference.hpp"
#include "tilestencil/tiling.hpp"

namespace py = pybind11;
using namespace tilestencil;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

MachineSpec machine_arg(const std::optional<std::string>& json_text) {
  return json_text ? machine_from_json(*json_text) : MachineSpec{};
}

Bf16Grid grid_from_array(const FloatArray& a) {
  if (a.ndim() != 2) throw ShapeError("expected a 2-D array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return Bf16Grid::from_floats(rows, cols, std::span<const float>(a.data(), rows * cols));
}

FloatArray to_array(std::span<const Bf16> v, std::vector<py::ssize_t> shape) {
  FloatArray out(shape);
  float* p = out.mutable_data();
  for (std::size_t i = 0; i < v.size(); ++i) p[i] = v[i].to_f32();
  return out;
}

FloatArray grid_to_array(const Bf16Grid& g) {
  return to_array(g.data(), {static_cast<py::ssize_t>(g.rows()), static_cast<py::ssize_t>(g.cols())});
}

py::dict totals_dict(const PhaseTotals& t) {
  py::dict d;
  d["init_s"] = t.init_s;
  d["cpu_preprocess_s"] = t.cpu_preprocess_s;
  d["conversion_s"] = t.conversion_s;
  d["h2d_s"] = t.h2d_s;
  d["kernel_s"] = t.kernel_s;
  d["d2h_s"] = t.d2h_s;
  d["non_init_s"] = t.non_init_s();
  d["total_s"] = t.total_s();
  d["h2d_bytes"] = t.h2d_bytes;
  d["d2h_bytes"] = t.d2h_bytes;
  d["tilize_calls"] = t.tilize_calls;
  d["untilize_calls"] = t.untilize_calls;
  return d;
}

ExperimentConfig make_config(const std::string& method, std::size_t size, std::size_t iterations,
                             const std::string& scenario, std::uint64_t seed, bool validate, bool model_only,
                             unsigned threads) {
  ExperimentConfig c;
  c.method = parse_method(method);
  c.size = size;
  c.iterations = iterations;
  c.scenario = scenario;
  c.seed = seed;
  c.validate = validate;
  c.model_only = model_only;
  c.threads = threads;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Jacobi stencil pipelines on a simulated tile accelerator";

  py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def(
      "bf16_round",
      [](const FloatArray& a) {
        FloatArray out(std::vector<py::ssize_t>(a.shape(), a.shape() + a.ndim()));
        const float* in = a.data();
        float* p = out.mutable_data();
        for (py::ssize_t i = 0; i < a.size(); ++i) p[i] = bf16_from_f32(in[i]).to_f32();
        return out;
      },
      py::arg("values"), "Round float32 values to the nearest bfloat16 (ties to even).");

  m.def(
      "random_grid",
      [](std::size_t rows, std::size_t cols, std::uint64_t seed) { return grid_to_array(random_grid(rows, cols, seed)); },
      py::arg("rows"), py::arg("cols"), py::arg("seed") = 0);

  m.def(
      "jacobi_reference",
      [](const FloatArray& grid, std::size_t iterations) {
        return grid_to_array(jacobi_run_reference(grid_from_array(grid), StencilKernel::laplace5(), iterations));
      },
      py::arg("grid"), py::arg("iterations"));

  m.def(
      "tilize",
      [](const FloatArray& matrix) {
        const Bf16Grid g = grid_from_array(matrix);
        const TileBuffer t = tilize(pad_to_tiles(g.data(), g.rows(), g.cols()));
        return to_array(t.data, {static_cast<py::ssize_t>(t.data.size())});
      },
      py::arg("matrix"), "Pad to whole 32x32 tiles and return the flat tiled buffer.");

  m.def(
      "untilize",
      [](const FloatArray& flat, std::size_t padded_rows, std::size_t padded_cols, std::size_t rows,
         std::size_t cols) {
        if (flat.ndim() != 1 || static_cast<std::size_t>(flat.size()) != padded_rows * padded_cols) {
          throw ShapeError("flat buffer size does not match the padded shape");
        }
        if (padded_rows % kTileDim || padded_cols % kTileDim) throw AlignmentError("padded shape must be tile aligned");
        TileBuffer t;
        t.tile_rows = padded_rows / kTileDim;
        t.tile_cols = padded_cols / kTileDim;
        t.data.resize(padded_rows * padded_cols);
        for (std::size_t i = 0; i < t.data.size(); ++i) t.data[i] = bf16_from_f32(flat.data()[i]);
        return to_array(untilize(t, rows, cols), {static_cast<py::ssize_t>(rows), static_cast<py::ssize_t>(cols)});
      },
      py::arg("flat"), py::arg("padded_rows"), py::arg("padded_cols"), py::arg("rows"), py::arg("cols"));

  m.def(
      "distribute_tiles", [](std::size_t tiles, std::size_t cores) { return distribute_tiles(tiles, cores).per_core; },
      py::arg("tiles"), py::arg("cores") = 64);

  m.def(
      "axpy_run",
      [](const FloatArray& grid, std::size_t iterations, const std::string& scenario, unsigned threads,
         std::optional<std::string> machine) {
        const MachineSpec spec = machine_arg(machine);
        const AxpyRun r =
            axpy_run(grid_from_array(grid), iterations, spec, Scenario::from_name(scenario, spec), threads);
        return py::make_tuple(grid_to_array(r.grid), totals_dict(r.breakdown.totals()));
      },
      py::arg("grid"), py::arg("iterations"), py::arg("scenario") = "pcie", py::arg("threads") = 1,
      py::arg("machine") = py::none());

  m.def(
      "matmul_run",
      [](const FloatArray& grid, std::size_t iterations, const std::string& scenario, unsigned threads,
         std::optional<std::string> machine) {
        const MachineSpec spec = machine_arg(machine);
        const MatmulRun r =
            matmul_run(grid_from_array(grid), iterations, spec, Scenario::from_name(scenario, spec), threads);
        return py::make_tuple(grid_to_array(r.grid), totals_dict(r.breakdown.totals()));
      },
      py::arg("grid"), py::arg("iterations"), py::arg("scenario") = "pcie", py::arg("threads") = 1,
      py::arg("machine") = py::none());

  m.def(
      "end_to_end",
      [](const std::string& method, std::size_t size, std::size_t iterations, const std::string& scenario,
         std::optional<std::string> machine) {
        const MachineSpec spec = machine_arg(machine);
        const PhaseBreakdown b =
            end_to_end({parse_method(method), size, size, iterations}, spec, Scenario::from_name(scenario, spec));
        return totals_dict(b.totals());
      },
      py::arg("method"), py::arg("size"), py::arg("iterations"), py::arg("scenario") = "pcie",
      py::arg("machine") = py::none());

  m.def(
      "run_json",
      [](const std::string& method, std::size_t size, std::size_t iterations, const std::string& scenario,
         std::uint64_t seed, bool validate, bool model_only, unsigned threads, std::optional<std::string> machine) {
        const ExperimentConfig c = make_config(method, size, iterations, scenario, seed, validate, model_only, threads);
        py::gil_scoped_release release;
        return emit_report({run(c, machine_arg(machine))}, ReportFormat::Json);
      },
      py::arg("method"), py::arg("size"), py::arg("iterations"), py::arg("scenario") = "pcie", py::arg("seed") = 0,
      py::arg("validate") = false, py::arg("model_only") = false, py::arg("threads") = 1,
      py::arg("machine") = py::none());

  m.def(
      "sweep_json",
      [](const std::string& preset, std::optional<std::string> machine) {
        const auto configs = sweep_preset(preset);
        py::gil_scoped_release release;
        return emit_sweep(sweep(configs, machine_arg(machine)), ReportFormat::Json);
      },
      py::arg("preset"), py::arg("machine") = py::none());

  m.def(
      "default_machine_json", [] { return machine_to_json(MachineSpec{}); });
  m.def(
      "calibrate_json", [](std::optional<std::string> machine) { return machine_to_json(calibrate(machine_arg(machine)).spec); },
      py::arg("machine") = py::none());
}
