#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tilestencil/calibrate.hpp"
#include "tilestencil/costmodel.hpp"
#include "tilestencil/errors.hpp"
#include "tilestencil/machine.hpp"

using namespace tilestencil;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

const MachineSpec kSpec;

PhaseTotals model(Method m, std::size_t n, std::size_t iters, const Scenario& s) {
  return end_to_end({m, n, n, iters}, kSpec, s).totals();
}

}  // namespace

TEST_CASE("method and scenario names") {
  CHECK(parse_method("axpy") == Method::Axpy);
  CHECK(method_name(parse_method("matmul")) == "matmul");
  CHECK_THROWS_AS(parse_method("fft"), ConfigError);
  CHECK(Scenario::from_name("uvm", kSpec).name() == "uvm");
  CHECK_THROWS_AS(Scenario::from_name("nvlink", kSpec), ConfigError);
}

TEST_CASE("transfer_time") {
  const Scenario pcie = Scenario::pcie(kSpec), uvm = Scenario::uvm(kSpec), upm = Scenario::upm();
  CHECK(transfer_time(31.5e9, pcie) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(transfer_time(0.0, pcie) == 0.0);
  CHECK(transfer_time(1e12, upm) == 0.0);
  CHECK(transfer_time(1e9, pcie) / transfer_time(1e9, uvm) == doctest::Approx(450.0 / 31.5).epsilon(1e-12));
  oracle::Rng rng{21};
  for (int i = 0; i < 100; ++i) {
    const double a = rng.uniform() * 1e9, b = rng.uniform() * 1e9;
    CHECK(transfer_time(a + b, pcie) == doctest::Approx(transfer_time(a, pcie) + transfer_time(b, pcie)));
    CHECK(transfer_time(a, uvm) <= transfer_time(a, pcie));
  }
}

TEST_CASE("workload byte counts") {
  const IterationWorkload a = axpy_workload(128, 128);
  CHECK(a.h2d_bytes == 131072);
  CHECK(a.d2h_bytes == 32768);
  CHECK(a.tiles == 16);
  CHECK(a.conversion_elements == 0);
  CHECK(a.tilize_calls + a.untilize_calls == 0);

  // 8x8 grid: 64 lowered rows of 32 -> 4096 B each way, plus the stencil tile.
  const IterationWorkload m = matmul_workload(8, 8, true, kSpec);
  CHECK(m.h2d_bytes == 4096 + 2048);
  CHECK(m.d2h_bytes == 4096);
  CHECK(matmul_workload(8, 8, false, kSpec).h2d_bytes == 4096);
  CHECK(m.tilize_calls == 1);
  CHECK(m.untilize_calls == 1);

  // Lowered transfer is 32x the grid for large N.
  const IterationWorkload big = matmul_workload(1024, 1024, false, kSpec);
  CHECK(big.h2d_bytes == 32ull * 1024 * 1024 * 2);
  CHECK(axpy_buffer_elements(33, 33) == 2048);
  CHECK(matmul_lowered_rows(3, 3) == 32);
}

TEST_CASE("end_to_end structure") {
  const Scenario pcie = Scenario::pcie(kSpec);
  for (Method m : {Method::Axpy, Method::Matmul}) {
    const PhaseBreakdown b = end_to_end({m, 256, 256, 20}, kSpec, pcie);
    const PhaseTotals t = b.totals();
    CHECK(t.init_s == kSpec.init_time_s);
    CHECK(b.iterations.size() == 20);
    double sum = t.init_s;
    for (const auto& it : b.iterations) sum += it.total_s();
    CHECK(t.total_s() == doctest::Approx(sum).epsilon(1e-12));
    CHECK(t.total_s() == doctest::Approx(t.init_s + t.cpu_preprocess_s + t.h2d_s + t.kernel_s + t.d2h_s));

    // Init does not scale with iterations.
    CHECK(model(m, 256, 1, pcie).init_s == model(m, 256, 100, pcie).init_s);
    const PhaseTotals zero = model(m, 256, 0, pcie);
    CHECK(zero.total_s() == kSpec.init_time_s);
  }
  // Only the first MatMul iteration uploads the stencil.
  const PhaseBreakdown b = end_to_end({Method::Matmul, 64, 64, 3}, kSpec, pcie);
  CHECK(b.iterations[0].h2d_bytes == b.iterations[1].h2d_bytes + 2048);
  CHECK(b.iterations[1] == b.iterations[2]);

  const PhaseBreakdown cpu = end_to_end({Method::Cpu, 256, 256, 7}, kSpec, pcie);
  CHECK_FALSE(cpu.uses_device);
  CHECK(cpu.totals().init_s == 0.0);
  CHECK(cpu.total_s() == doctest::Approx(cpu_baseline_time(256, 256, 7, kSpec)));
}

TEST_CASE("scenario ordering and UVM transfer ratio") {
  for (Method m : {Method::Axpy, Method::Matmul}) {
    for (std::size_t n : {128u, 1024u, 4096u}) {
      const PhaseTotals p = model(m, n, 100, Scenario::pcie(kSpec));
      const PhaseTotals u = model(m, n, 100, Scenario::uvm(kSpec));
      const PhaseTotals z = model(m, n, 100, Scenario::upm());
      CHECK(p.total_s() >= u.total_s());
      CHECK(u.total_s() >= z.total_s());
      CHECK(u.h2d_s / p.h2d_s == doctest::Approx(31.5 / 450.0).epsilon(1e-12));
      CHECK(u.d2h_s / p.d2h_s == doctest::Approx(31.5 / 450.0).epsilon(1e-12));
      CHECK(z.h2d_s == 0.0);
      CHECK(z.d2h_s == 0.0);
      CHECK(z.conversion_s == 0.0);
      CHECK(z.kernel_s == p.kernel_s);
    }
  }
}

TEST_CASE("device capacity") {
  CHECK_THROWS_AS(check_capacity(Method::Matmul, 16384, 16384, kSpec), CapacityError);
  CHECK_THROWS_AS(end_to_end({Method::Matmul, 16384, 16384, 1}, kSpec, Scenario::pcie(kSpec)), CapacityError);
  CHECK_NOTHROW(check_capacity(Method::Matmul, 8192, 8192, kSpec));
  CHECK_NOTHROW(check_capacity(Method::Axpy, 30720, 30720, kSpec));
  CHECK_NOTHROW(check_capacity(Method::Cpu, 100000, 100000, kSpec));
  CHECK(device_footprint_bytes(Method::Axpy, 32, 32) == 5 * 2048);
  CHECK(device_footprint_bytes(Method::Matmul, 32, 32) == 2 * 32 * 32 * 32 * 2 + 2048);
}

TEST_CASE("energy") {
  PhaseBreakdown b;
  b.iterations.resize(1);
  b.iterations[0].kernel_s = 1.0;
  const EnergyReport k = energy(b, kSpec);
  CHECK(k.device_j == doctest::Approx(22.0));
  CHECK(k.host_j == 0.0);

  CHECK(energy(PhaseBreakdown{}, kSpec).total_j == 0.0);

  PhaseBreakdown h;
  h.init_s = 2.0;
  h.iterations.resize(1);
  h.iterations[0].cpu_preprocess_s = 1.0;
  h.iterations[0].h2d_s = 0.5;
  const EnergyReport e = energy(h, kSpec);
  CHECK(e.device_j == doctest::Approx(3.5 * 11.0));
  CHECK(e.host_j == doctest::Approx(1.5 * 170.0));
  CHECK(e.total_j == doctest::Approx(e.init_j + e.cpu_preprocess_j + e.h2d_j + e.kernel_j + e.d2h_j));

  h.uses_device = false;
  CHECK(energy(h, kSpec).device_j == 0.0);

  // Energy grows with iterations and decomposes over them.
  const Scenario pcie = Scenario::pcie(kSpec);
  double prev = 0.0;
  for (std::size_t it : {1u, 10u, 100u}) {
    const double j = energy(end_to_end({Method::Axpy, 512, 512, it}, kSpec, pcie), kSpec).total_j;
    CHECK(j > prev);
    prev = j;
  }
  const EnergyReport e1 = energy(end_to_end({Method::Axpy, 512, 512, 1}, kSpec, pcie), kSpec);
  const EnergyReport e10 = energy(end_to_end({Method::Axpy, 512, 512, 10}, kSpec, pcie), kSpec);
  CHECK(e10.total_j - e10.init_j == doctest::Approx(10 * (e1.total_j - e1.init_j)).epsilon(1e-12));
}

TEST_CASE("cpu baseline scales linearly") {
  CHECK(cpu_baseline_time(1000, 1000, 10, kSpec) ==
        doctest::Approx(10 * cpu_baseline_time(1000, 1000, 1, kSpec)).epsilon(1e-15));
  CHECK(cpu_baseline_time(2000, 1000, 1, kSpec) ==
        doctest::Approx(2 * cpu_baseline_time(1000, 1000, 1, kSpec)).epsilon(1e-15));
}

TEST_CASE("calibration reproduces the shipped machine") {
  const Calibration c = calibrate();
  CHECK(rel(c.spec.tile_cycles_math, kSpec.tile_cycles_math) < 1e-12);
  CHECK(rel(c.spec.tile_cycles_unpack, kSpec.tile_cycles_unpack) < 1e-12);
  CHECK(rel(c.spec.tile_cycles_pack, kSpec.tile_cycles_pack) < 1e-12);
  CHECK(rel(c.spec.matmul_tile_ops, kSpec.matmul_tile_ops) < 1e-12);
  CHECK(rel(c.spec.tilize_throughput, kSpec.tilize_throughput) < 1e-12);
  CHECK(rel(c.spec.cpu_extract_throughput, kSpec.cpu_extract_throughput) < 1e-12);
  CHECK(rel(c.spec.cpu_stencil_throughput, kSpec.cpu_stencil_throughput) < 1e-12);
  CHECK_FALSE(c.rows.empty());

  // Fit does not depend on the starting guess of fitted fields.
  MachineSpec odd;
  odd.tile_cycles_math = 7;
  odd.tilize_throughput = 3e5;
  odd.cpu_extract_throughput = 1e13;
  odd.matmul_tile_ops = 40;
  const Calibration c2 = calibrate(odd);
  CHECK(rel(c2.spec.tilize_throughput, kSpec.tilize_throughput) < 1e-9);
  CHECK(rel(c2.spec.matmul_tile_ops, kSpec.matmul_tile_ops) < 1e-9);

  // Anchor shares hold exactly under the fitted machine.
  const PhaseTotals a = model(Method::Axpy, 1024, 1000, Scenario::pcie(kSpec));
  const PhaseTotals m = model(Method::Matmul, 1024, 1000, Scenario::pcie(kSpec));
  CHECK(a.cpu_preprocess_s / a.non_init_s() == doctest::Approx(kAxpyCpuShare).epsilon(1e-9));
  CHECK(m.cpu_preprocess_s / m.non_init_s() == doctest::Approx(kMatmulCpuShare).epsilon(1e-9));
}

TEST_CASE("machine json") {
  const MachineSpec round = machine_from_json(machine_to_json(kSpec));
  CHECK(round.tile_cycles_math == kSpec.tile_cycles_math);
  CHECK(round.cpu_stencil_throughput == kSpec.cpu_stencil_throughput);

  const MachineSpec partial = machine_from_json(R"({"num_cores": 8})");
  CHECK(partial.num_cores == 8);
  CHECK(partial.clock_hz == kSpec.clock_hz);

  CHECK_THROWS_AS(machine_from_json(R"({"num_corez": 8})"), ConfigError);
  CHECK_THROWS_AS(machine_from_json(R"({"num_cores": "many"})"), ConfigError);
  CHECK_THROWS_AS(machine_from_json(R"({"num_cores": 0})"), ConfigError);
  CHECK_THROWS_AS(machine_from_json(R"({"num_cores": 2.5})"), ConfigError);
  CHECK_THROWS_AS(machine_from_json("[1,2]"), ConfigError);
  CHECK_THROWS_AS(machine_from_json("{not json"), ConfigError);
  CHECK_THROWS_AS(load_machine("/nonexistent/machine.json"), IoError);
}

TEST_CASE("anchor configurations") {
  const Scenario pcie = Scenario::pcie(kSpec);
  const PhaseBreakdown b = end_to_end({Method::Axpy, 1024, 1024, 1000}, kSpec, pcie);
  CHECK(b.total_s() - 1000 * b.iterations[0].total_s() == doctest::Approx(kSpec.init_time_s).epsilon(1e-9));
  const double k = b.totals().kernel_s;
  CHECK(k / 0.124 <= 3.0);
  CHECK(0.124 / k <= 3.0);

  CHECK(cpu_baseline_time(1024, 1024, 0, kSpec) == 0.0);
  const double ratio = cpu_baseline_time(1024, 1024, 1000, kSpec) / b.total_s();
  CHECK(std::fabs(ratio - 1.0 / 3.0) <= 0.1 / 3.0);
}
