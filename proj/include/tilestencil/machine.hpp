#pragma once

#include <filesystem>
#include <string>

namespace tilestencil {

// Host + accelerator description. Defaults describe a Wormhole n150d card
// on a PCIe Gen4 x16 host with a dual-socket EPYC 7301. The throughput and
// cycle fields are fitted by `calibrate()`; see docs/calibration.md.
struct MachineSpec {
  // Device.
  double num_cores = 64;  // usable Tensix cores
  double clock_hz = 1.0e9;
  double dram_bw = 288.0e9;                     // B/s
  double dram_capacity_bytes = 12884901888.0;   // 12 GiB GDDR6
  double sram_per_core_bytes = 1572864.0;       // 1.5 MiB
  double init_time_s = 1.0;

  // Interconnect, bytes/s per direction.
  double pcie_bw_per_dir = 31.5e9;
  double uvm_bw_per_dir = 450.0e9;

  // Power.
  double power_idle_w = 11.0;
  double power_active_w = 22.0;
  double cpu_tdp_w = 170.0;

  // Calibrated. Cycle counts are per tile per eltwise op, per pipeline stage.
  double tile_cycles_unpack = 1169.5054729198555;
  double tile_cycles_math = 1559.3406305598073;
  double tile_cycles_pack = 935.6043783358843;
  double matmul_tile_ops = 1.8755937153214326;  // eltwise-op equivalents per tile matmul
  double tilize_throughput = 616933163.767303;          // elements/s
  double cpu_extract_throughput = 54931528478.69323;   // elements/s
  double cpu_stencil_throughput = 2084596889.5314786;  // cell updates/s

  // Throws ConfigError if any field is non-positive or idle > active power.
  void validate() const;

  friend bool operator==(const MachineSpec&, const MachineSpec&) = default;
};

// JSON object with any subset of MachineSpec field names. Unknown keys and
// non-numeric values raise ConfigError.
MachineSpec machine_from_json(const std::string& text);
MachineSpec load_machine(const std::filesystem::path& path);
std::string machine_to_json(const MachineSpec& spec);

}  // namespace tilestencil
