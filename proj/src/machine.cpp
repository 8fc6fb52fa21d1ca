#include "tilestencil/machine.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "tilestencil/errors.hpp"

namespace tilestencil {

namespace {

using Field = std::pair<const char*, double MachineSpec::*>;

constexpr Field kFields[] = {
    {"num_cores", &MachineSpec::num_cores},
    {"clock_hz", &MachineSpec::clock_hz},
    {"dram_bw", &MachineSpec::dram_bw},
    {"dram_capacity_bytes", &MachineSpec::dram_capacity_bytes},
    {"sram_per_core_bytes", &MachineSpec::sram_per_core_bytes},
    {"init_time_s", &MachineSpec::init_time_s},
    {"pcie_bw_per_dir", &MachineSpec::pcie_bw_per_dir},
    {"uvm_bw_per_dir", &MachineSpec::uvm_bw_per_dir},
    {"power_idle_w", &MachineSpec::power_idle_w},
    {"power_active_w", &MachineSpec::power_active_w},
    {"cpu_tdp_w", &MachineSpec::cpu_tdp_w},
    {"tile_cycles_unpack", &MachineSpec::tile_cycles_unpack},
    {"tile_cycles_math", &MachineSpec::tile_cycles_math},
    {"tile_cycles_pack", &MachineSpec::tile_cycles_pack},
    {"matmul_tile_ops", &MachineSpec::matmul_tile_ops},
    {"tilize_throughput", &MachineSpec::tilize_throughput},
    {"cpu_extract_throughput", &MachineSpec::cpu_extract_throughput},
    {"cpu_stencil_throughput", &MachineSpec::cpu_stencil_throughput},
};

}  // namespace

void MachineSpec::validate() const {
  for (const auto& [name, member] : kFields) {
    const double v = this->*member;
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw ConfigError(std::string("machine field '") + name + "' must be finite and > 0");
    }
  }
  if (num_cores != static_cast<double>(static_cast<long long>(num_cores))) {
    throw ConfigError("machine field 'num_cores' must be an integer");
  }
  if (power_active_w < power_idle_w) {
    throw ConfigError("power_active_w must be >= power_idle_w");
  }
}

MachineSpec machine_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("machine config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("machine config must be a JSON object");

  MachineSpec spec;
  for (const auto& [key, value] : j.items()) {
    const Field* found = nullptr;
    for (const auto& f : kFields) {
      if (key == f.first) found = &f;
    }
    if (found == nullptr) throw ConfigError("unknown machine config key '" + key + "'");
    if (!value.is_number()) throw ConfigError("machine config key '" + key + "' must be a number");
    spec.*(found->second) = value.get<double>();
  }
  spec.validate();
  return spec;
}

MachineSpec load_machine(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read machine config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return machine_from_json(ss.str());
}

std::string machine_to_json(const MachineSpec& spec) {
  nlohmann::ordered_json j;
  for (const auto& [name, member] : kFields) j[name] = spec.*member;
  return j.dump(2);
}

}  // namespace tilestencil
