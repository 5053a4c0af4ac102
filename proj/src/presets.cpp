#include "rydmw/presets.hpp"

#include <array>
#include <utility>

namespace rydmw {

namespace {

SystemParams resonant_coupling(double omega_c_mhz) {
  SystemParams p;
  p.omega_c = mhz(omega_c_mhz);
  p.delta_c = 0.0;
  p.od = 5.0;  // moderate depth; see README
  return p;
}

SystemParams far_detuned() {
  SystemParams p;
  p.omega_c = mhz(6.0);
  p.delta_c = mhz(100.0);
  p.od = 100.0;
  return p;
}

const std::array<std::pair<std::string_view, SystemParams>, 4>& table() {
  static const std::array<std::pair<std::string_view, SystemParams>, 4> t{{
      {"eia", far_detuned()},
      {"deit", resonant_coupling(2.0)},
      {"crossover", resonant_coupling(6.0)},
      {"dats", resonant_coupling(16.0)},
  }};
  return t;
}

}  // namespace

std::optional<SystemParams> preset(std::string_view name) {
  for (const auto& [key, p] : table())
    if (key == name) return p;
  return std::nullopt;
}

std::vector<std::string_view> preset_names() {
  std::vector<std::string_view> out;
  for (const auto& entry : table()) out.push_back(entry.first);
  return out;
}

}  // namespace rydmw
