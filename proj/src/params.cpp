#include "rydmw/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rydmw {

namespace {

void require_rate(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0)
    throw std::invalid_argument(std::string(name) + " must be finite and >= 0");
}

}  // namespace

void SystemParams::validate() const {
  require_rate(omega_p, "omega_p");
  require_rate(omega_c, "omega_c");
  require_rate(omega_mw, "omega_mw");
  require_rate(gamma2, "gamma2");
  require_rate(gamma3, "gamma3");
  require_rate(gamma4, "gamma4");
  require_rate(od, "od");
  if (!std::isfinite(delta_c) || !std::isfinite(delta_mw))
    throw std::invalid_argument("detunings must be finite");
  if (gamma2 <= 0.0) throw std::invalid_argument("gamma2 must be > 0");
}

void SystemParams::validate_for_synthesis() const {
  validate();
  if (omega_p <= 0.0) throw std::invalid_argument("omega_p must be > 0 to synthesize a spectrum");
}

void DipoleTransition::validate() const {
  if (!(dipole_moment > 0.0) || !std::isfinite(dipole_moment))
    throw std::invalid_argument("dipole_moment must be > 0");
}

double field_from_splitting(double delta_f_hz, double mu_ea0) {
  if (!(mu_ea0 > 0.0)) throw std::invalid_argument("dipole moment must be > 0");
  if (delta_f_hz < 0.0) throw std::invalid_argument("splitting must be >= 0");
  const double mu_si = mu_ea0 * codata::elementary_charge * codata::bohr_radius;
  return two_pi * codata::hbar * delta_f_hz / mu_si;
}

double splitting_from_field(double field_v_per_m, double mu_ea0) {
  if (!(mu_ea0 > 0.0)) throw std::invalid_argument("dipole moment must be > 0");
  const double mu_si = mu_ea0 * codata::elementary_charge * codata::bohr_radius;
  return field_v_per_m * mu_si / (two_pi * codata::hbar);
}

void to_json(nlohmann::json& j, const SystemParams& p) {
  j = nlohmann::json{
      {"omega_p_hz", angular_to_hz(p.omega_p)},   {"omega_c_hz", angular_to_hz(p.omega_c)},
      {"omega_mw_hz", angular_to_hz(p.omega_mw)}, {"delta_c_hz", angular_to_hz(p.delta_c)},
      {"delta_mw_hz", angular_to_hz(p.delta_mw)}, {"gamma2_hz", angular_to_hz(p.gamma2)},
      {"gamma3_hz", angular_to_hz(p.gamma3)},     {"gamma4_hz", angular_to_hz(p.gamma4)},
      {"od", p.od},
  };
}

void from_json(const nlohmann::json& j, SystemParams& p) {
  // Missing keys keep their defaults so partial parameter files work.
  auto hz = [&](const char* key, double& field) {
    if (j.contains(key)) field = hz_to_angular(j.at(key).get<double>());
  };
  hz("omega_p_hz", p.omega_p);
  hz("omega_c_hz", p.omega_c);
  hz("omega_mw_hz", p.omega_mw);
  hz("delta_c_hz", p.delta_c);
  hz("delta_mw_hz", p.delta_mw);
  hz("gamma2_hz", p.gamma2);
  hz("gamma3_hz", p.gamma3);
  hz("gamma4_hz", p.gamma4);
  if (j.contains("od")) p.od = j.at("od").get<double>();
  p.validate();
}

}  // namespace rydmw
