#include "rydmw/presets.hpp"
#include "rydmw/sweeps.hpp"

#include <doctest.h>

#include <sstream>
#include <stdexcept>

using namespace rydmw;

namespace {

SweepConfig eia_sweep(std::vector<double> values_mhz) {
  SweepConfig c;
  c.base = *preset("eia");
  for (double v : values_mhz) c.values.push_back(mhz(v));
  return c;
}

}  // namespace

TEST_CASE("regime labels") {
  CHECK(classify(*preset("deit")) == Regime::DEIT);
  CHECK(classify(*preset("crossover")) == Regime::CROSSOVER);
  CHECK(classify(*preset("dats")) == Regime::DATS);
  CHECK(classify(*preset("eia")) == Regime::EIA_ATS);

  SystemParams p;
  p.omega_c = mhz(6.0);  // Omega_c = Gamma
  CHECK(classify(p) == Regime::CROSSOVER);
  p.omega_c = mhz(2.999);
  CHECK(classify(p) == Regime::DEIT);
  p.omega_c = mhz(12.001);
  CHECK(classify(p) == Regime::DATS);
  p.omega_c = mhz(6.0);
  p.delta_c = mhz(59.0);  // 10 x max(Omega_c, Gamma) = 60 MHz
  CHECK(classify(p) == Regime::CROSSOVER);
  p.delta_c = -mhz(60.0);
  CHECK(classify(p) == Regime::EIA_ATS);

  CHECK(to_string(Regime::EIA_ATS) == "EIA_ATS");
}

TEST_CASE("microwave power to Rabi frequency") {
  const double cal = mhz(1.0);
  CHECK(mw_power_to_rabi(0.0, cal) == doctest::Approx(cal));
  CHECK(mw_power_to_rabi(10.0 * std::log10(2.0), cal) / cal == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(mw_power_to_rabi(20.0, cal) / cal == doctest::Approx(10.0).epsilon(1e-12));
  CHECK_THROWS_AS(mw_power_to_rabi(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("axis names round trip") {
  for (auto a : {SweepAxis::OmegaMw, SweepAxis::MwPower, SweepAxis::Od, SweepAxis::OmegaC, SweepAxis::DeltaC})
    CHECK(parse_axis(to_string(a)) == a);
  CHECK_FALSE(parse_axis("temperature"));
}

TEST_CASE("sweep point parameters") {
  SweepConfig c = eia_sweep({});
  c.axis = SweepAxis::Od;
  CHECK(sweep_point_params(c, 42.0).od == 42.0);
  c.axis = SweepAxis::MwPower;
  c.mw_calibration = mhz(2.0);
  CHECK(sweep_point_params(c, 0.0).omega_mw == doctest::Approx(mhz(2.0)));
  c.axis = SweepAxis::DeltaC;
  CHECK(sweep_point_params(c, mhz(80.0)).delta_c == mhz(80.0));
}

TEST_CASE("EIA sweep: splitting proportional to Omega_mw") {
  SweepConfig c = eia_sweep({2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0});
  c.noise = NoiseModel{0.005, 0.0, 11};
  const SweepReport r = run_sweep(c);
  REQUIRE(r.points.size() == 9);
  for (const auto& pt : r.points) {
    CHECK(pt.error.empty());
    CHECK(pt.regime == Regime::EIA_ATS);
    REQUIRE(pt.deviation_true_pct);
    CHECK(std::abs(*pt.deviation_true_pct) < 1.0);
  }
  const double slope = rabi_slope(r, mhz(2.0), mhz(10.0));
  CHECK(slope >= 0.99);
  CHECK(slope <= 1.01);
}

TEST_CASE("sweep output does not depend on the thread count") {
  SweepConfig c = eia_sweep({2.0, 4.0, 6.0, 8.0});
  c.noise = NoiseModel{0.01, khz(10.0), 5};
  c.jobs = 1;
  const SweepReport serial = run_sweep(c);
  c.jobs = 3;
  const SweepReport parallel = run_sweep(c);
  CHECK(to_json(serial).dump() == to_json(parallel).dump());

  std::ostringstream a, b;
  write_csv(serial, a);
  write_csv(parallel, b);
  CHECK(a.str() == b.str());

  // distinct per-point noise
  CHECK(serial.points[0].result.delta_f_hz != serial.points[1].result.delta_f_hz);
}

TEST_CASE("sweep rejects bad input") {
  CHECK_THROWS_AS(run_sweep(eia_sweep({2.0, 4.0, 3.0})), std::invalid_argument);
  CHECK_THROWS_AS(run_sweep(eia_sweep({2.0, 2.0})), std::invalid_argument);
  CHECK_THROWS_AS(run_sweep(eia_sweep({})), std::invalid_argument);
  SweepConfig c = eia_sweep({2.0});
  c.jobs = 0;
  CHECK_THROWS_AS(run_sweep(c), std::invalid_argument);
  CHECK_NOTHROW(run_sweep(eia_sweep({4.0, 2.0})));
}

TEST_CASE("per-point failures are recorded") {
  SweepConfig c = eia_sweep({0.0, 5.0});
  const SweepReport r = run_sweep(c);
  CHECK_FALSE(r.points[0].error.empty());
  CHECK_FALSE(r.points[0].result.delta_f_hz);
  CHECK(r.points[1].error.empty());

  const nlohmann::json j = to_json(r);
  CHECK(j["points"][0]["error"].is_string());
  CHECK(j["points"][1]["error"].is_null());
  CHECK(j["axis"]["name"] == "omega-mw");
  CHECK(j["axis"]["unit"] == "Hz");
  CHECK(j["axis"]["values"][1].get<double>() == doctest::Approx(5e6));

  std::ostringstream csv;
  write_csv(r, csv);
  std::istringstream lines(csv.str());
  std::string header, row0, row1;
  std::getline(lines, header);
  std::getline(lines, row0);
  std::getline(lines, row1);
  const auto commas = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  CHECK(commas(header) == 12);
  CHECK(commas(row0) == 12);
  CHECK(commas(row1) == 12);
}

TEST_CASE("DEIT and DATS sweeps deviate") {
  for (const char* name : {"deit", "dats"}) {
    SweepConfig c;
    c.base = *preset(name);
    for (double v = 1.0; v <= 10.0; v += 1.0) c.values.push_back(mhz(v));
    const SweepReport r = run_sweep(c);
    double worst = 0.0;
    for (const auto& pt : r.points)
      if (pt.deviation_true_pct) worst = std::max(worst, std::abs(*pt.deviation_true_pct));
    MESSAGE(name << ": max |deviation| " << worst << " %");
    CHECK(worst > 5.0);
  }
}
