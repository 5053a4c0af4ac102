#include "rydmw/spectrum.hpp"

#include "rydmw/errors.hpp"
#include "rydmw/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rydmw {

std::vector<double> GridSpec::values() const {
  if (points < 2) throw std::invalid_argument("grid needs at least two points");
  if (!(start < stop)) throw std::invalid_argument("grid start must be below stop");
  const double h = (stop - start) / double(points - 1);
  std::vector<double> v(points);
  // Fill each half from its own endpoint so symmetric spans mirror exactly.
  for (std::size_t i = 0; i < points; ++i)
    v[i] = (2 * i < points - 1) ? start + h * double(i) : stop - h * double(points - 1 - i);
  return v;
}

void Spectrum::validate() const {
  if (grid.size() != transmission.size()) throw std::invalid_argument("grid/transmission size mismatch");
  if (grid.size() < 2) throw std::invalid_argument("spectrum needs at least two points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || !std::isfinite(transmission[i]))
      throw std::invalid_argument("non-finite spectrum value");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("grid must be strictly ascending");
    if (transmission[i] < 0.0) throw std::invalid_argument("negative transmission");
  }
  if (meta.params) {
    const double sigma = meta.noise ? meta.noise->additive_rms : 0.0;
    const double ceiling = 1.0 + 5.0 * sigma + 1e-12;
    for (double t : transmission)
      if (t > ceiling) throw std::invalid_argument("transmission above 1 + 5 sigma");
  }
}

double transmit(const SystemParams& p, double delta) {
  return std::exp(-p.od * p.gamma2 * normalized_coherence(p, delta).imag());
}

std::array<double, 3> resonance_factors(const SystemParams& p, const PoleDecomposition& dec, double delta) {
  // (OD Gamma / 2) = OD gamma2
  std::array<double, 3> r;
  for (int i = 0; i < 3; ++i)
    r[i] = std::exp(-p.od * p.gamma2 * (dec.residues[i] / (delta - dec.poles[i])).imag());
  return r;
}

std::array<double, 3> resonance_factors(const SystemParams& p, double delta) {
  return resonance_factors(p, decompose(p), delta);
}

Spectrum synthesize(const SystemParams& p, std::span<const double> grid,
                    const std::optional<NoiseModel>& noise) {
  p.validate_for_synthesis();
  if (noise) noise->validate();
  Spectrum s;
  s.grid.assign(grid.begin(), grid.end());
  s.transmission.resize(grid.size());
  kernels::transmission(p, s.grid, s.transmission, noise ? &*noise : nullptr);
  s.meta.params = p;
  s.meta.noise = noise;
  s.validate();
  return s;
}

Spectrum synthesize(const SystemParams& p, const GridSpec& grid, const std::optional<NoiseModel>& noise) {
  const std::vector<double> g = grid.values();
  return synthesize(p, std::span<const double>(g), noise);
}

double transmission_difference(const Spectrum& with_mw, const Spectrum& without_mw) {
  if (with_mw.grid != without_mw.grid) throw std::invalid_argument("spectra are on different grids");
  with_mw.validate();
  without_mw.validate();
  const auto it = std::min_element(without_mw.transmission.begin(), without_mw.transmission.end());
  const auto i = std::size_t(it - without_mw.transmission.begin());
  return 100.0 * (with_mw.transmission[i] - without_mw.transmission[i]);
}

void write_csv(const Spectrum& s, std::ostream& out) {
  out << "delta_hz,transmission\n";
  char buf[96];
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", angular_to_hz(s.grid[i]), s.transmission[i]);
    out << buf;
  }
}

namespace {

double parse_number(std::string_view text, std::size_t line) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ParseError("not a number: '" + std::string(text) + "'", line);
  return v;
}

}  // namespace

Spectrum read_csv(std::istream& in) {
  Spectrum s;
  std::string row;
  std::size_t line = 0;
  if (!std::getline(in, row)) throw ParseError("empty spectrum file", 1);
  ++line;
  if (!row.empty() && row.back() == '\r') row.pop_back();
  if (row != "delta_hz,transmission") throw ParseError("expected header 'delta_hz,transmission'", line);

  while (std::getline(in, row)) {
    ++line;
    if (row.empty() || row == "\r") continue;
    const std::string_view view(row);
    const auto comma = view.find(',');
    if (comma == std::string_view::npos || view.find(',', comma + 1) != std::string_view::npos)
      throw ParseError("expected exactly two columns", line);
    s.grid.push_back(hz_to_angular(parse_number(view.substr(0, comma), line)));
    s.transmission.push_back(parse_number(view.substr(comma + 1), line));
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
  return s;
}

nlohmann::json meta_to_json(const SpectrumMeta& meta) {
  nlohmann::json j = nlohmann::json::object();
  if (meta.params) j["params"] = *meta.params;
  if (meta.noise)
    j["noise"] = {{"additive_rms", meta.noise->additive_rms},
                  {"two_photon_jitter_hz", angular_to_hz(meta.noise->two_photon_jitter)},
                  {"seed", meta.noise->seed}};
  return j;
}

SpectrumMeta meta_from_json(const nlohmann::json& j) {
  SpectrumMeta meta;
  if (j.contains("params")) meta.params = j.at("params").get<SystemParams>();
  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    NoiseModel noise;
    noise.additive_rms = n.value("additive_rms", 0.0);
    noise.two_photon_jitter = hz_to_angular(n.value("two_photon_jitter_hz", 0.0));
    noise.seed = n.value("seed", std::uint64_t{0});
    noise.validate();
    meta.noise = noise;
  }
  return meta;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  return p.replace_extension(".json");
}

void save_spectrum(const Spectrum& s, const std::filesystem::path& csv) {
  {
    std::ofstream out(csv, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + csv.string());
    write_csv(s, out);
  }
  std::ofstream meta(sidecar_path(csv), std::ios::binary);
  if (!meta) throw std::runtime_error("cannot write " + sidecar_path(csv).string());
  meta << meta_to_json(s.meta).dump(2) << '\n';
}

Spectrum load_spectrum(const std::filesystem::path& csv) {
  std::ifstream in(csv, std::ios::binary);
  if (!in) throw ParseError("cannot open " + csv.string(), 0);
  Spectrum s = read_csv(in);
  const auto side = sidecar_path(csv);
  if (side != csv && std::filesystem::exists(side)) {
    std::ifstream m(side);
    try {
      s.meta = meta_from_json(nlohmann::json::parse(m));
    } catch (const std::exception& e) {
      throw ParseError("bad sidecar " + side.string() + ": " + e.what(), 0);
    }
  }
  return s;
}

}  // namespace rydmw
