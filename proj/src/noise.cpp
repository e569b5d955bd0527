#include "trapcoh/noise.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "trapcoh/constants.hpp"
#include "trapcoh/error.hpp"

namespace trapcoh {

namespace {

void require_non_negative(double level) {
  if (!(level >= 0.0) || !std::isfinite(level))
    throw ConfigError("noise level must be finite and non-negative");
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

NoiseSpectrum NoiseSpectrum::white(double level, NoiseFlavor flavor) {
  require_non_negative(level);
  NoiseSpectrum s;
  s.kind = NoiseKind::white;
  s.flavor = flavor;
  s.level = level;
  return s;
}

NoiseSpectrum NoiseSpectrum::lorentzian(double level, double gamma, double omega0,
                                        NoiseFlavor flavor) {
  require_non_negative(level);
  if (!(gamma > 0.0)) throw ConfigError("lorentzian width must be positive");
  if (!(omega0 >= 0.0)) throw ConfigError("lorentzian center must be non-negative");
  NoiseSpectrum s;
  s.kind = NoiseKind::lorentzian;
  s.flavor = flavor;
  s.level = level;
  s.gamma = gamma;
  s.omega0 = omega0;
  return s;
}

NoiseSpectrum NoiseSpectrum::one_over_f(double level, double omega_ref, NoiseFlavor flavor) {
  require_non_negative(level);
  if (!(omega_ref > 0.0)) throw ConfigError("1/f reference frequency must be positive");
  NoiseSpectrum s;
  s.kind = NoiseKind::one_over_f;
  s.flavor = flavor;
  s.level = level;
  s.omega_ref = omega_ref;
  return s;
}

NoiseSpectrum NoiseSpectrum::tabulated(std::vector<NoiseKnot> table, NoiseFlavor flavor) {
  if (table.size() < 2) throw ConfigError("tabulated spectrum needs at least two points");
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!(table[i].omega > 0.0)) throw ConfigError("tabulated frequencies must be positive");
    require_non_negative(table[i].psd);
    if (i > 0 && !(table[i].omega > table[i - 1].omega))
      throw ConfigError("tabulated frequencies must be strictly increasing");
  }
  NoiseSpectrum s;
  s.kind = NoiseKind::tabulated;
  s.flavor = flavor;
  s.table = std::move(table);
  return s;
}

double evaluate(const NoiseSpectrum& s, double omega) {
  if (!(omega >= 0.0)) throw SpectrumRangeError("noise spectrum queried at negative frequency", omega);
  switch (s.kind) {
    case NoiseKind::white:
      return s.level;
    case NoiseKind::lorentzian: {
      const double g2 = s.gamma * s.gamma;
      const double d = omega - s.omega0;
      return s.level * g2 / (g2 + d * d);
    }
    case NoiseKind::one_over_f:
      if (omega == 0.0) throw SpectrumRangeError("1/f spectrum is singular at omega = 0", omega);
      return s.level * s.omega_ref / omega;
    case NoiseKind::tabulated: {
      const auto& t = s.table;
      if (omega < t.front().omega || omega > t.back().omega) {
        std::ostringstream msg;
        msg << "omega = " << omega << " rad/s is outside the tabulated range [" << t.front().omega
            << ", " << t.back().omega << "]";
        throw SpectrumRangeError(msg.str(), omega);
      }
      const auto hi = std::lower_bound(t.begin(), t.end(), omega,
                                       [](const NoiseKnot& k, double w) { return k.omega < w; });
      if (hi->omega == omega) return hi->psd;
      const auto lo = hi - 1;
      if (lo->psd == 0.0 || hi->psd == 0.0) {
        const double f = (omega - lo->omega) / (hi->omega - lo->omega);
        return lo->psd + f * (hi->psd - lo->psd);
      }
      const double f = std::log(omega / lo->omega) / std::log(hi->omega / lo->omega);
      return std::exp(std::log(lo->psd) + f * std::log(hi->psd / lo->psd));
    }
  }
  return 0.0;
}

NoiseSpectrum rin_to_fractional_depth(double rin_dB_per_Hz) {
  if (!std::isfinite(rin_dB_per_Hz)) throw ConfigError("RIN must be finite");
  return NoiseSpectrum::white(std::pow(10.0, rin_dB_per_Hz / 10.0), NoiseFlavor::fractional_depth);
}

NoiseSpectrum load_tabulated_csv(const std::filesystem::path& path, NoiseFlavor flavor) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open spectrum file " + path.string());
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  double to_rad = 1.0;
  std::vector<NoiseKnot> knots;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected two columns");
    const std::string first = trim(line.substr(0, comma));
    const std::string second = trim(line.substr(comma + 1));
    if (!header_seen) {
      if (first == "omega_rad_s") {
        to_rad = 1.0;
      } else if (first == "frequency_hz") {
        to_rad = 2.0 * constants::pi;
      } else {
        throw IoError(path.string() + ":" + std::to_string(line_no) +
                      ": header must start with omega_rad_s or frequency_hz");
      }
      header_seen = true;
      continue;
    }
    try {
      std::size_t used = 0;
      const double w = std::stod(first, &used);
      if (used != first.size()) throw std::invalid_argument("trailing characters");
      const double v = std::stod(second, &used);
      if (used != second.size()) throw std::invalid_argument("trailing characters");
      knots.push_back({w * to_rad, v});
    } catch (const std::exception&) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": cannot parse '" + line + "'");
    }
  }
  if (!header_seen) throw IoError(path.string() + ": missing header line");
  return NoiseSpectrum::tabulated(std::move(knots), flavor);
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::white: return "white";
    case NoiseKind::lorentzian: return "lorentzian";
    case NoiseKind::one_over_f: return "one_over_f";
    case NoiseKind::tabulated: return "tabulated";
  }
  return "unknown";
}

std::string to_string(NoiseFlavor flavor) {
  return flavor == NoiseFlavor::fractional_depth ? "fractional_depth" : "pointing";
}

}  // namespace trapcoh
