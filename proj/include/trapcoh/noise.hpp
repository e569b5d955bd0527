#ifndef TRAPCOH_NOISE_HPP_
#define TRAPCOH_NOISE_HPP_

// One-sided power spectral densities of trap noise. Arguments are angular
// frequencies in rad/s; levels are per Hz (1/Hz for fractional trap depth,
// m^2/Hz for beam pointing).

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace trapcoh {

enum class NoiseKind { white, lorentzian, one_over_f, tabulated };
enum class NoiseFlavor { fractional_depth, pointing };

struct NoiseKnot {
  double omega;  // rad/s
  double psd;
};

struct NoiseSpectrum {
  NoiseKind kind = NoiseKind::white;
  NoiseFlavor flavor = NoiseFlavor::fractional_depth;
  double level = 0.0;
  double gamma = 0.0;      // lorentzian half width, rad/s
  double omega0 = 0.0;     // lorentzian center, rad/s
  double omega_ref = 0.0;  // 1/f reference frequency, rad/s
  std::vector<NoiseKnot> table;

  static NoiseSpectrum white(double level, NoiseFlavor flavor = NoiseFlavor::fractional_depth);
  static NoiseSpectrum lorentzian(double level, double gamma, double omega0,
                                  NoiseFlavor flavor = NoiseFlavor::fractional_depth);
  static NoiseSpectrum one_over_f(double level, double omega_ref,
                                  NoiseFlavor flavor = NoiseFlavor::fractional_depth);
  static NoiseSpectrum tabulated(std::vector<NoiseKnot> table,
                                 NoiseFlavor flavor = NoiseFlavor::fractional_depth);
};

/// S(omega). Tabulated spectra interpolate linearly in (log omega, log S);
/// segments touching a zero knot fall back to linear interpolation.
/// Throws SpectrumRangeError outside a table or at omega = 0 for 1/f.
double evaluate(const NoiseSpectrum& s, double omega);

/// White fractional-depth spectrum from a relative intensity noise figure.
NoiseSpectrum rin_to_fractional_depth(double rin_dB_per_Hz);

/// Reads a two-column CSV. The header names the frequency column either
/// `omega_rad_s` or `frequency_hz` (converted to rad/s); the second column
/// holds S. Lines starting with '#' are ignored.
NoiseSpectrum load_tabulated_csv(const std::filesystem::path& path,
                                 NoiseFlavor flavor = NoiseFlavor::fractional_depth);

std::string to_string(NoiseKind kind);
std::string to_string(NoiseFlavor flavor);

}  // namespace trapcoh

#endif  // TRAPCOH_NOISE_HPP_
