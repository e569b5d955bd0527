#include "trapcoh/decoherence.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "trapcoh/constants.hpp"
#include "trapcoh/error.hpp"
#include "trapcoh/transition_sums.hpp"

namespace trapcoh {

using constants::boltzmann;
using constants::hbar;
using constants::pi;

double PowerLawTrap::lambda(Axis axis) const {
  return V_c / std::pow(a[static_cast<std::size_t>(axis)], 2 * l);
}

void PowerLawTrap::validate() const {
  if (l < 1) throw ConfigError("trap order must be >= 1");
  if (!(V_c > 0.0)) throw ConfigError("characteristic potential V_c must be positive");
  if (!(M > 0.0)) throw ConfigError("atom mass must be positive");
  for (double size : a)
    if (!(size > 0.0)) throw ConfigError("characteristic sizes must be positive");
}

double aux_frequency(int l, double V_c, double a, double M) {
  if (l < 1 || !(V_c > 0.0) || !(a > 0.0) || !(M > 0.0))
    throw ConfigError("aux_frequency needs l >= 1 and positive V_c, a, M");
  const double exponent = 1.0 / (l + 1);
  return std::pow(4.0 * V_c / hbar, exponent) *
         std::pow(hbar / (2.0 * M * a * a), l * exponent);
}

double aux_frequency(const PowerLawTrap& trap, Axis axis) {
  trap.validate();
  return aux_frequency(trap.l, trap.V_c, trap.a[static_cast<std::size_t>(axis)], trap.M);
}

double frequency_ratio(double M, double a, double V0) {
  if (!(M > 0.0) || !(a > 0.0) || !(V0 > 0.0))
    throw ConfigError("frequency_ratio needs positive M, a, V0");
  return std::pow(hbar * hbar / (8.0 * M * a * a * V0), 1.0 / 6.0);
}

double rate_parametric(const TrapSpectrum<double>& spec, double omega_aux, Index n,
                       const NoiseSpectrum& s_lambda) {
  if (s_lambda.flavor != NoiseFlavor::fractional_depth)
    throw ConfigError("parametric rate needs a fractional-depth noise spectrum");
  const auto table = transition_table(spec, 2 * spec.l, n);
  return pi * omega_aux * omega_aux / 16.0 * weighted_sum(table, s_lambda, omega_aux);
}

double rate_pointing(const TrapSpectrum<double>& spec, double omega_aux, double M, Index n,
                     const NoiseSpectrum& s_x) {
  if (s_x.flavor != NoiseFlavor::pointing)
    throw ConfigError("pointing rate needs a pointing noise spectrum");
  if (!(M > 0.0)) throw ConfigError("atom mass must be positive");
  const auto table = transition_table(spec, 2 * spec.l - 1, n);
  const double l2 = double(spec.l) * spec.l;
  return pi / (2.0 * hbar) * M * std::pow(omega_aux, 3) * l2 *
         weighted_sum(table, s_x, omega_aux);
}

double threshold_ratio(double sum_l2, double sum_l1, int power) {
  if (!(sum_l2 > 0.0) || !(sum_l1 > 0.0)) throw ConfigError("threshold_ratio needs positive sums");
  if (power != 2 && power != 3) throw ConfigError("threshold power must be 2 or 3");
  return std::pow(sum_l1 / sum_l2, 1.0 / power);
}

double total_rate_3d(const std::array<AxisRates, 3>& per_axis) {
  double total = 0.0;
  for (const auto& r : per_axis) {
    if (r.R_lambda < 0.0 || r.R_x < 0.0) throw ConfigError("rates must be non-negative");
    total += r.R_lambda + r.R_x;
  }
  return total;
}

double var_des_signed(const DESParams& p, int l) {
  if (!(p.eta > 0.0)) throw ConfigError("eta must be positive");
  if (!(p.rel_power_var >= 0.0)) throw ConfigError("relative power variance must be >= 0");
  if (!(p.T >= 0.0)) throw ConfigError("temperature must be >= 0");
  if (l < 1) throw ConfigError("trap order must be >= 1");
  return p.eta * p.rel_power_var * (-p.V0_at_atom + boltzmann * p.T / (l + 1)) / hbar;
}

double var_des(const DESParams& p, int l) { return std::abs(var_des_signed(p, l)); }

double t2_star(double eta, double T) {
  if (!(eta > 0.0) || !(T > 0.0)) throw ConfigError("t2_star needs positive eta and T");
  return 0.97 * 2.0 * hbar / (eta * boltzmann * T);
}

double eta_from_t2_star(double t2, double T) {
  if (!(t2 > 0.0) || !(T > 0.0)) throw ConfigError("eta_from_t2_star needs positive T2* and T");
  return 0.97 * 2.0 * hbar / (t2 * boltzmann * T);
}

double coherence(const CoherenceModel& model, double t) {
  if (!(t >= 0.0)) throw ConfigError("coherence needs t >= 0");
  return std::exp(-model.var_des * model.var_des * t * t / 2.0 - model.R_total * t);
}

double coherence_time(const CoherenceModel& model) {
  if (model.var_des < 0.0 || model.R_total < 0.0)
    throw ConfigError("coherence model parameters must be non-negative");
  // Positive root of (var^2/2) t^2 + R t - 1 = 0, written without cancellation.
  const double a = model.var_des * model.var_des / 2.0;
  const double b = model.R_total;
  if (a == 0.0 && b == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 / (b + std::sqrt(b * b + 4.0 * a));
}

double thermal_phonon_number(double T, double omega) {
  if (!(T >= 0.0) || !(omega > 0.0))
    throw ConfigError("thermal_phonon_number needs T >= 0 and omega > 0");
  return boltzmann * T / (hbar * omega);
}

}  // namespace trapcoh
