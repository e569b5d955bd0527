#ifndef TRAPCOH_DECOHERENCE_HPP_
#define TRAPCOH_DECOHERENCE_HPP_

// Phonon-jumping rates, differential-energy-shift dephasing and the combined
// coherence envelope C(t) = exp(-var_des^2 t^2 / 2 - R t).

#include <array>

#include "trapcoh/noise.hpp"
#include "trapcoh/quantum_core.hpp"

namespace trapcoh {

enum class Axis { x = 0, y = 1, z = 2 };

/// V(x) = lambda x^{2l} per axis, with lambda = V_c / a^{2l}.
struct PowerLawTrap {
  int l = 1;
  double V_c = 0.0;                    // J
  std::array<double, 3> a{};           // m
  double M = 0.0;                      // kg

  double lambda(Axis axis) const;
  void validate() const;
};

struct DESParams {
  double eta = 0.0;
  double V0_at_atom = 0.0;     // J
  double rel_power_var = 0.0;  // Var(P) / mean(P), dimensionless
  double T = 0.0;              // K
};

struct CoherenceModel {
  double var_des = 0.0;  // rad/s
  double R_total = 0.0;  // 1/s
};

struct AxisRates {
  double R_lambda = 0.0;
  double R_x = 0.0;
};

/// omega = (4 V_c / hbar)^{1/(l+1)} (hbar / (2 M a^2))^{l/(l+1)}.
double aux_frequency(const PowerLawTrap& trap, Axis axis);
double aux_frequency(int l, double V_c, double a, double M);

/// omega^{l=2} / omega^{l=1} at equal V0 and a: (hbar^2 / (8 M a^2 V0))^{1/6}.
double frequency_ratio(double M, double a, double V0);

/// Parametric (intensity-noise) jumping rate out of state n, in 1/s.
double rate_parametric(const TrapSpectrum<double>& spec, double omega_aux, Index n,
                       const NoiseSpectrum& s_lambda);

/// Pointing-noise jumping rate out of state n, in 1/s.
double rate_pointing(const TrapSpectrum<double>& spec, double omega_aux, double M, Index n,
                     const NoiseSpectrum& s_x);

/// Ratio omega^{l=2}/omega^{l=1} below which the l=2 trap has the lower rate
/// under white noise: (sum_l1 / sum_l2)^{1/power}; power 2 for R_lambda, 3 for R_x.
double threshold_ratio(double sum_l2, double sum_l1, int power);

double total_rate_3d(const std::array<AxisRates, 3>& per_axis);

/// Signed differential-energy-shift variance term, rad/s. Vanishes at
/// V0_at_atom = k_B T / (l + 1).
double var_des_signed(const DESParams& p, int l);
/// Magnitude of var_des_signed; this is what enters the coherence envelope.
double var_des(const DESParams& p, int l);

/// Inhomogeneous dephasing time T2* = 0.97 * 2 hbar / (eta k_B T).
double t2_star(double eta, double T);
/// Inverse of t2_star for eta.
double eta_from_t2_star(double t2, double T);

double coherence(const CoherenceModel& model, double t);
/// Time at which C(t) = 1/e. Infinite when both decay terms vanish.
double coherence_time(const CoherenceModel& model);

/// <n> = k_B T / (hbar omega).
double thermal_phonon_number(double T, double omega);

}  // namespace trapcoh

#endif  // TRAPCOH_DECOHERENCE_HPP_
