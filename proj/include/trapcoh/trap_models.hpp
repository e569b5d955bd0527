#ifndef TRAPCOH_TRAP_MODELS_HPP_
#define TRAPCOH_TRAP_MODELS_HPP_

// Laguerre-Gaussian beams and the blue-detuned bottle trap formed by two
// crossed hollow beams.

#include <Eigen/Core>

#include <array>
#include <vector>

#include "trapcoh/decoherence.hpp"

namespace trapcoh {

struct LGBeam {
  int oam = 1;
  int p = 0;
  double w0 = 0.0;          // m
  double power = 0.0;       // W
  double wavelength = 0.0;  // m

  double rayleigh_range() const;
  double width(double z) const;
  void validate() const;
};

/// Two crossed copies of `beam` in the x-z plane at +-theta from z, with
/// orthogonal polarizations. `beam.power` is the total power, split equally
/// between the two arms. The potential is alpha_eff times the summed intensity.
struct BBTConfig {
  LGBeam beam;
  double half_angle_theta = 0.0;  // rad
  double alpha_eff = 0.0;         // J per (W/m^2)

  void validate() const;
};

struct TrapCharacterization {
  double V0 = 0.0;              // J
  std::array<double, 3> sizes{};  // a_x, a_y, a_z in m
  int l = 1;

  double lambda(Axis axis) const;
};

/// Intensity of a single LG beam at radius r and axial position z:
/// (P / (pi w^2)) C^2 (2r^2/w^2)^|l| exp(-2r^2/w^2) (L_p^|l|(2r^2/w^2))^2,
/// C^2 = 2 p! / (pi (|l| + p)!). The radial integral of this form is P / pi.
double lg_intensity(const LGBeam& beam, double r, double z);

/// Radius of the brightest ring at the waist.
double peak_radius(const LGBeam& beam);

/// max_r I_A / max_r I_B at the waist.
double barrier_height_ratio(const LGBeam& a, const LGBeam& b);

TrapCharacterization characterize_bbt(const BBTConfig& cfg);

struct BBTGrid {
  std::vector<double> potential;     // J
  std::vector<bool> outside_bounds;  // beyond the trap-bound ellipsoid
};

/// Potential at each point (rows are x, y, z in m).
BBTGrid bbt_potential_grid(const BBTConfig& cfg, const Eigen::Matrix<double, Eigen::Dynamic, 3>& points);
double bbt_potential(const BBTConfig& cfg, const Eigen::Vector3d& point);

struct AxisScan {
  std::vector<double> positions;  // m
  std::vector<double> potential;  // J
};

/// `samples` equally spaced points on [-half_width, half_width] along `axis`.
AxisScan axis_scan(const BBTConfig& cfg, Axis axis, double half_width, int samples);

struct PowerLawFit {
  double lambda = 0.0;
  double next_order = 0.0;  // coefficient of x^{2l+2}, zero for the pure model
  double relative_residual = 0.0;
};

/// Least-squares fit V(x) = lambda x^{2l} (+ mu x^{2l+2}). Needs at least 7
/// samples placed symmetrically about 0.
PowerLawFit extract_power_law(const std::vector<double>& x, const std::vector<double>& v, int l,
                              bool include_next_order = false);

/// Re-expresses a harmonic trap whose characteristic potential is
/// `potential_scale` times a reference potential: V0' = V0 / potential_scale and
/// a' = a / sqrt(potential_scale), leaving lambda = V0 / a^2 unchanged.
TrapCharacterization equivalent_trap(const TrapCharacterization& trap, double potential_scale);

PowerLawTrap to_power_law_trap(const TrapCharacterization& trap, double mass);

}  // namespace trapcoh

#endif  // TRAPCOH_TRAP_MODELS_HPP_
