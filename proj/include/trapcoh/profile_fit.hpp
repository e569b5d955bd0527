#ifndef TRAPCOH_PROFILE_FIT_HPP_
#define TRAPCOH_PROFILE_FIT_HPP_

// Least-squares fit of 1-D intensity cuts through a hollow LG0l beam:
//   f(x) = A u^l exp(-u) + B,   u = 2 (x - c)^2 / w^2.

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <vector>

namespace trapcoh {

struct IntensityCut {
  std::vector<double> positions;  // strictly increasing
  std::vector<double> values;
  std::vector<double> sigma;      // optional per-sample uncertainty, empty if absent

  void validate() const;
};

struct FitResult {
  double w = 0.0;
  double amplitude = 0.0;
  double center = 0.0;
  double background = 0.0;
  double rms_residual = 0.0;  // RMS residual over the data's peak-to-peak range
  Eigen::Matrix4d covariance = Eigen::Matrix4d::Zero();  // order: w, amplitude, center, background
  int evaluations = 0;

  double w_uncertainty() const;
};

double lg_cut_model(const FitResult& params, int oam, double x);

/// Relative RMS residual of `params` against `data` (same normalization as
/// FitResult::rms_residual).
double cut_residual(const IntensityCut& data, const FitResult& params, int oam);

/// d f / d (w, amplitude, center, background) at every sample.
Eigen::Matrix<double, Eigen::Dynamic, 4> lg_cut_jacobian(const IntensityCut& data,
                                                         const FitResult& params, int oam);

/// Starting point from the two brightest lobes. Throws InsufficientStructure
/// when two separated maxima cannot be found.
FitResult initial_guess(const IntensityCut& data, int oam);

/// Levenberg-Marquardt fit of (w, amplitude, center, background).
FitResult fit_lg_cut(const IntensityCut& data, int oam, std::optional<FitResult> init = std::nullopt);

struct SyntheticCutSpec {
  int oam = 1;
  double w = 4e-6;
  double amplitude = 1.0;
  double center = 0.0;
  double background = 0.0;
  double half_width = 12e-6;
  int samples = 201;
  double noise = 0.0;  // Gaussian sigma relative to the peak height
  std::uint64_t seed = 1;
};

/// Samples the model on a uniform grid, optionally with seeded Gaussian noise.
IntensityCut synthesize_lg_cut(const SyntheticCutSpec& spec);

}  // namespace trapcoh

#endif  // TRAPCOH_PROFILE_FIT_HPP_
