#include "trapcoh/trap_models.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "trapcoh/constants.hpp"
#include "trapcoh/error.hpp"

namespace trapcoh {

using constants::pi;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

// Golden-section search for the maximum of a unimodal f on [lo, hi].
template <typename F>
double golden_maximize(F&& f, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200; ++it) {
    if (hi - lo <= 1e-13 * std::max(std::abs(hi), std::abs(lo))) return 0.5 * (lo + hi);
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  throw NumericError("barrier maximization did not converge");
}

}  // namespace

double LGBeam::rayleigh_range() const { return pi * w0 * w0 / wavelength; }

double LGBeam::width(double z) const {
  const double zr = rayleigh_range();
  return w0 * std::sqrt(1.0 + (z / zr) * (z / zr));
}

void LGBeam::validate() const {
  if (!(w0 > 0.0)) throw ConfigError("beam waist must be positive");
  if (!(power >= 0.0)) throw ConfigError("beam power must be non-negative");
  if (!(wavelength > 0.0)) throw ConfigError("wavelength must be positive");
  if (p < 0) throw ConfigError("radial index p must be >= 0");
}

void BBTConfig::validate() const {
  beam.validate();
  if (!(half_angle_theta > 0.0 && half_angle_theta < pi / 4.0))
    throw ConfigError("half angle theta must lie in (0, pi/4)");
  if (!(alpha_eff > 0.0)) throw ConfigError("alpha_eff must be positive (blue detuning)");
}

double TrapCharacterization::lambda(Axis axis) const {
  return V0 / std::pow(sizes[static_cast<std::size_t>(axis)], 2 * l);
}

double lg_intensity(const LGBeam& beam, double r, double z) {
  const int l = std::abs(beam.oam);
  const double w = beam.width(z);
  const double u = 2.0 * r * r / (w * w);
  const double c2 = 2.0 * factorial(beam.p) / (pi * factorial(l + beam.p));
  double shape = std::pow(u, l) * std::exp(-u);
  if (beam.p > 0) {
    const double lag = std::assoc_laguerre(static_cast<unsigned>(beam.p), static_cast<unsigned>(l), u);
    shape *= lag * lag;
  }
  return beam.power / (pi * w * w) * c2 * shape;
}

double peak_radius(const LGBeam& beam) {
  beam.validate();
  const int l = std::abs(beam.oam);
  const auto f = [&](double r) { return lg_intensity(beam, r, 0.0); };
  const double r_max = 3.0 * beam.w0 * std::sqrt(l + 2.0 * beam.p + 1.0);
  constexpr int scan = 400;
  int best = 0;
  double best_value = -1.0;
  for (int i = 0; i <= scan; ++i) {
    const double v = f(r_max * i / scan);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  const double lo = r_max * std::max(best - 1, 0) / scan;
  const double hi = r_max * std::min(best + 1, scan) / scan;
  const double r = golden_maximize(f, lo, hi);
  if (!std::isfinite(r)) throw NumericError("barrier maximization produced a non-finite radius");
  return r;
}

double barrier_height_ratio(const LGBeam& a, const LGBeam& b) {
  const double peak_b = lg_intensity(b, peak_radius(b), 0.0);
  if (!(peak_b > 0.0)) throw NumericError("reference beam has zero peak intensity");
  return lg_intensity(a, peak_radius(a), 0.0) / peak_b;
}

TrapCharacterization characterize_bbt(const BBTConfig& cfg) {
  cfg.validate();
  const int oam = std::abs(cfg.beam.oam);
  const double w0 = cfg.beam.w0;
  const double theta = cfg.half_angle_theta;
  TrapCharacterization out;
  out.V0 = cfg.alpha_eff / pi * cfg.beam.power / (pi * w0 * w0);
  out.l = oam;
  double radial;
  if (oam == 1) {
    radial = w0 / 2.0;
  } else if (oam == 2) {
    radial = w0 / std::sqrt(2.0);
  } else {
    throw ConfigError("bottle trap supports oam 1 or 2, got " + std::to_string(cfg.beam.oam));
  }
  out.sizes = {radial / std::cos(theta), radial, radial / std::sin(theta)};
  return out;
}

double bbt_potential(const BBTConfig& cfg, const Eigen::Vector3d& point) {
  LGBeam arm = cfg.beam;
  arm.power = cfg.beam.power / 2.0;
  const double s = std::sin(cfg.half_angle_theta);
  const double c = std::cos(cfg.half_angle_theta);
  double intensity = 0.0;
  for (double sign : {1.0, -1.0}) {
    const Eigen::Vector3d dir(sign * s, 0.0, c);
    const double z_local = point.dot(dir);
    const double r2 = std::max(point.squaredNorm() - z_local * z_local, 0.0);
    intensity += lg_intensity(arm, std::sqrt(r2), z_local);
  }
  return cfg.alpha_eff * intensity;
}

BBTGrid bbt_potential_grid(const BBTConfig& cfg,
                           const Eigen::Matrix<double, Eigen::Dynamic, 3>& points) {
  const auto trap = characterize_bbt(cfg);
  const Eigen::Array3d sizes(trap.sizes[0], trap.sizes[1], trap.sizes[2]);
  BBTGrid grid;
  grid.potential.reserve(static_cast<std::size_t>(points.rows()));
  grid.outside_bounds.reserve(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const Eigen::Vector3d p = points.row(i).transpose();
    grid.potential.push_back(bbt_potential(cfg, p));
    grid.outside_bounds.push_back((p.array() / sizes).square().sum() > 1.0);
  }
  return grid;
}

AxisScan axis_scan(const BBTConfig& cfg, Axis axis, double half_width, int samples) {
  if (samples < 2) throw ConfigError("axis scan needs at least 2 samples");
  if (!(half_width > 0.0)) throw ConfigError("axis scan half width must be positive");
  Eigen::Matrix<double, Eigen::Dynamic, 3> points = Eigen::Matrix<double, Eigen::Dynamic, 3>::Zero(samples, 3);
  AxisScan scan;
  for (int i = 0; i < samples; ++i) {
    const double x = -half_width + 2.0 * half_width * i / (samples - 1);
    points(i, static_cast<int>(axis)) = x;
    scan.positions.push_back(x);
  }
  scan.potential = bbt_potential_grid(cfg, points).potential;
  return scan;
}

PowerLawFit extract_power_law(const std::vector<double>& x, const std::vector<double>& v, int l,
                              bool include_next_order) {
  if (l < 1) throw ConfigError("power-law order must be >= 1");
  if (x.size() != v.size()) throw ConfigError("positions and values differ in length");
  const auto n = static_cast<Eigen::Index>(x.size());
  if (n < 7) throw ConfigError("power-law fit needs at least 7 samples");

  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  const double span = std::max(std::abs(sorted.front()), std::abs(sorted.back()));
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (std::abs(sorted[i] + sorted[sorted.size() - 1 - i]) > 1e-9 * span)
      throw ConfigError("power-law fit needs samples symmetric about 0");

  // Columns are scaled by span^{-k}.
  const Eigen::Index cols = include_next_order ? 2 : 1;
  Eigen::MatrixXd design(n, cols);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = x[static_cast<std::size_t>(i)] / span;
    design(i, 0) = std::pow(t, 2 * l);
    if (include_next_order) design(i, 1) = std::pow(t, 2 * l + 2);
    rhs(i) = v[static_cast<std::size_t>(i)];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < cols) throw NumericError("power-law fit is rank deficient");
  const Eigen::VectorXd coef = qr.solve(rhs);

  PowerLawFit fit;
  fit.lambda = coef(0) / std::pow(span, 2 * l);
  if (include_next_order) fit.next_order = coef(1) / std::pow(span, 2 * l + 2);
  const double norm = rhs.norm();
  fit.relative_residual = norm > 0.0 ? (rhs - design * coef).norm() / norm : 0.0;
  return fit;
}

TrapCharacterization equivalent_trap(const TrapCharacterization& trap, double potential_scale) {
  if (trap.l != 1) throw ConfigError("potential rescaling equivalence holds only for l = 1");
  if (!(potential_scale > 0.0)) throw ConfigError("potential scale must be positive");
  TrapCharacterization out = trap;
  out.V0 = trap.V0 / potential_scale;
  const double grow = 1.0 / std::sqrt(potential_scale);
  for (auto& a : out.sizes) a *= grow;
  return out;
}

PowerLawTrap to_power_law_trap(const TrapCharacterization& trap, double mass) {
  PowerLawTrap out;
  out.l = trap.l;
  out.V_c = trap.V0;
  out.a = trap.sizes;
  out.M = mass;
  out.validate();
  return out;
}

}  // namespace trapcoh
