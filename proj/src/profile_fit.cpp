#include "trapcoh/profile_fit.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "trapcoh/error.hpp"

namespace trapcoh {

namespace {

// g(u) = u^l exp(-u) and its derivative.
struct Shape {
  double g;
  double dg;
};

Shape shape(int l, double u) {
  const double e = std::exp(-u);
  const double lower = std::pow(u, l - 1);
  return {lower * u * e, lower * e * (l - u)};
}

double peak_to_peak(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

// Residuals in normalized units: positions divided by `length`, values by `height`.
struct CutFunctor : Eigen::DenseFunctor<double> {
  CutFunctor(const IntensityCut& data, int oam, double length, double height)
      : Eigen::DenseFunctor<double>(4, static_cast<int>(data.positions.size())),
        l(oam) {
    const auto n = data.positions.size();
    x.resize(static_cast<Eigen::Index>(n));
    y.resize(static_cast<Eigen::Index>(n));
    weight.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const auto j = static_cast<Eigen::Index>(i);
      x(j) = data.positions[i] / length;
      y(j) = data.values[i] / height;
      weight(j) = data.sigma.empty() ? 1.0 : height / data.sigma[i];
    }
  }

  int operator()(const InputType& p, ValueType& f) const {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double d = x(i) - p(2);
      const double u = 2.0 * d * d / (p(0) * p(0));
      f(i) = weight(i) * (p(1) * shape(l, u).g + p(3) - y(i));
    }
    return 0;
  }

  int df(const InputType& p, JacobianType& jac) const {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double d = x(i) - p(2);
      const double u = 2.0 * d * d / (p(0) * p(0));
      const Shape s = shape(l, u);
      jac(i, 0) = weight(i) * p(1) * s.dg * (-2.0 * u / p(0));
      jac(i, 1) = weight(i) * s.g;
      jac(i, 2) = weight(i) * p(1) * s.dg * (-4.0 * d / (p(0) * p(0)));
      jac(i, 3) = weight(i);
    }
    return 0;
  }

  int l;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd weight;
};

}  // namespace

void IntensityCut::validate() const {
  if (positions.size() != values.size())
    throw ConfigError("intensity cut positions and values differ in length");
  if (positions.size() < 8) throw ConfigError("intensity cut needs at least 8 samples");
  if (!sigma.empty() && sigma.size() != values.size())
    throw ConfigError("intensity cut uncertainty column has the wrong length");
  for (std::size_t i = 1; i < positions.size(); ++i)
    if (!(positions[i] > positions[i - 1]))
      throw ConfigError("intensity cut positions must be strictly increasing");
  for (double s : sigma)
    if (!(s > 0.0)) throw ConfigError("intensity cut uncertainties must be positive");
}

double FitResult::w_uncertainty() const { return std::sqrt(std::max(covariance(0, 0), 0.0)); }

double lg_cut_model(const FitResult& params, int oam, double x) {
  const double d = x - params.center;
  const double u = 2.0 * d * d / (params.w * params.w);
  return params.amplitude * shape(std::abs(oam), u).g + params.background;
}

double cut_residual(const IntensityCut& data, const FitResult& params, int oam) {
  double ss = 0.0;
  for (std::size_t i = 0; i < data.positions.size(); ++i) {
    const double r = lg_cut_model(params, oam, data.positions[i]) - data.values[i];
    ss += r * r;
  }
  const double range = peak_to_peak(data.values);
  const double rms = std::sqrt(ss / static_cast<double>(data.positions.size()));
  return range > 0.0 ? rms / range : rms;
}

Eigen::Matrix<double, Eigen::Dynamic, 4> lg_cut_jacobian(const IntensityCut& data,
                                                         const FitResult& params, int oam) {
  const int l = std::abs(oam);
  const auto n = static_cast<Eigen::Index>(data.positions.size());
  Eigen::Matrix<double, Eigen::Dynamic, 4> jac(n, 4);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = data.positions[static_cast<std::size_t>(i)] - params.center;
    const double w2 = params.w * params.w;
    const double u = 2.0 * d * d / w2;
    const Shape s = shape(l, u);
    jac(i, 0) = params.amplitude * s.dg * (-2.0 * u / params.w);
    jac(i, 1) = s.g;
    jac(i, 2) = params.amplitude * s.dg * (-4.0 * d / w2);
    jac(i, 3) = 1.0;
  }
  return jac;
}

FitResult initial_guess(const IntensityCut& data, int oam) {
  data.validate();
  if (oam == 0) throw ConfigError("profile fit needs a hollow beam (oam != 0)");
  const int l = std::abs(oam);
  const auto& y = data.values;
  const std::size_t n = y.size();

  // Light smoothing to find lobes, then the raw maximum near each candidate.
  std::vector<double> smooth(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i == 0 ? 0 : i - 1;
    const std::size_t b = std::min(i + 1, n - 1);
    double sum = 0.0;
    for (std::size_t j = a; j <= b; ++j) sum += y[j];
    smooth[i] = sum / static_cast<double>(b - a + 1);
  }
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (smooth[i] > smooth[i - 1] && smooth[i] >= smooth[i + 1]) {
      std::size_t best = i;
      for (std::size_t j = i > 2 ? i - 2 : 0; j <= std::min(i + 2, n - 1); ++j)
        if (y[j] > y[best]) best = j;
      peaks.push_back(best);
    }
  std::sort(peaks.begin(), peaks.end());
  peaks.erase(std::unique(peaks.begin(), peaks.end()), peaks.end());
  std::stable_sort(peaks.begin(), peaks.end(),
                   [&](std::size_t a, std::size_t b) { return y[a] > y[b]; });

  const double background = *std::min_element(y.begin(), y.end());
  if (peaks.size() < 2 || !(y[peaks.front()] > background))
    throw InsufficientStructure("intensity cut has fewer than two separated maxima");

  const std::size_t first = peaks.front();
  std::optional<std::size_t> second;
  for (std::size_t k = 1; k < peaks.size() && !second; ++k) {
    const std::size_t cand = peaks[k];
    const auto [lo, hi] = std::minmax(first, cand);
    const double dip = *std::min_element(y.begin() + static_cast<std::ptrdiff_t>(lo),
                                         y.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    const double lower_peak = std::min(y[first], y[cand]);
    if (dip < background + 0.5 * (lower_peak - background)) second = cand;
  }
  if (!second) throw InsufficientStructure("intensity cut shows a single lobe, not a hollow beam");

  const double x1 = data.positions[first];
  const double x2 = data.positions[*second];
  FitResult guess;
  guess.center = 0.5 * (x1 + x2);
  // Lobes sit at 2 r^2 / w^2 = l, so their separation is w sqrt(2 l).
  guess.w = std::abs(x2 - x1) / std::sqrt(2.0 * l);
  guess.background = background;
  const double peak_shape = std::pow(double(l), l) * std::exp(-double(l));
  guess.amplitude = (0.5 * (y[first] + y[*second]) - background) / peak_shape;
  guess.rms_residual = cut_residual(data, guess, oam);
  return guess;
}

FitResult fit_lg_cut(const IntensityCut& data, int oam, std::optional<FitResult> init) {
  const FitResult start = init ? *init : initial_guess(data, oam);
  data.validate();
  const int l = std::abs(oam);
  if (l == 0) throw ConfigError("profile fit needs a hollow beam (oam != 0)");
  if (!(start.w > 0.0)) throw ConfigError("initial waist must be positive");

  const double length = start.w;
  double height = std::abs(start.amplitude);
  if (!(height > 0.0)) height = std::max(peak_to_peak(data.values), 1e-300);

  CutFunctor functor(data, l, length, height);
  Eigen::VectorXd p(4);
  p << 1.0, start.amplitude / height, start.center / length, start.background / height;

  Eigen::LevenbergMarquardt<CutFunctor> lm(functor);
  lm.setXtol(1e-10);
  lm.setFtol(1e-14);
  lm.setMaxfev(4000);
  const auto status = lm.minimize(p);
  using namespace Eigen::LevenbergMarquardtSpace;
  if (status == TooManyFunctionEvaluation || status == ImproperInputParameters)
    throw NumericError("profile fit did not converge (status " + std::to_string(int(status)) + ")");
  if (!p.allFinite()) throw NumericError("profile fit produced non-finite parameters");

  FitResult out;
  out.w = std::abs(p(0)) * length;
  out.amplitude = p(1) * height;
  out.center = p(2) * length;
  out.background = p(3) * height;
  out.evaluations = static_cast<int>(lm.nfev());
  out.rms_residual = cut_residual(data, out, oam);

  // Covariance from the final Jacobian, scaled by the reduced chi-square when
  // the data carry no uncertainties.
  Eigen::VectorXd pf(4);
  pf << std::abs(p(0)), p(1), p(2), p(3);
  CutFunctor::JacobianType jac(functor.values(), 4);
  functor.df(pf, jac);
  CutFunctor::ValueType resid(functor.values());
  functor(pf, resid);
  const Eigen::Matrix4d jtj = jac.transpose() * jac;
  Eigen::Matrix4d cov = jtj.ldlt().solve(Eigen::Matrix4d::Identity());
  const auto dof = static_cast<double>(functor.values() - 4);
  if (data.sigma.empty() && dof > 0) cov *= resid.squaredNorm() / dof;
  const Eigen::Vector4d scale(length, height, length, height);
  out.covariance = scale.asDiagonal() * cov * scale.asDiagonal();
  return out;
}

IntensityCut synthesize_lg_cut(const SyntheticCutSpec& spec) {
  if (spec.samples < 8) throw ConfigError("synthetic cut needs at least 8 samples");
  if (!(spec.w > 0.0) || !(spec.half_width > 0.0)) throw ConfigError("synthetic cut needs positive sizes");
  FitResult params;
  params.w = spec.w;
  params.amplitude = spec.amplitude;
  params.center = spec.center;
  params.background = spec.background;
  const int l = std::abs(spec.oam);
  const double peak = spec.amplitude * std::pow(double(l), l) * std::exp(-double(l));

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  IntensityCut cut;
  for (int i = 0; i < spec.samples; ++i) {
    const double x = spec.center - spec.half_width + 2.0 * spec.half_width * i / (spec.samples - 1);
    double v = lg_cut_model(params, spec.oam, x);
    if (spec.noise > 0.0) v += spec.noise * peak * normal(rng);
    cut.positions.push_back(x);
    cut.values.push_back(v);
  }
  return cut;
}

}  // namespace trapcoh
