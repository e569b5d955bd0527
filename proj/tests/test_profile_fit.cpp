#include <doctest.h>

#include <cmath>

#include "trapcoh/error.hpp"
#include "trapcoh/profile_fit.hpp"

using namespace trapcoh;

namespace {

SyntheticCutSpec cut_spec(int oam, double w, double noise = 0.0, std::uint64_t seed = 1) {
  SyntheticCutSpec s;
  s.oam = oam;
  s.w = w;
  s.amplitude = 2.5;
  s.center = 0.7e-6;
  s.background = 0.05;
  s.half_width = 3.0 * w;
  s.samples = 201;
  s.noise = noise;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("model peaks at |x - c| = w sqrt(l/2)") {
  FitResult p;
  p.w = 4e-6;
  p.amplitude = 1.0;
  for (int l : {1, 2, 3}) {
    const double r = p.w * std::sqrt(l / 2.0);
    const double peak = lg_cut_model(p, l, r);
    CHECK(peak == doctest::Approx(std::pow(double(l), l) * std::exp(-double(l))));
    CHECK(lg_cut_model(p, l, r * 1.01) < peak);
    CHECK(lg_cut_model(p, l, r * 0.99) < peak);
    CHECK(lg_cut_model(p, l, 0.0) == 0.0);
  }
}

TEST_CASE("analytic Jacobian matches central differences") {
  const auto cut = synthesize_lg_cut(cut_spec(2, 4e-6));
  FitResult p;
  p.w = 4.3e-6;
  p.amplitude = 2.1;
  p.center = 0.4e-6;
  p.background = 0.1;
  for (int l : {1, 2}) {
    const auto jac = lg_cut_jacobian(cut, p, l);
    for (int k = 0; k < 4; ++k) {
      FitResult hi = p, lo = p;
      double* fields_hi[4] = {&hi.w, &hi.amplitude, &hi.center, &hi.background};
      double* fields_lo[4] = {&lo.w, &lo.amplitude, &lo.center, &lo.background};
      const double h = 1e-6 * std::max(std::abs(*fields_hi[k]), 1e-6);
      *fields_hi[k] += h;
      *fields_lo[k] -= h;
      double worst = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < cut.positions.size(); ++i) {
        const double fd = (lg_cut_model(hi, l, cut.positions[i]) - lg_cut_model(lo, l, cut.positions[i])) / (2 * h);
        worst = std::max(worst, std::abs(fd - jac(static_cast<Eigen::Index>(i), k)));
        scale = std::max(scale, std::abs(fd));
      }
      CHECK(worst <= 1e-6 * scale);
    }
  }
}

TEST_CASE("noiseless cuts are recovered") {
  for (int oam : {1, 2}) {
    const double w = oam == 1 ? 4.09e-6 : 4.05e-6;
    const auto spec = cut_spec(oam, w);
    const auto fit = fit_lg_cut(synthesize_lg_cut(spec), oam);
    CHECK(fit.w == doctest::Approx(w).epsilon(1e-8));
    CHECK(fit.amplitude == doctest::Approx(spec.amplitude).epsilon(1e-8));
    CHECK(fit.center == doctest::Approx(spec.center).epsilon(1e-8));
    CHECK(fit.background == doctest::Approx(spec.background).epsilon(1e-6));
    CHECK(fit.rms_residual < 1e-8);
  }
}

TEST_CASE("initial guess is close enough to start from") {
  const auto spec = cut_spec(2, 4.05e-6);
  const auto guess = initial_guess(synthesize_lg_cut(spec), 2);
  CHECK(guess.w == doctest::Approx(spec.w).epsilon(0.05));
  CHECK(guess.center == doctest::Approx(spec.center).epsilon(0.2));
}

TEST_CASE("noisy cuts: waist within 1% for nearly every seed") {
  for (int oam : {1, 2}) {
    const double w = oam == 1 ? 4.09e-6 : 4.05e-6;
    int within = 0;
    double sigma_sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const auto fit = fit_lg_cut(synthesize_lg_cut(cut_spec(oam, w, 0.02, seed)), oam);
      if (std::abs(fit.w / w - 1.0) < 0.01) ++within;
      sigma_sum += fit.w_uncertainty();
    }
    CHECK(within >= 95);
    CHECK(sigma_sum / 100.0 > 0.0);
    CHECK(sigma_sum / 100.0 < 0.01 * w);
  }
}

TEST_CASE("reported uncertainty tracks the scatter") {
  const double w = 4.09e-6;
  std::vector<double> ws;
  double sigma = 0.0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto fit = fit_lg_cut(synthesize_lg_cut(cut_spec(1, w, 0.02, seed)), 1);
    ws.push_back(fit.w);
    sigma += fit.w_uncertainty() / 200.0;
  }
  double mean = 0.0, var = 0.0;
  for (double x : ws) mean += x / ws.size();
  for (double x : ws) var += (x - mean) * (x - mean) / (ws.size() - 1);
  CHECK(sigma / std::sqrt(var) == doctest::Approx(1.0).epsilon(0.25));
}

TEST_CASE("single-lobed data is rejected") {
  IntensityCut gauss;
  for (int i = 0; i < 50; ++i) {
    const double x = (i - 25) * 0.2;
    gauss.positions.push_back(x);
    gauss.values.push_back(std::exp(-x * x));
  }
  CHECK_THROWS_AS(fit_lg_cut(gauss, 1), InsufficientStructure);
  IntensityCut flat = gauss;
  std::fill(flat.values.begin(), flat.values.end(), 1.0);
  CHECK_THROWS_AS(fit_lg_cut(flat, 1), InsufficientStructure);
}

TEST_CASE("cut validation") {
  IntensityCut c;
  c.positions = {0, 1, 2};
  c.values = {0, 1, 0};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.positions = {0, 1, 2, 3, 4, 5, 6, 6};
  c.values = std::vector<double>(8, 1.0);
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_THROWS_AS(fit_lg_cut(synthesize_lg_cut(cut_spec(1, 4e-6)), 0), ConfigError);
}

TEST_CASE("uncertainty column weights the fit") {
  auto cut = synthesize_lg_cut(cut_spec(1, 4.09e-6, 0.01, 7));
  cut.sigma.assign(cut.values.size(), 0.01 * 2.5 * std::exp(-1.0));
  const auto fit = fit_lg_cut(cut, 1);
  CHECK(fit.w == doctest::Approx(4.09e-6).epsilon(0.01));
  CHECK(fit.w_uncertainty() > 0.0);
}

TEST_CASE("synthetic cuts are reproducible per seed") {
  const auto a = synthesize_lg_cut(cut_spec(2, 4e-6, 0.02, 42));
  const auto b = synthesize_lg_cut(cut_spec(2, 4e-6, 0.02, 42));
  const auto c = synthesize_lg_cut(cut_spec(2, 4e-6, 0.02, 43));
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
}
