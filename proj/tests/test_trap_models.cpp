#include <doctest.h>

#include <cmath>

#include "trapcoh/constants.hpp"
#include "trapcoh/error.hpp"
#include "trapcoh/trap_models.hpp"

using namespace trapcoh;

namespace {

LGBeam beam(int oam, double w0 = 4.0e-6, int p = 0) { return {oam, p, w0, 0.01, 780e-9}; }

BBTConfig bottle(int oam) {
  BBTConfig cfg;
  cfg.beam = beam(oam, oam == 1 ? 4.09e-6 : 4.05e-6);
  cfg.half_angle_theta = 4.0 * constants::pi / 180.0;
  cfg.alpha_eff = 1e-34;
  return cfg;
}

double radial_integral(const LGBeam& b, double z) {
  const double r_max = 10.0 * b.width(z);
  const int n = 20000;
  const double h = r_max / n;
  double total = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double r = i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    total += w * lg_intensity(b, r, z) * 2.0 * constants::pi * r;
  }
  return total * h / 3.0;
}

}  // namespace

TEST_CASE("LG intensity radial integral is conserved along z") {
  for (int oam : {1, 2, 3}) {
    const auto b = beam(oam);
    const double at_focus = radial_integral(b, 0.0);
    CHECK(at_focus == doctest::Approx(b.power / constants::pi).epsilon(1e-9));
    CHECK(radial_integral(b, 2.0 * b.rayleigh_range()) == doctest::Approx(at_focus).epsilon(1e-9));
  }
  CHECK(radial_integral(beam(1, 4e-6, 2), 0.0) == doctest::Approx(0.01 / constants::pi).epsilon(1e-9));
}

TEST_CASE("LG beam is dark on axis and peaks at w sqrt(l/2)") {
  for (int oam : {1, 2, 3}) {
    const auto b = beam(oam);
    CHECK(lg_intensity(b, 0.0, 0.0) == 0.0);
    CHECK(peak_radius(b) == doctest::Approx(b.w0 * std::sqrt(oam / 2.0)).epsilon(1e-7));
  }
}

TEST_CASE("ideal barrier ratio of LG01 to LG02 is e/2") {
  CHECK(barrier_height_ratio(beam(1), beam(2)) == doctest::Approx(std::exp(1.0) / 2.0).epsilon(1e-9));
}

TEST_CASE("bottle-trap characterization") {
  const auto cfg = bottle(1);
  const auto t = characterize_bbt(cfg);
  const double w0 = cfg.beam.w0, th = cfg.half_angle_theta;
  CHECK(t.l == 1);
  CHECK(t.V0 == doctest::Approx(cfg.alpha_eff / constants::pi * cfg.beam.power / (constants::pi * w0 * w0)));
  CHECK(t.sizes[0] == doctest::Approx(w0 / (2.0 * std::cos(th))));
  CHECK(t.sizes[1] == doctest::Approx(w0 / 2.0));
  CHECK(t.sizes[2] == doctest::Approx(w0 / (2.0 * std::sin(th))));
  const auto q = characterize_bbt(bottle(2));
  CHECK(q.sizes[1] == doctest::Approx(4.05e-6 / std::sqrt(2.0)));
  auto bad = bottle(3);
  CHECK_THROWS_AS(characterize_bbt(bad), ConfigError);
  bad = bottle(1);
  bad.half_angle_theta = 1.0;
  CHECK_THROWS_AS(characterize_bbt(bad), ConfigError);
}

TEST_CASE("bottle potential vanishes at the center and is symmetric") {
  for (int oam : {1, 2}) {
    const auto cfg = bottle(oam);
    CHECK(bbt_potential(cfg, Eigen::Vector3d::Zero()) == 0.0);
    const Eigen::Vector3d p(0.3e-6, -0.2e-6, 1.1e-6);
    CHECK(bbt_potential(cfg, p) == doctest::Approx(bbt_potential(cfg, -p)).epsilon(1e-14));
    const Eigen::Vector3d q(-p.x(), p.y(), -p.z());
    CHECK(bbt_potential(cfg, p) == doctest::Approx(bbt_potential(cfg, q)).epsilon(1e-14));
  }
}

TEST_CASE("potential at the radial bound") {
  const auto t1 = characterize_bbt(bottle(1));
  CHECK(bbt_potential(bottle(1), Eigen::Vector3d(0, t1.sizes[1], 0)) ==
        doctest::Approx(t1.V0 * std::exp(-0.5)).epsilon(1e-12));
  const auto t2 = characterize_bbt(bottle(2));
  CHECK(bbt_potential(bottle(2), Eigen::Vector3d(0, t2.sizes[1], 0)) ==
        doctest::Approx(t2.V0 * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("grid flags points beyond the trap bounds") {
  const auto cfg = bottle(1);
  const auto t = characterize_bbt(cfg);
  Eigen::Matrix<double, Eigen::Dynamic, 3> pts(3, 3);
  pts << 0, 0, 0, 0, 0.99 * t.sizes[1], 0, 0, 0, 1.01 * t.sizes[2];
  const auto grid = bbt_potential_grid(cfg, pts);
  CHECK(grid.outside_bounds == std::vector<bool>{false, false, true});
  CHECK(grid.potential[0] == 0.0);
}

TEST_CASE("near-center axis expansion matches V0 / a^{2l}") {
  for (int oam : {1, 2}) {
    const auto cfg = bottle(oam);
    const auto t = characterize_bbt(cfg);
    for (Axis axis : {Axis::x, Axis::y, Axis::z}) {
      const double a = t.sizes[static_cast<std::size_t>(axis)];
      const auto scan = axis_scan(cfg, axis, 0.3 * a, 61);
      const auto fit = extract_power_law(scan.positions, scan.potential, oam, true);
      CHECK(fit.lambda / t.lambda(axis) == doctest::Approx(1.0).epsilon(0.05));
      CHECK(fit.relative_residual < 1e-3);
      // Pure power law without the next term stays within 20% on this range.
      const auto pure = extract_power_law(scan.positions, scan.potential, oam, false);
      CHECK(pure.lambda / t.lambda(axis) == doctest::Approx(1.0).epsilon(0.2));
    }
  }
}

TEST_CASE("power-law fit recovers exact coefficients") {
  std::vector<double> x, v;
  for (int i = -10; i <= 10; ++i) {
    x.push_back(i * 1e-7);
    v.push_back(3.0 * std::pow(i * 1e-7, 4) - 5e12 * std::pow(i * 1e-7, 6));
  }
  const auto fit = extract_power_law(x, v, 2, true);
  CHECK(fit.lambda == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(fit.next_order == doctest::Approx(-5e12).epsilon(1e-10));
  CHECK(fit.relative_residual < 1e-12);
  x.pop_back();
  v.pop_back();
  CHECK_THROWS_AS(extract_power_law(x, v, 2), ConfigError);
  CHECK_THROWS_AS(extract_power_law({-1, 0, 1}, {1, 0, 1}, 1), ConfigError);
}

TEST_CASE("equivalent trap keeps the curvature") {
  const auto t = characterize_bbt(bottle(1));
  const auto e = equivalent_trap(t, 0.5);
  CHECK(e.V0 == doctest::Approx(2.0 * t.V0));
  CHECK(e.sizes[1] == doctest::Approx(t.sizes[1] * std::sqrt(2.0)));
  for (Axis axis : {Axis::x, Axis::y, Axis::z}) CHECK(e.lambda(axis) == doctest::Approx(t.lambda(axis)));
  CHECK_THROWS_AS(equivalent_trap(characterize_bbt(bottle(2)), 0.5), ConfigError);
  CHECK_THROWS_AS(equivalent_trap(t, 0.0), ConfigError);
}
