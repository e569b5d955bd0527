#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "trapcoh/error.hpp"
#include "trapcoh/noise.hpp"

using namespace trapcoh;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("white spectrum is flat") {
  const auto s = NoiseSpectrum::white(2e-12);
  CHECK(evaluate(s, 0.0) == 2e-12);
  CHECK(evaluate(s, 1e6) == 2e-12);
  CHECK_THROWS_AS(NoiseSpectrum::white(-1.0), ConfigError);
  CHECK_THROWS_AS(NoiseSpectrum::white(NAN), ConfigError);
}

TEST_CASE("lorentzian peaks at its center with half height at +-gamma") {
  const auto s = NoiseSpectrum::lorentzian(4.0, 50.0, 1000.0);
  CHECK(evaluate(s, 1000.0) == doctest::Approx(4.0));
  CHECK(evaluate(s, 1050.0) == doctest::Approx(2.0));
  CHECK(evaluate(s, 950.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(NoiseSpectrum::lorentzian(1.0, 0.0, 1.0), ConfigError);
}

TEST_CASE("1/f spectrum") {
  const auto s = NoiseSpectrum::one_over_f(1e-10, 100.0);
  CHECK(evaluate(s, 100.0) == doctest::Approx(1e-10));
  CHECK(evaluate(s, 1000.0) == doctest::Approx(1e-11));
  CHECK_THROWS_AS(evaluate(s, 0.0), SpectrumRangeError);
}

TEST_CASE("negative frequencies are rejected") {
  CHECK_THROWS_AS(evaluate(NoiseSpectrum::white(1.0), -1.0), SpectrumRangeError);
}

TEST_CASE("tabulated spectrum interpolates in log-log space") {
  const auto s = NoiseSpectrum::tabulated({{10.0, 1e-8}, {1000.0, 1e-12}, {2000.0, 0.0}});
  CHECK(evaluate(s, 10.0) == 1e-8);
  CHECK(evaluate(s, 100.0) == doctest::Approx(1e-10).epsilon(1e-12));
  CHECK(evaluate(s, 1500.0) == doctest::Approx(0.5e-12).epsilon(1e-12));
  CHECK(evaluate(s, 2000.0) == 0.0);
  try {
    evaluate(s, 5.0);
    FAIL("expected a range error");
  } catch (const SpectrumRangeError& e) {
    CHECK(e.omega() == 5.0);
  }
  CHECK_THROWS_AS(evaluate(s, 2001.0), SpectrumRangeError);
}

TEST_CASE("tabulated input validation") {
  CHECK_THROWS_AS(NoiseSpectrum::tabulated({{1.0, 1.0}}), ConfigError);
  CHECK_THROWS_AS(NoiseSpectrum::tabulated({{2.0, 1.0}, {1.0, 1.0}}), ConfigError);
  CHECK_THROWS_AS(NoiseSpectrum::tabulated({{0.0, 1.0}, {1.0, 1.0}}), ConfigError);
  CHECK_THROWS_AS(NoiseSpectrum::tabulated({{1.0, -1.0}, {2.0, 1.0}}), ConfigError);
}

TEST_CASE("rin conversion") {
  const auto s = rin_to_fractional_depth(-130.0);
  CHECK(s.kind == NoiseKind::white);
  CHECK(evaluate(s, 1.0) == doctest::Approx(1e-13));
}

TEST_CASE("spectrum csv in Hz converts to rad/s") {
  const auto path = write_temp("trapcoh_psd_hz.csv", "# measured\nfrequency_hz,psd\n10,1e-10\n100,1e-12\n");
  const auto s = load_tabulated_csv(path);
  CHECK(s.table.front().omega == doctest::Approx(20.0 * M_PI));
  CHECK(evaluate(s, 200.0 * M_PI) == doctest::Approx(1e-12));
  std::filesystem::remove(path);
}

TEST_CASE("spectrum csv errors name the line") {
  const auto bad = write_temp("trapcoh_psd_bad.csv", "omega_rad_s,psd\n10,1e-10\n20,abc\n");
  try {
    load_tabulated_csv(bad);
    FAIL("expected an I/O error");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }
  const auto header = write_temp("trapcoh_psd_header.csv", "hz,psd\n10,1\n");
  CHECK_THROWS_AS(load_tabulated_csv(header), IoError);
  CHECK_THROWS_AS(load_tabulated_csv("/nonexistent/psd.csv"), IoError);
  std::filesystem::remove(bad);
  std::filesystem::remove(header);
}
