#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "trapcoh/commands.hpp"
#include "trapcoh/constants.hpp"

using namespace trapcoh;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "trapcoh");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string config(const std::string& name) {
  return (std::filesystem::path(TRAPCOH_SOURCE_DIR) / "configs" / (name + ".json")).string();
}

std::filesystem::path scratch() {
  const auto dir = std::filesystem::temp_directory_path() / "trapcoh_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("spectrum of the harmonic config") {
  const auto r = run({"spectrum", "--config", config("harmonic"), "--states", "4"});
  REQUIRE(r.code == 0);
  const auto rec = record_from_csv(r.out);
  REQUIRE(rec.spectrum.size() == 4);
  CHECK(rec.spectrum[3].epsilon == doctest::Approx(14.0).epsilon(1e-12));
  CHECK(rec.spectrum[0].energy_J[1] ==
        doctest::Approx(constants::hbar * rec.scalars.at("omega_aux_y_rad_s") / 2.0).epsilon(1e-12));
}

TEST_CASE("rates output in both formats") {
  const auto dir = scratch();
  setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  const auto csv = run({"rates", "--config", config("quartic"), "--out", (dir / "r.csv").string()});
  const auto js = run({"rates", "--config", config("quartic"), "--format", "json", "--out", (dir / "r.json").string()});
  unsetenv("SOURCE_DATE_EPOCH");
  REQUIRE(csv.code == 0);
  REQUIRE(js.code == 0);
  CHECK(csv.out.find("R_total_per_s") != std::string::npos);
  const auto a = record_from_csv(slurp(dir / "r.csv"));
  const auto b = record_from_json(nlohmann::json::parse(slurp(dir / "r.json")));
  CHECK(a == b);
  CHECK(a.axes.size() == 3);
  CHECK(a.scalars.at("sum_parametric") == doctest::Approx(5.83).epsilon(0.01));
}

TEST_CASE("runs are deterministic") {
  setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  const auto a = run({"rates", "--config", config("lg02_066mK")});
  const auto b = run({"rates", "--config", config("lg02_066mK")});
  unsetenv("SOURCE_DATE_EPOCH");
  CHECK(a.out == b.out);
}

TEST_CASE("n-basis override lands in the echoed inputs") {
  const auto r = run({"spectrum", "--config", config("quartic"), "--n-basis", "100", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto rec = record_from_json(nlohmann::json::parse(r.out));
  CHECK(rec.inputs["compute"]["n_basis"] == 100);
  CHECK(rec.spectrum.size() == 20);
}

TEST_CASE("compare reports winners and the formula ratio") {
  const auto r = run({"compare", "--config", config("lg01_033mK"), "--against", config("lg02_066mK"), "--format", "json"});
  REQUIRE(r.code == 0);
  const auto rec = record_from_json(nlohmann::json::parse(r.out));
  CHECK(rec.labels.at("winner_phonon_jumping") == "B");
  CHECK(rec.labels.at("winner_des") == "B");
  CHECK(rec.scalars.at("formula_frequency_ratio") == doctest::Approx(0.074).epsilon(0.03));
  CHECK(rec.axes.size() == 6);
}

TEST_CASE("comparing a trap with itself is a tie") {
  const auto r = run({"compare", "--config", config("quartic"), "--against", config("quartic"), "--format", "json"});
  REQUIRE(r.code == 0);
  const auto rec = record_from_json(nlohmann::json::parse(r.out));
  CHECK(rec.labels.at("winner_phonon_jumping") == "tie");
}

TEST_CASE("coherence from overrides alone") {
  const auto r = run({"coherence", "--var-des", "0", "--rate", "3.1776", "--t-max", "1", "--n-points", "11"});
  REQUIRE(r.code == 0);
  const auto rec = record_from_csv(r.out);
  CHECK(rec.curve.size() == 11);
  CHECK(rec.curve.front().y == 1.0);
  CHECK(rec.scalars.at("t_1e_s") == doctest::Approx(1.0 / 3.1776).epsilon(1e-12));
}

TEST_CASE("coherence needs a rate source") {
  CHECK(run({"coherence", "--var-des", "1", "--t-max", "1"}).code == exit_config);
  CHECK(run({"coherence", "--var-des", "1", "--rate", "1", "--t-max", "-1"}).code == exit_config);
}

TEST_CASE("fit on shipped data") {
  const auto data = std::filesystem::path(TRAPCOH_SOURCE_DIR) / "data";
  const auto a = run({"fit", "--data", (data / "lg01_cut.csv").string(), "--oam", "1", "--unit", "um", "--format", "json"});
  REQUIRE(a.code == 0);
  const auto rec = record_from_json(nlohmann::json::parse(a.out));
  CHECK(rec.scalars.at("w_m") == doctest::Approx(4.09e-6).epsilon(0.005));
  const auto b = run({"fit", "--data", (data / "lg02_cut.csv").string(), "--oam", "2", "--unit", "um"});
  REQUIRE(b.code == 0);
  CHECK(b.out.find("w = 4.0") != std::string::npos);
}

TEST_CASE("synthetic fit writes its data") {
  const auto dir = scratch();
  const auto r = run({"fit", "--synthetic", "--oam", "2", "--noise", "0.01", "--seed", "3",
                      "--emit-data", (dir / "cut.csv").string()});
  REQUIRE(r.code == 0);
  const auto again = run({"fit", "--data", (dir / "cut.csv").string(), "--oam", "2", "--unit", "um"});
  CHECK(again.out == r.out);
}

TEST_CASE("pixel units need a scale") {
  const auto data = std::filesystem::path(TRAPCOH_SOURCE_DIR) / "data" / "lg01_cut.csv";
  CHECK(run({"fit", "--data", data.string(), "--oam", "1", "--unit", "px"}).code == exit_config);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == exit_config);
  CHECK(run({"--help"}).code == exit_ok);
  CHECK(run({"spectrum"}).code == exit_config);
  CHECK(run({"spectrum", "--config", "/nonexistent.json"}).code == exit_io);
  CHECK(run({"fit", "--data", "/nonexistent.csv", "--oam", "1"}).code == exit_io);
  // l = 3 at a small basis has no converged states.
  const auto dir = scratch();
  std::ofstream(dir / "l3.json") << R"({"atom": {"mass_amu": 133}, "trap": {"kind": "power_law", "l": 3,
    "V_c_J": 1e-27, "sizes_um": [3, 3, 30]}, "compute": {"n_basis": 40}})";
  const auto r = run({"spectrum", "--config", (dir / "l3.json").string()});
  CHECK(r.code == exit_numeric);
  CHECK(r.err.find("n_basis") != std::string::npos);
  const auto flat = dir / "flat.csv";
  std::ofstream(flat) << "x,y\n" << [] {
    std::string s;
    for (int i = 0; i < 20; ++i) s += std::to_string(i) + ",1\n";
    return s;
  }();
  CHECK(run({"fit", "--data", flat.string(), "--oam", "1"}).code == exit_numeric);
}

TEST_CASE("rates without noise is a configuration error") {
  const auto dir = scratch();
  std::ofstream(dir / "quiet.json") << R"({"atom": {"mass_amu": 133}, "trap": {"kind": "power_law", "l": 1,
    "V_c_J": 1e-27, "sizes_um": [3, 3, 30]}})";
  const auto r = run({"rates", "--config", (dir / "quiet.json").string()});
  CHECK(r.code == exit_config);
  CHECK(r.err.find("noise") != std::string::npos);
}
