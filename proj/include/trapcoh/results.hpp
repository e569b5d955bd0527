#ifndef TRAPCOH_RESULTS_HPP_
#define TRAPCOH_RESULTS_HPP_

// Structured command output. Every emitted CSV or JSON file parses back into
// the same ResultRecord; doubles are written with 17 significant digits.

#include <json.hpp>

#include <array>
#include <map>
#include <string>
#include <vector>

namespace trapcoh {

inline constexpr const char* tool_version = "0.1.0";

struct SpectrumRow {
  long long k = 0;
  double epsilon = 0.0;
  std::string parity;
  bool converged = false;
  std::array<double, 3> energy_J{};

  bool operator==(const SpectrumRow&) const = default;
};

struct AxisRow {
  std::string axis;  // "x", or "A.x" in comparisons
  double omega_aux = 0.0;
  double lambda = 0.0;
  double sum_parametric = 0.0;  // sum |<m|X^{2l}|n>|^2
  double sum_pointing = 0.0;    // l^2 sum |<m|X^{2l-1}|n>|^2
  double R_lambda = 0.0;
  double R_x = 0.0;

  bool operator==(const AxisRow&) const = default;
};

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
  double model = 0.0;

  bool operator==(const CurvePoint&) const = default;
};

struct Provenance {
  std::string tool_version;
  std::string config_hash;
  std::string timestamp;

  bool operator==(const Provenance&) const = default;
};

struct ResultRecord {
  std::string command;
  nlohmann::json inputs = nlohmann::json::object();
  std::map<std::string, double> scalars;
  std::map<std::string, std::string> labels;
  std::vector<SpectrumRow> spectrum;
  std::vector<AxisRow> axes;
  std::vector<CurvePoint> curve;  // coherence samples (t, C) or fit cut (x, data, model)
  Provenance provenance;

  bool operator==(const ResultRecord&) const = default;
};

nlohmann::json to_json(const ResultRecord& record);
ResultRecord record_from_json(const nlohmann::json& j);

std::string to_csv(const ResultRecord& record);
/// Throws IoError with a line number on malformed input.
ResultRecord record_from_csv(const std::string& text);

/// "%.17g" formatting used for every number in CSV output.
std::string format_double(double v);

/// UTC timestamp; SOURCE_DATE_EPOCH overrides the clock when set.
std::string current_timestamp();

}  // namespace trapcoh

#endif  // TRAPCOH_RESULTS_HPP_
