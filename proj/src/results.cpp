#include "trapcoh/results.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <sstream>

#include "trapcoh/error.hpp"

namespace trapcoh {

using nlohmann::json;

namespace {

const char* const spectrum_header = "k,epsilon,parity,converged,E_x_J,E_y_J,E_z_J";
const char* const axes_header =
    "axis,omega_aux_rad_s,lambda,sum_parametric,sum_pointing,R_lambda_per_s,R_x_per_s";

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, int line_no) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw IoError("line " + std::to_string(line_no) + ": cannot parse number '" + s + "'");
  return v;
}

std::string curve_columns(const ResultRecord& r) {
  const auto it = r.labels.find("curve_columns");
  return it == r.labels.end() ? "x,y,model" : it->second;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string current_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) now = static_cast<std::time_t>(std::atoll(epoch));
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json to_json(const ResultRecord& r) {
  json j;
  j["command"] = r.command;
  j["inputs"] = r.inputs;
  j["scalars"] = r.scalars;
  j["labels"] = r.labels;
  j["spectrum"] = json::array();
  for (const auto& row : r.spectrum)
    j["spectrum"].push_back({{"k", row.k},
                             {"epsilon", row.epsilon},
                             {"parity", row.parity},
                             {"converged", row.converged},
                             {"energy_J", row.energy_J}});
  j["axes"] = json::array();
  for (const auto& a : r.axes)
    j["axes"].push_back({{"axis", a.axis},
                         {"omega_aux_rad_s", a.omega_aux},
                         {"lambda", a.lambda},
                         {"sum_parametric", a.sum_parametric},
                         {"sum_pointing", a.sum_pointing},
                         {"R_lambda_per_s", a.R_lambda},
                         {"R_x_per_s", a.R_x}});
  j["curve"] = json::array();
  for (const auto& p : r.curve) j["curve"].push_back({p.x, p.y, p.model});
  j["provenance"] = {{"tool_version", r.provenance.tool_version},
                     {"config_hash", r.provenance.config_hash},
                     {"timestamp", r.provenance.timestamp}};
  return j;
}

ResultRecord record_from_json(const json& j) {
  ResultRecord r;
  try {
    r.command = j.at("command").get<std::string>();
    r.inputs = j.at("inputs");
    r.scalars = j.at("scalars").get<std::map<std::string, double>>();
    r.labels = j.at("labels").get<std::map<std::string, std::string>>();
    for (const auto& row : j.at("spectrum"))
      r.spectrum.push_back({row.at("k").get<long long>(), row.at("epsilon").get<double>(),
                            row.at("parity").get<std::string>(), row.at("converged").get<bool>(),
                            row.at("energy_J").get<std::array<double, 3>>()});
    for (const auto& a : j.at("axes"))
      r.axes.push_back({a.at("axis").get<std::string>(), a.at("omega_aux_rad_s").get<double>(),
                        a.at("lambda").get<double>(), a.at("sum_parametric").get<double>(),
                        a.at("sum_pointing").get<double>(), a.at("R_lambda_per_s").get<double>(),
                        a.at("R_x_per_s").get<double>()});
    for (const auto& p : j.at("curve"))
      r.curve.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
    const auto& prov = j.at("provenance");
    r.provenance = {prov.at("tool_version").get<std::string>(),
                    prov.at("config_hash").get<std::string>(),
                    prov.at("timestamp").get<std::string>()};
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed result record: ") + e.what());
  }
  return r;
}

std::string to_csv(const ResultRecord& r) {
  std::ostringstream out;
  out << "# command=" << r.command << '\n';
  out << "# provenance.tool_version=" << r.provenance.tool_version << '\n';
  out << "# provenance.config_hash=" << r.provenance.config_hash << '\n';
  out << "# provenance.timestamp=" << r.provenance.timestamp << '\n';
  out << "# inputs=" << r.inputs.dump() << '\n';
  for (const auto& [k, v] : r.scalars) out << "# scalar." << k << '=' << format_double(v) << '\n';
  for (const auto& [k, v] : r.labels) out << "# label." << k << '=' << v << '\n';
  if (!r.spectrum.empty()) {
    out << "[spectrum]\n" << spectrum_header << '\n';
    for (const auto& s : r.spectrum)
      out << s.k << ',' << format_double(s.epsilon) << ',' << s.parity << ',' << (s.converged ? 1 : 0)
          << ',' << format_double(s.energy_J[0]) << ',' << format_double(s.energy_J[1]) << ','
          << format_double(s.energy_J[2]) << '\n';
  }
  if (!r.axes.empty()) {
    out << "[axes]\n" << axes_header << '\n';
    for (const auto& a : r.axes)
      out << a.axis << ',' << format_double(a.omega_aux) << ',' << format_double(a.lambda) << ','
          << format_double(a.sum_parametric) << ',' << format_double(a.sum_pointing) << ','
          << format_double(a.R_lambda) << ',' << format_double(a.R_x) << '\n';
  }
  if (!r.curve.empty()) {
    const std::string columns = curve_columns(r);
    const bool two = split(columns).size() == 2;
    out << "[curve]\n" << columns << '\n';
    for (const auto& p : r.curve) {
      out << format_double(p.x) << ',' << format_double(p.y);
      if (!two) out << ',' << format_double(p.model);
      out << '\n';
    }
  }
  return out.str();
}

ResultRecord record_from_csv(const std::string& text) {
  ResultRecord r;
  std::istringstream in(text);
  std::string line;
  std::string section;
  bool header_pending = false;
  std::size_t curve_width = 3;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2);
      const std::string value = line.substr(eq + 1);
      if (key == "command") {
        r.command = value;
      } else if (key == "provenance.tool_version") {
        r.provenance.tool_version = value;
      } else if (key == "provenance.config_hash") {
        r.provenance.config_hash = value;
      } else if (key == "provenance.timestamp") {
        r.provenance.timestamp = value;
      } else if (key == "inputs") {
        try {
          r.inputs = json::parse(value);
        } catch (const json::parse_error&) {
          throw IoError("line " + std::to_string(line_no) + ": malformed inputs echo");
        }
      } else if (key.rfind("scalar.", 0) == 0) {
        r.scalars[key.substr(7)] = parse_double(value, line_no);
      } else if (key.rfind("label.", 0) == 0) {
        r.labels[key.substr(6)] = value;
      }
      continue;
    }
    if (line.front() == '[') {
      section = line;
      header_pending = true;
      continue;
    }
    const auto cells = split(line);
    if (header_pending) {
      header_pending = false;
      if (section == "[curve]") curve_width = cells.size();
      continue;
    }
    const auto need = [&](std::size_t n) {
      if (cells.size() != n)
        throw IoError("line " + std::to_string(line_no) + ": expected " + std::to_string(n) +
                      " columns, found " + std::to_string(cells.size()));
    };
    if (section == "[spectrum]") {
      need(7);
      SpectrumRow s;
      s.k = static_cast<long long>(parse_double(cells[0], line_no));
      s.epsilon = parse_double(cells[1], line_no);
      s.parity = cells[2];
      s.converged = cells[3] == "1";
      for (int i = 0; i < 3; ++i) s.energy_J[static_cast<std::size_t>(i)] = parse_double(cells[static_cast<std::size_t>(4 + i)], line_no);
      r.spectrum.push_back(s);
    } else if (section == "[axes]") {
      need(7);
      r.axes.push_back({cells[0], parse_double(cells[1], line_no), parse_double(cells[2], line_no),
                        parse_double(cells[3], line_no), parse_double(cells[4], line_no),
                        parse_double(cells[5], line_no), parse_double(cells[6], line_no)});
    } else if (section == "[curve]") {
      need(curve_width);
      CurvePoint p{parse_double(cells[0], line_no), parse_double(cells[1], line_no), 0.0};
      p.model = curve_width == 2 ? p.y : parse_double(cells[2], line_no);
      r.curve.push_back(p);
    } else {
      throw IoError("line " + std::to_string(line_no) + ": data outside a known section");
    }
  }
  return r;
}

}  // namespace trapcoh
