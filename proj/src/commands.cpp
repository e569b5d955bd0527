#include "trapcoh/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "trapcoh/constants.hpp"
#include "trapcoh/decoherence.hpp"
#include "trapcoh/error.hpp"
#include "trapcoh/transition_sums.hpp"

namespace trapcoh {

namespace {

constexpr std::array<const char*, 3> axis_names{"x", "y", "z"};

std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

ResultRecord base_record(const std::string& command, const RunConfig* cfg) {
  ResultRecord r;
  r.command = command;
  r.provenance.tool_version = tool_version;
  r.provenance.timestamp = current_timestamp();
  if (cfg) {
    r.inputs = cfg->normalized;
    r.provenance.config_hash = config_hash(*cfg);
  }
  return r;
}

// Relative difference below which two traps are declared tied.
std::string winner_lower(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0 || std::abs(a - b) <= 1e-12 * scale) return "tie";
  return a < b ? "A" : "B";
}

void write_output(const ResultRecord& record, const std::string& format, const std::string& path,
                  std::ostream& out) {
  const std::string text = format == "json" ? to_json(record).dump(2) + "\n" : to_csv(record);
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw IoError("cannot write " + path);
  file << text;
  if (!file) throw IoError("failed writing " + path);
  out << summarize(record);
}

}  // namespace

TrapSpectrum<double> solve_config_spectrum(const RunConfig& cfg) {
  const BasisSpec basis{cfg.compute.n_basis, cfg.compute.guard_band};
  auto spec = diagonalize(hamiltonian<double>(cfg.trap.l, basis), cfg.trap.l, cfg.compute.tol);
  spec.basis = basis;
  if (spec.converged_count == 0)
    throw NumericError("no converged states at n_basis = " + std::to_string(cfg.compute.n_basis));
  return spec;
}

RateSummary compute_rates(const RunConfig& cfg, const TrapSpectrum<double>& spec) {
  const PowerLawTrap trap = resolve_trap(cfg);
  const Index n = cfg.compute.state;
  const auto table_param = transition_table(spec, 2 * trap.l, n);
  const auto table_point = transition_table(spec, 2 * trap.l - 1, n);
  const double l2 = double(trap.l) * trap.l;

  RateSummary summary;
  summary.closure_defect = std::max(table_param.closure_defect, table_point.closure_defect);
  std::array<AxisRates, 3> rates{};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto axis = static_cast<Axis>(i);
    AxisRow& row = summary.axes[i];
    row.axis = axis_names[i];
    row.omega_aux = aux_frequency(trap, axis);
    row.lambda = trap.lambda(axis);
    row.sum_parametric = plain_sum(table_param);
    row.sum_pointing = l2 * plain_sum(table_point);
    if (cfg.intensity) row.R_lambda = rate_parametric(spec, row.omega_aux, n, *cfg.intensity);
    if (cfg.pointing) row.R_x = rate_pointing(spec, row.omega_aux, trap.M, n, *cfg.pointing);
    rates[i] = {row.R_lambda, row.R_x};
  }
  summary.R_total = total_rate_3d(rates);
  return summary;
}

ResultRecord spectrum_record(const RunConfig& cfg, long long max_states) {
  const auto spec = solve_config_spectrum(cfg);
  const PowerLawTrap trap = resolve_trap(cfg);
  ResultRecord r = base_record("spectrum", &cfg);
  std::array<double, 3> omega{};
  for (std::size_t i = 0; i < 3; ++i) omega[i] = aux_frequency(trap, static_cast<Axis>(i));
  const Index count = max_states > 0 ? std::min<Index>(spec.size(), max_states) : spec.size();
  for (Index k = 0; k < count; ++k) {
    SpectrumRow row;
    row.k = k;
    row.epsilon = spec.epsilon(k);
    row.parity = spec.parity[static_cast<std::size_t>(k)] == Parity::even ? "even" : "odd";
    row.converged = k < spec.converged_count;
    for (std::size_t i = 0; i < 3; ++i)
      row.energy_J[i] = constants::hbar * omega[i] / 4.0 * spec.epsilon(k);
    r.spectrum.push_back(row);
  }
  r.scalars["l"] = trap.l;
  r.scalars["converged_count"] = static_cast<double>(spec.converged_count);
  for (std::size_t i = 0; i < 3; ++i)
    r.scalars[std::string("omega_aux_") + axis_names[i] + "_rad_s"] = omega[i];
  return r;
}

ResultRecord rates_record(const RunConfig& cfg) {
  if (!cfg.intensity && !cfg.pointing)
    throw ConfigError("missing required key 'noise' (intensity and/or pointing spectrum)");
  const auto spec = solve_config_spectrum(cfg);
  const auto summary = compute_rates(cfg, spec);
  ResultRecord r = base_record("rates", &cfg);
  r.axes.assign(summary.axes.begin(), summary.axes.end());
  r.scalars["l"] = cfg.trap.l;
  r.scalars["state"] = static_cast<double>(cfg.compute.state);
  r.scalars["R_total_per_s"] = summary.R_total;
  r.scalars["sum_parametric"] = summary.axes[0].sum_parametric;
  r.scalars["sum_pointing"] = summary.axes[0].sum_pointing;
  r.scalars["closure_defect"] = summary.closure_defect;
  r.labels["intensity_noise"] = cfg.intensity ? to_string(cfg.intensity->kind) : "absent";
  r.labels["pointing_noise"] = cfg.pointing ? to_string(cfg.pointing->kind) : "absent";
  if (cfg.des && cfg.atom.eta) r.scalars["var_des_rad_s"] = var_des(des_params(cfg), cfg.trap.l);
  return r;
}

ResultRecord coherence_record(const RunConfig* cfg, std::optional<double> var_des_override,
                              std::optional<double> rate_override, double t_max, int n_points) {
  if (!(t_max > 0.0)) throw ConfigError("t_max must be positive");
  if (n_points < 2) throw ConfigError("n_points must be >= 2");
  CoherenceModel model;
  if (var_des_override) {
    model.var_des = std::abs(*var_des_override);
  } else {
    if (!cfg) throw ConfigError("--config or --var-des is required");
    model.var_des = var_des(des_params(*cfg), cfg->trap.l);
  }
  if (rate_override) {
    if (*rate_override < 0.0) throw ConfigError("rate must be non-negative");
    model.R_total = *rate_override;
  } else {
    if (!cfg) throw ConfigError("--config or --rate is required");
    if (!cfg->intensity && !cfg->pointing)
      throw ConfigError("missing required key 'noise' (or pass --rate)");
    model.R_total = compute_rates(*cfg, solve_config_spectrum(*cfg)).R_total;
  }

  ResultRecord r = base_record("coherence", cfg);
  r.scalars["var_des_rad_s"] = model.var_des;
  r.scalars["R_total_per_s"] = model.R_total;
  const double t1e = coherence_time(model);
  if (std::isfinite(t1e)) {
    r.scalars["t_1e_s"] = t1e;
  } else {
    r.labels["t_1e_s"] = "inf";
  }
  r.labels["curve_columns"] = "t_s,C";
  for (int i = 0; i < n_points; ++i) {
    const double t = t_max * i / (n_points - 1);
    const double c = coherence(model, t);
    r.curve.push_back({t, c, c});
  }
  return r;
}

ResultRecord compare_record(const RunConfig& a, const RunConfig& b) {
  ResultRecord r = base_record("compare", &a);
  r.inputs = {{"A", a.normalized}, {"B", b.normalized}};
  r.provenance.config_hash = config_hash(a) + ":" + config_hash(b);

  const PowerLawTrap trap_a = resolve_trap(a);
  const PowerLawTrap trap_b = resolve_trap(b);
  const bool have_noise = (a.intensity || a.pointing) && (b.intensity || b.pointing);

  std::array<double, 2> R_lambda{}, R_x{}, R_total{};
  std::array<std::optional<double>, 2> des{};
  const std::array<const RunConfig*, 2> cfgs{&a, &b};
  const std::array<const char*, 2> tags{"A", "B"};
  for (std::size_t t = 0; t < 2; ++t) {
    const RunConfig& cfg = *cfgs[t];
    const auto spec = solve_config_spectrum(cfg);
    const PowerLawTrap trap = resolve_trap(cfg);
    RateSummary summary;
    if (have_noise) {
      summary = compute_rates(cfg, spec);
    } else {
      for (std::size_t i = 0; i < 3; ++i) {
        summary.axes[i].axis = axis_names[i];
        summary.axes[i].omega_aux = aux_frequency(trap, static_cast<Axis>(i));
        summary.axes[i].lambda = trap.lambda(static_cast<Axis>(i));
      }
    }
    for (auto row : summary.axes) {
      row.axis = std::string(tags[t]) + "." + row.axis;
      R_lambda[t] += row.R_lambda;
      R_x[t] += row.R_x;
      r.axes.push_back(row);
    }
    R_total[t] = summary.R_total;
    const std::string prefix = tags[t];
    r.scalars[prefix + ".l"] = trap.l;
    r.scalars[prefix + ".V_c_J"] = trap.V_c;
    if (have_noise) {
      r.scalars[prefix + ".R_lambda_per_s"] = R_lambda[t];
      r.scalars[prefix + ".R_x_per_s"] = R_x[t];
      r.scalars[prefix + ".R_total_per_s"] = R_total[t];
    }
    if (cfg.des && cfg.atom.eta) {
      des[t] = var_des(des_params(cfg), trap.l);
      r.scalars[prefix + ".var_des_rad_s"] = *des[t];
      const CoherenceModel model{*des[t], R_total[t]};
      const double t1e = coherence_time(model);
      if (std::isfinite(t1e)) r.scalars[prefix + ".t_1e_s"] = t1e;
    }
  }

  for (std::size_t i = 0; i < 3; ++i)
    r.scalars[std::string("omega_ratio_") + axis_names[i]] =
        r.axes[3 + i].omega_aux / r.axes[i].omega_aux;

  // Closed-form ratio omega^{l=2}/omega^{l=1} at a common (a, V0): a is B's
  // radial size, V0 is A's characteristic potential as configured (before any
  // potential rescaling).
  const double V0_ref = a.trap.kind == TrapKind::bbt ? a.trap.configured_V0 : a.trap.V_c;
  const double a_ref = trap_b.a[1];
  r.scalars["formula_frequency_ratio"] = frequency_ratio(trap_a.M, a_ref, V0_ref);
  r.scalars["formula_a_m"] = a_ref;
  r.scalars["formula_V0_J"] = V0_ref;
  r.labels["formula_assumption"] =
      "(hbar^2/(8 M a^2 V0))^(1/6) with a = B.a_y, V0 = A characteristic potential as configured";

  if (have_noise) {
    r.labels["winner_parametric"] = winner_lower(R_lambda[0], R_lambda[1]);
    r.labels["winner_pointing"] = winner_lower(R_x[0], R_x[1]);
    r.labels["winner_phonon_jumping"] = winner_lower(R_total[0], R_total[1]);
  }
  if (des[0] && des[1]) r.labels["winner_des"] = winner_lower(*des[0], *des[1]);
  if (r.scalars.count("A.t_1e_s") && r.scalars.count("B.t_1e_s")) {
    // Longer coherence wins.
    r.labels["winner_overall"] = winner_lower(-r.scalars["A.t_1e_s"], -r.scalars["B.t_1e_s"]);
  }
  return r;
}

ResultRecord fit_record(const IntensityCut& cut, int oam, const FitResult& fit) {
  ResultRecord r = base_record("fit", nullptr);
  r.scalars["oam"] = oam;
  r.scalars["w_m"] = fit.w;
  r.scalars["w_sigma_m"] = fit.w_uncertainty();
  r.scalars["amplitude"] = fit.amplitude;
  r.scalars["center_m"] = fit.center;
  r.scalars["background"] = fit.background;
  r.scalars["rms_residual"] = fit.rms_residual;
  r.labels["curve_columns"] = "x_m,data,model";
  for (std::size_t i = 0; i < cut.positions.size(); ++i)
    r.curve.push_back({cut.positions[i], cut.values[i], lg_cut_model(fit, oam, cut.positions[i])});
  return r;
}

IntensityCut load_cut_csv(const std::filesystem::path& path, double to_m) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  IntensityCut cut;
  std::string line;
  int line_no = 0;
  bool first_data = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    std::vector<double> nums;
    bool numeric = true;
    for (const auto& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (c.empty() || *end != '\0') {
        numeric = false;
        break;
      }
      nums.push_back(v);
    }
    if (!numeric && first_data) {
      first_data = false;  // header line
      continue;
    }
    first_data = false;
    const auto where = path.string() + ":" + std::to_string(line_no);
    if (!numeric) throw IoError(where + ": cannot parse '" + line + "'");
    if (nums.size() < 2 || nums.size() > 3)
      throw IoError(where + ": expected 2 or 3 columns, found " + std::to_string(nums.size()));
    const bool had_sigma = !cut.positions.empty() && !cut.sigma.empty();
    const bool had_none = !cut.positions.empty() && cut.sigma.empty();
    if ((nums.size() == 3 && had_none) || (nums.size() == 2 && had_sigma))
      throw IoError(where + ": uncertainty column present on some rows only");
    cut.positions.push_back(nums[0] * to_m);
    cut.values.push_back(nums[1]);
    if (nums.size() == 3) cut.sigma.push_back(nums[2]);
  }
  if (!cut.sigma.empty() && cut.sigma.size() != cut.values.size())
    throw IoError(path.string() + ": uncertainty column present on some rows only");
  return cut;
}

std::string summarize(const ResultRecord& r) {
  std::ostringstream out;
  out << r.command << " (config " << (r.provenance.config_hash.empty() ? "-" : r.provenance.config_hash)
      << ")\n";
  for (const auto& [k, v] : r.scalars) out << "  " << k << " = " << fmt4(v) << '\n';
  for (const auto& [k, v] : r.labels)
    if (k != "curve_columns") out << "  " << k << ": " << v << '\n';
  for (const auto& a : r.axes)
    out << "  axis " << a.axis << ": omega = " << fmt4(a.omega_aux)
        << " rad/s, R_lambda = " << fmt4(a.R_lambda) << " 1/s, R_x = " << fmt4(a.R_x) << " 1/s\n";
  std::size_t shown = 0;
  for (const auto& s : r.spectrum) {
    if (shown++ == 10) break;
    out << "  eps[" << s.k << "] = " << fmt4(s.epsilon) << (s.converged ? "" : " (unconverged)") << '\n';
  }
  return out.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coherence of a single atom in power-law optical traps", "trapcoh"};
  app.require_subcommand(1);

  std::string config_path, other_path, out_path, format = "csv";
  long long n_basis = 0;
  long long states = 20;
  double t_max = 0.0;
  int n_points = 201;
  std::optional<double> var_des_flag, rate_flag;

  const auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config_path, "Run configuration (JSON)");
    if (config_required) opt->required();
    sub->add_option("--out", out_path, "Write the result to this file");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--n-basis", n_basis, "Override compute.n_basis")->check(CLI::PositiveNumber);
  };

  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of the trap Hamiltonian");
  add_common(spectrum, true);
  spectrum->add_option("--states", states, "Number of states to print (0 = all)")
      ->check(CLI::NonNegativeNumber);

  auto* rates = app.add_subcommand("rates", "Phonon-jumping rates per axis and in total");
  add_common(rates, true);

  auto* coh = app.add_subcommand("coherence", "Coherence envelope C(t)");
  add_common(coh, false);
  coh->add_option("--t-max", t_max, "Largest time in s")->required()->check(CLI::PositiveNumber);
  coh->add_option("--n-points", n_points, "Number of samples")->check(CLI::Range(2, 1000000));
  coh->add_option("--var-des", var_des_flag, "Override the DES variance term (rad/s)");
  coh->add_option("--rate", rate_flag, "Override the total jumping rate (1/s)");

  auto* compare = app.add_subcommand("compare", "Compare two trap configurations");
  add_common(compare, true);
  compare->add_option("--against", other_path, "Second configuration (B)")->required();

  auto* fit = app.add_subcommand("fit", "Fit an intensity cut through a hollow LG beam");
  std::string data_path, unit = "m", emit_path;
  int oam = 1;
  double px_scale = 0.0, noise = 0.0;
  std::optional<double> waist_um;
  std::uint64_t seed = 1;
  int samples = 201;
  bool synthetic = false;
  fit->add_option("--data", data_path, "CSV with position,value[,sigma]");
  fit->add_flag("--synthetic", synthetic, "Fit a generated cut instead of a file");
  fit->add_option("--oam", oam, "Orbital angular momentum of the beam")->required()->check(CLI::Range(1, 10));
  fit->add_option("--unit", unit, "Position unit of the data")->check(CLI::IsMember({"m", "um", "px"}));
  fit->add_option("--px-scale", px_scale, "Metres per pixel when --unit px");
  fit->add_option("--waist-um", waist_um, "Synthetic waist in um");
  fit->add_option("--noise", noise, "Synthetic Gaussian noise relative to the peak")->check(CLI::NonNegativeNumber);
  fit->add_option("--seed", seed, "Seed for synthetic noise");
  fit->add_option("--samples", samples, "Synthetic sample count")->check(CLI::Range(8, 1000000));
  fit->add_option("--emit-data", emit_path, "Write the synthetic cut as CSV");
  fit->add_option("--out", out_path, "Write the result to this file");
  fit->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    const auto load = [&](const std::string& path) {
      RunConfig cfg = load_config(path);
      if (n_basis > 0) {
        cfg.compute.n_basis = n_basis;
        validate_basis({cfg.compute.n_basis, cfg.compute.guard_band}, cfg.trap.l);
        cfg.normalized["compute"]["n_basis"] = n_basis;
      }
      return cfg;
    };

    if (*spectrum) {
      write_output(spectrum_record(load(config_path), states), format, out_path, out);
    } else if (*rates) {
      const RunConfig cfg = load(config_path);
      const ResultRecord record = rates_record(cfg);
      if (record.scalars.at("closure_defect") > 1e-6)
        err << "warning: closure sum rule violated by " << record.scalars.at("closure_defect")
            << " (relative); increase n_basis\n";
      write_output(record, format, out_path, out);
    } else if (*coh) {
      std::optional<RunConfig> cfg;
      if (!config_path.empty()) cfg = load(config_path);
      write_output(coherence_record(cfg ? &*cfg : nullptr, var_des_flag, rate_flag, t_max, n_points),
                   format, out_path, out);
    } else if (*compare) {
      write_output(compare_record(load(config_path), load(other_path)), format, out_path, out);
    } else if (*fit) {
      IntensityCut cut;
      if (synthetic == !data_path.empty()) throw ConfigError("give exactly one of --data or --synthetic");
      if (synthetic) {
        SyntheticCutSpec spec;
        spec.oam = oam;
        spec.w = waist_um.value_or(oam == 1 ? 4.09 : 4.05) * 1e-6;
        spec.half_width = 3.0 * spec.w;
        spec.samples = samples;
        spec.noise = noise;
        spec.seed = seed;
        cut = synthesize_lg_cut(spec);
        if (!emit_path.empty()) {
          std::ofstream file(emit_path);
          if (!file) throw IoError("cannot write " + emit_path);
          file << "position_um,value\n";
          for (std::size_t i = 0; i < cut.positions.size(); ++i)
            file << format_double(cut.positions[i] * 1e6) << ',' << format_double(cut.values[i]) << '\n';
        }
      } else {
        double to_m = 1.0;
        if (unit == "um") to_m = 1e-6;
        if (unit == "px") {
          if (!(px_scale > 0.0)) throw ConfigError("--unit px needs a positive --px-scale");
          to_m = px_scale;
        }
        cut = load_cut_csv(data_path, to_m);
      }
      const FitResult result = fit_lg_cut(cut, oam);
      const ResultRecord record = fit_record(cut, oam, result);
      if (out_path.empty() && format == "csv") {
        char line[160];
        std::snprintf(line, sizeof line, "w = %.4f um +- %.4f um, rms residual = %.3g\n",
                      result.w * 1e6, result.w_uncertainty() * 1e6, result.rms_residual);
        out << line;
      } else {
        write_output(record, format, out_path, out);
      }
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return exit_io;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return exit_numeric;
  }
  return exit_ok;
}

}  // namespace trapcoh
