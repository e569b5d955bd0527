#include "trapcoh/config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <utility>

#include "trapcoh/constants.hpp"
#include "trapcoh/error.hpp"

namespace trapcoh {

namespace {

struct UnitKey {
  const char* key;
  double to_si;
};

// Read-tracking view of one JSON object; finish() rejects keys never read.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError("'" + path_ + "' must be an object");
  }

  std::string qualified(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  const json& get(const std::string& key) {
    if (!node_.contains(key)) throw ConfigError("missing required key '" + qualified(key) + "'");
    used_.insert(key);
    return node_.at(key);
  }

  double number(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number()) throw ConfigError("'" + qualified(key) + "' must be a number");
    return v.get<double>();
  }

  std::optional<double> opt_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  long long integer(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number_integer()) throw ConfigError("'" + qualified(key) + "' must be an integer");
    return v.get<long long>();
  }

  std::string string(const std::string& key) {
    const json& v = get(key);
    if (!v.is_string()) throw ConfigError("'" + qualified(key) + "' must be a string");
    return v.get<std::string>();
  }

  Section child(const std::string& key) { return Section(get(key), qualified(key)); }

  // Exactly one of several unit-suffixed spellings, converted to SI.
  double one_of(std::initializer_list<UnitKey> keys) {
    const UnitKey* found = nullptr;
    std::string names;
    for (const auto& k : keys) {
      names += (names.empty() ? "" : " | ") + qualified(k.key);
      if (has(k.key)) {
        if (found)
          throw ConfigError("conflicting keys '" + qualified(found->key) + "' and '" +
                            qualified(k.key) + "'");
        found = &k;
      }
    }
    if (!found) throw ConfigError("missing required key (one of: " + names + ")");
    return number(found->key) * found->to_si;
  }

  std::optional<double> opt_one_of(std::initializer_list<UnitKey> keys) {
    for (const auto& k : keys)
      if (has(k.key)) return one_of(keys);
    return std::nullopt;
  }

  std::array<double, 3> triple(std::initializer_list<UnitKey> keys) {
    const UnitKey* found = nullptr;
    for (const auto& k : keys)
      if (has(k.key)) {
        if (found)
          throw ConfigError("conflicting keys '" + qualified(found->key) + "' and '" +
                            qualified(k.key) + "'");
        found = &k;
      }
    if (!found) throw ConfigError("missing required key '" + qualified(keys.begin()->key) + "'");
    const json& v = get(found->key);
    if (!v.is_array() || v.size() != 3)
      throw ConfigError("'" + qualified(found->key) + "' must be an array of three numbers");
    std::array<double, 3> out{};
    for (std::size_t i = 0; i < 3; ++i) {
      if (!v[i].is_number())
        throw ConfigError("'" + qualified(found->key) + "' must be an array of three numbers");
      out[i] = v[i].get<double>() * found->to_si;
    }
    return out;
  }

  void finish() const {
    for (const auto& [key, value] : node_.items())
      if (!used_.count(key)) throw ConfigError("unknown key '" + qualified(key) + "'");
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> used_;
};

json spectrum_json(const NoiseSpectrum& s) {
  json j;
  j["kind"] = to_string(s.kind);
  j["flavor"] = to_string(s.flavor);
  switch (s.kind) {
    case NoiseKind::white:
      j["level"] = s.level;
      break;
    case NoiseKind::lorentzian:
      j["level"] = s.level;
      j["gamma_rad_s"] = s.gamma;
      j["omega0_rad_s"] = s.omega0;
      break;
    case NoiseKind::one_over_f:
      j["level"] = s.level;
      j["omega_ref_rad_s"] = s.omega_ref;
      break;
    case NoiseKind::tabulated: {
      json table = json::array();
      for (const auto& k : s.table) table.push_back({k.omega, k.psd});
      j["table_rad_s"] = std::move(table);
      break;
    }
  }
  return j;
}

NoiseSpectrum parse_spectrum(Section sec, NoiseFlavor flavor, const std::filesystem::path& base_dir) {
  const std::string level_key =
      flavor == NoiseFlavor::fractional_depth ? "level_per_Hz" : "level_m2_per_Hz";
  const std::string kind = sec.string("kind");
  NoiseSpectrum out;
  if (kind == "white") {
    out = NoiseSpectrum::white(sec.number(level_key), flavor);
  } else if (kind == "rin") {
    if (flavor != NoiseFlavor::fractional_depth)
      throw ConfigError("'" + sec.qualified("kind") + "': rin applies to intensity noise only");
    out = rin_to_fractional_depth(sec.number("rin_dB_per_Hz"));
  } else if (kind == "lorentzian") {
    const double level = sec.number(level_key);
    const double gamma = sec.one_of({{"gamma_rad_s", 1.0}, {"gamma_hz", 2.0 * constants::pi}});
    const double center = sec.opt_one_of({{"omega0_rad_s", 1.0}, {"center_hz", 2.0 * constants::pi}})
                              .value_or(0.0);
    out = NoiseSpectrum::lorentzian(level, gamma, center, flavor);
  } else if (kind == "one_over_f") {
    const double level = sec.number(level_key);
    const double ref = sec.one_of({{"omega_ref_rad_s", 1.0}, {"ref_hz", 2.0 * constants::pi}});
    out = NoiseSpectrum::one_over_f(level, ref, flavor);
  } else if (kind == "tabulated") {
    std::filesystem::path file = sec.string("csv");
    if (file.is_relative()) file = base_dir / file;
    out = load_tabulated_csv(file, flavor);
  } else {
    throw ConfigError("'" + sec.qualified("kind") + "' must be white, rin, lorentzian, one_over_f or tabulated");
  }
  sec.finish();
  return out;
}

}  // namespace

RunConfig parse_config(const json& tree, const std::filesystem::path& base_dir) {
  using constants::kB_mK;
  RunConfig cfg;
  Section root(tree, "");
  json& norm = cfg.normalized;

  {
    Section atom = root.child("atom");
    cfg.atom.mass_kg = atom.one_of({{"mass_kg", 1.0}, {"mass_amu", constants::atomic_mass_unit}});
    if (!(cfg.atom.mass_kg > 0.0)) throw ConfigError("'atom.mass_kg' must be positive");
    if (atom.has("eta")) {
      const json& eta = atom.get("eta");
      if (eta.is_string()) {
        if (eta.get<std::string>() != "cs133_780nm")
          throw ConfigError("'atom.eta' preset must be \"cs133_780nm\"");
        cfg.atom.eta = constants::cesium_eta_780nm;
      } else if (eta.is_number()) {
        cfg.atom.eta = eta.get<double>();
      } else {
        throw ConfigError("'atom.eta' must be a number or a preset name");
      }
      if (!(*cfg.atom.eta > 0.0)) throw ConfigError("'atom.eta' must be positive");
      norm["atom"]["eta"] = *cfg.atom.eta;
    }
    norm["atom"]["mass_kg"] = cfg.atom.mass_kg;
    atom.finish();
  }

  {
    Section trap = root.child("trap");
    const std::string kind = trap.string("kind");
    if (kind == "power_law") {
      cfg.trap.kind = TrapKind::power_law;
      const auto l = trap.integer("l");
      if (l < 1 || l > 8) throw ConfigError("'trap.l' must be between 1 and 8");
      cfg.trap.l = static_cast<int>(l);
      cfg.trap.V_c = trap.one_of({{"V_c_J", 1.0}, {"V_c_kB_mK", kB_mK}});
      cfg.trap.sizes = trap.triple({{"sizes_m", 1.0}, {"sizes_um", 1e-6}});
      norm["trap"] = {{"kind", kind}, {"l", cfg.trap.l}, {"V_c_J", cfg.trap.V_c},
                      {"sizes_m", cfg.trap.sizes}};
    } else if (kind == "bbt") {
      cfg.trap.kind = TrapKind::bbt;
      BBTConfig bbt;
      const auto oam = trap.integer("oam");
      if (oam != 1 && oam != 2) throw ConfigError("'trap.oam' must be 1 or 2");
      bbt.beam.oam = static_cast<int>(oam);
      bbt.beam.w0 = trap.one_of({{"waist_m", 1.0}, {"waist_um", 1e-6}});
      bbt.beam.power = trap.number("power_W");
      bbt.beam.wavelength = trap.one_of({{"wavelength_m", 1.0}, {"wavelength_nm", 1e-9}});
      bbt.half_angle_theta = trap.one_of({{"theta_rad", 1.0}, {"theta_deg", constants::pi / 180.0}});
      const double w0 = bbt.beam.w0;
      if (!(bbt.beam.power > 0.0)) throw ConfigError("'trap.power_W' must be positive");
      if (!(w0 > 0.0)) throw ConfigError("'trap.waist_m' must be positive");
      // alpha_eff may be given directly or implied by the characteristic potential.
      const bool direct = trap.has("alpha_eff_J_m2_per_W");
      if (direct && (trap.has("V0_J") || trap.has("V0_kB_mK")))
        throw ConfigError("give either 'trap.alpha_eff_J_m2_per_W' or 'trap.V0_*', not both");
      if (direct) {
        bbt.alpha_eff = trap.number("alpha_eff_J_m2_per_W");
      } else {
        const double v0 = trap.one_of({{"V0_J", 1.0}, {"V0_kB_mK", kB_mK}});
        bbt.alpha_eff = v0 * constants::pi * constants::pi * w0 * w0 / bbt.beam.power;
      }
      bbt.validate();
      cfg.trap.bbt = bbt;
      cfg.trap.l = bbt.beam.oam;
      cfg.trap.configured_V0 = characterize_bbt(bbt).V0;
      cfg.trap.potential_scale = trap.opt_number("potential_scale");
      if (cfg.trap.potential_scale && cfg.trap.l != 1)
        throw ConfigError("'trap.potential_scale' applies to oam = 1 traps only");
      if (cfg.trap.potential_scale && !(*cfg.trap.potential_scale > 0.0))
        throw ConfigError("'trap.potential_scale' must be positive");
      norm["trap"] = {{"kind", kind},
                      {"oam", bbt.beam.oam},
                      {"waist_m", w0},
                      {"power_W", bbt.beam.power},
                      {"wavelength_m", bbt.beam.wavelength},
                      {"theta_rad", bbt.half_angle_theta},
                      {"alpha_eff_J_m2_per_W", bbt.alpha_eff}};
      if (cfg.trap.potential_scale) norm["trap"]["potential_scale"] = *cfg.trap.potential_scale;
    } else {
      throw ConfigError("'trap.kind' must be power_law or bbt");
    }
    trap.finish();
  }

  if (root.has("noise")) {
    Section noise = root.child("noise");
    if (noise.has("intensity")) {
      cfg.intensity = parse_spectrum(noise.child("intensity"), NoiseFlavor::fractional_depth, base_dir);
      norm["noise"]["intensity"] = spectrum_json(*cfg.intensity);
    }
    if (noise.has("pointing")) {
      cfg.pointing = parse_spectrum(noise.child("pointing"), NoiseFlavor::pointing, base_dir);
      norm["noise"]["pointing"] = spectrum_json(*cfg.pointing);
    }
    noise.finish();
  }

  if (root.has("compute")) {
    Section compute = root.child("compute");
    if (compute.has("n_basis")) cfg.compute.n_basis = compute.integer("n_basis");
    if (compute.has("guard_band")) cfg.compute.guard_band = compute.integer("guard_band");
    if (compute.has("tol")) cfg.compute.tol = compute.number("tol");
    if (compute.has("state")) cfg.compute.state = compute.integer("state");
    compute.finish();
  }
  if (cfg.compute.guard_band < 2 * cfg.trap.l) cfg.compute.guard_band = 2 * cfg.trap.l;
  validate_basis({cfg.compute.n_basis, cfg.compute.guard_band}, cfg.trap.l);
  if (!(cfg.compute.tol > 0.0)) throw ConfigError("'compute.tol' must be positive");
  if (cfg.compute.state < 0) throw ConfigError("'compute.state' must be >= 0");
  norm["compute"] = {{"n_basis", cfg.compute.n_basis},
                     {"guard_band", cfg.compute.guard_band},
                     {"tol", cfg.compute.tol},
                     {"state", cfg.compute.state}};

  if (root.has("des")) {
    Section des = root.child("des");
    RunConfig::Des d;
    d.rel_power_var = des.number("rel_power_var");
    d.V0_at_atom = des.opt_one_of({{"V0_at_atom_J", 1.0}, {"V0_at_atom_kB_mK", kB_mK}}).value_or(0.0);
    d.temperature = des.one_of({{"temperature_K", 1.0}, {"temperature_uK", 1e-6}});
    if (!(d.rel_power_var >= 0.0)) throw ConfigError("'des.rel_power_var' must be >= 0");
    if (!(d.temperature >= 0.0)) throw ConfigError("'des.temperature_K' must be >= 0");
    des.finish();
    cfg.des = d;
    norm["des"] = {{"rel_power_var", d.rel_power_var},
                   {"V0_at_atom_J", d.V0_at_atom},
                   {"temperature_K", d.temperature}};
  }

  root.finish();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  json tree;
  try {
    tree = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(tree, path.parent_path());
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = cfg.normalized.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

PowerLawTrap resolve_trap(const RunConfig& cfg) {
  if (cfg.trap.kind == TrapKind::power_law) {
    PowerLawTrap trap;
    trap.l = cfg.trap.l;
    trap.V_c = cfg.trap.V_c;
    trap.a = cfg.trap.sizes;
    trap.M = cfg.atom.mass_kg;
    trap.validate();
    return trap;
  }
  auto character = characterize_bbt(*cfg.trap.bbt);
  if (cfg.trap.potential_scale) character = equivalent_trap(character, *cfg.trap.potential_scale);
  return to_power_law_trap(character, cfg.atom.mass_kg);
}

DESParams des_params(const RunConfig& cfg) {
  if (!cfg.des) throw ConfigError("missing required key 'des'");
  if (!cfg.atom.eta) throw ConfigError("missing required key 'atom.eta'");
  return {*cfg.atom.eta, cfg.des->V0_at_atom, cfg.des->rel_power_var, cfg.des->temperature};
}

}  // namespace trapcoh
