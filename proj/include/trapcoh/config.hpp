#ifndef TRAPCOH_CONFIG_HPP_
#define TRAPCOH_CONFIG_HPP_

// Run configuration: a JSON tree whose keys carry their units
// (mass_kg, waist_um, theta_deg, ...). Parsing converts everything to SI once
// and keeps a normalized copy used for hashing and for echoing inputs.

#include <json.hpp>

#include <array>
#include <filesystem>
#include <optional>
#include <string>

#include "trapcoh/decoherence.hpp"
#include "trapcoh/noise.hpp"
#include "trapcoh/trap_models.hpp"

namespace trapcoh {

using json = nlohmann::json;

enum class TrapKind { power_law, bbt };

struct RunConfig {
  struct Atom {
    double mass_kg = 0.0;
    std::optional<double> eta;
  } atom;

  struct Trap {
    TrapKind kind = TrapKind::power_law;
    int l = 1;
    double V_c = 0.0;               // J, power_law only
    std::array<double, 3> sizes{};  // m, power_law only
    std::optional<BBTConfig> bbt;
    double configured_V0 = 0.0;     // bbt: V0 before any potential rescaling
    std::optional<double> potential_scale;
  } trap;

  std::optional<NoiseSpectrum> intensity;
  std::optional<NoiseSpectrum> pointing;

  struct Compute {
    Index n_basis = 80;
    Index guard_band = 8;
    double tol = 1e-8;
    Index state = 0;
  } compute;

  struct Des {
    double rel_power_var = 0.0;
    double V0_at_atom = 0.0;  // J
    double temperature = 0.0;  // K
  };
  std::optional<Des> des;

  json normalized;  // SI-normalized, key-sorted echo of the inputs
};

/// Parses a config tree. Relative paths (tabulated spectra) resolve against
/// `base_dir`. Throws ConfigError naming the offending key.
RunConfig parse_config(const json& tree, const std::filesystem::path& base_dir = {});

/// Reads and parses a config file. Throws IoError when it cannot be read.
RunConfig load_config(const std::filesystem::path& path);

/// 64-bit FNV-1a over the normalized tree, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

/// The power-law description used for rate computations (BBT traps are
/// characterized and optionally rescaled first).
PowerLawTrap resolve_trap(const RunConfig& cfg);

DESParams des_params(const RunConfig& cfg);

}  // namespace trapcoh

#endif  // TRAPCOH_CONFIG_HPP_
