#ifndef TRAPCOH_CONSTANTS_HPP_
#define TRAPCOH_CONSTANTS_HPP_

#include <numbers>

namespace trapcoh::constants {

inline constexpr double pi = std::numbers::pi;

// CODATA 2018 exact / recommended values, SI units.
inline constexpr double planck = 6.62607015e-34;                 // J s
inline constexpr double hbar = planck / (2.0 * pi);              // J s
inline constexpr double boltzmann = 1.380649e-23;                // J/K
inline constexpr double atomic_mass_unit = 1.66053906660e-27;    // kg

inline constexpr double cesium133_mass = 2.20694650e-25;         // kg

// Cs clock-state hyperfine factor for a 780 nm trap: hyperfine splitting over
// the effective detuning. Only used when a config asks for the preset.
inline constexpr double cesium_eta_780nm = 2.8e-4;

inline constexpr double kB_mK = boltzmann * 1e-3;  // J per (k_B * 1 mK)
inline constexpr double kB_uK = boltzmann * 1e-6;  // J per (k_B * 1 uK)

}  // namespace trapcoh::constants

#endif  // TRAPCOH_CONSTANTS_HPP_
