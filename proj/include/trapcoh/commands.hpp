#ifndef TRAPCOH_COMMANDS_HPP_
#define TRAPCOH_COMMANDS_HPP_

// Subcommands of the trapcoh CLI, usable in-process.
//
// Exit codes: 0 ok, 2 configuration or usage error, 3 numeric non-convergence,
// 4 I/O error.

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "trapcoh/config.hpp"
#include "trapcoh/profile_fit.hpp"
#include "trapcoh/results.hpp"

namespace trapcoh {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_numeric = 3, exit_io = 4 };

struct RateSummary {
  std::array<AxisRow, 3> axes;
  double R_total = 0.0;
  double closure_defect = 0.0;  // worst of the two tables
};

TrapSpectrum<double> solve_config_spectrum(const RunConfig& cfg);
RateSummary compute_rates(const RunConfig& cfg, const TrapSpectrum<double>& spec);

ResultRecord spectrum_record(const RunConfig& cfg, long long max_states);
ResultRecord rates_record(const RunConfig& cfg);
/// Either value may be supplied directly; otherwise it is computed from `cfg`.
ResultRecord coherence_record(const RunConfig* cfg, std::optional<double> var_des_override,
                              std::optional<double> rate_override, double t_max, int n_points);
ResultRecord compare_record(const RunConfig& a, const RunConfig& b);
ResultRecord fit_record(const IntensityCut& cut, int oam, const FitResult& fit);

/// Reads (position, value[, sigma]) rows; positions are multiplied by `to_m`.
IntensityCut load_cut_csv(const std::filesystem::path& path, double to_m);

/// Four-significant-digit human summary of a record.
std::string summarize(const ResultRecord& record);

/// Runs the CLI with `args` (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trapcoh

#endif  // TRAPCOH_COMMANDS_HPP_
