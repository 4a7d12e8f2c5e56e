#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "halfspace/report.hpp"

namespace halfspace::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;

/// Invalid configuration; maps to exit status 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Every option of every subcommand. Member initializers are the defaults that
/// --show-defaults prints; exponents left empty resolve per subcommand.
struct RunConfig {
  std::string subcommand;

  int n = 3;
  double lambda = 1.0;
  std::vector<double> center;         // y', n-1 entries; empty means 0
  std::vector<double> kelvin_center;  // e', n-1 entries; empty means 0
  bool kelvin = true;
  std::optional<double> q_exponent;
  std::optional<double> p_exponent;

  std::size_t samples = 500;
  double extent = 10.0;
  double tol = 1e-9;

  double plane_lo = -20.0;
  double plane_hi = 20.0;
  double plane_step = 0.5;
  std::size_t sigma_count = 2000;
  double radius_cap = 50.0;
  double exclusion = 1e-6;

  std::vector<double> radii = {1e2, 1e3, 1e4};
  std::size_t directions = 10;

  std::optional<double> s_lo;
  std::optional<double> s_hi;

  double c = 1.0;
  double step = 1e-4;
  std::optional<double> t_max;

  int grid = 64;
  std::vector<int> grids = {32, 64, 128};
  double domain = 12.0;
  double perturbation = 0.0;
  std::string far_field = "exact";
  int max_iter = 50;
  int continuation_steps = 5;

  std::uint64_t seed = 0;
  int threads = 1;
  std::string output_dir;  // empty: no files written
  bool csv = false;
};

extern const std::vector<std::string> kSubcommands;

/// Validates against the module preconditions; throws UsageError.
void validate(const RunConfig& config);

/// Runs one subcommand and returns its report. Check failures and module errors
/// raised during the run are recorded in the report; UsageError propagates.
Report execute(const RunConfig& config);

/// execute() plus report files in config.output_dir; returns the exit status.
int run(const RunConfig& config, std::ostream& out);

/// Full command-line entry point: parsing, config file, --show-defaults.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace halfspace::cli
