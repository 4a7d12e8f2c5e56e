#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "halfspace/fd_solver.hpp"

namespace halfspace {

/// Machine-readable summary of one CLI run. Insertion order of config entries and
/// metrics is preserved in the serialized form.
struct Report {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> failures;

  void set_config(const std::string& key, std::string value);
  void add_metric(const std::string& name, double value);
  /// Records `name` as a failure unless ok.
  void check(const std::string& name, bool ok);
  bool pass() const { return failures.empty(); }
  /// NaN when absent.
  double metric(const std::string& name) const;
};

/// {"subcommand", "config", "metrics", "pass", "failures"}; non-finite metrics become null.
/// Contains nothing time- or host-dependent.
std::string to_json(const Report& report);

/// Timestamp and build information, kept out of the report body.
std::string metadata_json(const Report& report);

/// 17 significant digits.
std::string format_number(double v);

/// Header r,z,value; one line per node.
void write_grid_csv(const std::filesystem::path& path, const AxisymGrid& grid,
                    std::span<const double> values);
/// Header x1,...,xn,value.
void write_points_csv(const std::filesystem::path& path, std::span<const Point> points,
                      std::span<const double> values);

}  // namespace halfspace
