#include "halfspace/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace halfspace {

void Report::set_config(const std::string& key, std::string value) {
  for (auto& [k, v] : config) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  config.emplace_back(key, std::move(value));
}

void Report::add_metric(const std::string& name, double value) {
  for (auto& [k, v] : metrics) {
    if (k == name) {
      v = value;
      return;
    }
  }
  metrics.emplace_back(name, value);
}

void Report::check(const std::string& name, bool ok) {
  if (!ok) failures.push_back(name);
}

double Report::metric(const std::string& name) const {
  for (const auto& [k, v] : metrics) {
    if (k == name) return v;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::string to_json(const Report& report) {
  nlohmann::ordered_json j;
  j["subcommand"] = report.subcommand;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.config) config[k] = v;
  j["config"] = config;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.metrics) {
    if (std::isfinite(v)) {
      metrics[k] = v;
    } else {
      metrics[k] = nullptr;
    }
  }
  j["metrics"] = metrics;
  j["pass"] = report.pass();
  j["failures"] = report.failures;
  return j.dump(2) + "\n";
}

std::string metadata_json(const Report& report) {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  nlohmann::ordered_json j;
  j["subcommand"] = report.subcommand;
  j["unix_time"] = secs;
  j["compiler"] = __VERSION__;
  return j.dump(2) + "\n";
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_grid_csv(const std::filesystem::path& path, const AxisymGrid& grid,
                    std::span<const double> values) {
  if (values.size() != grid.node_count()) throw DomainError("write_grid_csv: size mismatch");
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string());
  out << "r,z,value\n";
  for (int j = 0; j <= grid.m_z; ++j) {
    for (int i = 0; i <= grid.m_r; ++i) {
      out << format_number(grid.r(i)) << ',' << format_number(grid.z(j)) << ','
          << format_number(values[grid.index(i, j)]) << '\n';
    }
  }
}

void write_points_csv(const std::filesystem::path& path, std::span<const Point> points,
                      std::span<const double> values) {
  if (points.size() != values.size()) throw DomainError("write_points_csv: size mismatch");
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string());
  const Eigen::Index n = points.empty() ? 0 : points.front().size();
  for (Eigen::Index d = 0; d < n; ++d) out << 'x' << d + 1 << ',';
  out << "value\n";
  for (std::size_t k = 0; k < points.size(); ++k) {
    for (Eigen::Index d = 0; d < n; ++d) out << format_number(points[k][d]) << ',';
    out << format_number(values[k]) << '\n';
  }
}

}  // namespace halfspace
