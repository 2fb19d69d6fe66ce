#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "fracms/fields.hpp"
#include "fracms/geometry.hpp"
#include "fracms/quad.hpp"

namespace fracms {

using json = nlohmann::json;

/// Schema violation; what() starts with the JSON path of the offending node.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& path, const std::string& message);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class Command { alpha, seminorm, perimeter, limit, hardy, gauss, sweep, verify };

std::string to_string(Command c);
Command command_from_string(const std::string& s);

/// Quantity swept by the `sweep` command.
enum class SweepQuantity { alpha, seminorm, perimeter, gauss };

std::string to_string(SweepQuantity q);

struct ExperimentConfig {
  Command command = Command::verify;
  int d = 1;
  std::optional<Field> field;
  std::optional<Region> omega;
  std::optional<Region> E;
  int p = 2;
  std::optional<double> s;
  std::vector<double> s_grid;
  std::optional<double> R;
  double delta = 0.5;
  std::vector<double> x;
  SweepQuantity quantity = SweepQuantity::alpha;
  QuadratureSpec quadrature;
  std::optional<unsigned> threads;
  std::string report_path;
  std::string csv_path;
  /// The document as read, echoed into reports.
  json source;
};

/// Parses a commented JSON document.
json parse_document(const std::string& text);

Region parse_region(const json& j, Dim d, const std::string& path = "$");
Field parse_field(const json& j, Dim d, const std::string& path = "$");
QuadratureSpec parse_quadrature(const json& j, const std::string& path = "$.quadrature");

/// Full schema validation; the config is checked before anything is computed.
ExperimentConfig parse_config(const json& j);

json region_to_json(const Region& r);
json field_to_json(const Field& f);

}  // namespace fracms
