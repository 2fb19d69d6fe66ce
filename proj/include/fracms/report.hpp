#pragma once

#include <string>

#include "fracms/asymptotics.hpp"
#include "fracms/config.hpp"
#include "fracms/limits.hpp"
#include "fracms/mass.hpp"
#include "fracms/seminorm.hpp"

namespace fracms {

/// {"value", "error", "error_kind"}; every number in a report has this shape.
json to_json(const EstimateWithError& e);
/// A closed-form or quadrature oracle value with its error bound.
json number_json(double value, double error = 0.0, ErrorKind kind = ErrorKind::exact);
json to_json(const SSweepResult& r);
json to_json(const SeminormBreakdown& b);
json to_json(const MassAtInfinity& m);
json to_json(const LimitReport& r);

/// Sweep table: a "# limit=... limit_error=... model=... residual=... flag=..."
/// comment line, then the header s,value,error,error_kind and one row per s.
std::string sweep_csv(const SSweepResult& r);

/// Round-trip-exact decimal form of a double.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace fracms
