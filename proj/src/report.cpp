#include "fracms/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fracms {

json to_json(const EstimateWithError& e) {
  return {{"value", e.value}, {"error", e.error}, {"error_kind", to_string(e.kind)}};
}

json number_json(double value, double error, ErrorKind kind) {
  return to_json(EstimateWithError{value, error, kind});
}

json to_json(const SSweepResult& r) {
  json points = json::array();
  for (const SweepPoint& p : r.points) {
    json row = to_json(p.estimate);
    row["s"] = p.s;
    points.push_back(row);
  }
  return {{"points", points},
          {"limit", number_json(r.limit, r.limit_error, ErrorKind::statistical)},
          {"fit",
           {{"model", to_string(r.fit_model)},
            {"residual", r.residual},
            {"window", r.window},
            {"clean_limit", r.clean}}}};
}

json to_json(const SeminormBreakdown& b) {
  return {{"s", b.s},
          {"p", b.p},
          {"R", b.R},
          {"interior_interior", to_json(b.interior_interior)},
          {"interior_exterior_near", to_json(b.interior_exterior_near)},
          {"interior_exterior_tail", to_json(b.interior_exterior_tail)},
          {"total", to_json(b.total)}};
}

json to_json(const MassAtInfinity& m) {
  json j = number_json(m.value, m.error, m.kind);
  j["p"] = m.p;
  j["route"] = to_string(m.route);
  return j;
}

json to_json(const LimitReport& r) {
  json j = json::object();
  // Oracle values come from nested adaptive quadrature at relative tolerance 1e-10.
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) j[key] = number_json(*v, 1e-10 * std::abs(*v), ErrorKind::analytic);
  };
  put("F0_binomial", r.F0_binomial);
  put("interaction_energy", r.interaction_energy);
  put("perimeter_limit", r.perimeter_limit);
  put("critical_alpha", r.critical_alpha);
  json deltas = json::object();
  for (const auto& [name, v] : r.consistency_deltas) deltas[name] = number_json(v, 0.0, ErrorKind::analytic);
  j["consistency_deltas"] = deltas;
  j["notes"] = r.notes;
  return j;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sweep_csv(const SSweepResult& r) {
  std::string out = "# limit=" + format_double(r.limit) + " limit_error=" + format_double(r.limit_error) +
                    " model=" + to_string(r.fit_model) + " residual=" + format_double(r.residual) +
                    " flag=" + (r.clean ? "clean" : "no_clean_limit") + "\n";
  out += "s,value,error,error_kind\n";
  for (const SweepPoint& p : r.points)
    out += format_double(p.s) + "," + format_double(p.estimate.value) + "," + format_double(p.estimate.error) + "," +
           to_string(p.estimate.kind) + "\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace fracms
