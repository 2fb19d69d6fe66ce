// fracms: experiment runner for fractional seminorms, masses at infinity and
// perimeter limits.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "fracms/acceptance.hpp"
#include "fracms/config.hpp"
#include "fracms/gausskernel.hpp"
#include "fracms/limits.hpp"
#include "fracms/mass.hpp"
#include "fracms/report.hpp"
#include "fracms/seminorm.hpp"

namespace {

using namespace fracms;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitVerify = 2;

struct Overrides {
  std::string config_path;
  std::optional<int> d, p;
  std::optional<double> s, R, delta;
  std::vector<double> s_grid, x;
  std::string field, omega, E, quantity;
  std::optional<std::uint64_t> samples, seed;
  std::optional<unsigned> batches, threads;
  std::string report, csv;
  // verify only
  std::vector<int> only;
  double budget_scale = 1.0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("$", "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_flag_json(const std::string& text, const std::string& path) {
  try {
    return parse_document(text);
  } catch (const std::exception& e) {
    throw ConfigError(path, std::string("invalid JSON in flag: ") + e.what());
  }
}

// Flags are merged into the document so the schema check sees one config.
json merged_document(const std::string& command, const Overrides& o) {
  json doc = json::object();
  if (!o.config_path.empty()) {
    try {
      doc = parse_document(read_file(o.config_path));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("$", e.what());
    }
    if (!doc.is_object()) throw ConfigError("$", "config must be a JSON object");
  }
  doc["command"] = command;
  if (o.d) doc["d"] = *o.d;
  if (o.p) doc["p"] = *o.p;
  if (o.s) doc["s"] = *o.s;
  if (o.R) doc["R"] = *o.R;
  if (o.delta) doc["delta"] = *o.delta;
  if (!o.s_grid.empty()) doc["s_grid"] = o.s_grid;
  if (!o.x.empty()) doc["x"] = o.x;
  if (!o.field.empty()) doc["field"] = parse_flag_json(o.field, "$.field");
  if (!o.omega.empty()) doc["omega"] = parse_flag_json(o.omega, "$.omega");
  if (!o.E.empty()) doc["E"] = parse_flag_json(o.E, "$.E");
  if (!o.quantity.empty()) doc["quantity"] = o.quantity;
  if (o.samples || o.seed || o.batches) {
    json& q = doc["quadrature"];
    if (q.is_null()) q = json::object();
    if (o.samples) q["sample_budget"] = *o.samples;
    if (o.seed) q["seed"] = *o.seed;
    if (o.batches) q["batch_count"] = *o.batches;
  }
  if (o.threads) doc["threads"] = *o.threads;
  if (!o.report.empty()) doc["output"]["report"] = o.report;
  if (!o.csv.empty()) doc["output"]["csv"] = o.csv;
  return doc;
}

template <class T>
const T& require(const std::optional<T>& v, const char* path, const char* what) {
  if (!v) throw ConfigError(path, std::string("required: ") + what);
  return *v;
}

std::vector<double> grid_or_default(const ExperimentConfig& c, std::vector<double> fallback) {
  return c.s_grid.empty() ? std::move(fallback) : c.s_grid;
}

std::vector<double> default_limit_grid() { return geometric_grid(2e-2, 2e-5, 7); }

struct Outcome {
  json results = json::object();
  std::optional<SSweepResult> sweep;
};

Outcome run_alpha(const ExperimentConfig& c) {
  Outcome out;
  const Dim d(c.d);
  const Field& f = require(c.field, "$.field", "a field");
  const double R = c.R.value_or(1.0);
  if (c.s) {
    Vec x{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < c.x.size(); ++i) x[i] = c.x[i];
    out.results["alpha_at_s"] = to_json(alpha_at_s(f, c.p, *c.s, R, x));
    out.results["s"] = *c.s;
    out.results["R"] = R;
    return out;
  }
  const SSweepResult sw = alpha_numeric(f, c.p, d, grid_or_default(c, default_alpha_grid()), R, c.quadrature);
  out.results["sweep"] = to_json(sw);
  out.results["mass"] = to_json(mass_from_sweep(sw, c.p));
  try {
    const MassAtInfinity a = alpha_analytic(f, c.p, d);
    out.results["oracle"] = {{"alpha_analytic", to_json(a)}, {"abs_delta", std::abs(a.value - sw.limit)}};
  } catch (const std::exception& e) {
    out.results["oracle"] = {{"note", e.what()}};
  }
  out.sweep = sw;
  return out;
}

Outcome run_seminorm(const ExperimentConfig& c) {
  Outcome out;
  const Field& f = require(c.field, "$.field", "a field");
  const Region& omega = require(c.omega, "$.omega", "the region omega");
  const double s = require(c.s, "$.s", "s (use the sweep command for a grid)");
  const double R = c.R.value_or(default_radius(omega));
  out.results["breakdown"] = to_json(gagliardo_qomega(f, omega, s, c.p, R, c.quadrature));
  return out;
}

Outcome run_perimeter(const ExperimentConfig& c) {
  Outcome out;
  const Region& E = require(c.E, "$.E", "the set E");
  const Region& omega = require(c.omega, "$.omega", "the region omega");
  const double s = require(c.s, "$.s", "s (use the sweep command for a grid)");
  const double R = c.R.value_or(default_radius(omega));
  const EstimateWithError per = fractional_perimeter(E, omega, s, R, c.quadrature);
  out.results["perimeter"] = to_json(per);
  out.results["half_s_perimeter"] = to_json((0.5 * s) * per);
  try {
    out.results["oracle"] = {{"limit_half_s_perimeter", number_json(perimeter_limit(E, omega, Dim(c.d)))}};
  } catch (const std::exception& e) {
    out.results["oracle"] = {{"note", e.what()}};
  }
  return out;
}

Outcome run_limit(const ExperimentConfig& c) {
  Outcome out;
  const Dim d(c.d);
  const Field& f = require(c.field, "$.field", "a field");
  const Region& omega = require(c.omega, "$.omega", "the region omega");
  if (c.p == 2) {
    out.results["limits"] = to_json(limit_report(f, omega, d, c.quadrature));
  } else if (c.p % 2 == 0) {
    out.results["F0_even_p"] = number_json(F0_even_p(f, omega, c.p, d), 0.0, ErrorKind::analytic);
  } else {
    out.results["binomial_alternating_sum"] =
        number_json(binomial_alternating_sum(f, omega, c.p, d), 0.0, ErrorKind::analytic);
    out.results["note"] = "for odd p the alternating sum is not the limit of (s/2)[u]^p";
  }
  return out;
}

Outcome run_hardy(const ExperimentConfig& c) {
  Outcome out;
  const Field& f = require(c.field, "$.field", "a field");
  const Region& omega = require(c.omega, "$.omega", "the region omega");
  const double s = require(c.s, "$.s", "s");
  const HardyPair h = hardy_pair(f, omega, s, c.delta, Dim(c.d), c.quadrature);
  out.results["lhs"] = to_json(h.lhs);
  out.results["rhs"] = to_json(h.rhs);
  out.results["margin"] = to_json(EstimateWithError{h.rhs.value - h.lhs.value, h.rhs.error + h.lhs.error,
                                                    std::max(h.rhs.kind, h.lhs.kind)});
  out.results["holds"] = h.rhs.value - h.lhs.value > h.rhs.error + h.lhs.error;
  return out;
}

json gauss_oracles(const Region& E, const Region& omega, Dim d) {
  json o = json::object();
  try {
    o["closed_form"] = number_json(gauss_limit_closed_form(E, omega), 0.0, ErrorKind::analytic);
  } catch (const std::exception& e) {
    o["closed_form_note"] = e.what();
  }
  try {
    o["dominated"] = number_json(gauss_limit_dominated(E, omega, d), 0.0, ErrorKind::analytic);
  } catch (const std::exception& e) {
    o["dominated_note"] = e.what();
  }
  return o;
}

Outcome run_gauss(const ExperimentConfig& c) {
  Outcome out;
  const Dim d(c.d);
  const Region& E = require(c.E, "$.E", "the set E");
  const Region& omega = require(c.omega, "$.omega", "the region omega");
  const double s = require(c.s, "$.s", "s (use the sweep command for a grid)");
  const EstimateWithError p = gauss_perimeter(E, omega, s, d, c.quadrature);
  out.results["gauss_perimeter"] = to_json(p);
  out.results["s_gauss_perimeter"] = to_json(s * p);
  out.results["oracle"] = gauss_oracles(E, omega, d);
  return out;
}

Outcome run_sweep(const ExperimentConfig& c) {
  Outcome out;
  const Dim d(c.d);
  std::function<EstimateWithError(double)> eval;
  std::vector<double> grid;
  json oracle = json::object();
  switch (c.quantity) {
    case SweepQuantity::alpha: {
      const Field& f = require(c.field, "$.field", "a field");
      const SSweepResult sw =
          alpha_numeric(f, c.p, d, grid_or_default(c, default_alpha_grid()), c.R.value_or(1.0), c.quadrature);
      out.results["quantity"] = "s * int_{|y|>R} f |y|^{-d-sp}";
      try {
        out.results["oracle"] = {{"alpha_analytic", to_json(alpha_analytic(f, c.p, d))}};
      } catch (const std::exception& e) {
        out.results["oracle"] = {{"note", e.what()}};
      }
      out.results["sweep"] = to_json(sw);
      out.sweep = sw;
      return out;
    }
    case SweepQuantity::seminorm: {
      const Field& f = require(c.field, "$.field", "a field");
      const Region& omega = require(c.omega, "$.omega", "the region omega");
      const double R = c.R.value_or(default_radius(omega));
      eval = [&, R](double s) { return (0.5 * s) * gagliardo_qomega(f, omega, s, c.p, R, c.quadrature).total; };
      out.results["quantity"] = "(s/2) [u]^p on Q_Omega";
      if (c.p == 2) {
        try {
          oracle["F0_main"] = number_json(F0_main(f, omega, d), 0.0, ErrorKind::analytic);
        } catch (const std::exception& e) {
          oracle["note"] = e.what();
        }
      } else if (c.p % 2 == 0) {
        oracle["F0_even_p"] = number_json(F0_even_p(f, omega, c.p, d), 0.0, ErrorKind::analytic);
      }
      break;
    }
    case SweepQuantity::perimeter: {
      const Region& E = require(c.E, "$.E", "the set E");
      const Region& omega = require(c.omega, "$.omega", "the region omega");
      const double R = c.R.value_or(default_radius(omega));
      eval = [&, R](double s) { return (0.5 * s) * fractional_perimeter(E, omega, s, R, c.quadrature); };
      out.results["quantity"] = "(s/2) Per_s(E; Omega)";
      try {
        oracle["perimeter_limit"] = number_json(perimeter_limit(E, omega, d), 0.0, ErrorKind::analytic);
      } catch (const std::exception& e) {
        oracle["note"] = e.what();
      }
      break;
    }
    case SweepQuantity::gauss: {
      const Region& E = require(c.E, "$.E", "the set E");
      const Region& omega = require(c.omega, "$.omega", "the region omega");
      eval = [&](double s) { return s * gauss_perimeter(E, omega, s, d, c.quadrature); };
      out.results["quantity"] = "s P^gamma_s(E; Omega)";
      oracle = gauss_oracles(E, omega, d);
      break;
    }
  }
  const SSweepResult sw = sweep(eval, grid_or_default(c, default_limit_grid()));
  out.results["sweep"] = to_json(sw);
  out.results["oracle"] = oracle;
  out.sweep = sw;
  return out;
}

Outcome dispatch(const ExperimentConfig& c) {
  switch (c.command) {
    case Command::alpha: return run_alpha(c);
    case Command::seminorm: return run_seminorm(c);
    case Command::perimeter: return run_perimeter(c);
    case Command::limit: return run_limit(c);
    case Command::hardy: return run_hardy(c);
    case Command::gauss: return run_gauss(c);
    case Command::sweep: return run_sweep(c);
    case Command::verify: break;
  }
  throw ConfigError("$.command", "verify is handled separately");
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

int run_experiment(const std::string& command, const Overrides& o) {
  ExperimentConfig c;
  try {
    c = parse_config(merged_document(command, o));
  } catch (const ConfigError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  }
  if (c.threads) set_thread_count(*c.threads);
  Outcome out;
  try {
    out = dispatch(c);
  } catch (const ConfigError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  }
  json report = {{"command", to_string(c.command)}, {"input", c.source}, {"results", out.results}};
  emit(c.report_path, report.dump(2) + "\n");
  if (out.sweep && !c.csv_path.empty()) emit(c.csv_path, sweep_csv(*out.sweep));
  return kExitOk;
}

int run_verify(const Overrides& o) {
  if (o.threads) set_thread_count(*o.threads);
  AcceptanceOptions opts;
  opts.only = o.only;
  opts.budget_scale = o.budget_scale;
  if (!(opts.budget_scale > 0.0)) {
    std::cerr << "input error: --budget-scale must be > 0\n";
    return kExitInput;
  }
  opts.on_result = [](const CriterionResult& r) {
    std::cout << format_result_line(r) << std::endl;
  };
  const std::vector<CriterionResult> results = run_acceptance(opts);
  int failed = 0;
  json rows = json::array();
  for (const CriterionResult& r : results) {
    failed += r.pass ? 0 : 1;
    rows.push_back(to_json(r));
  }
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
  if (!o.report.empty()) {
    json report = {{"command", "verify"},
                   {"budget_scale", opts.budget_scale},
                   {"criteria", rows},
                   {"passed", results.size() - failed},
                   {"failed", failed}};
    write_text_file(o.report, report.dump(2) + "\n");
  }
  return failed == 0 ? kExitOk : kExitVerify;
}

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("config", o.config_path, "Config file (JSON, // comments allowed)");
  sub->add_option("-d,--dim", o.d, "Dimension (1-3)");
  sub->add_option("-p", o.p, "Exponent p");
  sub->add_option("-s", o.s, "Fractional order s in (0,1)");
  sub->add_option("--s-grid", o.s_grid, "Decreasing s grid")->delimiter(',');
  sub->add_option("-R", o.R, "Exterior radius");
  sub->add_option("--delta", o.delta, "Hardy delta in (0,1)");
  sub->add_option("-x", o.x, "Translation point")->delimiter(',');
  sub->add_option("--field", o.field, "Field spec as JSON");
  sub->add_option("--omega", o.omega, "Omega region spec as JSON");
  sub->add_option("--E", o.E, "Set E region spec as JSON");
  sub->add_option("--samples", o.samples, "Monte Carlo sample budget");
  sub->add_option("--seed", o.seed, "Random seed");
  sub->add_option("--batches", o.batches, "Batch count");
  sub->add_option("--threads", o.threads, "Worker threads (default: FRACMS_THREADS or all cores)");
  sub->add_option("--report", o.report, "JSON report path ('-' for stdout)");
  sub->add_option("--csv", o.csv, "CSV path for sweeps ('-' for stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional seminorms, masses at infinity and s -> 0 limits"};
  app.require_subcommand(1);
  Overrides o;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"alpha", "Mass at infinity: numeric sweep or value at one s"},
      {"seminorm", "Gagliardo seminorm on Q_Omega at one s, by component"},
      {"perimeter", "Fractional perimeter Per_s(E; Omega) at one s"},
      {"limit", "Closed-form s -> 0 limits and their cross-checks"},
      {"hardy", "Both sides of the fractional Hardy inequality"},
      {"gauss", "Gaussian fractional perimeter at one s"},
      {"sweep", "s sweep with extrapolated limit (CSV output)"}};
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), o);
  CLI::App* sweep_cmd = app.get_subcommand("sweep");
  sweep_cmd->add_option("--quantity", o.quantity, "alpha, seminorm, perimeter or gauss");

  CLI::App* verify = app.add_subcommand("verify", "Run the bundled acceptance suite");
  verify->add_option("--only", o.only, "Criterion ids to run")->delimiter(',');
  verify->add_option("--budget-scale", o.budget_scale, "Multiplier for Monte Carlo budgets");
  verify->add_option("--threads", o.threads, "Worker threads");
  verify->add_option("--report", o.report, "JSON report path");
  verify->add_flag_callback("--manifest", [] {
    std::cout << acceptance_manifest_text();
    std::exit(kExitOk);
  }, "Print the acceptance manifest and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }
  try {
    if (verify->parsed()) return run_verify(o);
    for (const auto& [name, help] : commands)
      if (app.get_subcommand(name)->parsed()) return run_experiment(name, o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
