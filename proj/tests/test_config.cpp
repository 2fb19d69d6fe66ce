#include <random>

#include "doctest.h"
#include "fracms/config.hpp"
#include "fracms/report.hpp"

using namespace fracms;

namespace {

std::string error_path(const std::string& text) {
  try {
    parse_config(parse_document(text));
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

std::string error_message(const std::string& text) {
  try {
    parse_config(parse_document(text));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("a full config parses, comments included") {
  const auto c = parse_config(parse_document(R"({
    // half-disk perimeter sweep
    "command": "sweep",
    "d": 2,
    "quantity": "perimeter",
    "E": {"halfspace": {"normal": [0, 1]}},
    "omega": {"ball": {"radius": 1}},
    "s_grid": [0.02, 0.01, 0.005, 0.0025, 0.00125],
    "quadrature": {"sample_budget": 2000, "seed": 9, "batch_count": 10},
    "threads": 2,
    "output": {"report": "r.json", "csv": "r.csv"}
  })"));
  CHECK(c.command == Command::sweep);
  CHECK(c.quantity == SweepQuantity::perimeter);
  CHECK(c.d == 2);
  REQUIRE(c.E);
  REQUIRE(c.omega);
  CHECK(c.E->contains(Vec{0, 0.5, 0}));
  CHECK(c.s_grid.size() == 5);
  CHECK(c.quadrature.sample_budget == 2000);
  CHECK(c.quadrature.rng_seed == 9);
  CHECK(c.quadrature.batch_count == 10);
  CHECK(*c.threads == 2);
  CHECK(c.report_path == "r.json");
  CHECK(c.csv_path == "r.csv");
}

TEST_CASE("schema violations name the offending path") {
  CHECK(error_path(R"({"command": "alpha", "s": 1.5})") == "$.s");
  CHECK(error_message(R"({"command": "alpha", "s": 1.5})").find("s out of (0,1)") != std::string::npos);
  CHECK(error_path(R"({"command": "alpha", "bogus": 1})") == "$.bogus");
  CHECK(error_path(R"({"command": "fly"})") == "$.command");
  CHECK(error_path(R"({"d": 2})") == "$.command");
  CHECK(error_path(R"({"command": "alpha", "d": 4})") == "$.d");
  CHECK(error_path(R"({"command": "alpha", "s_grid": [0.1, 0.2, 0.3, 0.4, 0.5]})") == "$.s_grid");
  CHECK(error_path(R"({"command": "alpha", "s_grid": [0.1, 0.05, 1.2, 0.01, 0.005]})") == "$.s_grid[2]");
  CHECK(error_path(R"({"command": "alpha", "d": 2,
      "field": {"product": [{"constant": 1}, {"polynomial": [{"exps": [1, 0], "coef": 1}, {"exps": [1], "coef": 2}]}]}})") ==
        "$.field.product[1].polynomial[1].exps");
  CHECK(error_path(R"({"command": "alpha", "d": 2, "omega": {"ball": {"radius": -1}}})") == "$.omega.ball");
  CHECK(error_path(R"({"command": "alpha", "d": 2, "omega": {"ball": {"radius": 1}, "box": {}}})") == "$.omega");
  CHECK(error_path(R"({"command": "alpha", "quadrature": {"sample_budget": 1001}})") == "$.quadrature");
  CHECK(error_path(R"({"command": "alpha", "quadrature": {"samples": 1000}})") == "$.quadrature.samples");
  CHECK(error_path(R"({"command": "alpha", "output": {"plot": "x.png"}})") == "$.output.plot");
  CHECK(error_path(R"({"command": "alpha", "p": 0})") == "$.p");
  CHECK(error_path(R"({"command": "hardy", "delta": 1.0})") == "$.delta");
  CHECK(error_path(R"({"command": "alpha", "d": 1, "field": {"periodic": {"period": 1, "breaks": [0, 2], "values": [1]}}})") ==
        "$.field.periodic");
}

TEST_CASE("region and field round trips through JSON") {
  const Dim d(2);
  const json region_doc = parse_document(R"({"union": [
      {"intersection": [{"halfspace": {"normal": [0, 1], "offset": 0.2}}, {"ball": {"center": [0.1, 0], "radius": 1}}]},
      {"translate": {"region": {"sector": {"arcs": [{"start": 0.5, "length": 1.0}]}}, "offset": [2, 0]}},
      {"complement": {"shells": {"pattern": "dyadic", "scale": 0.5}}},
      {"box": {"lo": [-3, -3], "hi": [-2, -1]}}]})");
  const Region r = parse_region(region_doc, d);
  const Region r2 = parse_region(region_to_json(r), d);

  const json field_doc = parse_document(R"({"sum": [
      {"product": [{"indicator": {"sector": {"angle": 1.0}}}, {"polynomial": [{"exps": [1, 1], "coef": 2}]}]},
      {"scale": {"field": {"radial_angular": {"a": [{"exps": [1, 0], "coef": 1}], "profile": "rational", "rate": 2}}, "c": -1}},
      {"shift": {"field": {"power": {"field": {"pos_part": {"polynomial": [{"exps": [0, 1], "coef": 1}]}}, "k": 2}}, "offset": [0.5, 0]}},
      {"neg_part": {"constant": -0.25}}]})");
  const Field f = parse_field(field_doc, d);
  const Field f2 = parse_field(field_to_json(f), d);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-4.0, 4.0);
  for (int i = 0; i < 300; ++i) {
    const Vec y{U(rng), U(rng), 0};
    CHECK(r.contains(y) == r2.contains(y));
    CHECK(f.eval(y) == doctest::Approx(f2.eval(y)).epsilon(1e-14));
  }
}

TEST_CASE("sector forms by dimension") {
  CHECK(parse_region(parse_document(R"({"sector": {"signs": [-1]}})"), Dim(1)).contains(Vec{-1, 0, 0}));
  CHECK(parse_region(parse_document(R"({"sector": {"caps": [{"axis": [0, 0, 1], "half_angle": 0.5}]}})"), Dim(3))
            .contains(Vec{0, 0, 2}));
  CHECK_THROWS_AS(parse_region(parse_document(R"({"sector": {"angle": 1}})"), Dim(3)), ConfigError);
}

TEST_CASE("sweep CSV layout") {
  SSweepResult r;
  r.points = {{0.1, EstimateWithError::statistical(1.25, 0.01)}, {0.01, EstimateWithError::statistical(1.0, 0.02)}};
  r.limit = 0.975;
  r.limit_error = 0.03;
  r.residual = 0.5;
  r.clean = true;
  const std::string csv = sweep_csv(r);
  CHECK(csv.rfind("# limit=0.97499999999999998 limit_error=0.029999999999999999 model=affine", 0) == 0);
  CHECK(csv.find("flag=clean\n") != std::string::npos);
  CHECK(csv.find("\ns,value,error,error_kind\n") != std::string::npos);
  CHECK(csv.find("\n0.10000000000000001,1.25,0.01,statistical\n") != std::string::npos);
  r.clean = false;
  CHECK(sweep_csv(r).find("flag=no_clean_limit") != std::string::npos);
}

TEST_CASE("every reported number carries error and provenance") {
  const json j = to_json(EstimateWithError::analytic(2.0, 1e-9));
  CHECK(j.at("value") == 2.0);
  CHECK(j.at("error") == 1e-9);
  CHECK(j.at("error_kind") == "analytic");
  SSweepResult r;
  r.points = {{0.1, EstimateWithError::exact(1.0)}};
  const json s = to_json(r);
  CHECK(s.at("points")[0].at("error_kind") == "exact");
  CHECK(s.at("limit").at("error_kind") == "statistical");
  CHECK(s.at("fit").contains("clean_limit"));
}
