#include "fracms/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

#include "fracms/asymptotics.hpp"

namespace fracms {

ConfigError::ConfigError(const std::string& path, const std::string& message)
    : std::invalid_argument(path + ": " + message), path_(path) {}

namespace {

const std::pair<Command, const char*> kCommands[] = {
    {Command::alpha, "alpha"}, {Command::seminorm, "seminorm"}, {Command::perimeter, "perimeter"},
    {Command::limit, "limit"}, {Command::hardy, "hardy"},       {Command::gauss, "gauss"},
    {Command::sweep, "sweep"}, {Command::verify, "verify"},
};

std::string key_path(const std::string& base, const std::string& key) { return base + "." + key; }
std::string index_path(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  require_object(j, path);
  for (const auto& item : j.items()) {
    const bool known = std::any_of(keys.begin(), keys.end(), [&](const char* k) { return item.key() == k; });
    if (!known) throw ConfigError(key_path(path, item.key()), "unknown key");
  }
}

const json& member(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) throw ConfigError(key_path(path, key), "missing required key");
  return j.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<int>();
}

std::uint64_t unsigned_integer(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) throw ConfigError(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], index_path(path, i)));
  return out;
}

std::vector<double> point(const json& j, const std::string& path, Dim d) {
  std::vector<double> v = numbers(j, path);
  if (static_cast<int>(v.size()) != d) throw ConfigError(path, "expected " + std::to_string(int(d)) + " coordinates");
  return v;
}

// A tagged node is an object with exactly one key naming its kind.
std::pair<std::string, const json*> tag_of(const json& j, const std::string& path) {
  require_object(j, path);
  if (j.size() != 1) throw ConfigError(path, "expected exactly one tag");
  const auto it = j.begin();
  return {it.key(), &it.value()};
}

// Wraps library validation errors with the path of the node being built.
template <class F>
auto at_path(const std::string& path, F&& build) {
  try {
    return build();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

Sector parse_sector(const json& j, Dim d, const std::string& path) {
  Sector sec;
  if (d == 1) {
    allow_keys(j, path, {"signs"});
    const json& signs = member(j, path, "signs");
    if (!signs.is_array()) throw ConfigError(key_path(path, "signs"), "expected an array");
    for (std::size_t i = 0; i < signs.size(); ++i) sec.signs.push_back(integer(signs[i], index_path(key_path(path, "signs"), i)));
  } else if (d == 2) {
    allow_keys(j, path, {"angle", "arcs"});
    if (j.contains("angle") == j.contains("arcs")) throw ConfigError(path, "give exactly one of angle, arcs");
    if (j.contains("angle")) {
      sec.arcs.push_back({0.0, number(j.at("angle"), key_path(path, "angle"))});
    } else {
      const json& arcs = j.at("arcs");
      const std::string ap = key_path(path, "arcs");
      if (!arcs.is_array()) throw ConfigError(ap, "expected an array");
      for (std::size_t i = 0; i < arcs.size(); ++i) {
        const std::string p = index_path(ap, i);
        allow_keys(arcs[i], p, {"start", "length"});
        sec.arcs.push_back({number(member(arcs[i], p, "start"), key_path(p, "start")),
                            number(member(arcs[i], p, "length"), key_path(p, "length"))});
      }
    }
  } else {
    allow_keys(j, path, {"caps"});
    const json& caps = member(j, path, "caps");
    const std::string cp = key_path(path, "caps");
    if (!caps.is_array()) throw ConfigError(cp, "expected an array");
    for (std::size_t i = 0; i < caps.size(); ++i) {
      const std::string p = index_path(cp, i);
      allow_keys(caps[i], p, {"axis", "half_angle"});
      Cap c;
      c.axis = to_vec(point(member(caps[i], p, "axis"), key_path(p, "axis"), d), d);
      c.half_angle = number(member(caps[i], p, "half_angle"), key_path(p, "half_angle"));
      sec.caps.push_back(c);
    }
  }
  return sec;
}

std::vector<Region> parse_regions(const json& j, Dim d, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of regions");
  std::vector<Region> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_region(j[i], d, index_path(path, i)));
  return out;
}

std::vector<Monomial> parse_monomials(const json& j, Dim d, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of monomials");
  std::vector<Monomial> terms;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = index_path(path, i);
    allow_keys(j[i], p, {"exps", "coef"});
    Monomial m;
    m.coef = number(member(j[i], p, "coef"), key_path(p, "coef"));
    const json& e = member(j[i], p, "exps");
    const std::string ep = key_path(p, "exps");
    if (!e.is_array() || static_cast<int>(e.size()) != d)
      throw ConfigError(ep, "expected " + std::to_string(int(d)) + " exponents");
    for (int k = 0; k < d; ++k) {
      const int x = integer(e[k], index_path(ep, k));
      if (x < 0) throw ConfigError(index_path(ep, k), "exponent must be >= 0");
      m.exps[k] = x;
    }
    terms.push_back(m);
  }
  return terms;
}

std::vector<Field> parse_fields(const json& j, Dim d, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of fields");
  std::vector<Field> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_field(j[i], d, index_path(path, i)));
  return out;
}

json monomials_to_json(const std::vector<Monomial>& terms, int d) {
  json arr = json::array();
  for (const Monomial& m : terms) {
    json e = json::array();
    for (int k = 0; k < d; ++k) e.push_back(m.exps[k]);
    arr.push_back({{"exps", e}, {"coef", m.coef}});
  }
  return arr;
}

json vec_to_json(const Vec& v, int d) {
  json a = json::array();
  for (int i = 0; i < d; ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& [k, name] : kCommands)
    if (k == c) return name;
  return "?";
}

Command command_from_string(const std::string& s) {
  for (const auto& [k, name] : kCommands)
    if (s == name) return k;
  throw std::invalid_argument("unknown command '" + s + "'");
}

std::string to_string(SweepQuantity q) {
  switch (q) {
    case SweepQuantity::alpha: return "alpha";
    case SweepQuantity::seminorm: return "seminorm";
    case SweepQuantity::perimeter: return "perimeter";
    case SweepQuantity::gauss: return "gauss";
  }
  return "?";
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("malformed document: ") + e.what());
  }
}

Region parse_region(const json& j, Dim d, const std::string& path) {
  const auto [tag, body_ptr] = tag_of(j, path);
  const json& b = *body_ptr;
  const std::string p = key_path(path, tag);
  return at_path(p, [&]() -> Region {
    if (tag == "ball") {
      allow_keys(b, p, {"center", "radius"});
      const std::vector<double> c =
          b.contains("center") ? point(b.at("center"), key_path(p, "center"), d) : std::vector<double>(d, 0.0);
      return make_ball(d, c, number(member(b, p, "radius"), key_path(p, "radius")));
    }
    if (tag == "box") {
      allow_keys(b, p, {"lo", "hi"});
      return make_box(d, point(member(b, p, "lo"), key_path(p, "lo"), d), point(member(b, p, "hi"), key_path(p, "hi"), d));
    }
    if (tag == "halfspace") {
      allow_keys(b, p, {"normal", "offset"});
      const double off = b.contains("offset") ? number(b.at("offset"), key_path(p, "offset")) : 0.0;
      return make_halfspace(d, point(member(b, p, "normal"), key_path(p, "normal"), d), off);
    }
    if (tag == "sector") return make_sector(d, parse_sector(b, d, p));
    if (tag == "shells") {
      allow_keys(b, p, {"pattern", "scale"});
      ShellPattern pat = ShellPattern::log_dyadic;
      if (b.contains("pattern")) {
        const std::string name = string(b.at("pattern"), key_path(p, "pattern"));
        if (name == "log_dyadic") {
          pat = ShellPattern::log_dyadic;
        } else if (name == "dyadic") {
          pat = ShellPattern::dyadic;
        } else {
          throw ConfigError(key_path(p, "pattern"), "expected log_dyadic or dyadic");
        }
      }
      const double scale = b.contains("scale") ? number(b.at("scale"), key_path(p, "scale")) : 1.0;
      return make_shells(d, pat, scale);
    }
    if (tag == "complement") return make_complement(parse_region(b, d, p));
    if (tag == "union") return make_union(parse_regions(b, d, p));
    if (tag == "intersection") return make_intersection(parse_regions(b, d, p));
    if (tag == "translate") {
      allow_keys(b, p, {"region", "offset"});
      return make_translate(parse_region(member(b, p, "region"), d, key_path(p, "region")),
                            point(member(b, p, "offset"), key_path(p, "offset"), d));
    }
    throw ConfigError(p, "unknown region tag");
  });
}

Field parse_field(const json& j, Dim d, const std::string& path) {
  const auto [tag, body_ptr] = tag_of(j, path);
  const json& b = *body_ptr;
  const std::string p = key_path(path, tag);
  return at_path(p, [&]() -> Field {
    if (tag == "constant") return make_constant(d, number(b, p));
    if (tag == "indicator") return make_indicator(parse_region(b, d, p));
    if (tag == "polynomial") return make_polynomial(d, parse_monomials(b, d, p));
    if (tag == "radial_angular") {
      allow_keys(b, p, {"a", "b", "profile", "rate"});
      RadialProfile prof = RadialProfile::exp;
      if (b.contains("profile")) {
        const std::string name = string(b.at("profile"), key_path(p, "profile"));
        if (name == "exp") {
          prof = RadialProfile::exp;
        } else if (name == "rational") {
          prof = RadialProfile::rational;
        } else {
          throw ConfigError(key_path(p, "profile"), "expected exp or rational");
        }
      }
      const auto a = b.contains("a") ? parse_monomials(b.at("a"), d, key_path(p, "a")) : std::vector<Monomial>{};
      const auto bb = b.contains("b") ? parse_monomials(b.at("b"), d, key_path(p, "b")) : std::vector<Monomial>{};
      const double rate = b.contains("rate") ? number(b.at("rate"), key_path(p, "rate")) : 1.0;
      return make_radial_angular(d, a, bb, prof, rate);
    }
    if (tag == "periodic") {
      if (d != 1) throw ConfigError(p, "periodic fields need d = 1");
      allow_keys(b, p, {"period", "breaks", "values"});
      return make_periodic(number(member(b, p, "period"), key_path(p, "period")),
                           numbers(member(b, p, "breaks"), key_path(p, "breaks")),
                           numbers(member(b, p, "values"), key_path(p, "values")));
    }
    if (tag == "shift") {
      allow_keys(b, p, {"field", "offset"});
      return make_shift(parse_field(member(b, p, "field"), d, key_path(p, "field")),
                        point(member(b, p, "offset"), key_path(p, "offset"), d));
    }
    if (tag == "sum") return make_sum(parse_fields(b, d, p));
    if (tag == "product") return make_product(parse_fields(b, d, p));
    if (tag == "scale") {
      allow_keys(b, p, {"field", "c"});
      return make_scale(parse_field(member(b, p, "field"), d, key_path(p, "field")), number(member(b, p, "c"), key_path(p, "c")));
    }
    if (tag == "pos_part") return pos_part(parse_field(b, d, p));
    if (tag == "neg_part") return neg_part(parse_field(b, d, p));
    if (tag == "power") {
      allow_keys(b, p, {"field", "k"});
      const int k = integer(member(b, p, "k"), key_path(p, "k"));
      if (k < 0) throw ConfigError(key_path(p, "k"), "power must be >= 0");
      return power(parse_field(member(b, p, "field"), d, key_path(p, "field")), k);
    }
    throw ConfigError(p, "unknown field tag");
  });
}

QuadratureSpec parse_quadrature(const json& j, const std::string& path) {
  allow_keys(j, path, {"sample_budget", "seed", "target_rel_error", "batch_count"});
  QuadratureSpec q;
  if (j.contains("sample_budget")) q.sample_budget = unsigned_integer(j.at("sample_budget"), key_path(path, "sample_budget"));
  if (j.contains("seed")) q.rng_seed = unsigned_integer(j.at("seed"), key_path(path, "seed"));
  if (j.contains("target_rel_error")) q.target_rel_error = number(j.at("target_rel_error"), key_path(path, "target_rel_error"));
  if (j.contains("batch_count")) {
    const auto bc = unsigned_integer(j.at("batch_count"), key_path(path, "batch_count"));
    if (bc > 1000000) throw ConfigError(key_path(path, "batch_count"), "too large");
    q.batch_count = static_cast<std::uint32_t>(bc);
  }
  at_path(path, [&] {
    q.validate();
    return 0;
  });
  return q;
}

ExperimentConfig parse_config(const json& j) {
  allow_keys(j, "$",
             {"command", "d", "field", "omega", "E", "p", "s", "s_grid", "R", "delta", "x", "quantity", "quadrature",
              "threads", "output"});
  ExperimentConfig c;
  c.source = j;
  const std::string cmd = string(member(j, "$", "command"), "$.command");
  try {
    c.command = command_from_string(cmd);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("$.command", e.what());
  }
  if (j.contains("d")) c.d = integer(j.at("d"), "$.d");
  if (c.d < 1 || c.d > 3) throw ConfigError("$.d", "d must be 1, 2 or 3");
  const Dim d(c.d);
  if (j.contains("field")) c.field = parse_field(j.at("field"), d, "$.field");
  if (j.contains("omega")) c.omega = parse_region(j.at("omega"), d, "$.omega");
  if (j.contains("E")) c.E = parse_region(j.at("E"), d, "$.E");
  if (j.contains("p")) {
    c.p = integer(j.at("p"), "$.p");
    if (c.p < 1) throw ConfigError("$.p", "p must be >= 1");
  }
  auto check_s = [](double s, const std::string& path) {
    if (!(s > 0.0 && s < 1.0)) throw ConfigError(path, "s out of (0,1)");
    return s;
  };
  if (j.contains("s")) c.s = check_s(number(j.at("s"), "$.s"), "$.s");
  if (j.contains("s_grid")) {
    c.s_grid = numbers(j.at("s_grid"), "$.s_grid");
    for (std::size_t i = 0; i < c.s_grid.size(); ++i) check_s(c.s_grid[i], index_path("$.s_grid", i));
    at_path("$.s_grid", [&] {
      validate_s_grid(c.s_grid);
      return 0;
    });
  }
  if (j.contains("R")) {
    c.R = number(j.at("R"), "$.R");
    if (!(*c.R > 0.0)) throw ConfigError("$.R", "R must be > 0");
  }
  if (j.contains("delta")) {
    c.delta = number(j.at("delta"), "$.delta");
    if (!(c.delta > 0.0 && c.delta < 1.0)) throw ConfigError("$.delta", "delta must lie in (0,1)");
  }
  if (j.contains("x")) c.x = point(j.at("x"), "$.x", d);
  if (j.contains("quantity")) {
    const std::string q = string(j.at("quantity"), "$.quantity");
    bool found = false;
    for (SweepQuantity k : {SweepQuantity::alpha, SweepQuantity::seminorm, SweepQuantity::perimeter, SweepQuantity::gauss})
      if (to_string(k) == q) {
        c.quantity = k;
        found = true;
      }
    if (!found) throw ConfigError("$.quantity", "expected alpha, seminorm, perimeter or gauss");
  }
  if (j.contains("quadrature")) c.quadrature = parse_quadrature(j.at("quadrature"), "$.quadrature");
  if (j.contains("threads")) {
    const auto t = unsigned_integer(j.at("threads"), "$.threads");
    if (t < 1 || t > 1024) throw ConfigError("$.threads", "threads must lie in [1, 1024]");
    c.threads = static_cast<unsigned>(t);
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    allow_keys(o, "$.output", {"report", "csv"});
    if (o.contains("report")) c.report_path = string(o.at("report"), "$.output.report");
    if (o.contains("csv")) c.csv_path = string(o.at("csv"), "$.output.csv");
  }
  return c;
}

json region_to_json(const Region& r) {
  const int d = r.dim();
  return std::visit(
      [&](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return {{"ball", {{"center", vec_to_json(n.center, d)}, {"radius", n.radius}}}};
        } else if constexpr (std::is_same_v<T, Box>) {
          return {{"box", {{"lo", vec_to_json(n.lo, d)}, {"hi", vec_to_json(n.hi, d)}}}};
        } else if constexpr (std::is_same_v<T, HalfSpace>) {
          return {{"halfspace", {{"normal", vec_to_json(n.normal, d)}, {"offset", n.offset}}}};
        } else if constexpr (std::is_same_v<T, Sector>) {
          json body = json::object();
          if (d == 1) {
            body["signs"] = n.signs;
          } else if (d == 2) {
            json arcs = json::array();
            for (const Arc& a : n.arcs) arcs.push_back({{"start", a.start}, {"length", a.length}});
            body["arcs"] = arcs;
          } else {
            json caps = json::array();
            for (const Cap& c : n.caps) caps.push_back({{"axis", vec_to_json(c.axis, d)}, {"half_angle", c.half_angle}});
            body["caps"] = caps;
          }
          return {{"sector", body}};
        } else if constexpr (std::is_same_v<T, RadialShells>) {
          return {{"shells",
                   {{"pattern", n.pattern == ShellPattern::log_dyadic ? "log_dyadic" : "dyadic"}, {"scale", n.scale}}}};
        } else if constexpr (std::is_same_v<T, Complement>) {
          return {{"complement", region_to_json(n.child[0])}};
        } else if constexpr (std::is_same_v<T, Translate>) {
          return {{"translate", {{"region", region_to_json(n.child[0])}, {"offset", vec_to_json(n.offset, d)}}}};
        } else {
          json arr = json::array();
          for (const Region& c : n.children) arr.push_back(region_to_json(c));
          return {{std::is_same_v<T, Union> ? "union" : "intersection", arr}};
        }
      },
      r.node());
}

json field_to_json(const Field& f) {
  const int d = f.dim();
  return std::visit(
      [&](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ConstantF>) {
          return {{"constant", n.c}};
        } else if constexpr (std::is_same_v<T, IndicatorF>) {
          return {{"indicator", region_to_json(n.region)}};
        } else if constexpr (std::is_same_v<T, PolynomialF>) {
          return {{"polynomial", monomials_to_json(n.terms, d)}};
        } else if constexpr (std::is_same_v<T, RadialAngularF>) {
          return {{"radial_angular",
                   {{"a", monomials_to_json(n.a.terms, d)},
                    {"b", monomials_to_json(n.b.terms, d)},
                    {"profile", n.profile == RadialProfile::exp ? "exp" : "rational"},
                    {"rate", n.rate}}}};
        } else if constexpr (std::is_same_v<T, Periodic1DF>) {
          return {{"periodic", {{"period", n.period}, {"breaks", n.breaks}, {"values", n.values}}}};
        } else if constexpr (std::is_same_v<T, ShiftF>) {
          return {{"shift", {{"field", field_to_json(n.child[0])}, {"offset", vec_to_json(n.offset, d)}}}};
        } else if constexpr (std::is_same_v<T, ScaleF>) {
          return {{"scale", {{"field", field_to_json(n.child[0])}, {"c", n.c}}}};
        } else if constexpr (std::is_same_v<T, PosPartF>) {
          return {{"pos_part", field_to_json(n.child[0])}};
        } else if constexpr (std::is_same_v<T, NegPartF>) {
          return {{"neg_part", field_to_json(n.child[0])}};
        } else if constexpr (std::is_same_v<T, PowerF>) {
          return {{"power", {{"field", field_to_json(n.child[0])}, {"k", n.k}}}};
        } else {
          json arr = json::array();
          for (const Field& c : n.children) arr.push_back(field_to_json(c));
          return {{std::is_same_v<T, SumF> ? "sum" : "product", arr}};
        }
      },
      f.node());
}

}  // namespace fracms
