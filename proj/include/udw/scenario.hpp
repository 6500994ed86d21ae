#pragma once

// Scenario configs: parsing and validation, parameter sweeps over the physics modules, CSV and
// JSON output, and the built-in figure presets.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "udw/cavity.hpp"
#include "udw/common.hpp"
#include "udw/free_linear.hpp"
#include "udw/free_quadratic.hpp"
#include "udw/quadrature.hpp"
#include "udw/wavepacket.hpp"

namespace udw::cli {

using json = nlohmann::ordered_json;

/// Malformed or inconsistent configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A grid point failed numerically; the message names the point.
class RunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Kind {
  linear_one,
  quadratic_one,
  linear_two,
  quadratic_two,
  cavity_one,
  deposit_linear,
  deposit_quadratic,
  energy
};

inline const std::vector<std::pair<Kind, std::string>>& kind_names() {
  static const std::vector<std::pair<Kind, std::string>> names = {
      {Kind::linear_one, "linear_one"},         {Kind::quadratic_one, "quadratic_one"},
      {Kind::linear_two, "linear_two"},         {Kind::quadratic_two, "quadratic_two"},
      {Kind::cavity_one, "cavity_one"},         {Kind::deposit_linear, "deposit_linear"},
      {Kind::deposit_quadratic, "deposit_quadratic"}, {Kind::energy, "energy"}};
  return names;
}

inline std::string to_string(Kind k) {
  for (const auto& [kind, name] : kind_names())
    if (kind == k) return name;
  return "?";
}

struct Grid {
  std::string variable;
  double min = 0.0;
  double max = 1.0;
  int points = 2;
  bool log = false;

  std::vector<double> values() const {
    std::vector<double> v(points);
    for (int i = 0; i < points; ++i) {
      const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
      v[i] = log ? std::exp(std::log(min) + t * (std::log(max) - std::log(min))) : min + t * (max - min);
    }
    v.front() = min;
    v.back() = max;
    return v;
  }
};

struct Scenario {
  std::string name;
  Kind kind = Kind::linear_one;
  json params = json::object();
  Grid sweep;
  std::vector<json> series;  // each entry overrides some params
  std::string output_path;   // empty: standard output
  std::string format = "csv";
  bool raw_coupling = false;  // false: report per lambda-tilde^2
  std::optional<double> rel_tol;
};

// --- parameter schema ------------------------------------------------------------------------

enum class ParamType { integer, number, int_list, number_or_list };

struct ParamSpec {
  std::string name;
  ParamType type;
  bool required;
};

inline std::vector<ParamSpec> schema(Kind k) {
  using P = ParamType;
  switch (k) {
    case Kind::linear_one:
      return {{"n", P::integer, true},    {"k0", P::number, true},     {"sigma", P::number, true},
              {"omega", P::number, true}, {"lambda", P::number, false}, {"delta", P::number, false},
              {"ir_cutoff", P::number, false}};
    case Kind::quadratic_one:
      return {{"n", P::integer, true},    {"k0", P::number, true},      {"sigma", P::number, true},
              {"omega", P::number, true}, {"lambda", P::number, false}, {"ir_cutoff", P::number, false}};
    case Kind::linear_two:
      return {{"n", P::integer, true},      {"eta1", P::number, true},   {"eta2", P::number, true},
              {"sigma", P::number, true},   {"omega", P::number, true},  {"lambda", P::number, false},
              {"delta", P::number, false},  {"ir_cutoff", P::number, false}};
    case Kind::quadratic_two:
      return {{"n", P::integer, true},    {"eta1", P::number, true},    {"eta2", P::number, true},
              {"sigma", P::number, true}, {"omega", P::number, true},   {"lambda", P::number, false},
              {"ir_cutoff", P::number, false}};
    case Kind::cavity_one:
      return {{"L", P::number, true},          {"T", P::number, true},
              {"sigma", P::number, true},      {"k0_index", P::int_list, true},
              {"omega", P::number, false},     {"lambda", P::number, false},
              {"x_frac", P::number_or_list, false}, {"mode_cap", P::integer, false}};
    case Kind::deposit_linear:
      return {{"L", P::number, true},      {"T", P::number, true},       {"omega", P::number, true},
              {"j", P::integer, true},     {"x_frac", P::number, false}, {"lambda", P::number, false}};
    case Kind::deposit_quadratic:
      return {{"L", P::number, true},      {"T", P::number, true},       {"omega", P::number, true},
              {"j", P::integer, true},     {"x_frac", P::number, false}, {"lambda", P::number, false},
              {"k_max", P::integer, false}};
    case Kind::energy:
      return {{"n", P::integer, true}, {"k0", P::number, true}, {"sigma", P::number, true},
              {"ir_cutoff", P::number, false}};
  }
  return {};
}

namespace detail {

inline const ParamSpec* find_param(Kind k, const std::string& name) {
  static thread_local std::vector<ParamSpec> cache;
  cache = schema(k);
  for (const auto& p : cache)
    if (p.name == name) return &p;
  return nullptr;
}

inline void check_value(const std::string& where, const ParamSpec& p, const json& v) {
  auto fail = [&](const std::string& what) { throw ConfigError(where + ": " + what); };
  auto is_int = [](const json& x) {
    return x.is_number_integer() || (x.is_number_float() && std::floor(x.get<double>()) == x.get<double>());
  };
  switch (p.type) {
    case ParamType::integer:
      if (!v.is_number() || !is_int(v)) fail("expected an integer");
      break;
    case ParamType::number:
      if (!v.is_number() || !std::isfinite(v.get<double>())) fail("expected a finite number");
      break;
    case ParamType::int_list:
      if (!v.is_array() || v.empty()) fail("expected a non-empty array of integers");
      for (const auto& x : v)
        if (!x.is_number() || !is_int(x)) fail("expected a non-empty array of integers");
      break;
    case ParamType::number_or_list:
      if (v.is_number()) break;
      if (!v.is_array() || v.empty()) fail("expected a number or an array of numbers");
      for (const auto& x : v)
        if (!x.is_number()) fail("expected a number or an array of numbers");
      break;
  }
}

inline void check_overrides(const std::string& where, Kind kind, const json& obj) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, v] : obj.items()) {
    const ParamSpec* p = find_param(kind, key);
    if (!p) throw ConfigError(where + "." + key + ": not a parameter of kind " + to_string(kind));
    check_value(where + "." + key, *p, v);
  }
}

template <class T>
T get_field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + "." + key + ": missing");
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

}  // namespace detail

/// Builds a Scenario from parsed JSON, checking every field against the schema of its kind.
inline Scenario from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  static const std::set<std::string> known = {"name", "kind", "params", "sweep", "series", "output", "units", "rel_tol"};
  for (const auto& [key, v] : j.items())
    if (!known.count(key)) throw ConfigError(key + ": unknown field");
  Scenario s;
  s.name = j.value("name", std::string{});
  const auto kind = detail::get_field<std::string>(j, "kind", "config");
  bool found = false;
  for (const auto& [k, name] : kind_names())
    if (name == kind) {
      s.kind = k;
      found = true;
    }
  if (!found) throw ConfigError("kind: unknown scenario kind '" + kind + "'");

  if (!j.contains("params")) throw ConfigError("params: missing");
  detail::check_overrides("params", s.kind, j.at("params"));
  s.params = j.at("params");

  if (!j.contains("sweep")) throw ConfigError("sweep: missing");
  const json& sw = j.at("sweep");
  if (!sw.is_object()) throw ConfigError("sweep: expected an object");
  s.sweep.variable = detail::get_field<std::string>(sw, "variable", "sweep");
  s.sweep.min = detail::get_field<double>(sw, "min", "sweep");
  s.sweep.max = detail::get_field<double>(sw, "max", "sweep");
  s.sweep.points = detail::get_field<int>(sw, "points", "sweep");
  const std::string scale = sw.value("scale", std::string{"linear"});
  if (scale != "linear" && scale != "log") throw ConfigError("sweep.scale: must be 'linear' or 'log'");
  s.sweep.log = scale == "log";
  const ParamSpec* sp = detail::find_param(s.kind, s.sweep.variable);
  if (!sp || (sp->type != ParamType::number && sp->type != ParamType::integer))
    throw ConfigError("sweep.variable: '" + s.sweep.variable + "' is not a scalar parameter of kind " +
                      to_string(s.kind));
  if (s.sweep.points < 2) throw ConfigError("sweep.points: grid needs at least 2 points");
  if (!std::isfinite(s.sweep.min) || !std::isfinite(s.sweep.max) || !(s.sweep.max > s.sweep.min))
    throw ConfigError("sweep: need finite min < max");
  if (s.sweep.log && s.sweep.min <= 0.0) throw ConfigError("sweep.min: log grid needs min > 0");
  if (sp->type == ParamType::integer) {
    if (s.sweep.log) throw ConfigError("sweep.scale: integer sweeps must be linear");
    const double step = (s.sweep.max - s.sweep.min) / (s.sweep.points - 1);
    if (std::floor(s.sweep.min) != s.sweep.min || step != std::floor(step))
      throw ConfigError("sweep: integer variable needs an integer start and step");
  }

  if (j.contains("series")) {
    const json& se = j.at("series");
    if (!se.is_array()) throw ConfigError("series: expected an array of objects");
    for (std::size_t i = 0; i < se.size(); ++i) {
      detail::check_overrides("series[" + std::to_string(i) + "]", s.kind, se[i]);
      s.series.push_back(se[i]);
    }
  }

  // every required parameter must be available on every row
  std::vector<json> rows = s.series.empty() ? std::vector<json>{json::object()} : s.series;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& p : schema(s.kind))
      if (p.required && p.name != s.sweep.variable && !s.params.contains(p.name) && !rows[i].contains(p.name))
        throw ConfigError("params." + p.name + ": required for kind " + to_string(s.kind));

  if (j.contains("output")) {
    const json& o = j.at("output");
    if (!o.is_object()) throw ConfigError("output: expected an object");
    s.output_path = o.value("path", std::string{});
    s.format = o.value("format", std::string{"csv"});
    if (s.format != "csv" && s.format != "json") throw ConfigError("output.format: must be 'csv' or 'json'");
  }
  const std::string units = j.value("units", std::string{"dimensionless"});
  if (units != "dimensionless" && units != "raw") throw ConfigError("units: must be 'dimensionless' or 'raw'");
  s.raw_coupling = units == "raw";
  if (j.contains("rel_tol")) {
    const double t = detail::get_field<double>(j, "rel_tol", "config");
    if (!(t > 0.0 && t < 1.0)) throw ConfigError("rel_tol: must lie in (0,1)");
    s.rel_tol = t;
  }
  return s;
}

inline json to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["kind"] = to_string(s.kind);
  j["params"] = s.params;
  j["sweep"] = {{"variable", s.sweep.variable},
                {"min", s.sweep.min},
                {"max", s.sweep.max},
                {"points", s.sweep.points},
                {"scale", s.sweep.log ? "log" : "linear"}};
  if (!s.series.empty()) j["series"] = s.series;
  j["output"] = {{"path", s.output_path}, {"format", s.format}};
  j["units"] = s.raw_coupling ? "raw" : "dimensionless";
  if (s.rel_tol) j["rel_tol"] = *s.rel_tol;
  return j;
}

/// Parses config text; syntax errors carry nlohmann's line/column diagnostics.
inline Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return from_json(j);
}

// --- evaluation -------------------------------------------------------------------------------

struct Row {
  json params;  // every input of this grid point
  double value = 0.0;
  std::vector<Component> components;
  double error_estimate = 0.0;
  std::vector<std::string> warnings;
};

namespace detail {

inline double num(const json& p, const std::string& key, double fallback) {
  return p.contains(key) ? p.at(key).get<double>() : fallback;
}
inline double num(const json& p, const std::string& key) { return p.at(key).get<double>(); }

inline std::optional<double> opt(const json& p, const std::string& key) {
  if (p.contains(key)) return p.at(key).get<double>();
  return std::nullopt;
}

inline std::vector<double> positions(const json& p, int n, double L) {
  std::vector<double> x(n, 0.5 * L);
  if (!p.contains("x_frac")) return x;
  const json& f = p.at("x_frac");
  if (f.is_number()) {
    std::fill(x.begin(), x.end(), f.get<double>() * L);
  } else {
    if (static_cast<int>(f.size()) != n) throw DomainError("x_frac: need one entry per axis");
    for (int i = 0; i < n; ++i) x[i] = f[i].get<double>() * L;
  }
  return x;
}

inline Row evaluate(Kind kind, const json& p, bool raw, double tol) {
  Row row;
  row.params = p;
  const double lambda = num(p, "lambda", 1.0);
  switch (kind) {
    case Kind::linear_one: {
      WavepacketSpec wp{p.at("n").get<int>(), num(p, "k0"), num(p, "sigma"), opt(p, "ir_cutoff")};
      DetectorSpec det{num(p, "omega"), raw ? lambda : 1.0, Coupling::linear, num(p, "delta", 0.0)};
      auto r = linear::prob_one_linear(wp, det);
      const double scale = raw ? 1.0 : std::pow(coupling_scale(wp.n, wp.k0, Coupling::linear), 2);
      row.value = r.value / scale;
      row.error_estimate = r.error_estimate / scale;
      break;
    }
    case Kind::quadratic_one: {
      WavepacketSpec wp{p.at("n").get<int>(), num(p, "k0"), num(p, "sigma"), opt(p, "ir_cutoff")};
      DetectorSpec det{num(p, "omega"), raw ? lambda : 1.0, Coupling::quadratic, 0.0};
      auto r = quadratic::prob_one_quadratic(wp, det, tol);
      const double scale = raw ? 1.0 : std::pow(coupling_scale(wp.n, wp.k0, Coupling::quadratic), 2);
      row.value = r.value / scale;
      row.error_estimate = r.error_estimate / scale;
      break;
    }
    case Kind::linear_two: {
      TwoParticleSpec sp{p.at("n").get<int>(), num(p, "eta1"), num(p, "eta2"), num(p, "sigma"), opt(p, "ir_cutoff")};
      DetectorSpec det{num(p, "omega"), raw ? lambda : 1.0, Coupling::linear, num(p, "delta", 0.0)};
      auto r = linear::prob_two_linear(sp, det);
      const double scale = raw ? 1.0 : std::pow(coupling_scale(sp.n, sp.eta1, Coupling::linear), 2);
      row.value = r.value / scale;
      row.error_estimate = r.error_estimate / scale;
      for (auto c : r.components) row.components.push_back({c.name, c.value / scale});
      break;
    }
    case Kind::quadratic_two: {
      TwoParticleSpec sp{p.at("n").get<int>(), num(p, "eta1"), num(p, "eta2"), num(p, "sigma"), opt(p, "ir_cutoff")};
      DetectorSpec det{num(p, "omega"), raw ? lambda : 1.0, Coupling::quadratic, 0.0};
      auto r = quadratic::prob_two_quadratic(sp, det, tol);
      const double scale = raw ? 1.0 : std::pow(coupling_scale(sp.n, sp.eta1, Coupling::quadratic), 2);
      row.value = r.total / scale;
      row.error_estimate = r.error_estimate / scale;
      row.components = {{"p_q", r.p_q / scale}, {"p_r", r.p_r / scale}, {"p_s", r.p_s / scale}};
      break;
    }
    case Kind::cavity_one: {
      std::vector<int> idx = p.at("k0_index").get<std::vector<int>>();
      CavitySpec cav;
      cav.n = static_cast<int>(idx.size());
      cav.L = num(p, "L");
      cav.T = num(p, "T");
      cav.x_d = positions(p, cav.n, cav.L);
      if (p.contains("mode_cap")) cav.mode_cap = p.at("mode_cap").get<int>();
      const double k0 = cavity::mode_momentum(idx, cav.L);
      DetectorSpec det{num(p, "omega", k0), raw ? lambda : 1.0, Coupling::linear, 0.0};
      const double sigma = num(p, "sigma");
      auto r = cavity::prob_one_cavity(cav, idx, sigma, det);
      const double scale = raw ? 1.0 : std::pow(coupling_scale(cav.n, k0, Coupling::linear), 2);
      row.value = r.value / scale;
      row.error_estimate = r.error_estimate / scale;
      row.components = {{"p_limit", cavity::monochromatic_limit(cav, idx, det) / scale},
                        {"normalization", cavity::discrete_normalization(cav, idx, sigma)}};
      row.warnings = r.warnings;
      break;
    }
    case Kind::deposit_linear:
    case Kind::deposit_quadratic: {
      CavitySpec cav;
      cav.n = 1;
      cav.L = num(p, "L");
      cav.T = num(p, "T");
      cav.x_d = positions(p, 1, cav.L);
      DetectorSpec det{num(p, "omega"), raw ? lambda : 1.0, Coupling::linear, 0.0};
      const int j = p.at("j").get<int>();
      udw::detail::require(j >= 1, "j must be >= 1");
      auto spec = kind == Kind::deposit_linear
                      ? cavity::deposit_linear(cav, det, j)
                      : cavity::deposit_quadratic(cav, det, j, p.contains("k_max") ? p.at("k_max").get<int>() : 0);
      const double scale = raw ? 1.0 : cav.T * cav.T;  // lambda-tilde = lambda T
      row.value = spec.entries.back().n_j / scale;
      row.error_estimate = 64.0 * std::numeric_limits<double>::epsilon() * row.value;
      row.components = {{"omega_j", spec.entries.back().omega_j}};
      break;
    }
    case Kind::energy: {
      WavepacketSpec wp{p.at("n").get<int>(), num(p, "k0"), num(p, "sigma"), opt(p, "ir_cutoff")};
      row.value = wavepacket::energy_expectation(wp);
      row.error_estimate = 64.0 * std::numeric_limits<double>::epsilon() * row.value;
      const double dens = wavepacket::energy_density_origin(wp, tol);
      row.components = {{"energy_density", dens}, {"scaled_density", dens / std::pow(wp.sigma, wp.n)}};
      break;
    }
  }
  return row;
}

}  // namespace detail

/// Every grid point of the scenario: series entries in order, each swept over the grid.
inline std::vector<json> grid_points(const Scenario& s) {
  std::vector<json> out;
  std::vector<json> series = s.series.empty() ? std::vector<json>{json::object()} : s.series;
  const ParamSpec* sp = detail::find_param(s.kind, s.sweep.variable);
  const bool integer = sp && sp->type == ParamType::integer;
  for (const auto& over : series) {
    for (double v : s.sweep.values()) {
      json p = s.params;
      for (const auto& [k, x] : over.items()) p[k] = x;
      if (integer)
        p[s.sweep.variable] = static_cast<long>(std::llround(v));
      else
        p[s.sweep.variable] = v;
      // stable column order
      json sorted = json::object();
      std::vector<std::string> keys;
      for (const auto& [k, x] : p.items()) keys.push_back(k);
      std::sort(keys.begin(), keys.end());
      for (const auto& k : keys) sorted[k] = p[k];
      out.push_back(std::move(sorted));
    }
  }
  return out;
}

inline double effective_tol(const Scenario& s) { return s.rel_tol.value_or(quad::default_rel_tol()); }

inline std::string describe_point(const json& p) {
  std::string d;
  for (const auto& [k, v] : p.items()) d += (d.empty() ? "" : ", ") + k + "=" + v.dump();
  return d;
}

/// Evaluates all grid points on `jobs` worker threads; rows come back in grid order.
inline std::vector<Row> run_rows(const Scenario& s, int jobs = 0) {
  const auto points = grid_points(s);
  const double tol = effective_tol(s);
  std::vector<Row> rows(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min<int>(jobs, static_cast<int>(points.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        rows[i] = detail::evaluate(s.kind, points[i], s.raw_coupling, tol);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw RunError("grid point " + std::to_string(i) + " (" + describe_point(points[i]) + "): " + e.what());
    }
  }
  return rows;
}

// --- output -----------------------------------------------------------------------------------

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

inline std::string format_param(const json& v) {
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_double(v.get<double>());
  if (v.is_array()) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ";") + format_param(x);
    return s;
  }
  return v.dump();
}

inline std::string to_csv(const std::vector<Row>& rows) {
  std::set<std::string> keyset;
  for (const auto& r : rows)
    for (const auto& [k, v] : r.params.items()) keyset.insert(k);
  std::vector<std::string> comps;
  if (!rows.empty())
    for (const auto& c : rows.front().components) comps.push_back(c.name);
  std::ostringstream out;
  bool first = true;
  auto cell = [&](const std::string& s) {
    out << (first ? "" : ",") << s;
    first = false;
  };
  for (const auto& k : keyset) cell(k);
  cell("value");
  for (const auto& c : comps) cell(c);
  cell("error_estimate");
  out << '\n';
  for (const auto& r : rows) {
    first = true;
    for (const auto& k : keyset) cell(r.params.contains(k) ? format_param(r.params.at(k)) : "");
    cell(format_double(r.value));
    for (const auto& c : r.components) cell(format_double(c.value));
    cell(format_double(r.error_estimate));
    out << '\n';
  }
  return out.str();
}

inline std::string to_json_text(const std::vector<Row>& rows) {
  // Numbers are written through format_double so the text matches the CSV digits.
  std::ostringstream out;
  out << "[\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << "  {";
    bool first = true;
    auto field = [&](const std::string& k, const std::string& v) {
      out << (first ? "" : ", ") << '"' << k << "\": " << v;
      first = false;
    };
    for (const auto& [k, v] : r.params.items())
      field(k, v.is_array() ? v.dump() : format_param(v));
    field("value", format_double(r.value));
    for (const auto& c : r.components) field(c.name, format_double(c.value));
    field("error_estimate", format_double(r.error_estimate));
    out << "}" << (i + 1 < rows.size() ? "," : "") << "\n";
  }
  out << "]\n";
  return out.str();
}

struct Summary {
  std::size_t rows = 0;
  std::size_t warnings = 0;
  std::string output_path;
};

/// Runs the sweep and writes the result to the scenario's output path (or `out` if empty).
inline Summary run_scenario(const Scenario& s, int jobs, std::ostream& fallback) {
  const auto rows = run_rows(s, jobs);
  const std::string text = s.format == "json" ? to_json_text(rows) : to_csv(rows);
  Summary sum;
  sum.rows = rows.size();
  for (const auto& r : rows) sum.warnings += r.warnings.size();
  sum.output_path = s.output_path;
  if (s.output_path.empty()) {
    fallback << text;
  } else {
    std::ofstream f(s.output_path, std::ios::binary);
    if (!f) throw RunError("cannot open output file " + s.output_path);
    f << text;
    if (!f) throw RunError("failed writing " + s.output_path);
  }
  return sum;
}

// --- presets ----------------------------------------------------------------------------------
// Free-space presets use k0 = 1 (eta1 = 1); cavity presets use L = pi.

namespace detail {

inline Scenario make(std::string name, Kind kind, json params, Grid sweep, std::vector<json> series = {}) {
  Scenario s;
  s.output_path = name + ".csv";
  s.name = std::move(name);
  s.kind = kind;
  s.params = std::move(params);
  s.sweep = std::move(sweep);
  s.series = std::move(series);
  return s;
}

inline std::vector<json> sigma_series(std::initializer_list<double> sigmas) {
  std::vector<json> out;
  for (double s : sigmas) out.push_back({{"sigma", s}});
  return out;
}

}  // namespace detail

inline const std::vector<Scenario>& presets() {
  static const std::vector<Scenario> all = [] {
    using detail::make;
    using detail::sigma_series;
    std::vector<Scenario> v;
    for (int n = 1; n <= 4; ++n)
      v.push_back(make("fig1_n" + std::to_string(n), Kind::linear_one,
                       {{"n", n}, {"k0", 1.0}, {"sigma", 1.0}, {"omega", 1.0}}, {"omega", 0.02, 3.0, 150, false},
                       sigma_series({1.0, 0.5, 0.25})));
    const double pi_ = std::numbers::pi;
    v.push_back(make("fig2a", Kind::cavity_one,
                     {{"L", pi_}, {"T", 10.0}, {"sigma", 1.0}, {"k0_index", {1, 1, 3}}, {"x_frac", 0.5}},
                     {"sigma", 0.005, 3.0, 40, true}, {json{{"T", 5.0}}, json{{"T", 10.0}}, json{{"T", 20.0}}}));
    v.push_back(make("fig2b", Kind::cavity_one,
                     {{"L", pi_}, {"T", 10.0}, {"sigma", 1.0}, {"k0_index", {1, 1, 3}}, {"x_frac", 0.5}},
                     {"sigma", 0.002, 2.0, 40, true},
                     {json{{"L", pi_}, {"k0_index", {1, 1, 3}}}, json{{"L", 2 * pi_}, {"k0_index", {3, 3, 5}}},
                      json{{"L", 3 * pi_}, {"k0_index", {1, 7, 7}}}}));
    for (int n = 1; n <= 4; ++n)
      v.push_back(make("fig3_n" + std::to_string(n), Kind::quadratic_one,
                       {{"n", n}, {"k0", 1.0}, {"sigma", 1.0}, {"omega", 1.0}}, {"omega", 0.02, 3.0, 150, false},
                       sigma_series({1.0, 0.5, 0.25})));
    v.push_back(make("fig4", Kind::linear_two,
                     {{"n", 3}, {"eta1", 1.0}, {"eta2", 2.0}, {"sigma", 0.25}, {"omega", 1.0}},
                     {"omega", 0.02, 3.5, 175, false}, sigma_series({0.5, 0.25})));
    v.push_back(make("fig4_n1", Kind::linear_two,
                     {{"n", 1}, {"eta1", 1.0}, {"eta2", 2.0}, {"sigma", 0.25}, {"omega", 1.0}},
                     {"omega", 0.02, 3.5, 175, false}, sigma_series({0.5, 0.25})));
    const json fig5 = {{"n", 3}, {"eta1", 1.0}, {"eta2", 3.0}, {"sigma", 0.5}, {"omega", 1.0}};
    v.push_back(make("fig5a", Kind::quadratic_two, fig5, {"omega", 0.05, 3.0, 60, false}));
    v.push_back(make("fig5b", Kind::quadratic_two, fig5, {"omega", 2.0, 6.0, 81, false}));
    v.push_back(make("fig5c", Kind::quadratic_two, fig5, {"omega", 0.05, 4.0, 80, false}));
    v.push_back(make("fig5_sfg", Kind::quadratic_two, fig5, {"omega", 2.0, 6.0, 81, false}));
    for (int n : {1, 2, 4}) {
      json p = fig5;
      p["n"] = n;
      v.push_back(make("fig6_n" + std::to_string(n), Kind::quadratic_two, p, {"omega", 0.05, 6.0, 120, false},
                       sigma_series({1.0, 0.5})));
    }
    v.push_back(make("deposits_linear", Kind::deposit_linear,
                     {{"L", pi_}, {"T", 0.5}, {"omega", 6.0}, {"x_frac", 0.5}, {"j", 1}}, {"j", 1, 20, 20, false},
                     {json{{"T", 0.1}, {"x_frac", 0.5}}, json{{"T", 20.0 / 6.0}, {"x_frac", 0.5}},
                      json{{"T", 0.1}, {"x_frac", pi_ / 7.0}}, json{{"T", 20.0 / 6.0}, {"x_frac", pi_ / 7.0}}}));
    v.push_back(make("deposits_quadratic", Kind::deposit_quadratic,
                     {{"L", pi_}, {"T", 4.0}, {"omega", 5.0}, {"x_frac", 0.5}, {"j", 1}}, {"j", 1, 20, 20, false},
                     {json{{"T", 0.1}, {"x_frac", 0.5}}, json{{"T", 4.0}, {"x_frac", 0.5}},
                      json{{"omega", 6.0}, {"T", 20.0 / 6.0}, {"x_frac", pi_ / 7.0}}}));
    v.push_back(make("energy", Kind::energy, {{"n", 3}, {"k0", 1.0}, {"sigma", 1.0}},
                     {"sigma", 0.01, 2.0, 30, true},
                     {json{{"n", 1}}, json{{"n", 2}}, json{{"n", 3}}, json{{"n", 4}}}));
    return v;
  }();
  return all;
}

inline const Scenario& preset(const std::string& name) {
  for (const auto& s : presets())
    if (s.name == name) return s;
  throw ConfigError("unknown preset '" + name + "' (see list-presets)");
}

inline std::string list_presets() {
  std::string out;
  for (const auto& s : presets())
    out += s.name + "\t" + to_string(s.kind) + "\tsweep " + s.sweep.variable + "\n";
  return out;
}

}  // namespace udw::cli
