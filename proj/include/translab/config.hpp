#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "boundary.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "monitor.hpp"
#include "operators.hpp"
#include "stencil.hpp"
#include "stepper.hpp"

namespace translab {

using json = nlohmann::json;

enum class InitialKind {
  polynomial,            // sum over axes of sum_k c_k x_axis^k
  quadratic_cosine,      // Q(x) + A cos(pi x_1); Q the flux steady profile on intervals, |x - c|^2 / 2 otherwise
  disk_bump,             // |x - c|^2 / 2 + A (1 - |x - c|^2 / R^2) cos(pi x_1)
  disk_bump_compatible,  // |x - c|^2 / 2 + A (1 - |x - c|^2 / R^2)^2 cos(pi x_1), gradient unchanged on the rim
};

struct InitialSpec {
  InitialKind kind = InitialKind::quadratic_cosine;
  double amplitude = 0.0;
  std::vector<std::vector<double>> coefficients;
};

struct RunConfig {
  DomainSpec domain;
  std::string operator_family = "trace";
  double tau = 0.0;
  BoundarySpec boundary;
  double phi = 0.0;  // constant Neumann data
  InitialSpec initial;
  StepConfig time;
  Tolerances tolerances;
  std::string output_dir;
  json document;  // the validated source document

  OperatorSpec op() const { return operator_family == "trace" ? OperatorSpec::trace() : OperatorSpec::tau_family(tau); }
};

namespace detail {

inline void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key))
      throw ConfigError("unknown key '" + key + "' at " + (path.empty() ? key : path + "." + key));
}

inline const json& require(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError("missing required key " + path + "." + key);
  return obj.at(key);
}

inline double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path + ": must be finite");
  return d;
}

inline double positive(const json& v, const std::string& path) {
  const double d = number(v, path);
  if (!(d > 0.0)) throw ConfigError(path + ": must be > 0");
  return d;
}

inline std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path + ": expected a string");
  return v.get<std::string>();
}

inline std::pair<std::size_t, std::size_t> line_column(std::string_view src, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < src.size(); ++i) {
    if (src[i] == '\n') ++line, col = 1;
    else ++col;
  }
  return {line, col};
}

}  // namespace detail

/// Validates a configuration document against the strict schema.
inline RunConfig config_from_json(const json& doc) {
  using namespace detail;
  check_keys(doc, "", {"domain", "operator", "boundary", "initial", "time", "tolerances", "output"});
  RunConfig c;
  c.document = doc;

  {
    const json& d = require(doc, "", "domain");
    check_keys(d, "domain", {"kind", "bounds", "resolution"});
    const std::string kind = text(require(d, "domain", "kind"), "domain.kind");
    if (kind == "interval") c.domain.kind = DomainKind::interval;
    else if (kind == "rectangle") c.domain.kind = DomainKind::rectangle;
    else if (kind == "disk") c.domain.kind = DomainKind::disk;
    else throw ConfigError("domain.kind: unknown domain '" + kind + "'");
    const json& b = require(d, "domain", "bounds");
    if (!b.is_array()) throw ConfigError("domain.bounds: expected an array");
    c.domain.bounds.clear();
    for (std::size_t i = 0; i < b.size(); ++i) c.domain.bounds.push_back(number(b[i], "domain.bounds[" + std::to_string(i) + "]"));
    const json& r = require(d, "domain", "resolution");
    const auto as_res = [](const json& v, const std::string& path) {
      if (!v.is_number_integer()) throw ConfigError(path + ": expected an integer");
      return v.get<int>();
    };
    if (r.is_array()) {
      if (r.size() != static_cast<std::size_t>(c.domain.dim()))
        throw ConfigError("domain.resolution: expected " + std::to_string(c.domain.dim()) + " entries");
      for (std::size_t i = 0; i < r.size(); ++i) c.domain.resolution[i] = as_res(r[i], "domain.resolution");
      if (c.domain.dim() == 1) c.domain.resolution[1] = c.domain.resolution[0];
    } else {
      c.domain.resolution[0] = c.domain.resolution[1] = as_res(r, "domain.resolution");
    }
    try {
      validate(c.domain);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("domain: ") + e.what());
    }
  }

  {
    const json& o = require(doc, "", "operator");
    check_keys(o, "operator", {"family", "tau"});
    c.operator_family = text(require(o, "operator", "family"), "operator.family");
    if (c.operator_family == "tau") {
      const json& t = require(o, "operator", "tau");
      if (t.is_string()) c.tau = parse_tau(t.get<std::string>());
      else c.tau = number(t, "operator.tau");
      (void)OperatorSpec::tau_family(c.tau);
    } else if (c.operator_family == "trace") {
      if (o.contains("tau")) throw ConfigError("operator.tau: only valid with family 'tau'");
    } else {
      throw ConfigError("operator.family: unknown family '" + c.operator_family + "'");
    }
  }

  {
    const json& b = require(doc, "", "boundary");
    check_keys(b, "boundary", {"kind", "alpha", "beta", "phi", "radius"});
    const std::string kind = text(require(b, "boundary", "kind"), "boundary.kind");
    const auto forbid = [&](std::initializer_list<const char*> keys) {
      for (const char* k : keys)
        if (b.contains(k)) throw ConfigError(std::string("boundary.") + k + ": not used by boundary kind '" + kind + "'");
    };
    if (kind == "flux1d") {
      forbid({"phi", "radius"});
      if (c.domain.kind != DomainKind::interval) throw ConfigError("boundary.kind: flux1d requires an interval domain");
      c.boundary = BoundarySpec::flux(number(require(b, "boundary", "alpha"), "boundary.alpha"),
                                      number(require(b, "boundary", "beta"), "boundary.beta"));
    } else if (kind == "neumann") {
      forbid({"alpha", "beta", "radius"});
      c.phi = number(require(b, "boundary", "phi"), "boundary.phi");
      c.boundary = BoundarySpec::neumann([phi = c.phi](const Vec&) { return phi; });
    } else if (kind == "target_disk") {
      forbid({"alpha", "beta", "phi"});
      c.boundary = BoundarySpec::target_disk(positive(require(b, "boundary", "radius"), "boundary.radius"));
    } else {
      throw ConfigError("boundary.kind: unknown boundary '" + kind + "'");
    }
  }

  {
    const json& i = require(doc, "", "initial");
    check_keys(i, "initial", {"kind", "amplitude", "coefficients"});
    const std::string kind = text(require(i, "initial", "kind"), "initial.kind");
    if (kind == "polynomial") {
      c.initial.kind = InitialKind::polynomial;
      if (i.contains("amplitude")) throw ConfigError("initial.amplitude: not used by polynomial initial data");
      const json& co = require(i, "initial", "coefficients");
      if (!co.is_array() || co.size() != static_cast<std::size_t>(c.domain.dim()))
        throw ConfigError("initial.coefficients: expected one coefficient array per axis");
      for (std::size_t a = 0; a < co.size(); ++a) {
        if (!co[a].is_array()) throw ConfigError("initial.coefficients[" + std::to_string(a) + "]: expected an array");
        std::vector<double> axis;
        for (std::size_t k = 0; k < co[a].size(); ++k)
          axis.push_back(number(co[a][k], "initial.coefficients[" + std::to_string(a) + "][" + std::to_string(k) + "]"));
        c.initial.coefficients.push_back(std::move(axis));
      }
    } else {
      if (kind == "quadratic_cosine") c.initial.kind = InitialKind::quadratic_cosine;
      else if (kind == "disk_bump") c.initial.kind = InitialKind::disk_bump;
      else if (kind == "disk_bump_compatible") c.initial.kind = InitialKind::disk_bump_compatible;
      else throw ConfigError("initial.kind: unknown initial data '" + kind + "'");
      if (i.contains("coefficients")) throw ConfigError("initial.coefficients: only valid with kind 'polynomial'");
      c.initial.amplitude = number(require(i, "initial", "amplitude"), "initial.amplitude");
      if (c.initial.kind != InitialKind::quadratic_cosine && c.domain.kind != DomainKind::disk)
        throw ConfigError("initial.kind: " + kind + " requires a disk domain");
    }
  }

  {
    const json& t = require(doc, "", "time");
    check_keys(t, "time", {"dt_safety", "t_end", "t0"});
    c.time.t_end = positive(require(t, "time", "t_end"), "time.t_end");
    if (t.contains("dt_safety")) c.time.dt_safety = positive(t.at("dt_safety"), "time.dt_safety");
    if (t.contains("t0")) c.time.t0 = positive(t.at("t0"), "time.t0");
    c.time.validate();
  }

  {
    const json& t = require(doc, "", "tolerances");
    check_keys(t, "tolerances", {"tol_osc", "tol_speed", "obliqueness_floor", "cap_ut", "cap_grad", "cap_hess"});
    auto& tol = c.tolerances;
    tol.tol_osc = positive(require(t, "tolerances", "tol_osc"), "tolerances.tol_osc");
    tol.tol_speed = positive(require(t, "tolerances", "tol_speed"), "tolerances.tol_speed");
    tol.obliqueness_floor = positive(require(t, "tolerances", "obliqueness_floor"), "tolerances.obliqueness_floor");
    tol.cap_ut = positive(require(t, "tolerances", "cap_ut"), "tolerances.cap_ut");
    tol.cap_grad = positive(require(t, "tolerances", "cap_grad"), "tolerances.cap_grad");
    tol.cap_hess = positive(require(t, "tolerances", "cap_hess"), "tolerances.cap_hess");
  }

  {
    const json& o = require(doc, "", "output");
    check_keys(o, "output", {"dir"});
    c.output_dir = text(require(o, "output", "dir"), "output.dir");
    if (c.output_dir.empty()) throw ConfigError("output.dir: must not be empty");
  }
  return c;
}

/// Parses a JSON configuration document; syntax errors carry line and column.
inline RunConfig parse_config(std::string_view source) {
  json doc;
  try {
    doc = json::parse(source.begin(), source.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = detail::line_column(source, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError("syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                      e.what());
  }
  return config_from_json(doc);
}

/// Initial data u0 as a function of position.
inline std::function<double(const Vec&)> initial_function(const RunConfig& c) {
  const InitialSpec ini = c.initial;
  const int dim = c.domain.dim();
  switch (ini.kind) {
    case InitialKind::polynomial:
      return [ini, dim](const Vec& x) {
        double s = 0.0;
        for (int a = 0; a < dim; ++a) {
          double power = 1.0;
          for (double coef : ini.coefficients[a]) s += coef * power, power *= x[a];
        }
        return s;
      };
    case InitialKind::quadratic_cosine: {
      if (c.domain.kind == DomainKind::interval && c.boundary.kind == BoundaryKind::flux1d) {
        const double a = c.boundary.alpha, b = c.boundary.beta, lo = c.domain.bounds[0];
        return [=](const Vec& x) {
          const double s = x[0] - lo;
          return 0.5 * (b - a) * s * s + a * s + ini.amplitude * std::cos(std::numbers::pi * x[0]);
        };
      }
      const Vec ctr = build_grid(c.domain).centroid();
      return [=](const Vec& x) {
        double r2 = 0.0;
        for (int k = 0; k < dim; ++k) r2 += (x[k] - ctr[k]) * (x[k] - ctr[k]);
        return 0.5 * r2 + ini.amplitude * std::cos(std::numbers::pi * x[0]);
      };
    }
    case InitialKind::disk_bump:
    case InitialKind::disk_bump_compatible: {
      const double cx = c.domain.bounds[0], cy = c.domain.bounds[1], r = c.domain.bounds[2];
      const bool squared = ini.kind == InitialKind::disk_bump_compatible;
      return [=](const Vec& x) {
        const double r2 = (x[0] - cx) * (x[0] - cx) + (x[1] - cy) * (x[1] - cy);
        const double rim = 1.0 - r2 / (r * r);
        return 0.5 * r2 + ini.amplitude * (squared ? rim * rim : rim) * std::cos(std::numbers::pi * x[0]);
      };
    }
  }
  return {};
}

struct PresetInfo {
  std::string name;
  std::string description;
};

namespace detail {

inline json tolerances_json(double tol_osc, double tol_speed, double floor) {
  return {{"tol_osc", tol_osc}, {"tol_speed", tol_speed}, {"obliqueness_floor", floor},
          {"cap_ut", 1e3},      {"cap_grad", 1e3},        {"cap_hess", 1e3}};
}

inline json disk_preset(const std::string& name, const std::string& tau, const std::string& initial) {
  return {{"domain", {{"kind", "disk"}, {"bounds", {0.0, 0.0, 1.0}}, {"resolution", 61}}},
          {"operator", {{"family", "tau"}, {"tau", tau}}},
          {"boundary", {{"kind", "target_disk"}, {"radius", 1.0}}},
          {"initial", {{"kind", initial}, {"amplitude", 0.05}}},
          {"time", {{"dt_safety", 0.9}, {"t_end", 4.0}, {"t0", 0.0625}}},
          {"tolerances", tolerances_json(1e-6, 1e-5, 0.5)},
          {"output", {{"dir", "out/" + name}}}};
}

struct PresetEntry {
  PresetInfo info;
  json document;
};

inline const std::vector<PresetEntry>& preset_registry() {
  static const std::vector<PresetEntry> registry = [] {
    std::vector<PresetEntry> r;
    r.push_back({{"heat-1d",
                  "heat equation on [0,1] with end fluxes 0 and 1, u0 = x^2/2 + 0.1 cos(pi x); translates at speed b - a = 1"},
                 {{"domain", {{"kind", "interval"}, {"bounds", {0.0, 1.0}}, {"resolution", 201}}},
                  {"operator", {{"family", "trace"}}},
                  {"boundary", {{"kind", "flux1d"}, {"alpha", 0.0}, {"beta", 1.0}}},
                  {"initial", {{"kind", "quadratic_cosine"}, {"amplitude", 0.1}}},
                  {"time", {{"dt_safety", 0.9}, {"t_end", 2.0}, {"t0", 0.0625}}},
                  {"tolerances", tolerances_json(1e-6, 1e-5, 0.5)},
                  {"output", {{"dir", "out/heat-1d"}}}}});
    r.push_back({{"heat-1d-mode1",
                  "heat equation on [0,1] with zero end fluxes and u0 = cos(pi x): a single decaying cosine mode"},
                 {{"domain", {{"kind", "interval"}, {"bounds", {0.0, 1.0}}, {"resolution", 101}}},
                  {"operator", {{"family", "trace"}}},
                  {"boundary", {{"kind", "flux1d"}, {"alpha", 0.0}, {"beta", 0.0}}},
                  {"initial", {{"kind", "quadratic_cosine"}, {"amplitude", 1.0}}},
                  {"time", {{"dt_safety", 0.9}, {"t_end", 2.0}, {"t0", 0.0625}}},
                  {"tolerances", tolerances_json(1e-6, 1e-5, 0.5)},
                  {"output", {{"dir", "out/heat-1d-mode1"}}}}});
    r.push_back({{"ma-logdet-disk",
                  "log det Monge-Ampere flow (tau = 0) on the unit disk with Du(disk) = disk; limit speed ln det I = 0"},
                 disk_preset("ma-logdet-disk", "0", "disk_bump_compatible")});
    r.push_back({{"slag-disk-tau-pi2",
                  "special Lagrangian arctan flow (tau = pi/2) on the unit disk with Du(disk) = disk; limit speed pi/2"},
                 disk_preset("slag-disk-tau-pi2", "pi/2", "disk_bump")});
    r.push_back({{"slag-disk-tau",
                  "special Lagrangian F_tau flow on the unit disk with Du(disk) = disk; tau defaults to pi/3, "
                  "override operator.tau"},
                 disk_preset("slag-disk-tau", "pi/3", "disk_bump_compatible")});
    return r;
  }();
  return registry;
}

}  // namespace detail

inline std::vector<PresetInfo> list_presets() {
  std::vector<PresetInfo> out;
  for (const auto& e : detail::preset_registry()) out.push_back(e.info);
  return out;
}

/// The preset's configuration document.
inline json preset_document(std::string_view name) {
  for (const auto& e : detail::preset_registry())
    if (e.info.name == name) return e.document;
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

/// Applies "a.b.c=value" to a document. The value is read as JSON when it
/// parses, otherwise as a string (so operator.tau=pi/6 works unquoted).
inline void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      break;
    }
    if (!node->contains(part)) (*node)[part] = json::object();
    node = &(*node)[part];
    start = dot + 1;
  }
}

}  // namespace translab
