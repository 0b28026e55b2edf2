#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "config.hpp"
#include "heat_oracle.hpp"
#include "monitor.hpp"

namespace translab {

inline constexpr int kExitConverged = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;

inline void to_json(json& j, const SeriesRow& r) {
  j = json{{"t", r.t},
           {"osc_w", r.osc_w},
           {"speed_estimate", r.speed_estimate},
           {"sup_ut_minus_speed", r.sup_ut_minus_speed},
           {"min_obliqueness", r.min_obliqueness},
           {"max_boundary_residual", r.max_boundary_residual},
           {"sup_ut", r.sup_ut},
           {"max_grad", r.max_grad},
           {"max_hess", r.max_hess},
           {"speed_average", r.speed_average},
           {"min_lagged_obliqueness", r.min_lagged_obliqueness},
           {"min_lagged_ellipticity", r.min_lagged_ellipticity}};
}

namespace detail {
// JSON has no NaN; null stands in for it.
inline json maybe_nan(double v) { return std::isnan(v) ? json(nullptr) : json(v); }
inline double nan_or(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }
}  // namespace detail

inline void from_json(const json& j, SeriesRow& r) {
  r.t = j.at("t").get<double>();
  r.osc_w = j.at("osc_w").get<double>();
  r.speed_estimate = j.at("speed_estimate").get<double>();
  r.sup_ut_minus_speed = j.at("sup_ut_minus_speed").get<double>();
  r.min_obliqueness = j.at("min_obliqueness").get<double>();
  r.max_boundary_residual = j.at("max_boundary_residual").get<double>();
  r.sup_ut = j.at("sup_ut").get<double>();
  r.max_grad = j.at("max_grad").get<double>();
  r.max_hess = j.at("max_hess").get<double>();
  r.speed_average = j.at("speed_average").get<double>();
  r.min_lagged_obliqueness = j.at("min_lagged_obliqueness").get<double>();
  r.min_lagged_ellipticity = j.at("min_lagged_ellipticity").get<double>();
}

inline void to_json(json& j, const ConvergenceReport& r) {
  json profile = json::array();
  for (double v : r.profile) profile.push_back(detail::maybe_nan(v));
  j = json{{"series", r.series},
           {"c_inf", detail::maybe_nan(r.c_inf)},
           {"profile", profile},
           {"converged", r.converged},
           {"anchor", r.anchor},
           {"monotone_osc", r.monotone_osc},
           {"first_osc_violation", r.first_osc_violation ? json(*r.first_osc_violation) : json(nullptr)},
           {"caps_breached", r.caps_breached},
           {"elliptic_residual", detail::maybe_nan(r.elliptic_residual)},
           {"oracle_max_error", r.oracle_max_error ? json(*r.oracle_max_error) : json(nullptr)},
           {"error", r.error ? json(*r.error) : json(nullptr)},
           {"final_time", r.final_time}};
}

inline void from_json(const json& j, ConvergenceReport& r) {
  r.series = j.at("series").get<std::vector<SeriesRow>>();
  r.c_inf = detail::nan_or(j.at("c_inf"));
  r.profile.clear();
  for (const auto& v : j.at("profile")) r.profile.push_back(detail::nan_or(v));
  r.converged = j.at("converged").get<bool>();
  r.anchor = j.at("anchor").get<std::size_t>();
  r.monotone_osc = j.at("monotone_osc").get<bool>();
  r.first_osc_violation.reset();
  if (!j.at("first_osc_violation").is_null()) r.first_osc_violation = j.at("first_osc_violation").get<std::size_t>();
  r.caps_breached = j.at("caps_breached").get<bool>();
  r.elliptic_residual = detail::nan_or(j.at("elliptic_residual"));
  r.oracle_max_error.reset();
  if (!j.at("oracle_max_error").is_null()) r.oracle_max_error = j.at("oracle_max_error").get<double>();
  r.error.reset();
  if (!j.at("error").is_null()) r.error = j.at("error").get<std::string>();
  r.final_time = j.at("final_time").get<double>();
}

/// The heat problem matching an interval run on [0, 1] with the trace operator
/// and flux data, if the config is one.
inline std::optional<HeatProblem> heat_problem_of(const RunConfig& c) {
  if (c.domain.kind != DomainKind::interval || c.domain.bounds[0] != 0.0 || c.domain.bounds[1] != 1.0) return {};
  if (c.operator_family != "trace" || c.boundary.kind != BoundaryKind::flux1d) return {};
  HeatProblem p;
  p.alpha = c.boundary.alpha;
  p.beta = c.boundary.beta;
  p.u0 = [f = initial_function(c)](double x) { return f({x, 0.0}); };
  p.quadrature_intervals = std::max(2048, 4 * (c.domain.resolution[0] - 1));
  return p;
}

inline std::string describe(const std::exception& e) {
  const char* kind = "error";
  if (dynamic_cast<const DegeneracyError*>(&e)) kind = "degeneracy";
  else if (dynamic_cast<const AdmissibilityError*>(&e)) kind = "admissibility";
  else if (dynamic_cast<const BoundaryEnforcementError*>(&e)) kind = "boundary enforcement";
  else if (dynamic_cast<const ConfigError*>(&e)) kind = "configuration";
  else if (dynamic_cast<const UsageError*>(&e)) kind = "usage";
  return std::string(kind) + ": " + e.what();
}

struct RunOutcome {
  int exit_code = kExitError;
  ConvergenceReport report;
  std::optional<Grid> grid;  // absent if the grid could not be built
  std::int64_t steps = 0;
};

/// Runs the configured evolution and assembles the report; no file output.
inline RunOutcome execute(const RunConfig& c) {
  RunOutcome out;
  std::optional<Monitor> monitor;
  try {
    out.grid = build_grid(c.domain);
    const Grid& g = *out.grid;
    const OperatorSpec op = c.op();
    monitor.emplace(g, op, c.boundary, c.time.t0);
    out.report.anchor = monitor->anchor();

    const State u0 = State::sample(g, initial_function(c), 0.0);
    const EvolveResult res = evolve(g, u0, op, c.boundary, c.time, [&](const CheckpointRing& r) { (*monitor)(r); });
    out.steps = res.steps;
    auto& rep = out.report;
    rep.series = monitor->series();
    rep.final_time = res.final_state.t;
    rep.c_inf = rep.series.empty() ? std::numeric_limits<double>::quiet_NaN() : rep.series.back().speed_estimate;
    if (!rep.series.empty()) {
      rep.profile = extract_profile(g, res.final_state, rep.c_inf, rep.anchor);
      rep.elliptic_residual = elliptic_residual(g, op, rep.profile, rep.c_inf, 3.0 * g.min_spacing());
    }
    if (auto heat = heat_problem_of(c)) rep.oracle_max_error = compare(*heat, g, res.final_state);
  } catch (const std::exception& e) {
    out.report.error = describe(e);
    if (monitor) out.report.series = monitor->series();
  }
  auto& rep = out.report;
  const MonotoneCheck mono = check_monotone_osc(rep.series);
  rep.monotone_osc = mono.ok;
  rep.first_osc_violation = mono.first_violation;
  for (const auto& row : rep.series) rep.caps_breached = rep.caps_breached || caps_breached(row, c.tolerances);
  rep.converged = convergence_decision(rep.series, c.tolerances, rep.error.has_value());
  out.exit_code = rep.error ? kExitError : rep.converged ? kExitConverged : kExitNotConverged;
  return out;
}

namespace detail {
inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace detail

inline std::string series_csv(const std::vector<SeriesRow>& series) {
  std::string s = "t,osc_w,speed_estimate,sup_ut_minus_speed,min_obliqueness,max_boundary_residual,sup_ut,max_grad,max_hess\n";
  using detail::num;
  for (const auto& r : series) {
    s += num(r.t) + ',' + num(r.osc_w) + ',' + num(r.speed_estimate) + ',' + num(r.sup_ut_minus_speed) + ',' +
         num(r.min_obliqueness) + ',' + num(r.max_boundary_residual) + ',' + num(r.sup_ut) + ',' + num(r.max_grad) +
         ',' + num(r.max_hess) + '\n';
  }
  return s;
}

/// Active nodes only: coordinates per axis, then the profile value.
inline std::string profile_csv(const Grid& g, const std::vector<double>& profile) {
  std::string s = g.dim() == 1 ? "x,u\n" : "x,y,u\n";
  using detail::num;
  for (std::size_t k : g.active_nodes()) {
    const Vec x = g.position(k);
    s += num(x[0]) + ',';
    if (g.dim() == 2) s += num(x[1]) + ',';
    s += (k < profile.size() ? num(profile[k]) : std::string("nan")) + '\n';
  }
  return s;
}

inline json report_document(const RunConfig& c, const RunOutcome& out) {
  json j = out.report;
  j["exit_code"] = out.exit_code;
  j["steps"] = out.steps;
  j["config"] = c.document;
  return j;
}

/// Writes series.csv, report.json and (when available) profile.csv into output.dir.
inline void write_outputs(const RunConfig& c, const RunOutcome& out) {
  namespace fs = std::filesystem;
  const fs::path dir(c.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("output.dir: cannot create '" + c.output_dir + "': " + ec.message());
  const auto put = [&](const char* name, const std::string& text) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw ConfigError("output.dir: cannot write " + (dir / name).string());
    f << text;
  };
  put("series.csv", series_csv(out.report.series));
  put("report.json", report_document(c, out).dump(2) + "\n");
  if (out.grid && !out.report.profile.empty()) put("profile.csv", profile_csv(*out.grid, out.report.profile));
}

/// execute + write_outputs; returns the exit status.
inline int run(const RunConfig& c, RunOutcome* outcome = nullptr) {
  RunOutcome out = execute(c);
  try {
    write_outputs(c, out);
  } catch (const std::exception& e) {
    out.report.error = describe(e);
    out.exit_code = kExitError;
  }
  const int code = out.exit_code;
  if (outcome) *outcome = std::move(out);
  return code;
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace translab
