#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <translab/translab.hpp>

namespace {

using namespace translab;

void summarize(const RunConfig& c, const RunOutcome& out) {
  const auto& r = out.report;
  std::printf("output: %s\n", c.output_dir.c_str());
  std::printf("checkpoints: %zu  steps: %lld  final t: %.17g\n", r.series.size(), static_cast<long long>(out.steps),
              r.final_time);
  std::printf("C_inf: %.17g\n", r.c_inf);
  if (!r.series.empty()) std::printf("osc_w (last): %.6e\n", r.series.back().osc_w);
  if (!std::isnan(r.elliptic_residual)) std::printf("elliptic residual: %.6e\n", r.elliptic_residual);
  if (r.oracle_max_error) std::printf("oracle max error: %.6e\n", *r.oracle_max_error);
  if (r.error) std::fprintf(stderr, "%s\n", r.error->c_str());
  std::printf("status: %s\n", out.exit_code == kExitConverged   ? "converged"
                              : out.exit_code == kExitNotConverged ? "not converged"
                                                                   : "error");
}

int run_config(const RunConfig& c) {
  RunOutcome out;
  const int code = run(c, &out);
  summarize(c, out);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Translating-solution finite difference solver"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Run a JSON configuration");
  run_cmd->add_option("config", config_path, "configuration file")->required();

  std::string preset_name, out_dir;
  std::vector<std::string> overrides;
  auto* preset_cmd = app.add_subcommand("preset", "Run a built-in preset");
  preset_cmd->add_option("name", preset_name, "preset name")->required();
  preset_cmd->add_option("--out", out_dir, "output directory");
  preset_cmd->add_option("--override", overrides, "key=value applied to the preset document");

  auto* presets_cmd = app.add_subcommand("presets", "List the built-in presets");

  std::string compare_path;
  auto* compare_cmd = app.add_subcommand("oracle-compare", "Compare an interval heat run against the series solution");
  compare_cmd->add_option("config", compare_path, "configuration file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run_config(parse_config(read_file(config_path)));

    if (*preset_cmd) {
      json doc = preset_document(preset_name);
      for (const auto& o : overrides) apply_override(doc, o);
      if (!out_dir.empty()) doc["output"]["dir"] = out_dir;
      return run_config(config_from_json(doc));
    }

    if (*presets_cmd) {
      for (const auto& p : list_presets()) std::printf("%-18s %s\n", p.name.c_str(), p.description.c_str());
      return 0;
    }

    if (*compare_cmd) {
      const RunConfig c = parse_config(read_file(compare_path));
      const auto heat = heat_problem_of(c);
      if (!heat) throw ConfigError("oracle-compare needs an interval [0, 1] run with the trace operator and flux1d data");
      const Grid g = build_grid(c.domain);
      const HeatOracle oracle(*heat);
      const State u0 = State::sample(g, initial_function(c), 0.0);
      std::printf("t,max_error\n");
      evolve(g, u0, c.op(), c.boundary, c.time, [&](const CheckpointRing& ring) {
        std::printf("%.17g,%.17g\n", ring.latest().t, compare(oracle, g, ring.latest()));
      });
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", describe(e).c_str());
    return kExitError;
  }
  return kExitError;
}
