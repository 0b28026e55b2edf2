#pragma once

#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <string>

#include <translab/translab.hpp>

namespace support {

using namespace translab;

inline SymMatrix random_symmetric(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  SymMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m.set(i, j, d(rng));
  return m;
}

/// Q diag(values) Q^T with a random rotation Q.
inline SymMatrix with_spectrum(std::mt19937_64& rng, const std::vector<double>& values) {
  const int n = static_cast<int>(values.size());
  Eigenvalues e = eig_sym(random_symmetric(rng, n));
  for (int k = 0; k < n; ++k) e.values[k] = values[k];
  return e.reconstruct();
}

/// Random matrix whose spectrum lies in (lo, lo + width).
inline SymMatrix random_admissible(std::mt19937_64& rng, int n, double lo, double width = 4.0) {
  std::uniform_real_distribution<double> d(0.05, width);
  std::vector<double> v(n);
  for (auto& x : v) x = lo + d(rng);
  return with_spectrum(rng, v);
}

inline SymMatrix random_psd(std::mt19937_64& rng, int n, double width = 1.0) {
  std::uniform_real_distribution<double> d(0.0, width);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return with_spectrum(rng, v);
}

/// Admissible lower edge for random sampling: -1 for unrestricted branches.
inline double sample_floor(const OperatorSpec& op) {
  const double b = op.lower_bound();
  return std::isfinite(b) ? b : -1.0;
}

inline std::vector<OperatorSpec> all_branches() {
  constexpr double pi = std::numbers::pi;
  return {OperatorSpec::trace(),          OperatorSpec::tau_family(0.0),    OperatorSpec::tau_family(pi / 6),
          OperatorSpec::tau_family(pi / 4), OperatorSpec::tau_family(pi / 3), OperatorSpec::tau_family(pi / 2)};
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("translab_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline RunConfig preset_config(const std::string& name, const std::vector<std::string>& overrides = {}) {
  json doc = preset_document(name);
  for (const auto& o : overrides) apply_override(doc, o);
  return config_from_json(doc);
}

/// Preset outcomes are cached per process; disk presets take several seconds.
inline const RunOutcome& preset_outcome(const std::string& name) {
  static std::map<std::string, RunOutcome> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, execute(preset_config(name))).first;
  return it->second;
}

}  // namespace support
