#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nct/cross_section.hpp"
#include "nct/diffusion.hpp"
#include "nct/grid.hpp"
#include "nct/monte_carlo.hpp"
#include "nct/path_stats.hpp"
#include "nct/phase_function.hpp"
#include "nct/source.hpp"

namespace nct {

inline constexpr int kSchemaVersion = 1;

struct QuadratureSection {
  int n_polar = AngularQuadrature::kDefaultPolar;
  int n_azimuthal = AngularQuadrature::kDefaultAzimuthal;
};

struct McSection {
  std::uint64_t histories = 100000;
  int batches = 20;
  std::array<int, 3> cells{10, 10, 10};
  int mu_bins = 0;
};

struct IntegralSection {
  std::array<int, 3> cells{11, 11, 11};
  double cutoff = 0.0;  // 0: the model's s_max
  double tol = 1e-10;
  int max_iter = 500;
};

struct DiffusionSection {
  std::array<int, 3> cells{32, 32, 32};
  DiffusionBoundary boundary = DiffusionBoundary::dirichlet_zero;
  double tol = 1e-10;
  int max_iter = 20000;
  double series_tol = 1e-10;
  int max_terms = 10000;
};

struct OutputSection {
  std::string mc = "tallies.csv";
  std::string integral = "field.csv";
  std::string diffusion = "phi0.csv";
};

/// A validated run description. Every field carries its resolved value,
/// defaults included.
struct RunDocument {
  int schema_version = kSchemaVersion;
  CrossSectionModel model = CrossSectionModel::constant(1.0);
  std::vector<double> legendre{1.0};
  PhaseFunction phase;
  double c = 0.0;
  AngularWeight xi = AngularWeight::uniform();
  SourceSpec source;
  Box domain;
  Boundary boundary = Boundary::vacuum;
  QuadratureSection quadrature;
  McSection mc;
  IntegralSection integral;
  DiffusionSection diffusion;
  std::uint64_t seed = 1;
  OutputSection output;

  /// Canonical JSON of the resolved document and its FNV-1a 64 hash.
  std::string resolved_json;
  std::uint64_t config_hash = 0;

  std::string hash_hex() const;
  AngularQuadrature angular_quadrature() const;
  ScatteringKernel kernel() const { return build_pstar(phase, c); }
  RunConfig mc_config(int threads = 1) const;
  SpatialGrid integral_grid() const { return SpatialGrid(domain, integral.cells); }
  SpatialGrid diffusion_grid() const { return SpatialGrid(domain, diffusion.cells); }
};

/// Parses and validates a JSON run document. Relative CSV paths inside the
/// model resolve against base_dir. ConfigError carries one entry per
/// offending field, e.g. "model.kind" or "c".
RunDocument parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunDocument load_config(const std::filesystem::path& file);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace nct
