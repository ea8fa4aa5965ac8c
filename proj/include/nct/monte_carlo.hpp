#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "nct/cross_section.hpp"
#include "nct/grid.hpp"
#include "nct/phase_function.hpp"
#include "nct/rng.hpp"
#include "nct/source.hpp"

namespace nct {

enum class Boundary { periodic, vacuum };

struct RunConfig {
  CrossSectionModel model = CrossSectionModel::constant(1.0);
  PhaseFunction phase;
  double c = 0.0;
  SourceSpec source;
  std::uint64_t histories = 100000;
  std::uint64_t seed = 1;
  Box domain;
  Boundary boundary = Boundary::vacuum;
  int batches = 20;
  std::array<int, 3> cells{1, 1, 1};
  /// Polar bins on μ = Ω_z for the angular flux tally; 0 disables it.
  int mu_bins = 0;
  /// Worker count; never changes results.
  int threads = 1;
};

/// Throws ConfigError listing every violated field.
void validate(const RunConfig& cfg);

struct EventCounters {
  std::uint64_t emitted = 0;
  std::uint64_t collisions = 0;
  std::uint64_t scatters = 0;
  std::uint64_t absorbed = 0;
  std::uint64_t leaked = 0;
  /// Flights whose optical depth overran the sampling limit (vacuum only).
  std::uint64_t tail_escapes = 0;

  EventCounters& operator+=(const EventCounters& o);
};

/// Raw scores of a set of histories: track length per cell (and per μ-bin)
/// and collision counts per cell.
struct HistoryScores {
  std::vector<double> track;
  std::vector<double> track_mu;     // cell * mu_bins + bin
  std::vector<double> box_track_mu; // per bin, whole box
  std::vector<double> collisions;
  EventCounters counters;
  std::uint64_t histories = 0;

  HistoryScores(std::size_t cells, int mu_bins);
  void add(const HistoryScores& o);
};

struct Estimate {
  double mean = 0.0;
  double error = 0.0;  // standard error from batch spread
};

/// Flux and collision-density estimates with batch errors.
class TallyGrid {
 public:
  TallyGrid(SpatialGrid grid, int mu_bins, int batches);

  const SpatialGrid& grid() const { return grid_; }
  int mu_bins() const { return mu_bins_; }
  int batches() const { return batches_; }
  double mu_bin_width() const { return 2.0 / mu_bins_; }
  double mu_bin_center(int b) const { return -1.0 + (b + 0.5) * mu_bin_width(); }

  const std::vector<Estimate>& phi() const { return phi_; }
  const std::vector<Estimate>& collision_density() const { return coll_; }
  /// Per-cell angular flux, index cell * mu_bins + bin.
  const std::vector<Estimate>& psi() const { return psi_; }
  /// Box-averaged scalar flux and angular flux per μ-bin.
  const Estimate& box_phi() const { return box_phi_; }
  const std::vector<Estimate>& box_psi() const { return box_psi_; }
  /// ψ(μ)/φ over the whole box, one ratio per batch.
  const std::vector<Estimate>& box_psi_ratio() const { return box_ratio_; }

  const EventCounters& counters() const { return counters_; }
  std::uint64_t histories() const { return histories_; }
  double total_rate() const { return total_rate_; }
  std::uint64_t total_collision_count() const { return counters_.collisions; }

 private:
  friend TallyGrid run_simulation(const RunConfig& cfg);

  SpatialGrid grid_;
  int mu_bins_;
  int batches_;
  std::vector<Estimate> phi_;
  std::vector<Estimate> coll_;
  std::vector<Estimate> psi_;
  Estimate box_phi_;
  std::vector<Estimate> box_psi_;
  std::vector<Estimate> box_ratio_;
  EventCounters counters_;
  std::uint64_t histories_ = 0;
  double total_rate_ = 0.0;
};

/// One analog history: emit with s = 0, fly, collide, scatter with
/// probability c (s reset to 0) or be absorbed.
void run_history(const RunConfig& cfg, const SpatialGrid& grid, std::uint64_t history,
                 HistoryScores& scores);

/// Histories in fixed batches; batches may run on several workers and are
/// merged in batch order, so tallies depend on (config, seed) only.
TallyGrid run_simulation(const RunConfig& cfg);

}  // namespace nct
