#include "nct/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nct/errors.hpp"
#include "nct/parallel.hpp"
#include "nct/path_stats.hpp"

namespace nct {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

Direction isotropic_direction(RandomStream& rng) {
  const double mu = 2.0 * rng.uniform() - 1.0;
  const double phi = kTwoPi * rng.uniform();
  const double st = std::sqrt(std::max(0.0, (1.0 - mu) * (1.0 + mu)));
  return Direction::normalized(Vec3{st * std::cos(phi), st * std::sin(phi), mu});
}

Vec3 sample_position(const RunConfig& cfg, RandomStream& rng) {
  const Box& box = cfg.domain;
  const SourceSpec& src = cfg.source;
  switch (src.kind) {
    case SourceSpec::Kind::uniform: {
      Vec3 p;
      for (int a = 0; a < 3; ++a) p[a] = box.lower[a] + rng.uniform() * (box.upper[a] - box.lower[a]);
      return p;
    }
    case SourceSpec::Kind::point: return src.center;
    case SourceSpec::Kind::gaussian: {
      for (int attempt = 0; attempt < 100000; ++attempt) {
        Vec3 p;
        for (int a = 0; a < 3; ++a) {
          // Box-Muller, one normal per pair of draws.
          const double r = std::sqrt(-2.0 * std::log(rng.uniform()));
          p[a] = src.center[a] + src.width * r * std::cos(kTwoPi * rng.uniform());
        }
        if (box.contains(p)) return p;
      }
      throw NumericError("gaussian source: rejection sampling found no point inside the box");
    }
  }
  return src.center;
}

int mu_bin_of(double mu, int bins) {
  const int b = static_cast<int>(std::floor(0.5 * (mu + 1.0) * bins));
  return std::clamp(b, 0, bins - 1);
}

/// Moves `pos` a distance `length` along `dir`, scoring track length per
/// traversed cell. Returns true when the particle leaves a vacuum box.
bool stream(const RunConfig& cfg, const SpatialGrid& grid, Vec3& pos, const Direction& dir,
            double length, HistoryScores& scores) {
  const bool periodic = cfg.boundary == Boundary::periodic;
  const Box& box = grid.box();
  const int nb = cfg.mu_bins;
  const int bin = nb > 0 ? mu_bin_of(dir.z(), nb) : 0;
  std::array<int, 3> cell = grid.locate(pos);
  double tmax[3];
  double tdelta[3];
  int step[3];
  for (int a = 0; a < 3; ++a) {
    const double d = dir[a];
    const double h = grid.h(a);
    if (d > 0.0) {
      step[a] = 1;
      tmax[a] = (box.lower[a] + (cell[a] + 1) * h - pos[a]) / d;
      tdelta[a] = h / d;
    } else if (d < 0.0) {
      step[a] = -1;
      tmax[a] = (box.lower[a] + cell[a] * h - pos[a]) / d;
      tdelta[a] = -h / d;
    } else {
      step[a] = 0;
      tmax[a] = kInf;
      tdelta[a] = kInf;
    }
  }
  double t = 0.0;
  for (;;) {
    int a = 0;
    if (tmax[1] < tmax[a]) a = 1;
    if (tmax[2] < tmax[a]) a = 2;
    const double tn = std::min(tmax[a], length);
    const double seg = tn - t;
    if (seg > 0.0) {
      const std::size_t idx = grid.index(cell[0], cell[1], cell[2]);
      scores.track[idx] += seg;
      if (nb > 0) {
        scores.track_mu[idx * nb + bin] += seg;
        scores.box_track_mu[bin] += seg;
      }
      t = tn;
    }
    if (tmax[a] >= length) break;
    t = std::max(t, tmax[a]);
    cell[a] += step[a];
    tmax[a] += tdelta[a];
    if (cell[a] < 0 || cell[a] >= grid.n(a)) {
      if (!periodic) {
        pos = pos + dir.vec() * t;
        return true;
      }
      cell[a] = cell[a] < 0 ? grid.n(a) - 1 : 0;
    }
  }
  pos = pos + dir.vec() * length;
  if (periodic) pos = box.wrap(pos);
  return false;
}

}  // namespace

EventCounters& EventCounters::operator+=(const EventCounters& o) {
  emitted += o.emitted;
  collisions += o.collisions;
  scatters += o.scatters;
  absorbed += o.absorbed;
  leaked += o.leaked;
  tail_escapes += o.tail_escapes;
  return *this;
}

HistoryScores::HistoryScores(std::size_t cells, int mu_bins)
    : track(cells, 0.0),
      track_mu(cells * static_cast<std::size_t>(std::max(mu_bins, 0)), 0.0),
      box_track_mu(static_cast<std::size_t>(std::max(mu_bins, 0)), 0.0),
      collisions(cells, 0.0) {}

void HistoryScores::add(const HistoryScores& o) {
  for (std::size_t i = 0; i < track.size(); ++i) track[i] += o.track[i];
  for (std::size_t i = 0; i < track_mu.size(); ++i) track_mu[i] += o.track_mu[i];
  for (std::size_t i = 0; i < box_track_mu.size(); ++i) box_track_mu[i] += o.box_track_mu[i];
  for (std::size_t i = 0; i < collisions.size(); ++i) collisions[i] += o.collisions[i];
  counters += o.counters;
  histories += o.histories;
}

void validate(const RunConfig& cfg) {
  std::vector<FieldError> errors;
  if (!(cfg.c >= 0.0 && cfg.c <= 1.0)) {
    errors.push_back({"c", "must lie in [0, 1]"});
  } else if (cfg.c == 1.0 && cfg.boundary == Boundary::periodic) {
    errors.push_back({"c", "must be below 1 in a periodic domain"});
  }
  if (cfg.batches < 20) errors.push_back({"mc.batches", "at least 20 batches are required"});
  if (cfg.histories < static_cast<std::uint64_t>(std::max(cfg.batches, 1))) {
    errors.push_back({"mc.histories", "must be at least the number of batches"});
  }
  for (int a = 0; a < 3; ++a) {
    if (!(cfg.domain.upper[a] > cfg.domain.lower[a])) {
      errors.push_back({"domain", "upper must exceed lower on every axis"});
      break;
    }
  }
  for (int a = 0; a < 3; ++a) {
    if (cfg.cells[a] < 1) {
      errors.push_back({"mc.cells", "cell counts must be >= 1"});
      break;
    }
  }
  if (cfg.mu_bins < 0) errors.push_back({"mc.mu_bins", "must be >= 0"});
  if (!(cfg.source.strength > 0.0) || !std::isfinite(cfg.source.strength)) {
    errors.push_back({"source.strength", "total emission rate must be positive"});
  }
  if (cfg.boundary == Boundary::periodic && cfg.source.kind != SourceSpec::Kind::uniform) {
    errors.push_back({"source.kind", "a periodic domain requires the uniform source"});
  }
  if (cfg.source.kind == SourceSpec::Kind::point && !cfg.domain.contains(cfg.source.center)) {
    errors.push_back({"source.position", "point source must lie inside the domain"});
  }
  if (cfg.source.kind == SourceSpec::Kind::gaussian && !(cfg.source.width > 0.0)) {
    errors.push_back({"source.width", "must be positive"});
  }
  if (cfg.threads < 1) errors.push_back({"threads", "must be >= 1"});
  if (!errors.empty()) throw ConfigError(std::move(errors));
}

void run_history(const RunConfig& cfg, const SpatialGrid& grid, std::uint64_t history,
                 HistoryScores& scores) {
  RandomStream rng(cfg.seed, history);
  Vec3 pos = sample_position(cfg, rng);
  Direction dir = isotropic_direction(rng);
  ++scores.counters.emitted;
  ++scores.histories;
  for (;;) {
    // Path length since the last event restarts at zero here.
    double flight;
    bool overflow = false;
    try {
      flight = sample_free_path(cfg.model, dir, rng.uniform());
    } catch (const TailOverflowError&) {
      if (cfg.boundary == Boundary::periodic) throw;
      overflow = true;
      flight = kInf;
    }
    if (stream(cfg, grid, pos, dir, flight, scores)) {
      ++scores.counters.leaked;
      if (overflow) ++scores.counters.tail_escapes;
      return;
    }
    ++scores.counters.collisions;
    const auto cell = grid.locate(pos);
    scores.collisions[grid.index(cell[0], cell[1], cell[2])] += 1.0;
    if (rng.uniform() < cfg.c) {
      ++scores.counters.scatters;
      const double mu0 = cfg.phase.sample_cosine(rng.uniform());
      dir = rotate_direction(dir, mu0, kTwoPi * rng.uniform());
    } else {
      ++scores.counters.absorbed;
      return;
    }
  }
}

TallyGrid::TallyGrid(SpatialGrid grid, int mu_bins, int batches)
    : grid_(std::move(grid)), mu_bins_(mu_bins), batches_(batches) {}

namespace {

Estimate batch_estimate(double pooled, const std::vector<double>& per_batch) {
  const double b = static_cast<double>(per_batch.size());
  double mean = 0.0;
  for (double v : per_batch) mean += v;
  mean /= b;
  double ss = 0.0;
  for (double v : per_batch) ss += (v - mean) * (v - mean);
  return {pooled, std::sqrt(ss / (b - 1.0) / b)};
}

}  // namespace

TallyGrid run_simulation(const RunConfig& cfg) {
  validate(cfg);
  SpatialGrid grid(cfg.domain, cfg.cells);
  const std::size_t n_cells = grid.size();
  const int nb = cfg.mu_bins;
  const std::size_t batches = static_cast<std::size_t>(cfg.batches);

  std::vector<HistoryScores> per_batch(batches, HistoryScores(n_cells, nb));
  const std::uint64_t base = cfg.histories / batches;
  const std::uint64_t extra = cfg.histories % batches;
  auto first_history = [&](std::size_t b) { return b * base + std::min<std::uint64_t>(b, extra); };

  parallel_for(batches, cfg.threads, [&](std::size_t b) {
    const std::uint64_t lo = first_history(b);
    const std::uint64_t hi = first_history(b + 1);
    for (std::uint64_t h = lo; h < hi; ++h) run_history(cfg, grid, h, per_batch[b]);
  });

  HistoryScores total(n_cells, nb);
  for (const auto& s : per_batch) total.add(s);

  TallyGrid out(grid, nb, cfg.batches);
  out.counters_ = total.counters;
  out.histories_ = total.histories;
  const double rate = cfg.source.total_rate(cfg.domain);
  out.total_rate_ = rate;
  const double n_all = static_cast<double>(total.histories);
  const double v_cell = grid.cell_volume();
  const double v_box = cfg.domain.volume();
  const double dmu_term = nb > 0 ? 2.0 * std::numbers::pi * (2.0 / nb) : 1.0;

  std::vector<double> xb(batches);
  auto estimate = [&](auto&& batch_value, double pooled_sum, double scale) {
    for (std::size_t b = 0; b < batches; ++b) {
      xb[b] = scale * batch_value(per_batch[b]) / static_cast<double>(per_batch[b].histories);
    }
    return batch_estimate(scale * pooled_sum / n_all, xb);
  };

  out.phi_.resize(n_cells);
  out.coll_.resize(n_cells);
  for (std::size_t i = 0; i < n_cells; ++i) {
    out.phi_[i] = estimate([i](const HistoryScores& s) { return s.track[i]; }, total.track[i],
                           rate / v_cell);
    out.coll_[i] = estimate([i](const HistoryScores& s) { return s.collisions[i]; },
                            total.collisions[i], rate / v_cell);
  }
  if (nb > 0) {
    out.psi_.resize(n_cells * nb);
    for (std::size_t i = 0; i < n_cells * nb; ++i) {
      out.psi_[i] = estimate([i](const HistoryScores& s) { return s.track_mu[i]; },
                             total.track_mu[i], rate / (v_cell * dmu_term));
    }
  }
  auto box_track = [](const HistoryScores& s) {
    double acc = 0.0;
    for (double v : s.track) acc += v;
    return acc;
  };
  out.box_phi_ = estimate(box_track, box_track(total), rate / v_box);
  if (nb > 0) {
    out.box_psi_.resize(nb);
    out.box_ratio_.resize(nb);
    for (int k = 0; k < nb; ++k) {
      out.box_psi_[k] = estimate([k](const HistoryScores& s) { return s.box_track_mu[k]; },
                                 total.box_track_mu[k], rate / (v_box * dmu_term));
      for (std::size_t b = 0; b < batches; ++b) {
        xb[b] = per_batch[b].box_track_mu[k] / (box_track(per_batch[b]) * dmu_term);
      }
      out.box_ratio_[k] = batch_estimate(total.box_track_mu[k] / (box_track(total) * dmu_term), xb);
    }
  }
  return out;
}

}  // namespace nct
