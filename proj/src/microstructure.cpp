#include "xlra/microstructure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>

#include "xlra/error.hpp"
#include "xlra/fft.hpp"
#include "xlra/random.hpp"

namespace xlra {

void Microstructure::validate() const {
  require(phase.has_value() || orientation.has_value(), "Microstructure: needs phase or orientation data");
  require(n_phases >= 1, "Microstructure: n_phases must be positive");
  if (phase) {
    require(phase->size() == grid.size(), "Microstructure: phase array size mismatch");
    for (auto p : *phase) require(p < n_phases, "Microstructure: phase id out of range");
  }
  if (orientation) require(orientation->size() == grid.size(), "Microstructure: orientation array size mismatch");
}

std::vector<double> periodic_gaussian_blur(const PeriodicGrid& grid, const std::vector<double>& values,
                                           double sigma) {
  require(values.size() == grid.size(), "periodic_gaussian_blur: size mismatch");
  require(sigma >= 0.0, "periodic_gaussian_blur: sigma must be >= 0");
  if (sigma == 0.0) return values;
  Fft fft(grid);
  ComplexField spec = fft.forward_real(values);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const auto xi = grid.frequency(k);
    const double xi2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    spec[k] *= std::exp(-0.5 * sigma * sigma * xi2);
  }
  return fft.inverse_real(spec);
}

std::vector<bool> top_k_mask(const std::vector<double>& values, std::size_t count) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<bool> mask(values.size(), false);
  for (std::size_t i = 0; i < std::min(count, order.size()); ++i) mask[order[i]] = true;
  return mask;
}

namespace {

void check_blur_fits(const PeriodicGrid& grid, double sigma) {
  require(sigma >= 0.0, "generator: sigma must be >= 0");
  const auto min_dim = *std::min_element(grid.dims().begin(), grid.dims().end());
  require(sigma <= static_cast<double>(min_dim) / 2.0, "generator: sigma exceeds half the smallest dimension");
}

Microstructure thresholded_two_phase(std::uint64_t seed, const std::vector<std::size_t>& dims, double hard_vf,
                                     double sigma) {
  PeriodicGrid grid(dims);
  check_blur_fits(grid, sigma);
  Rng rng(seed);
  std::vector<double> noise(grid.size());
  for (auto& v : noise) v = rng.normal();
  const auto smooth = periodic_gaussian_blur(grid, noise, sigma);
  const auto n_hard = static_cast<std::size_t>(std::llround(hard_vf * static_cast<double>(grid.size())));
  const auto mask = top_k_mask(smooth, n_hard);

  Microstructure ms;
  ms.grid = grid;
  ms.n_phases = 2;
  ms.phase.emplace(grid.size(), kSoftPhase);
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (mask[i]) (*ms.phase)[i] = kHardPhase;
  return ms;
}

double periodic_delta(double d, double period) { return d - period * std::round(d / period); }

}  // namespace

Microstructure gen_two_phase(std::uint64_t seed, const std::vector<std::size_t>& dims, double hard_vf, double sigma) {
  require(hard_vf > 0.0 && hard_vf < 1.0, "gen_two_phase: hard_vf must lie in (0, 1)");
  return thresholded_two_phase(seed, dims, hard_vf, sigma);
}

Microstructure gen_porous(std::uint64_t seed, const std::vector<std::size_t>& dims, double porosity, double sigma) {
  require(porosity >= 0.0 && porosity < 1.0, "gen_porous: porosity must lie in [0, 1)");
  return thresholded_two_phase(seed, dims, 1.0 - porosity, sigma);
}

Orientation uniform_orientation(double u1, double u2, double u3) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return {two_pi * u1, std::acos(std::clamp(1.0 - 2.0 * u2, -1.0, 1.0)), two_pi * u3};
}

namespace {

struct Tessellation {
  std::vector<std::uint32_t> labels;
  std::vector<Orientation> grain_orientation;
};

Tessellation tessellate(std::uint64_t seed, const std::vector<std::size_t>& dims, std::size_t n_grains,
                        const VoronoiOptions& opts) {
  PeriodicGrid grid(dims);
  require(n_grains >= 1, "gen_voronoi_polycrystal: n_grains must be >= 1");
  require(n_grains <= grid.size(), "gen_voronoi_polycrystal: n_grains exceeds cell count");
  std::vector<double> stretch(static_cast<std::size_t>(grid.ndim()), 1.0);
  if (!opts.elongation.empty()) {
    require(opts.elongation.size() == stretch.size(), "gen_voronoi_polycrystal: elongation needs one factor per axis");
    for (double e : opts.elongation) require(e > 0.0, "gen_voronoi_polycrystal: elongation factors must be positive");
    stretch = opts.elongation;
  }

  Rng rng(seed);
  const auto nd = static_cast<std::size_t>(grid.ndim());
  Tessellation t;
  t.labels.assign(grid.size(), 0);
  std::vector<double> seeds(n_grains * nd);
  // Redraw until no grain is empty.
  for (int attempt = 0;; ++attempt) {
    if (attempt > 1000) throw NumericalError("gen_voronoi_polycrystal: could not place non-empty grains");
    for (std::size_t g = 0; g < n_grains; ++g)
      for (std::size_t a = 0; a < nd; ++a) seeds[g * nd + a] = rng.uniform() * static_cast<double>(grid.dims()[a]);

    std::vector<std::size_t> counts(n_grains, 0);
    for (std::size_t c = 0; c < grid.size(); ++c) {
      const auto idx = grid.unravel(c);
      double best = std::numeric_limits<double>::infinity();
      std::uint32_t best_g = 0;
      for (std::size_t g = 0; g < n_grains; ++g) {
        double d2 = 0.0;
        for (std::size_t a = 0; a < nd; ++a) {
          const double d = periodic_delta(static_cast<double>(idx[a]) - seeds[g * nd + a],
                                          static_cast<double>(grid.dims()[a])) /
                           stretch[a];
          d2 += d * d;
        }
        if (d2 < best) {
          best = d2;
          best_g = static_cast<std::uint32_t>(g);
        }
      }
      t.labels[c] = best_g;
      ++counts[best_g];
    }
    if (std::all_of(counts.begin(), counts.end(), [](std::size_t n) { return n > 0; })) break;
  }

  t.grain_orientation.resize(n_grains);
  for (auto& o : t.grain_orientation) {
    if (opts.sampling == OrientationSampling::planar) {
      o = {2.0 * std::numbers::pi * rng.uniform(), 0.0, 0.0};
    } else {
      const double u1 = rng.uniform(), u2 = rng.uniform(), u3 = rng.uniform();
      o = uniform_orientation(u1, u2, u3);
    }
  }
  return t;
}

}  // namespace

std::vector<std::uint32_t> voronoi_labels(std::uint64_t seed, const std::vector<std::size_t>& dims,
                                          std::size_t n_grains, const VoronoiOptions& opts) {
  return tessellate(seed, dims, n_grains, opts).labels;
}

Microstructure gen_voronoi_polycrystal(std::uint64_t seed, const std::vector<std::size_t>& dims,
                                       std::size_t n_grains, const VoronoiOptions& opts) {
  auto t = tessellate(seed, dims, n_grains, opts);
  Microstructure ms;
  ms.grid = PeriodicGrid(dims);
  ms.n_phases = 1;
  ms.phase.emplace(ms.grid.size(), 0);
  ms.orientation.emplace(ms.grid.size());
  for (std::size_t c = 0; c < ms.grid.size(); ++c) (*ms.orientation)[c] = t.grain_orientation[t.labels[c]];
  return ms;
}

Microstructure gen_dual_phase(std::uint64_t seed, const std::vector<std::size_t>& dims, std::size_t n_grains,
                              double hard_vf, const VoronoiOptions& opts) {
  require(hard_vf > 0.0 && hard_vf < 1.0, "gen_dual_phase: hard_vf must lie in (0, 1)");
  auto t = tessellate(seed, dims, n_grains, opts);
  PeriodicGrid grid(dims);
  std::vector<std::size_t> grain_size(n_grains, 0);
  for (auto l : t.labels) ++grain_size[l];

  const double target = hard_vf * static_cast<double>(grid.size());
  std::vector<bool> hard(n_grains, false);
  double current = 0.0;
  for (std::size_t g = 0; g < n_grains; ++g) {
    const double next = current + static_cast<double>(grain_size[g]);
    if (std::abs(next - target) < std::abs(current - target)) {
      hard[g] = true;
      current = next;
    }
  }

  Microstructure ms;
  ms.grid = grid;
  ms.n_phases = 2;
  ms.phase.emplace(grid.size(), kFerrite);
  ms.orientation.emplace(grid.size());
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const auto g = t.labels[c];
    if (hard[g]) {
      (*ms.phase)[c] = kMartensite;
    } else {
      (*ms.orientation)[c] = t.grain_orientation[g];
    }
  }
  return ms;
}

double phase_fraction(const Microstructure& ms, std::uint16_t phase_id) {
  require(ms.phase.has_value(), "phase_fraction: microstructure has no phase data");
  const auto n = std::count(ms.phase->begin(), ms.phase->end(), phase_id);
  return static_cast<double>(n) / static_cast<double>(ms.grid.size());
}

Microstructure translated(const Microstructure& ms, const std::array<long, 3>& shift) {
  Microstructure out = ms;
  for (std::size_t c = 0; c < ms.grid.size(); ++c) {
    const auto dst = ms.grid.shifted(c, shift);
    if (ms.phase) (*out.phase)[dst] = (*ms.phase)[c];
    if (ms.orientation) (*out.orientation)[dst] = (*ms.orientation)[c];
  }
  return out;
}

}  // namespace xlra
