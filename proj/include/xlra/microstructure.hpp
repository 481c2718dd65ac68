#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "xlra/grid.hpp"
#include "xlra/rotation.hpp"

namespace xlra {

/**
 * Periodic microstructure: per-cell phase ids and/or crystal orientations.
 *
 * Dual-phase instances carry both arrays; orientations are only meaningful on
 * cells of the polycrystalline phase.
 */
struct Microstructure {
  PeriodicGrid grid;
  std::optional<std::vector<std::uint16_t>> phase;
  std::optional<std::vector<Orientation>> orientation;
  std::uint16_t n_phases = 1;

  /// Throws ValidationError when an invariant is broken.
  void validate() const;

  bool operator==(const Microstructure&) const = default;
};

// Phase ids used by the generators.
inline constexpr std::uint16_t kSoftPhase = 0;   // matrix, or void in porous media
inline constexpr std::uint16_t kHardPhase = 1;   // inclusion, or solid in porous media
inline constexpr std::uint16_t kFerrite = 0;     // polycrystalline phase of dual-phase steel
inline constexpr std::uint16_t kMartensite = 1;  // isotropic hard phase

inline constexpr double kDefaultBlurSigma = 2.0;

/// Two-phase composite: seeded white noise, periodic Gaussian blur, then a
/// quantile threshold so exactly round(hard_vf * N) cells are hard.
Microstructure gen_two_phase(std::uint64_t seed, const std::vector<std::size_t>& dims, double hard_vf,
                             double sigma = kDefaultBlurSigma);

/// Porous medium: the two-phase recipe with the solid as the "hard" phase and
/// the pores as phase kSoftPhase. porosity in [0, 1).
Microstructure gen_porous(std::uint64_t seed, const std::vector<std::size_t>& dims, double porosity,
                          double sigma = kDefaultBlurSigma);

enum class OrientationSampling { so3, planar };

struct VoronoiOptions {
  std::vector<double> elongation;  // per-axis stretch; empty means isotropic
  OrientationSampling sampling = OrientationSampling::so3;
};

/// Periodic Voronoi polycrystal. Every grain id in [0, n_grains) is present.
/// Phase ids are all zero (n_phases = 1); orientations are uniform on SO(3),
/// or uniform in-plane angles phi1 for OrientationSampling::planar.
Microstructure gen_voronoi_polycrystal(std::uint64_t seed, const std::vector<std::size_t>& dims,
                                       std::size_t n_grains, const VoronoiOptions& opts = {});

/// Grain labels of the Voronoi tessellation used by gen_voronoi_polycrystal.
std::vector<std::uint32_t> voronoi_labels(std::uint64_t seed, const std::vector<std::size_t>& dims,
                                          std::size_t n_grains, const VoronoiOptions& opts = {});

/// Dual-phase steel: Voronoi grains, whole grains greedily turned into
/// martensite until the martensite fraction is nearest hard_vf.
Microstructure gen_dual_phase(std::uint64_t seed, const std::vector<std::size_t>& dims, std::size_t n_grains,
                              double hard_vf, const VoronoiOptions& opts = {});

/// Uniform random orientation on SO(3) from three uniform variates in [0,1).
Orientation uniform_orientation(double u1, double u2, double u3);

/// Periodic Gaussian smoothing (standard deviation sigma cells) applied
/// through its DFT transfer function. sigma = 0 returns the input.
std::vector<double> periodic_gaussian_blur(const PeriodicGrid& grid, const std::vector<double>& values, double sigma);

/// Mask of the `count` largest values; ties go to the lower cell index.
std::vector<bool> top_k_mask(const std::vector<double>& values, std::size_t count);

/// Fraction of cells carrying `phase_id`.
double phase_fraction(const Microstructure& ms, std::uint16_t phase_id);

/// Circular shift by `shift` cells along each axis.
Microstructure translated(const Microstructure& ms, const std::array<long, 3>& shift);

// Binary "XMS1" file format.
void write_microstructure(const std::filesystem::path& path, const Microstructure& ms);
Microstructure read_microstructure(const std::filesystem::path& path);

}  // namespace xlra
