#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "xlra/microstructure.hpp"

namespace xlra {

enum class BasisKind { primitive, gsh_cubic_3d, planar_fourier_2d, dual_phase };

/**
 * Microstructure descriptor basis feeding the surrogate.
 *
 * - primitive: one-hot phase indicator, M = n_phases.
 * - gsh_cubic_3d: real symmetrized GSH (cubic crystal, triclinic sample),
 *   M = 1 (constant only) or 10 (l = 0 and l = 4).
 * - planar_fourier_2d: [1, cos 4t, sin 4t, ...], M = 1 + 2 n_harmonics.
 * - dual_phase: [martensite indicator, orientation basis gated to ferrite],
 *   M = 1 + M_orientation. The orientation sub-basis is GSH in 3D and
 *   planar in 2D.
 */
struct BasisSpec {
  BasisKind kind = BasisKind::primitive;
  std::size_t n_phases = 2;
  std::size_t gsh_count = 10;
  std::size_t n_harmonics = 1;
  std::uint16_t poly_phase = kFerrite;
  BasisKind orientation_kind = BasisKind::gsh_cubic_3d;  // dual_phase only

  std::size_t size() const;
  void validate() const;

  static BasisSpec primitive(std::size_t n_phases);
  static BasisSpec gsh(std::size_t count = 10);
  static BasisSpec planar(std::size_t n_harmonics);
  static BasisSpec dual(const BasisSpec& orientation_basis, std::uint16_t poly_phase = kFerrite);

  bool operator==(const BasisSpec&) const = default;
};

std::string to_string(BasisKind kind);
BasisKind basis_kind_from_string(const std::string& s);

nlohmann::json to_json(const BasisSpec& spec);
BasisSpec basis_from_json(const nlohmann::json& j);

std::vector<double> eval_primitive(std::size_t phase_id, std::size_t n_phases);

/// Real symmetrized GSH values; first `count` (1 or 10) entries. Each function
/// has unit L2 norm under the normalized Haar measure on SO(3).
std::vector<double> eval_gsh_cubic(const Orientation& g, std::size_t count = 10);

std::vector<double> eval_planar(double theta, std::size_t n_harmonics);

/// Dual-phase basis value for one cell.
std::vector<double> eval_dual(std::uint16_t phase_id, const Orientation* orientation, const BasisSpec& spec);

/// Wigner small-d element d^l_{m m'}(beta).
double wigner_small_d(int l, int m, int mp, double beta);

/// Per-cell basis values laid out basis-major: result[j][cell].
std::vector<std::vector<double>> basis_fields(const Microstructure& ms, const BasisSpec& spec);

}  // namespace xlra
