#pragma once

#include <Eigen/Core>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "xlra/error.hpp"
#include "xlra/microstructure.hpp"

namespace xlra {

/// Full 6x6 Voigt stiffness (GPa), order 11, 22, 33, 23, 13, 12, acting on
/// engineering strain (shear entries are gamma = 2 eps).
using Stiffness = Eigen::Matrix<double, 6, 6>;
using Voigt6 = Eigen::Matrix<double, 6, 1>;

/// Small Voigt matrices/vectors sized 3 (plane strain) or 6 (3D), no heap.
using VoigtMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 6, 6>;
using VoigtVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 6, 1>;

/// Number of independent strain components: 3 in plane strain, 6 in 3D.
inline std::size_t voigt_size(int ndim) { return ndim == 2 ? 3 : 6; }

/// Positions of the reduced components inside the full 6-vector.
const std::vector<int>& voigt_components(int ndim);

/// Reduced (plane-strain) block of a full stiffness.
VoigtMat reduce(const Stiffness& c, int ndim);

Stiffness cubic_stiffness(double c11, double c12, double c44);
Stiffness isotropic_stiffness(double youngs, double poisson);
Stiffness isotropic_lame(double lambda, double mu);
double zener_ratio(double c11, double c12, double c44);

/// C'_ijkl = R_ip R_jq R_kr R_ls C_pqrs with R = rotation_matrix(g).
Stiffness rotate_stiffness(const Stiffness& c, const Orientation& g);
Stiffness rotate_stiffness(const Stiffness& c, const Matrix3& r);

bool is_positive_definite(const Stiffness& c);

/// Elastic constants of one phase.
struct PhaseMaterial {
  enum class Kind { isotropic, cubic } kind = Kind::isotropic;
  double youngs = 0.0, poisson = 0.0;  // isotropic
  double c11 = 0.0, c12 = 0.0, c44 = 0.0;  // cubic
  bool crystalline = false;  // rotated by the cell orientation

  Stiffness stiffness() const;
  static PhaseMaterial isotropic(double e, double nu);
  static PhaseMaterial cubic(double c11, double c12, double c44, bool crystalline = true);
};

/// Per-phase elastic constants, indexed by phase id.
struct MaterialSpec {
  std::vector<PhaseMaterial> phases;
  std::string label;

  void validate() const;

  /// Hard phase E = 2000 GPa, soft phase E = 2000 / contrast; both isotropic.
  static MaterialSpec two_phase(double contrast, double poisson = 0.3);
  /// Single crystalline cubic phase, e.g. one of the named FCC metals.
  static MaterialSpec polycrystal(const PhaseMaterial& crystal);
  /// Ferrite (cubic, crystalline) + martensite (isotropic cubic constants).
  static MaterialSpec dual_phase_steel();
};

/// Tabulated FCC metals: Al, Pt, Ni, Au, Ag, Cu, Pb.
struct NamedCubic {
  std::string name;
  double c11, c12, c44;
  double tabulated_zener;
};
const std::vector<NamedCubic>& fcc_metals();
PhaseMaterial fcc_metal(const std::string& name);

nlohmann::json to_json(const MaterialSpec& spec);
MaterialSpec material_from_json(const nlohmann::json& j);

enum class ReferenceRule { mean, midpoint };

struct StiffnessField {
  PeriodicGrid grid;
  std::vector<Stiffness> cells;
  Stiffness reference = Stiffness::Zero();
};

StiffnessField assemble_stiffness_field(const Microstructure& ms, const MaterialSpec& spec,
                                        ReferenceRule rule = ReferenceRule::mean);

/**
 * Per-cell symmetric tensor field in Voigt components, cells outermost and
 * components fastest. Strain fields hold voigt_size(ndim) engineering
 * components; stress fields always hold all six (plane strain carries the
 * out-of-plane sigma_33).
 */
struct TensorField {
  PeriodicGrid grid;
  std::size_t n_components = 0;
  std::vector<double> values;
  std::vector<double> mean;
  std::vector<std::string> labels;

  double at(std::size_t cell, std::size_t comp) const { return values[cell * n_components + comp]; }
  double& at(std::size_t cell, std::size_t comp) { return values[cell * n_components + comp]; }
  std::vector<double> component(std::size_t comp) const;
  std::size_t component_index(const std::string& label) const;
  std::vector<double> volume_average() const;
};

using StrainField = TensorField;
using StressField = TensorField;

std::vector<std::string> strain_labels(int ndim);
std::vector<std::string> stress_labels();

/// Build an applied mean strain vector of voigt_size(ndim) from a full 6-vector.
VoigtVec reduced_strain(const Voigt6& full, int ndim);

StressField hooke(const StiffnessField& c, const StrainField& strain);

/// Green operator in Voigt form for the given reference and frequency:
/// eps = -G tau maps a stress polarization to the strain fluctuation
/// (engineering shear). G(0) = 0. `reference` is the reduced stiffness.
VoigtMat gamma_hat(const VoigtMat& reference, const std::array<double, 3>& xi);

/// Closed-form isotropic Green operator (Lame constants of the reference).
VoigtMat gamma_hat_isotropic(double lambda, double mu, const std::array<double, 3>& xi, int ndim);

/// Relative L2 norm over nonzero frequencies of xi_j sigma_ij(xi), divided by
/// the L2 norm of sigma(xi). Zero stress returns 0.
double equilibrium_residual(const StiffnessField& c, const StrainField& strain);
double equilibrium_residual(const StressField& stress);

std::vector<double> von_mises(const StressField& stress);

enum class SolverScheme { basic, eyre_milton, automatic };

struct SolverOptions {
  double tol = 1e-8;
  std::size_t max_iter = 10000;
  SolverScheme scheme = SolverScheme::automatic;
  /// automatic picks Eyre-Milton when the stiffness eigenvalue ratio exceeds this.
  double accelerate_above_contrast = 100.0;
  /// Iterate around the field's stored reference instead of the
  /// eigenvalue-bound optimal one. Only meaningful for the basic scheme.
  bool use_field_reference = false;
};

struct SolveResult {
  StrainField strain;
  std::size_t iterations = 0;
  double residual = 0.0;
  SolverScheme scheme_used = SolverScheme::basic;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& msg, std::size_t iterations, double residual)
      : NumericalError(msg), iterations_(iterations), residual_(residual) {}
  std::size_t iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  std::size_t iterations_;
  double residual_;
};

/// Periodic Lippmann-Schwinger solve by FFT fixed-point iteration. The
/// returned strain is compatible and has volume mean exactly `mean_strain`.
SolveResult solve_local_strain(const StiffnessField& c, const VoigtVec& mean_strain, const SolverOptions& opts = {});

std::string to_string(SolverScheme s);
SolverScheme solver_scheme_from_string(const std::string& s);
std::string to_string(ReferenceRule r);
ReferenceRule reference_rule_from_string(const std::string& s);

// Binary "XFD1" field file.
void write_field(const std::filesystem::path& path, const TensorField& field);
TensorField read_field(const std::filesystem::path& path);

/// Scalar field convenience wrapper (n_components = 1).
TensorField scalar_field(const PeriodicGrid& grid, std::vector<double> values, const std::string& label,
                         double mean_value = 0.0);

}  // namespace xlra
