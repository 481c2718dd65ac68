#include "xlra/elasticity.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace xlra {

namespace {

// Voigt index pairs, order 11, 22, 33, 23, 13, 12.
constexpr std::array<std::array<int, 2>, 6> kPairs{{{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}}};

}  // namespace

const std::vector<int>& voigt_components(int ndim) {
  static const std::vector<int> two{0, 1, 5};
  static const std::vector<int> three{0, 1, 2, 3, 4, 5};
  return ndim == 2 ? two : three;
}

VoigtMat reduce(const Stiffness& c, int ndim) {
  const auto& idx = voigt_components(ndim);
  const auto n = static_cast<Eigen::Index>(idx.size());
  VoigtMat out(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) out(a, b) = c(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
  return out;
}

bool is_positive_definite(const Stiffness& c) {
  if (!c.isApprox(c.transpose(), 1e-12)) return false;
  Eigen::SelfAdjointEigenSolver<Stiffness> es(c, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > 0.0;
}

Stiffness cubic_stiffness(double c11, double c12, double c44) {
  Stiffness c = Stiffness::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c(i, j) = (i == j) ? c11 : c12;
  for (int i = 3; i < 6; ++i) c(i, i) = c44;
  if (!is_positive_definite(c)) throw ValidationError("cubic_stiffness: constants are not positive definite");
  return c;
}

Stiffness isotropic_lame(double lambda, double mu) {
  return cubic_stiffness(lambda + 2.0 * mu, lambda, mu);
}

Stiffness isotropic_stiffness(double youngs, double poisson) {
  require(youngs > 0.0, "isotropic_stiffness: E must be positive");
  require(poisson > -1.0 && poisson < 0.5, "isotropic_stiffness: nu must lie in (-1, 0.5)");
  const double lambda = youngs * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
  const double mu = youngs / (2.0 * (1.0 + poisson));
  return isotropic_lame(lambda, mu);
}

double zener_ratio(double c11, double c12, double c44) {
  require(c11 != c12, "zener_ratio: C11 == C12");
  return 2.0 * c44 / (c11 - c12);
}

Stiffness rotate_stiffness(const Stiffness& c, const Matrix3& r) {
  // Stress transformation in Voigt form: sigma'_I = M_IJ sigma_J. Engineering
  // strain transforms with M^{-T}, hence C' = M C M^T.
  Stiffness m;
  for (int a = 0; a < 6; ++a) {
    const auto [i, j] = kPairs[static_cast<std::size_t>(a)];
    for (int b = 0; b < 6; ++b) {
      const auto [k, l] = kPairs[static_cast<std::size_t>(b)];
      m(a, b) = r(i, k) * r(j, l) + (b >= 3 ? r(i, l) * r(j, k) : 0.0);
    }
  }
  Stiffness out = m * c * m.transpose();
  return 0.5 * (out + out.transpose());
}

Stiffness rotate_stiffness(const Stiffness& c, const Orientation& g) {
  return rotate_stiffness(c, rotation_matrix(g));
}

Stiffness PhaseMaterial::stiffness() const {
  return kind == Kind::isotropic ? isotropic_stiffness(youngs, poisson) : cubic_stiffness(c11, c12, c44);
}

PhaseMaterial PhaseMaterial::isotropic(double e, double nu) {
  PhaseMaterial p;
  p.kind = Kind::isotropic;
  p.youngs = e;
  p.poisson = nu;
  return p;
}

PhaseMaterial PhaseMaterial::cubic(double c11, double c12, double c44, bool crystalline) {
  PhaseMaterial p;
  p.kind = Kind::cubic;
  p.c11 = c11;
  p.c12 = c12;
  p.c44 = c44;
  p.crystalline = crystalline;
  return p;
}

void MaterialSpec::validate() const {
  require(!phases.empty(), "MaterialSpec: no phases");
  for (const auto& p : phases) (void)p.stiffness();
}

MaterialSpec MaterialSpec::two_phase(double contrast, double poisson) {
  require(contrast > 0.0, "MaterialSpec::two_phase: contrast must be positive");
  constexpr double hard_modulus = 2000.0;
  MaterialSpec s;
  s.label = "two_phase";
  s.phases = {PhaseMaterial::isotropic(hard_modulus / contrast, poisson), PhaseMaterial::isotropic(hard_modulus, poisson)};
  return s;
}

MaterialSpec MaterialSpec::polycrystal(const PhaseMaterial& crystal) {
  MaterialSpec s;
  s.label = "polycrystal";
  s.phases = {crystal};
  s.phases[0].crystalline = true;
  return s;
}

MaterialSpec MaterialSpec::dual_phase_steel() {
  MaterialSpec s;
  s.label = "dual_phase";
  // Martensite is isotropic: C44 = (C11 - C12) / 2.
  s.phases = {PhaseMaterial::cubic(233.3, 135.5, 128.0, true),
              PhaseMaterial::cubic(417.4, 242.4, 0.5 * (417.4 - 242.4), false)};
  return s;
}

const std::vector<NamedCubic>& fcc_metals() {
  static const std::vector<NamedCubic> table{
      {"Al", 106.75, 60.41, 28.34, 1.223}, {"Pt", 346.7, 250.7, 76.5, 1.59}, {"Ni", 251.0, 150.0, 123.7, 2.586},
      {"Au", 192.7, 163.2, 42.2, 2.86},    {"Ag", 124.1, 93.7, 46.4, 3.053}, {"Cu", 168.4, 121.4, 75.4, 3.21},
      {"Pb", 49.5, 42.3, 14.9, 4.14}};
  return table;
}

PhaseMaterial fcc_metal(const std::string& name) {
  for (const auto& m : fcc_metals())
    if (m.name == name) return PhaseMaterial::cubic(m.c11, m.c12, m.c44, true);
  throw ValidationError("unknown FCC metal '" + name + "'");
}

nlohmann::json to_json(const MaterialSpec& spec) {
  nlohmann::json phases = nlohmann::json::array();
  for (const auto& p : spec.phases) {
    if (p.kind == PhaseMaterial::Kind::isotropic)
      phases.push_back({{"kind", "isotropic"}, {"E", p.youngs}, {"nu", p.poisson}, {"crystalline", p.crystalline}});
    else
      phases.push_back(
          {{"kind", "cubic"}, {"C11", p.c11}, {"C12", p.c12}, {"C44", p.c44}, {"crystalline", p.crystalline}});
  }
  return {{"label", spec.label}, {"phases", phases}};
}

MaterialSpec material_from_json(const nlohmann::json& j) {
  MaterialSpec s;
  s.label = j.value("label", std::string{});
  for (const auto& p : j.at("phases")) {
    const auto kind = p.at("kind").get<std::string>();
    if (kind == "isotropic") {
      s.phases.push_back(PhaseMaterial::isotropic(p.at("E").get<double>(), p.at("nu").get<double>()));
      s.phases.back().crystalline = p.value("crystalline", false);
    } else if (kind == "cubic") {
      s.phases.push_back(PhaseMaterial::cubic(p.at("C11").get<double>(), p.at("C12").get<double>(),
                                              p.at("C44").get<double>(), p.value("crystalline", true)));
    } else if (kind == "fcc") {
      s.phases.push_back(fcc_metal(p.at("name").get<std::string>()));
    } else {
      throw ValidationError("material: unknown phase kind '" + kind + "'");
    }
  }
  s.validate();
  return s;
}

StiffnessField assemble_stiffness_field(const Microstructure& ms, const MaterialSpec& spec, ReferenceRule rule) {
  ms.validate();
  spec.validate();
  StiffnessField f;
  f.grid = ms.grid;
  f.cells.resize(ms.grid.size());

  std::vector<Stiffness> base;
  for (const auto& p : spec.phases) base.push_back(p.stiffness());

  for (std::size_t c = 0; c < ms.grid.size(); ++c) {
    const std::size_t ph = ms.phase ? (*ms.phase)[c] : 0;
    require(ph < spec.phases.size(), "assemble_stiffness_field: no constants for phase " + std::to_string(ph));
    if (spec.phases[ph].crystalline) {
      require(ms.orientation.has_value(), "assemble_stiffness_field: crystalline phase needs orientations");
      f.cells[c] = rotate_stiffness(base[ph], (*ms.orientation)[c]);
    } else {
      f.cells[c] = base[ph];
    }
  }

  if (rule == ReferenceRule::mean) {
    Stiffness sum = Stiffness::Zero();
    for (const auto& c : f.cells) sum += c;
    f.reference = sum / static_cast<double>(f.cells.size());
  } else {
    // Midpoint of the extremal Voigt-averaged isotropic moduli.
    double kmin = INFINITY, kmax = -INFINITY, gmin = INFINITY, gmax = -INFINITY;
    for (const auto& c : f.cells) {
      const double k = (c(0, 0) + c(1, 1) + c(2, 2) + 2.0 * (c(0, 1) + c(1, 2) + c(0, 2))) / 9.0;
      const double g =
          (c(0, 0) + c(1, 1) + c(2, 2) - (c(0, 1) + c(1, 2) + c(0, 2)) + 3.0 * (c(3, 3) + c(4, 4) + c(5, 5))) / 15.0;
      kmin = std::min(kmin, k);
      kmax = std::max(kmax, k);
      gmin = std::min(gmin, g);
      gmax = std::max(gmax, g);
    }
    const double k0 = 0.5 * (kmin + kmax);
    const double g0 = 0.5 * (gmin + gmax);
    f.reference = isotropic_lame(k0 - 2.0 * g0 / 3.0, g0);
  }
  return f;
}

std::vector<double> TensorField::component(std::size_t comp) const {
  require(comp < n_components, "TensorField::component: index out of range");
  std::vector<double> out(grid.size());
  for (std::size_t c = 0; c < grid.size(); ++c) out[c] = at(c, comp);
  return out;
}

std::size_t TensorField::component_index(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return i;
  throw ValidationError("field has no component '" + label + "'");
}

std::vector<double> TensorField::volume_average() const {
  std::vector<double> avg(n_components, 0.0);
  for (std::size_t c = 0; c < grid.size(); ++c)
    for (std::size_t k = 0; k < n_components; ++k) avg[k] += at(c, k);
  for (auto& a : avg) a /= static_cast<double>(grid.size());
  return avg;
}

std::vector<std::string> strain_labels(int ndim) {
  if (ndim == 2) return {"e11", "e22", "e12"};
  return {"e11", "e22", "e33", "e23", "e13", "e12"};
}

std::vector<std::string> stress_labels() { return {"s11", "s22", "s33", "s23", "s13", "s12"}; }

VoigtVec reduced_strain(const Voigt6& full, int ndim) {
  const auto& idx = voigt_components(ndim);
  VoigtVec v(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t a = 0; a < idx.size(); ++a) v(static_cast<Eigen::Index>(a)) = full(idx[a]);
  return v;
}

StressField hooke(const StiffnessField& c, const StrainField& strain) {
  require(c.grid == strain.grid, "hooke: grid mismatch");
  const int nd = strain.grid.ndim();
  const auto& idx = voigt_components(nd);
  require(strain.n_components == idx.size(), "hooke: strain has the wrong number of components");

  StressField s;
  s.grid = strain.grid;
  s.n_components = 6;
  s.labels = stress_labels();
  s.values.assign(6 * s.grid.size(), 0.0);
  for (std::size_t cell = 0; cell < s.grid.size(); ++cell) {
    Voigt6 e = Voigt6::Zero();
    for (std::size_t a = 0; a < idx.size(); ++a) e(idx[a]) = strain.at(cell, a);
    const Voigt6 sig = c.cells[cell] * e;
    for (int k = 0; k < 6; ++k) s.at(cell, static_cast<std::size_t>(k)) = sig(k);
  }
  s.mean = s.volume_average();
  return s;
}

std::vector<double> von_mises(const StressField& stress) {
  require(stress.n_components == 6, "von_mises: needs a six-component stress field");
  std::vector<double> out(stress.grid.size());
  for (std::size_t c = 0; c < out.size(); ++c) {
    const double s11 = stress.at(c, 0), s22 = stress.at(c, 1), s33 = stress.at(c, 2);
    const double s23 = stress.at(c, 3), s13 = stress.at(c, 4), s12 = stress.at(c, 5);
    const double d = (s11 - s22) * (s11 - s22) + (s22 - s33) * (s22 - s33) + (s33 - s11) * (s33 - s11);
    out[c] = std::sqrt(0.5 * d + 3.0 * (s23 * s23 + s13 * s13 + s12 * s12));
  }
  return out;
}

TensorField scalar_field(const PeriodicGrid& grid, std::vector<double> values, const std::string& label,
                         double mean_value) {
  require(values.size() == grid.size(), "scalar_field: size mismatch");
  TensorField f;
  f.grid = grid;
  f.n_components = 1;
  f.values = std::move(values);
  f.mean = {mean_value};
  f.labels = {label};
  return f;
}

std::string to_string(SolverScheme s) {
  switch (s) {
    case SolverScheme::basic:
      return "basic";
    case SolverScheme::eyre_milton:
      return "eyre_milton";
    case SolverScheme::automatic:
      return "auto";
  }
  return "auto";
}

SolverScheme solver_scheme_from_string(const std::string& s) {
  if (s == "basic") return SolverScheme::basic;
  if (s == "eyre_milton") return SolverScheme::eyre_milton;
  if (s == "auto") return SolverScheme::automatic;
  throw ValidationError("unknown solver scheme '" + s + "'");
}

std::string to_string(ReferenceRule r) { return r == ReferenceRule::mean ? "mean" : "midpoint"; }

ReferenceRule reference_rule_from_string(const std::string& s) {
  if (s == "mean") return ReferenceRule::mean;
  if (s == "midpoint") return ReferenceRule::midpoint;
  throw ValidationError("unknown reference rule '" + s + "'");
}

}  // namespace xlra
