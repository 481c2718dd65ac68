#include "xlra/basis.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "xlra/error.hpp"

namespace xlra {

std::size_t BasisSpec::size() const {
  switch (kind) {
    case BasisKind::primitive:
      return n_phases;
    case BasisKind::gsh_cubic_3d:
      return gsh_count;
    case BasisKind::planar_fourier_2d:
      return 1 + 2 * n_harmonics;
    case BasisKind::dual_phase:
      return 1 + (orientation_kind == BasisKind::gsh_cubic_3d ? gsh_count : 1 + 2 * n_harmonics);
  }
  return 0;
}

void BasisSpec::validate() const {
  switch (kind) {
    case BasisKind::primitive:
      require(n_phases >= 1, "BasisSpec: primitive basis needs n_phases >= 1");
      break;
    case BasisKind::gsh_cubic_3d:
      require(gsh_count == 1 || gsh_count == 10, "BasisSpec: cubic GSH count must be 1 or 10");
      break;
    case BasisKind::planar_fourier_2d:
      break;
    case BasisKind::dual_phase:
      require(orientation_kind == BasisKind::gsh_cubic_3d || orientation_kind == BasisKind::planar_fourier_2d,
              "BasisSpec: dual-phase orientation sub-basis must be GSH or planar");
      if (orientation_kind == BasisKind::gsh_cubic_3d)
        require(gsh_count == 1 || gsh_count == 10, "BasisSpec: cubic GSH count must be 1 or 10");
      break;
  }
}

BasisSpec BasisSpec::primitive(std::size_t n) {
  BasisSpec s;
  s.kind = BasisKind::primitive;
  s.n_phases = n;
  return s;
}

BasisSpec BasisSpec::gsh(std::size_t count) {
  BasisSpec s;
  s.kind = BasisKind::gsh_cubic_3d;
  s.gsh_count = count;
  return s;
}

BasisSpec BasisSpec::planar(std::size_t n_harmonics) {
  BasisSpec s;
  s.kind = BasisKind::planar_fourier_2d;
  s.n_harmonics = n_harmonics;
  return s;
}

BasisSpec BasisSpec::dual(const BasisSpec& orientation_basis, std::uint16_t poly_phase) {
  BasisSpec s = orientation_basis;
  s.kind = BasisKind::dual_phase;
  s.orientation_kind = orientation_basis.kind;
  s.n_phases = 2;
  s.poly_phase = poly_phase;
  return s;
}

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::primitive:
      return "primitive";
    case BasisKind::gsh_cubic_3d:
      return "gsh_cubic_3d";
    case BasisKind::planar_fourier_2d:
      return "planar_fourier_2d";
    case BasisKind::dual_phase:
      return "dual_phase";
  }
  return "unknown";
}

BasisKind basis_kind_from_string(const std::string& s) {
  if (s == "primitive") return BasisKind::primitive;
  if (s == "gsh_cubic_3d") return BasisKind::gsh_cubic_3d;
  if (s == "planar_fourier_2d") return BasisKind::planar_fourier_2d;
  if (s == "dual_phase") return BasisKind::dual_phase;
  throw ValidationError("unknown basis kind '" + s + "'");
}

nlohmann::json to_json(const BasisSpec& spec) {
  return {{"kind", to_string(spec.kind)},
          {"M", spec.size()},
          {"n_phases", spec.n_phases},
          {"gsh_count", spec.gsh_count},
          {"n_harmonics", spec.n_harmonics},
          {"poly_phase", spec.poly_phase},
          {"orientation_kind", to_string(spec.orientation_kind)},
          {"gsh_convention", "real symmetrized, cubic crystal / triclinic sample, unit L2 norm under Haar measure"}};
}

BasisSpec basis_from_json(const nlohmann::json& j) {
  BasisSpec s;
  s.kind = basis_kind_from_string(j.at("kind").get<std::string>());
  s.n_phases = j.value("n_phases", std::size_t{2});
  s.gsh_count = j.value("gsh_count", std::size_t{10});
  s.n_harmonics = j.value("n_harmonics", std::size_t{1});
  s.poly_phase = j.value("poly_phase", std::uint16_t{kFerrite});
  s.orientation_kind = basis_kind_from_string(j.value("orientation_kind", std::string("gsh_cubic_3d")));
  s.validate();
  if (j.contains("M")) require(j.at("M").get<std::size_t>() == s.size(), "basis spec: M does not match kind");
  return s;
}

std::vector<double> eval_primitive(std::size_t phase_id, std::size_t n_phases) {
  require(phase_id < n_phases, "eval_primitive: phase id out of range");
  std::vector<double> v(n_phases, 0.0);
  v[phase_id] = 1.0;
  return v;
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

double wigner_small_d(int l, int m, int mp, double beta) {
  // Sum formula for d^l_{m mp}(beta) in the z-y-z convention.
  const double c = std::cos(0.5 * beta);
  const double s = std::sin(0.5 * beta);
  const double pref = std::sqrt(factorial(l + m) * factorial(l - m) * factorial(l + mp) * factorial(l - mp));
  double sum = 0.0;
  for (int k = std::max(0, mp - m); k <= std::min(l + mp, l - m); ++k) {
    const int sign = ((k + m - mp) % 2 == 0) ? 1 : -1;
    const double denom = factorial(l + mp - k) * factorial(k) * factorial(l - m - k) * factorial(k + m - mp);
    sum += sign * std::pow(c, 2 * l + mp - m - 2 * k) * std::pow(s, 2 * k + m - mp) / denom;
  }
  return pref * sum;
}

std::vector<double> eval_gsh_cubic(const Orientation& g, std::size_t count) {
  require(count == 1 || count == 10, "eval_gsh_cubic: count must be 1 or 10");
  std::vector<double> out(count, 0.0);
  out[0] = 1.0;
  if (count == 1) return out;

  // Cubic-invariant vector over the crystal-side index m' of the degree-4
  // Wigner matrix.
  constexpr int l = 4;
  const std::array<std::pair<int, double>, 3> invariant{
      {{0, std::sqrt(7.0 / 12.0)}, {4, std::sqrt(5.0 / 24.0)}, {-4, std::sqrt(5.0 / 24.0)}}};

  // Bunge Rz(phi1) Rx(Phi) Rz(phi2) == Rz(phi1 - pi/2) Ry(Phi) Rz(phi2 + pi/2).
  const double alpha = g.phi1 - 0.5 * std::numbers::pi;
  const double beta = g.Phi;
  const double gamma = g.phi2 + 0.5 * std::numbers::pi;

  auto f = [&](int m) {
    std::complex<double> acc{0.0, 0.0};
    for (const auto& [mp, w] : invariant)
      acc += w * wigner_small_d(l, m, mp, beta) * std::polar(1.0, -(m * alpha + mp * gamma));
    return acc;
  };

  // sqrt(2l + 1) normalizes each D-row combination to unit Haar norm.
  const double norm = std::sqrt(2.0 * l + 1.0);
  out[1] = norm * f(0).real();
  for (int m = 1; m <= l; ++m) {
    const auto v = f(m);
    out[static_cast<std::size_t>(2 * m)] = norm * std::numbers::sqrt2 * v.real();
    out[static_cast<std::size_t>(2 * m + 1)] = norm * std::numbers::sqrt2 * v.imag();
  }
  return out;
}

std::vector<double> eval_planar(double theta, std::size_t n_harmonics) {
  std::vector<double> out(1 + 2 * n_harmonics);
  out[0] = 1.0;
  for (std::size_t h = 1; h <= n_harmonics; ++h) {
    const double a = 4.0 * static_cast<double>(h) * theta;
    out[2 * h - 1] = std::cos(a);
    out[2 * h] = std::sin(a);
  }
  return out;
}

namespace {

std::vector<double> eval_orientation_sub(const Orientation& g, const BasisSpec& spec) {
  if (spec.orientation_kind == BasisKind::gsh_cubic_3d) return eval_gsh_cubic(g, spec.gsh_count);
  return eval_planar(g.phi1, spec.n_harmonics);
}

}  // namespace

std::vector<double> eval_dual(std::uint16_t phase_id, const Orientation* orientation, const BasisSpec& spec) {
  std::vector<double> out(spec.size(), 0.0);
  if (phase_id != spec.poly_phase) {
    out[0] = 1.0;
    return out;
  }
  if (!orientation) throw ValidationError("eval_dual: polycrystalline cell without orientation");
  const auto sub = eval_orientation_sub(*orientation, spec);
  std::copy(sub.begin(), sub.end(), out.begin() + 1);
  return out;
}

std::vector<std::vector<double>> basis_fields(const Microstructure& ms, const BasisSpec& spec) {
  spec.validate();
  const std::size_t n = ms.grid.size();
  const std::size_t m = spec.size();
  std::vector<std::vector<double>> fields(m, std::vector<double>(n, 0.0));
  auto scatter = [&](std::size_t cell, const std::vector<double>& v) {
    for (std::size_t j = 0; j < m; ++j) fields[j][cell] = v[j];
  };

  switch (spec.kind) {
    case BasisKind::primitive:
      require(ms.phase.has_value(), "basis_fields: primitive basis needs phase data");
      require(ms.n_phases <= spec.n_phases, "basis_fields: microstructure has more phases than the basis");
      for (std::size_t c = 0; c < n; ++c) scatter(c, eval_primitive((*ms.phase)[c], spec.n_phases));
      break;
    case BasisKind::gsh_cubic_3d:
      require(ms.orientation.has_value(), "basis_fields: GSH basis needs orientation data");
      for (std::size_t c = 0; c < n; ++c) scatter(c, eval_gsh_cubic((*ms.orientation)[c], spec.gsh_count));
      break;
    case BasisKind::planar_fourier_2d:
      require(ms.orientation.has_value(), "basis_fields: planar basis needs orientation data");
      for (std::size_t c = 0; c < n; ++c) scatter(c, eval_planar((*ms.orientation)[c].phi1, spec.n_harmonics));
      break;
    case BasisKind::dual_phase:
      require(ms.phase.has_value() && ms.orientation.has_value(),
              "basis_fields: dual-phase basis needs phase and orientation data");
      for (std::size_t c = 0; c < n; ++c) scatter(c, eval_dual((*ms.phase)[c], &(*ms.orientation)[c], spec));
      break;
  }
  return fields;
}

}  // namespace xlra
