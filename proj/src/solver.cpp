#include <Eigen/Dense>
#include <cmath>

#include "xlra/elasticity.hpp"
#include "xlra/fft.hpp"

namespace xlra {

namespace {

using CVec = Eigen::Matrix<Complex, Eigen::Dynamic, 1, 0, 6, 1>;
using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

struct VoigtLayout {
  int nd;
  std::size_t nv;
  std::vector<std::array<int, 2>> pairs;  // tensor indices of each reduced component
  std::vector<double> weight;             // 1 for normal, 2 for shear

  explicit VoigtLayout(int ndim) : nd(ndim), nv(voigt_size(ndim)) {
    if (ndim == 2) {
      pairs = {{0, 0}, {1, 1}, {0, 1}};
    } else {
      pairs = {{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}};
    }
    for (const auto& p : pairs) weight.push_back(p[0] == p[1] ? 1.0 : 2.0);
  }

  int index(int i, int j) const {
    for (std::size_t a = 0; a < pairs.size(); ++a)
      if ((pairs[a][0] == i && pairs[a][1] == j) || (pairs[a][0] == j && pairs[a][1] == i)) return static_cast<int>(a);
    return -1;
  }
};

/// Inverse acoustic tensor N = K^{-1}, K_ik = C_ijkl xi_j xi_l.
SmallMat acoustic_inverse(const VoigtLayout& lay, const VoigtMat& ref, const std::array<double, 3>& xi) {
  SmallMat k = SmallMat::Zero(lay.nd, lay.nd);
  for (int i = 0; i < lay.nd; ++i)
    for (int kk = 0; kk < lay.nd; ++kk) {
      double acc = 0.0;
      for (int j = 0; j < lay.nd; ++j)
        for (int l = 0; l < lay.nd; ++l) acc += ref(lay.index(i, j), lay.index(kk, l)) * xi[static_cast<std::size_t>(j)] * xi[static_cast<std::size_t>(l)];
      k(i, kk) = acc;
    }
  Eigen::LLT<SmallMat> llt(k);
  if (llt.info() != Eigen::Success) throw NumericalError("gamma_hat: acoustic tensor is not positive definite");
  return llt.solve(SmallMat::Identity(lay.nd, lay.nd));
}

/// Engineering-Voigt strain Gamma(xi) : tau for a stress-Voigt tau.
template <typename Vec>
Vec apply_gamma(const VoigtLayout& lay, const SmallMat& n, const std::array<double, 3>& xi, const Vec& tau) {
  using Scalar = typename Vec::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, 3, 1> f = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, 3, 1>::Zero(lay.nd);
  for (std::size_t a = 0; a < lay.nv; ++a) {
    const auto [i, j] = lay.pairs[a];
    f(i) += tau(static_cast<Eigen::Index>(a)) * xi[static_cast<std::size_t>(j)];
    if (i != j) f(j) += tau(static_cast<Eigen::Index>(a)) * xi[static_cast<std::size_t>(i)];
  }
  const auto u = (n.template cast<Scalar>() * f).eval();
  Vec out(static_cast<Eigen::Index>(lay.nv));
  for (std::size_t a = 0; a < lay.nv; ++a) {
    const auto [k, h] = lay.pairs[a];
    // 2 * sym(u (x) xi)_kh scaled by 1/2 for normal components.
    out(static_cast<Eigen::Index>(a)) =
        (u(k) * xi[static_cast<std::size_t>(h)] + u(h) * xi[static_cast<std::size_t>(k)]) * (0.5 * lay.weight[a]);
  }
  return out;
}

bool is_zero_frequency(const std::array<double, 3>& xi) { return xi[0] == 0.0 && xi[1] == 0.0 && xi[2] == 0.0; }

/// Frequency used by the solver and the residual. On even axes the Nyquist
/// component is zeroed: a real field cannot carry a derivative there, and
/// keeping it breaks the conjugate symmetry of the Green operator.
std::array<double, 3> solver_frequency(const PeriodicGrid& grid, std::size_t flat) {
  auto xi = grid.frequency(flat);
  const auto idx = grid.unravel(flat);
  for (int a = 0; a < grid.ndim(); ++a) {
    const auto ua = static_cast<std::size_t>(a);
    if (grid.dim(a) % 2 == 0 && 2 * idx[ua] == grid.dim(a)) xi[ua] = 0.0;
  }
  return xi;
}

}  // namespace

VoigtMat gamma_hat(const VoigtMat& reference, const std::array<double, 3>& xi) {
  const int nd = reference.rows() == 3 ? 2 : 3;
  require(reference.rows() == reference.cols() && (reference.rows() == 3 || reference.rows() == 6),
          "gamma_hat: reference must be 3x3 or 6x6");
  const VoigtLayout lay(nd);
  const auto nv = static_cast<Eigen::Index>(lay.nv);
  if (is_zero_frequency(xi)) return VoigtMat::Zero(nv, nv);
  const SmallMat n = acoustic_inverse(lay, reference, xi);
  VoigtMat g(nv, nv);
  for (Eigen::Index b = 0; b < nv; ++b) {
    VoigtVec e = VoigtVec::Zero(nv);
    e(b) = 1.0;
    g.col(b) = apply_gamma(lay, n, xi, e);
  }
  return g;
}

VoigtMat gamma_hat_isotropic(double lambda, double mu, const std::array<double, 3>& xi, int ndim) {
  const VoigtLayout lay(ndim);
  const auto nv = static_cast<Eigen::Index>(lay.nv);
  VoigtMat g = VoigtMat::Zero(nv, nv);
  double xi2 = 0.0;
  for (int i = 0; i < ndim; ++i) xi2 += xi[static_cast<std::size_t>(i)] * xi[static_cast<std::size_t>(i)];
  if (xi2 == 0.0) return g;
  auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  auto x = [&](int a) { return xi[static_cast<std::size_t>(a)]; };
  const double c2 = (lambda + mu) / (mu * (lambda + 2.0 * mu));
  for (Eigen::Index a = 0; a < nv; ++a) {
    const auto [k, h] = lay.pairs[static_cast<std::size_t>(a)];
    for (Eigen::Index b = 0; b < nv; ++b) {
      const auto [i, j] = lay.pairs[static_cast<std::size_t>(b)];
      const double term = (d(k, i) * x(h) * x(j) + d(h, i) * x(k) * x(j) + d(k, j) * x(h) * x(i) +
                           d(h, j) * x(k) * x(i)) /
                              (4.0 * mu * xi2) -
                          c2 * x(i) * x(j) * x(k) * x(h) / (xi2 * xi2);
      g(a, b) = term * lay.weight[static_cast<std::size_t>(a)] * lay.weight[static_cast<std::size_t>(b)];
    }
  }
  return g;
}

namespace {

/// Per-component forward DFT of a cell-major Voigt field.
std::vector<ComplexField> transform_components(const Fft& fft, const std::vector<double>& values, std::size_t nc) {
  const std::size_t n = fft.grid().size();
  std::vector<ComplexField> out(nc, ComplexField(n));
  for (std::size_t k = 0; k < nc; ++k) {
    for (std::size_t c = 0; c < n; ++c) out[k][c] = values[c * nc + k];
    fft.forward(out[k]);
  }
  return out;
}

void inverse_components(const Fft& fft, std::vector<ComplexField>& spec, std::vector<double>& values) {
  const std::size_t n = fft.grid().size();
  const std::size_t nc = spec.size();
  values.resize(n * nc);
  for (std::size_t k = 0; k < nc; ++k) {
    fft.inverse(spec[k]);
    for (std::size_t c = 0; c < n; ++c) values[c * nc + k] = spec[k][c].real();
  }
}

double spectral_residual(const PeriodicGrid& grid, const VoigtLayout& lay, const std::vector<ComplexField>& sig_hat) {
  double num = 0.0, den = 0.0;
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const auto xi = solver_frequency(grid, f);
    std::array<Complex, 3> div{};
    for (std::size_t a = 0; a < lay.nv; ++a) {
      const auto [i, j] = lay.pairs[a];
      const Complex s = sig_hat[a][f];
      den += lay.weight[a] * std::norm(s);
      div[static_cast<std::size_t>(i)] += s * xi[static_cast<std::size_t>(j)];
      if (i != j) div[static_cast<std::size_t>(j)] += s * xi[static_cast<std::size_t>(i)];
    }
    if (!is_zero_frequency(xi))
      for (int i = 0; i < lay.nd; ++i) num += std::norm(div[static_cast<std::size_t>(i)]);
  }
  if (den == 0.0) return 0.0;
  return std::sqrt(num / den);
}

/// In-plane (or full) stress components in reduced Voigt order.
std::vector<double> reduced_stress(const StressField& s) {
  const auto& idx = voigt_components(s.grid.ndim());
  std::vector<double> out(s.grid.size() * idx.size());
  for (std::size_t c = 0; c < s.grid.size(); ++c)
    for (std::size_t a = 0; a < idx.size(); ++a) out[c * idx.size() + a] = s.at(c, static_cast<std::size_t>(idx[a]));
  return out;
}

}  // namespace

double equilibrium_residual(const StressField& stress) {
  require(stress.n_components == 6, "equilibrium_residual: needs a six-component stress field");
  const VoigtLayout lay(stress.grid.ndim());
  Fft fft(stress.grid);
  const auto sig_hat = transform_components(fft, reduced_stress(stress), lay.nv);
  return spectral_residual(stress.grid, lay, sig_hat);
}

double equilibrium_residual(const StiffnessField& c, const StrainField& strain) {
  return equilibrium_residual(hooke(c, strain));
}

namespace {

/// Mandel-form eigenvalue bounds over all cells of the reduced stiffness.
std::pair<double, double> stiffness_bounds(const std::vector<VoigtMat>& cells, const VoigtLayout& lay) {
  double lo = INFINITY, hi = 0.0;
  VoigtVec w(static_cast<Eigen::Index>(lay.nv));
  for (std::size_t a = 0; a < lay.nv; ++a) w(static_cast<Eigen::Index>(a)) = lay.weight[a] == 1.0 ? 1.0 : std::sqrt(2.0);
  for (const auto& c : cells) {
    const VoigtMat mandel = w.asDiagonal() * c * w.asDiagonal();
    Eigen::SelfAdjointEigenSolver<VoigtMat> es(mandel, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
    hi = std::max(hi, es.eigenvalues().maxCoeff());
  }
  if (!(lo > 0.0)) throw ValidationError("solve_local_strain: stiffness field is not positive definite");
  return {lo, hi};
}

/// Isotropic reference with Mandel form c0 * I (lambda = 0, mu = c0 / 2).
VoigtMat scaled_identity_reference(double c0, const VoigtLayout& lay) {
  const auto nv = static_cast<Eigen::Index>(lay.nv);
  VoigtMat r = VoigtMat::Zero(nv, nv);
  for (Eigen::Index a = 0; a < nv; ++a) r(a, a) = lay.weight[static_cast<std::size_t>(a)] == 1.0 ? c0 : 0.5 * c0;
  return r;
}

struct GreenCache {
  std::vector<SmallMat> n;
  std::vector<std::array<double, 3>> xi;
  std::vector<bool> zero;
};

GreenCache build_green(const PeriodicGrid& grid, const VoigtLayout& lay, const VoigtMat& ref) {
  GreenCache g;
  g.n.resize(grid.size());
  g.xi.resize(grid.size());
  g.zero.resize(grid.size());
  for (std::size_t f = 0; f < grid.size(); ++f) {
    g.xi[f] = solver_frequency(grid, f);
    g.zero[f] = f == 0;
    // Pure Nyquist bins carry no compatible fluctuation: Gamma = 0 there.
    if (is_zero_frequency(g.xi[f]))
      g.n[f] = SmallMat::Zero(lay.nd, lay.nd);
    else
      g.n[f] = acoustic_inverse(lay, ref, g.xi[f]);
  }
  return g;
}

void check_finite(double r, std::size_t it) {
  if (!std::isfinite(r)) throw ConvergenceError("solve_local_strain: NaN encountered", it, r);
}

}  // namespace

SolveResult solve_local_strain(const StiffnessField& field, const VoigtVec& mean_strain, const SolverOptions& opts) {
  require(opts.tol > 0.0, "solve_local_strain: tol must be positive");
  require(field.cells.size() == field.grid.size(), "solve_local_strain: stiffness field size mismatch");
  const PeriodicGrid& grid = field.grid;
  const VoigtLayout lay(grid.ndim());
  const auto nv = lay.nv;
  const auto nvi = static_cast<Eigen::Index>(nv);
  require(static_cast<std::size_t>(mean_strain.size()) == nv, "solve_local_strain: mean strain has the wrong size");
  const std::size_t n = grid.size();
  const double dn = static_cast<double>(n);

  std::vector<VoigtMat> cells(n);
  for (std::size_t c = 0; c < n; ++c) cells[c] = reduce(field.cells[c], grid.ndim());
  const auto [lo, hi] = stiffness_bounds(cells, lay);

  SolverScheme scheme = opts.scheme;
  if (scheme == SolverScheme::automatic)
    scheme = (hi / lo > opts.accelerate_above_contrast) ? SolverScheme::eyre_milton : SolverScheme::basic;

  Fft fft(grid);
  SolveResult result;
  result.scheme_used = scheme;
  result.strain.grid = grid;
  result.strain.n_components = nv;
  result.strain.labels = strain_labels(grid.ndim());
  result.strain.mean.assign(mean_strain.data(), mean_strain.data() + nv);
  auto& eps = result.strain.values;
  eps.assign(n * nv, 0.0);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t a = 0; a < nv; ++a) eps[c * nv + a] = mean_strain(static_cast<Eigen::Index>(a));

  std::vector<double> sig(n * nv);
  auto compute_stress = [&] {
    for (std::size_t c = 0; c < n; ++c) {
      const VoigtVec s = cells[c] * Eigen::Map<const VoigtVec>(&eps[c * nv], nvi);
      for (std::size_t a = 0; a < nv; ++a) sig[c * nv + a] = s(static_cast<Eigen::Index>(a));
    }
  };

  if (scheme == SolverScheme::basic) {
    const VoigtMat ref =
        opts.use_field_reference ? reduce(field.reference, grid.ndim()) : scaled_identity_reference(0.5 * (lo + hi), lay);
    const GreenCache green = build_green(grid, lay, ref);
    auto eps_hat = transform_components(fft, eps, nv);
    for (std::size_t it = 1;; ++it) {
      compute_stress();
      auto sig_hat = transform_components(fft, sig, nv);
      result.residual = spectral_residual(grid, lay, sig_hat);
      result.iterations = it;
      check_finite(result.residual, it);
      if (result.residual <= opts.tol) break;
      if (it >= opts.max_iter)
        throw ConvergenceError("solve_local_strain: no convergence, residual " + std::to_string(result.residual),
                               it, result.residual);
      // eps <- mean - Gamma * (sigma - C0 eps)
      for (std::size_t f = 0; f < n; ++f) {
        if (green.zero[f]) {
          for (std::size_t a = 0; a < nv; ++a) eps_hat[a][f] = dn * mean_strain(static_cast<Eigen::Index>(a));
          continue;
        }
        CVec e(nvi), s(nvi);
        for (std::size_t a = 0; a < nv; ++a) {
          e(static_cast<Eigen::Index>(a)) = eps_hat[a][f];
          s(static_cast<Eigen::Index>(a)) = sig_hat[a][f];
        }
        const CVec tau = s - ref.cast<Complex>() * e;
        const CVec upd = -apply_gamma(lay, green.n[f], green.xi[f], tau);
        for (std::size_t a = 0; a < nv; ++a) eps_hat[a][f] = upd(static_cast<Eigen::Index>(a));
      }
      auto tmp = eps_hat;
      inverse_components(fft, tmp, eps);
    }
    return result;
  }

  // Eyre-Milton: v = C0^{-1}(sigma + C0 eps) iterated as v <- Z(W v) + 2E with
  // W = C0^{-1}(C - C0)(C + C0)^{-1} C0 and Z the reflection I - 2P about
  // compatible fields (identity on the mean). The reported strain is the
  // compatible part E + P v.
  const double c0 = std::sqrt(lo * hi);
  const VoigtMat ref = scaled_identity_reference(c0, lay);
  const VoigtMat ref_inv = ref.inverse();
  const GreenCache green = build_green(grid, lay, ref);
  std::vector<VoigtMat> w(n);
  for (std::size_t c = 0; c < n; ++c)
    w[c] = ref_inv * (cells[c] - ref) * (cells[c] + ref).inverse() * ref;

  std::vector<double> v(n * nv);
  for (std::size_t c = 0; c < n; ++c) {
    const VoigtVec vc = ref_inv * (cells[c] + ref) * mean_strain;
    for (std::size_t a = 0; a < nv; ++a) v[c * nv + a] = vc(static_cast<Eigen::Index>(a));
  }
  auto v_hat = transform_components(fft, v, nv);

  auto project = [&](const std::vector<ComplexField>& vh) {
    auto eh = vh;
    for (std::size_t f = 0; f < n; ++f) {
      if (green.zero[f]) {
        for (std::size_t a = 0; a < nv; ++a) eh[a][f] = dn * mean_strain(static_cast<Eigen::Index>(a));
        continue;
      }
      CVec x(nvi);
      for (std::size_t a = 0; a < nv; ++a) x(static_cast<Eigen::Index>(a)) = vh[a][f];
      const CVec pe = apply_gamma(lay, green.n[f], green.xi[f], CVec(ref.cast<Complex>() * x));
      for (std::size_t a = 0; a < nv; ++a) eh[a][f] = pe(static_cast<Eigen::Index>(a));
    }
    return eh;
  };

  for (std::size_t it = 1;; ++it) {
    auto e_hat = project(v_hat);
    inverse_components(fft, e_hat, eps);
    compute_stress();
    result.residual = spectral_residual(grid, lay, transform_components(fft, sig, nv));
    result.iterations = it;
    check_finite(result.residual, it);
    if (result.residual <= opts.tol) break;
    if (it >= opts.max_iter)
      throw ConvergenceError("solve_local_strain: no convergence, residual " + std::to_string(result.residual), it,
                             result.residual);

    inverse_components(fft, v_hat, v);
    std::vector<double> t(n * nv);
    for (std::size_t c = 0; c < n; ++c) {
      const VoigtVec tc = w[c] * Eigen::Map<const VoigtVec>(&v[c * nv], nvi);
      for (std::size_t a = 0; a < nv; ++a) t[c * nv + a] = tc(static_cast<Eigen::Index>(a));
    }
    auto t_hat = transform_components(fft, t, nv);
    for (std::size_t f = 0; f < n; ++f) {
      if (green.zero[f]) {
        for (std::size_t a = 0; a < nv; ++a) v_hat[a][f] = t_hat[a][f] + 2.0 * dn * mean_strain(static_cast<Eigen::Index>(a));
        continue;
      }
      CVec x(nvi);
      for (std::size_t a = 0; a < nv; ++a) x(static_cast<Eigen::Index>(a)) = t_hat[a][f];
      const CVec pe = apply_gamma(lay, green.n[f], green.xi[f], CVec(ref.cast<Complex>() * x));
      for (std::size_t a = 0; a < nv; ++a) v_hat[a][f] = x(static_cast<Eigen::Index>(a)) - 2.0 * pe(static_cast<Eigen::Index>(a));
    }
  }
  return result;
}

}  // namespace xlra
