#include "xlra/regression.hpp"

#include <Eigen/Dense>

#include "xlra/error.hpp"

namespace xlra {

namespace {

using CMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using CVec = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

struct Shape {
  std::size_t instances = 0;
  std::size_t bases = 0;
  std::size_t freqs = 0;
};

Shape check_shape(std::span<const FeatureSet> features, std::span<const ComplexField> targets) {
  require(!features.empty(), "fit_frequencies: no training instances");
  require(features.size() == targets.size(), "fit_frequencies: features/targets count mismatch");
  Shape s{features.size(), features[0].size(), targets[0].size()};
  require(s.bases > 0, "fit_frequencies: empty basis");
  for (std::size_t p = 0; p < s.instances; ++p) {
    require(features[p].size() == s.bases, "fit_frequencies: basis size differs between instances");
    require(targets[p].size() == s.freqs, "fit_frequencies: target size mismatch");
    for (const auto& psi : features[p]) require(psi.size() == s.freqs, "fit_frequencies: feature size mismatch");
  }
  return s;
}

/// Regularized least squares at one frequency. Writes A_j = conj(c_j).
void solve_frequency(std::size_t f, const Shape& s, std::span<const FeatureSet> features,
                     std::span<const ComplexField> targets, double ridge, CMat& x, CVec& y,
                     std::vector<ComplexField>& out) {
  const auto np = static_cast<Eigen::Index>(s.instances);
  const auto nb = static_cast<Eigen::Index>(s.bases);
  for (Eigen::Index p = 0; p < np; ++p) {
    const auto up = static_cast<std::size_t>(p);
    y(p) = targets[up][f];
    for (Eigen::Index j = 0; j < nb; ++j) x(p, j) = features[up][static_cast<std::size_t>(j)][f];
  }

  const double trace = x.squaredNorm();
  if (trace == 0.0) {
    for (std::size_t j = 0; j < s.bases; ++j) out[j][f] = Complex{0.0, 0.0};
    return;
  }

  CVec c;
  const double lambda = ridge * trace / static_cast<double>(nb);
  if (lambda > 0.0) {
    if (np >= nb) {
      CMat normal = x.adjoint() * x;
      normal.diagonal().array() += lambda;
      c = normal.ldlt().solve(x.adjoint() * y);
    } else {
      // Dual form: c = X^H (X X^H + lambda I)^{-1} y.
      CMat gram = x * x.adjoint();
      gram.diagonal().array() += lambda;
      c = x.adjoint() * gram.ldlt().solve(y);
    }
  } else {
    c = x.completeOrthogonalDecomposition().solve(y);
  }
  for (std::size_t j = 0; j < s.bases; ++j) out[j][f] = std::conj(c(static_cast<Eigen::Index>(j)));
}

}  // namespace

std::vector<ComplexField> fit_frequencies_serial(std::span<const FeatureSet> features,
                                                 std::span<const ComplexField> targets, double ridge) {
  require(ridge >= 0.0, "fit_frequencies: ridge must be >= 0");
  const Shape s = check_shape(features, targets);
  std::vector<ComplexField> out(s.bases, ComplexField(s.freqs));
  CMat x(static_cast<Eigen::Index>(s.instances), static_cast<Eigen::Index>(s.bases));
  CVec y(static_cast<Eigen::Index>(s.instances));
  for (std::size_t f = 0; f < s.freqs; ++f) solve_frequency(f, s, features, targets, ridge, x, y, out);
  return out;
}

std::vector<ComplexField> fit_frequencies_parallel(std::span<const FeatureSet> features,
                                                   std::span<const ComplexField> targets, double ridge) {
  require(ridge >= 0.0, "fit_frequencies: ridge must be >= 0");
  const Shape s = check_shape(features, targets);
  std::vector<ComplexField> out(s.bases, ComplexField(s.freqs));
  const auto nf = static_cast<long>(s.freqs);
#pragma omp parallel
  {
    CMat x(static_cast<Eigen::Index>(s.instances), static_cast<Eigen::Index>(s.bases));
    CVec y(static_cast<Eigen::Index>(s.instances));
#pragma omp for schedule(static)
    for (long f = 0; f < nf; ++f) solve_frequency(static_cast<std::size_t>(f), s, features, targets, ridge, x, y, out);
  }
  return out;
}

ComplexField combine_serial(std::span<const ComplexField> coeffs, const FeatureSet& features) {
  require(coeffs.size() == features.size(), "combine: basis size mismatch");
  const std::size_t nf = features.empty() ? 0 : features[0].size();
  ComplexField out(nf, Complex{0.0, 0.0});
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    require(coeffs[j].size() == nf && features[j].size() == nf, "combine: frequency grid mismatch");
    for (std::size_t f = 0; f < nf; ++f) out[f] += std::conj(coeffs[j][f]) * features[j][f];
  }
  return out;
}

ComplexField combine_parallel(std::span<const ComplexField> coeffs, const FeatureSet& features) {
  require(coeffs.size() == features.size(), "combine: basis size mismatch");
  const std::size_t nf = features.empty() ? 0 : features[0].size();
  for (std::size_t j = 0; j < coeffs.size(); ++j)
    require(coeffs[j].size() == nf && features[j].size() == nf, "combine: frequency grid mismatch");
  ComplexField out(nf, Complex{0.0, 0.0});
  const auto n = static_cast<long>(nf);
#pragma omp parallel for schedule(static)
  for (long f = 0; f < n; ++f) {
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < coeffs.size(); ++j)
      acc += std::conj(coeffs[j][static_cast<std::size_t>(f)]) * features[j][static_cast<std::size_t>(f)];
    out[static_cast<std::size_t>(f)] = acc;
  }
  return out;
}

}  // namespace xlra
