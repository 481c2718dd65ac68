#pragma once

#include <span>
#include <vector>

#include "xlra/fft.hpp"

namespace xlra {

/// Spectra of the M basis fields of one microstructure: [j][frequency].
using FeatureSet = std::vector<ComplexField>;

/**
 * Per-frequency complex least squares.
 *
 * For every frequency f independently, find A_j(f) minimizing
 *   sum_p |E_p(f) - sum_j conj(A_j(f)) Psi_{j,p}(f)|^2 + lambda sum_j |A_j(f)|^2
 * with lambda = ridge * mean diagonal of the normal matrix. With ridge = 0 the
 * minimum-norm least-squares solution is returned. Frequencies whose features
 * are all zero get A = 0.
 *
 * The serial version is the reference; the OpenMP version partitions the
 * frequency range across threads and produces identical results.
 */
std::vector<ComplexField> fit_frequencies_serial(std::span<const FeatureSet> features,
                                                 std::span<const ComplexField> targets, double ridge);
std::vector<ComplexField> fit_frequencies_parallel(std::span<const FeatureSet> features,
                                                   std::span<const ComplexField> targets, double ridge);

/// sum_j conj(A_j) Psi_j, frequency by frequency.
ComplexField combine_serial(std::span<const ComplexField> coeffs, const FeatureSet& features);
ComplexField combine_parallel(std::span<const ComplexField> coeffs, const FeatureSet& features);

}  // namespace xlra
