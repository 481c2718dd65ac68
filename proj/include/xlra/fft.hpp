#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "xlra/grid.hpp"

namespace xlra {

using Complex = std::complex<double>;
using ComplexField = std::vector<Complex>;

/**
 * Multidimensional complex DFT on a PeriodicGrid, backed by FFTW.
 *
 * Forward is the unnormalized sum F(xi) = sum_x f(x) exp(-i xi.x); inverse
 * divides by N so that inverse(forward(f)) == f. Plans are created once per
 * object; execution on caller-provided buffers is thread-safe, so one Fft can
 * be shared between threads.
 */
class Fft {
 public:
  explicit Fft(const PeriodicGrid& grid);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  Fft(Fft&&) noexcept;
  Fft& operator=(Fft&&) noexcept;

  const PeriodicGrid& grid() const { return grid_; }

  void forward(std::span<Complex> data) const;
  void inverse(std::span<Complex> data) const;

  ComplexField forward_real(std::span<const double> data) const;
  /// Inverse transform, returning the real part.
  std::vector<double> inverse_real(std::span<const Complex> data) const;

 private:
  struct Plans;
  PeriodicGrid grid_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace xlra
