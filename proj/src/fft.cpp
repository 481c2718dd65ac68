#include "xlra/fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "xlra/error.hpp"

namespace xlra {

namespace {
// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Fft::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;

  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
};

Fft::Fft(const PeriodicGrid& grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
  require(grid.size() > 0, "Fft: empty grid");
  std::vector<int> n(grid.dims().begin(), grid.dims().end());
  ComplexField scratch(grid.size());
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard<std::mutex> lock(planner_mutex());
  plans_->forward = fftw_plan_dft(grid.ndim(), n.data(), buf, buf, FFTW_FORWARD, flags);
  plans_->inverse = fftw_plan_dft(grid.ndim(), n.data(), buf, buf, FFTW_BACKWARD, flags);
  if (!plans_->forward || !plans_->inverse) throw NumericalError("Fft: FFTW planning failed");
}

Fft::~Fft() = default;
Fft::Fft(Fft&&) noexcept = default;
Fft& Fft::operator=(Fft&&) noexcept = default;

void Fft::forward(std::span<Complex> data) const {
  require(data.size() == grid_.size(), "Fft::forward: size mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_->forward, p, p);
}

void Fft::inverse(std::span<Complex> data) const {
  require(data.size() == grid_.size(), "Fft::inverse: size mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_->inverse, p, p);
  const double scale = 1.0 / static_cast<double>(grid_.size());
  for (auto& v : data) v *= scale;
}

ComplexField Fft::forward_real(std::span<const double> data) const {
  ComplexField out(data.begin(), data.end());
  forward(out);
  return out;
}

std::vector<double> Fft::inverse_real(std::span<const Complex> data) const {
  ComplexField tmp(data.begin(), data.end());
  inverse(tmp);
  std::vector<double> out(tmp.size());
  for (std::size_t i = 0; i < tmp.size(); ++i) out[i] = tmp[i].real();
  return out;
}

}  // namespace xlra
