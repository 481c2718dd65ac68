#include "xlra/grid.hpp"

#include <numbers>

#include "xlra/error.hpp"

namespace xlra {

PeriodicGrid::PeriodicGrid(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  require(dims_.size() == 2 || dims_.size() == 3, "PeriodicGrid: ndim must be 2 or 3");
  size_ = 1;
  for (auto d : dims_) {
    require(d >= 2, "PeriodicGrid: every dimension must be >= 2");
    size_ *= d;
  }
}

std::array<std::size_t, 3> PeriodicGrid::unravel(std::size_t flat) const {
  std::array<std::size_t, 3> idx{0, 0, 0};
  for (int a = ndim() - 1; a >= 0; --a) {
    const auto d = dims_[static_cast<std::size_t>(a)];
    idx[static_cast<std::size_t>(a)] = flat % d;
    flat /= d;
  }
  return idx;
}

std::size_t PeriodicGrid::ravel(const std::array<std::size_t, 3>& idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < ndim(); ++a) flat = flat * dims_[static_cast<std::size_t>(a)] + idx[static_cast<std::size_t>(a)];
  return flat;
}

std::size_t PeriodicGrid::shifted(std::size_t flat, const std::array<long, 3>& shift) const {
  auto idx = unravel(flat);
  for (int a = 0; a < ndim(); ++a) {
    const auto ua = static_cast<std::size_t>(a);
    const long d = static_cast<long>(dims_[ua]);
    long v = (static_cast<long>(idx[ua]) + shift[ua]) % d;
    if (v < 0) v += d;
    idx[ua] = static_cast<std::size_t>(v);
  }
  return ravel(idx);
}

std::array<double, 3> PeriodicGrid::frequency(std::size_t flat) const {
  const auto idx = unravel(flat);
  std::array<double, 3> xi{0.0, 0.0, 0.0};
  for (int a = 0; a < ndim(); ++a) {
    const auto ua = static_cast<std::size_t>(a);
    xi[ua] = 2.0 * std::numbers::pi * static_cast<double>(centered_frequency(idx[ua], dims_[ua])) /
             static_cast<double>(dims_[ua]);
  }
  return xi;
}

}  // namespace xlra
