#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace xlra {

/**
 * Periodic 2D or 3D grid with unit cell spacing.
 *
 * Cells are stored row-major: the last axis varies fastest. Every field in the
 * library indexes cells with the same ordering.
 */
class PeriodicGrid {
 public:
  PeriodicGrid() = default;
  explicit PeriodicGrid(std::vector<std::size_t> dims);

  int ndim() const { return static_cast<int>(dims_.size()); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t dim(int axis) const { return dims_[static_cast<std::size_t>(axis)]; }
  std::size_t size() const { return size_; }

  /// Multi-index of a flat cell index (unused trailing entries are zero).
  std::array<std::size_t, 3> unravel(std::size_t flat) const;
  std::size_t ravel(const std::array<std::size_t, 3>& idx) const;

  /// Flat index of the cell displaced by `shift` cells, wrapped periodically.
  std::size_t shifted(std::size_t flat, const std::array<long, 3>& shift) const;

  /// Angular frequency vector of DFT bin `flat`: centered integer frequency
  /// times 2*pi/dim. Nyquist bins map to -dim/2.
  std::array<double, 3> frequency(std::size_t flat) const;

  bool operator==(const PeriodicGrid& other) const { return dims_ == other.dims_; }

 private:
  std::vector<std::size_t> dims_;
  std::size_t size_ = 0;
};

/// Centered integer frequency of bin k on an axis of length n.
inline long centered_frequency(std::size_t k, std::size_t n) {
  const long kk = static_cast<long>(k);
  const long nn = static_cast<long>(n);
  return (2 * kk >= nn) ? kk - nn : kk;
}

}  // namespace xlra
