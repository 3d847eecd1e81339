#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace tfdw {

/// Uniform square periodic box [-L/2, L/2)^2 sampled at n x n nodes.
///
/// Node (i, j) sits at (-L/2 + i h, -L/2 + j h) with h = L/n, so the node
/// with i = j = n/2 is the origin. Storage is row-major with i the slow
/// index. Wavenumbers follow the FFT ordering: k_m = 2 pi m / L for
/// m = 0..n/2-1 followed by m = -n/2..-1.
class Grid2D {
 public:
  Grid2D(std::size_t n, double box_length);

  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return n_ * n_; }
  double box_length() const noexcept { return length_; }
  double spacing() const noexcept { return length_ / static_cast<double>(n_); }
  double cell_area() const noexcept { return spacing() * spacing(); }

  double coord(std::size_t i) const noexcept {
    return -0.5 * length_ + static_cast<double>(i) * spacing();
  }
  double radius(std::size_t i, std::size_t j) const noexcept;

  /// Per-axis discrete wavenumbers in FFT order.
  std::span<const double> wavenumbers() const noexcept { return k_; }

  /// Index of the node at the origin along each axis.
  std::size_t origin_index() const noexcept { return n_ / 2; }

  friend bool operator==(const Grid2D& a, const Grid2D& b) noexcept {
    return a.n_ == b.n_ && a.length_ == b.length_;
  }

 private:
  std::size_t n_;
  double length_;
  std::vector<double> k_;
};

/// Validates n (power of two, >= 16) and L (> 0).
Grid2D make_grid(std::size_t n, double box_length);

/// Real samples on a Grid2D. All values are finite.
class Field {
 public:
  explicit Field(const Grid2D& grid);
  Field(const Grid2D& grid, std::vector<double> values);

  template <class F>
  static Field sample(const Grid2D& grid, F&& f) {
    std::vector<double> v(grid.size());
    const std::size_t n = grid.n();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) v[i * n + j] = f(grid.coord(i), grid.coord(j));
    return Field(grid, std::move(v));
  }

  const Grid2D& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t idx) const noexcept { return values_[idx]; }
  double at(std::size_t i, std::size_t j) const noexcept { return values_[i * grid_.n() + j]; }

  /// Releases the sample buffer; the field is left empty.
  std::vector<double> take_values() && { return std::move(values_); }

 private:
  Grid2D grid_;
  std::vector<double> values_;
};

/// Throws GridMismatch unless both fields live on grids equal to `grid`.
void require_same_grid(const Grid2D& grid, const Field& f);

/// Midpoint rule: sum(values) * cell_area.
double integrate(const Field& f);

struct RadialProfile {
  std::vector<double> radii;
  std::vector<double> means;
  std::vector<std::size_t> counts;
};

/// Bins nodes by |x| into n_bins equal shells over [0, L/2]; empty bins are
/// dropped. Nodes with |x| > L/2 (the box corners) are ignored.
RadialProfile radial_profile(const Field& f, std::size_t n_bins);

// Serialization.
void write_field_csv(const Field& f, const std::filesystem::path& path);
/// Binary dump: uint64 n, float64 L, then n*n float64 values, all little-endian.
void write_field_binary(const Field& f, const std::filesystem::path& path);
Field read_field_binary(const std::filesystem::path& path);
void write_profile_csv(const RadialProfile& p, const std::filesystem::path& path);

}  // namespace tfdw
