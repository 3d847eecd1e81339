#include "tfdw/grid.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>

#include "tfdw/error.hpp"
#include "tfdw/kernels.hpp"

namespace tfdw {

Grid2D::Grid2D(std::size_t n, double box_length) : n_(n), length_(box_length), k_(n) {
  const double dk = 2.0 * std::numbers::pi / box_length;
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  for (std::size_t m = 0; m < n; ++m) {
    auto mm = static_cast<std::ptrdiff_t>(m);
    if (mm >= half) mm -= static_cast<std::ptrdiff_t>(n);
    k_[m] = dk * static_cast<double>(mm);
  }
}

double Grid2D::radius(std::size_t i, std::size_t j) const noexcept {
  return std::hypot(coord(i), coord(j));
}

Grid2D make_grid(std::size_t n, double box_length) {
  if (n < 16 || !std::has_single_bit(n))
    throw Error(ErrorCode::InvalidGridSize, "n must be a power of two >= 16, got " + std::to_string(n));
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    throw Error(ErrorCode::NonpositiveLength, "box length must be positive and finite");
  return Grid2D(n, box_length);
}

Field::Field(const Grid2D& grid) : grid_(grid), values_(grid.size(), 0.0) {}

Field::Field(const Grid2D& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw Error(ErrorCode::GridMismatch, "field has " + std::to_string(values_.size()) +
                                             " values, grid needs " + std::to_string(grid_.size()));
  for (double v : values_)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "field values must be finite");
}

void require_same_grid(const Grid2D& grid, const Field& f) {
  if (!(f.grid() == grid))
    throw Error(ErrorCode::GridMismatch, "field lives on a different grid");
}

double integrate(const Field& f) {
  return kernels::sum(f.values(), f.grid().n()) * f.grid().cell_area();
}

RadialProfile radial_profile(const Field& f, std::size_t n_bins) {
  if (n_bins < 2) throw Error(ErrorCode::InvalidArgument, "radial_profile needs n_bins >= 2");
  const Grid2D& g = f.grid();
  const double rmax = 0.5 * g.box_length();
  const double width = rmax / static_cast<double>(n_bins);
  std::vector<double> sums(n_bins, 0.0);
  std::vector<std::size_t> counts(n_bins, 0);
  for (std::size_t i = 0; i < g.n(); ++i)
    for (std::size_t j = 0; j < g.n(); ++j) {
      const double r = g.radius(i, j);
      if (r > rmax) continue;
      auto b = static_cast<std::size_t>(r / width);
      if (b >= n_bins) b = n_bins - 1;
      sums[b] += f.at(i, j);
      ++counts[b];
    }
  RadialProfile p;
  for (std::size_t b = 0; b < n_bins; ++b) {
    if (counts[b] == 0) continue;
    p.radii.push_back((static_cast<double>(b) + 0.5) * width);
    p.means.push_back(sums[b] / static_cast<double>(counts[b]));
    p.counts.push_back(counts[b]);
  }
  return p;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  return os;
}

template <class T>
void put_le(std::ostream& os, T value) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits;
  std::memcpy(&bits, &value, 8);
  unsigned char buf[8];
  for (int b = 0; b < 8; ++b) buf[b] = static_cast<unsigned char>(bits >> (8 * b));
  os.write(reinterpret_cast<const char*>(buf), 8);
}

template <class T>
T get_le(std::istream& is) {
  unsigned char buf[8];
  if (!is.read(reinterpret_cast<char*>(buf), 8)) throw Error(ErrorCode::Parse, "truncated field dump");
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(buf[b]) << (8 * b);
  T value;
  std::memcpy(&value, &bits, 8);
  return value;
}

}  // namespace

void write_field_csv(const Field& f, const std::filesystem::path& path) {
  auto os = open_out(path, false);
  os.precision(17);
  os << "x,y,value\n";
  const Grid2D& g = f.grid();
  for (std::size_t i = 0; i < g.n(); ++i)
    for (std::size_t j = 0; j < g.n(); ++j)
      os << g.coord(i) << ',' << g.coord(j) << ',' << f.at(i, j) << '\n';
}

void write_field_binary(const Field& f, const std::filesystem::path& path) {
  auto os = open_out(path, true);
  put_le<std::uint64_t>(os, f.grid().n());
  put_le<double>(os, f.grid().box_length());
  for (double v : f.values()) put_le<double>(os, v);
  if (!os) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

Field read_field_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::Io, "cannot open " + path.string());
  const auto n = get_le<std::uint64_t>(is);
  const auto L = get_le<double>(is);
  const Grid2D grid = make_grid(static_cast<std::size_t>(n), L);
  std::vector<double> values(grid.size());
  for (double& v : values) v = get_le<double>(is);
  return Field(grid, std::move(values));
}

void write_profile_csv(const RadialProfile& p, const std::filesystem::path& path) {
  auto os = open_out(path, false);
  os.precision(17);
  os << "r,rho_mean,count\n";
  for (std::size_t b = 0; b < p.radii.size(); ++b)
    os << p.radii[b] << ',' << p.means[b] << ',' << p.counts[b] << '\n';
}

}  // namespace tfdw
