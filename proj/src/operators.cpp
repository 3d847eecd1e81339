#include "tfdw/operators.hpp"

#include <fftw3.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <vector>

#include "tfdw/error.hpp"
#include "tfdw/kernels.hpp"
#include "tfdw/specfun.hpp"

namespace tfdw {

namespace {

// FFTW's planner is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void init_fftw_threads() {
  static bool done = false;
  if (!done) {
    fftw_init_threads();
    done = true;
  }
  fftw_plan_with_nthreads(omp_get_max_threads());
}

template <class T>
struct FftwDeleter {
  void operator()(T* p) const noexcept { fftw_free(p); }
};
template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter<T>>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t count) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
  if (!p) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~PlanPair() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

}  // namespace

struct SpectralPlan::Impl {
  Grid2D grid;
  std::size_t n, nc;    // n, n/2+1
  std::size_t m, mc;    // 2n, n+1
  std::vector<double> symbol;
  std::vector<double> kernel;
  std::vector<double> padded_symbol;  // |k| on the doubled box
  FftwBuffer<double> real;
  FftwBuffer<fftw_complex> spec;
  FftwBuffer<double> preal;
  FftwBuffer<fftw_complex> pspec;
  PlanPair small, padded;

  explicit Impl(const Grid2D& g)
      : grid(g),
        n(g.n()),
        nc(g.n() / 2 + 1),
        m(2 * g.n()),
        mc(g.n() + 1),
        real(fftw_buffer<double>(n * n)),
        spec(fftw_buffer<fftw_complex>(n * nc)),
        preal(fftw_buffer<double>(m * m)),
        pspec(fftw_buffer<fftw_complex>(m * mc)) {
    {
      std::lock_guard lock(planner_mutex());
      init_fftw_threads();
      const int ni = static_cast<int>(n), mi = static_cast<int>(m);
      small.forward = fftw_plan_dft_r2c_2d(ni, ni, real.get(), spec.get(), FFTW_ESTIMATE);
      small.backward = fftw_plan_dft_c2r_2d(ni, ni, spec.get(), real.get(), FFTW_ESTIMATE);
      padded.forward = fftw_plan_dft_r2c_2d(mi, mi, preal.get(), pspec.get(), FFTW_ESTIMATE);
      padded.backward = fftw_plan_dft_c2r_2d(mi, mi, pspec.get(), preal.get(), FFTW_ESTIMATE);
    }
    if (!small.forward || !small.backward || !padded.forward || !padded.backward)
      throw Error(ErrorCode::InvalidArgument, "FFTW planning failed");

    const auto k = grid.wavenumbers();
    symbol.resize(n * nc);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < nc; ++j) symbol[i * nc + j] = std::hypot(k[i], k[j]);
    const double dk = std::numbers::pi / grid.box_length();
    padded_symbol.resize(m * mc);
    for (std::size_t i = 0; i < m; ++i) {
      const double ki = dk * (i <= n ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(m));
      for (std::size_t j = 0; j < mc; ++j) padded_symbol[i * mc + j] = std::hypot(ki, dk * static_cast<double>(j));
    }
    build_kernel();
  }

  // Truncated-kernel construction: the Fourier transform of
  // 1_{|x|<R} / (2 pi |x|) is F(kR)/k with F(x) = int_0^x J0, smooth at k = 0.
  // Sampled on a 4x oversampled grid, transformed back, and restricted to
  // the separations the zero-padded convolution needs.
  void build_kernel() {
    const double h = grid.spacing();
    const double L = grid.box_length();
    const double R = std::sqrt(2.0) * L;
    const std::size_t big = 4 * n, bigc = big / 2 + 1, stride = 2 * bigc;
    auto buf = fftw_buffer<fftw_complex>(big * bigc);
    fftw_plan plan;
    {
      std::lock_guard lock(planner_mutex());
      init_fftw_threads();
      const int bi = static_cast<int>(big);
      plan = fftw_plan_dft_c2r_2d(bi, bi, buf.get(), reinterpret_cast<double*>(buf.get()),
                                  FFTW_ESTIMATE);
    }
    if (!plan) throw Error(ErrorCode::InvalidArgument, "FFTW planning failed");

    const double dk = 2.0 * std::numbers::pi / (4.0 * L);
    const auto half = static_cast<std::ptrdiff_t>(big / 2);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t ii = 0; ii <= half; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      const std::size_t mirror = (big - i) % big;
      for (std::size_t j = 0; j < bigc; ++j) {
        const double k = dk * std::hypot(static_cast<double>(i), static_cast<double>(j));
        const double g = k == 0.0 ? R : specfun::bessel_j0_integral(k * R) / k;
        buf[i * bigc + j][0] = g;
        buf[i * bigc + j][1] = 0.0;
        buf[mirror * bigc + j][0] = g;
        buf[mirror * bigc + j][1] = 0.0;
      }
    }
    fftw_execute(plan);
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan);
    }

    const double* g = reinterpret_cast<const double*>(buf.get());
    const double scale = h * h / (16.0 * L * L);
    auto wrap = [&](std::size_t idx) { return idx <= n ? idx : idx + big - m; };
    double* p = preal.get();
    const auto mm = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < mm; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      for (std::size_t j = 0; j < m; ++j) p[i * m + j] = scale * g[wrap(i) * stride + wrap(j)];
    }
    buf.reset();
    fftw_execute(padded.forward);
    // The sampled kernel is even in both axes, so its transform is real.
    kernel.resize(m * mc);
    for (std::size_t idx = 0; idx < m * mc; ++idx) kernel[idx] = pspec[idx][0];
  }

  // Zero-pads `in` to the (2n)^2 grid, multiplies its transform by
  // `multiplier` (2n rows by n+1 columns) and keeps the top-left n x n block.
  void filter_padded(std::span<const double> in, std::span<double> out,
                     const std::vector<double>& multiplier) {
    if (in.size() != n * n || out.size() != n * n)
      throw Error(ErrorCode::GridMismatch, "input size does not match plan grid");
    double* p = preal.get();
    const auto mi = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < mi; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      double* row = p + i * m;
      if (i < n) {
        std::copy(in.begin() + static_cast<std::ptrdiff_t>(i * n),
                  in.begin() + static_cast<std::ptrdiff_t>((i + 1) * n), row);
        std::fill(row + n, row + m, 0.0);
      } else {
        std::fill(row, row + m, 0.0);
      }
    }
    fftw_execute(padded.forward);
    const double norm = 1.0 / static_cast<double>(m * m);
    const auto total = static_cast<std::ptrdiff_t>(m * mc);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
      const double w = multiplier[static_cast<std::size_t>(idx)] * norm;
      pspec[idx][0] *= w;
      pspec[idx][1] *= w;
    }
    fftw_execute(padded.backward);
    const auto ni = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < ni; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      std::copy(p + i * m, p + i * m + n, out.begin() + static_cast<std::ptrdiff_t>(i * n));
    }
  }

  void load_small(std::span<const double> in) {
    if (in.size() != n * n) throw Error(ErrorCode::GridMismatch, "input size does not match plan grid");
    std::copy(in.begin(), in.end(), real.get());
  }

  void store_small(std::span<double> out) const {
    if (out.size() != n * n) throw Error(ErrorCode::GridMismatch, "output size does not match plan grid");
    std::copy(real.get(), real.get() + n * n, out.begin());
  }

  template <class F>
  void filter_small(std::span<const double> in, std::span<double> out, F&& multiplier) {
    load_small(in);
    fftw_execute(small.forward);
    const double norm = 1.0 / static_cast<double>(n * n);
    const auto total = static_cast<std::ptrdiff_t>(n * nc);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
      const double w = multiplier(static_cast<std::size_t>(idx)) * norm;
      spec[idx][0] *= w;
      spec[idx][1] *= w;
    }
    fftw_execute(small.backward);
    store_small(out);
  }
};

SpectralPlan::SpectralPlan(const Grid2D& grid) : impl_(std::make_unique<Impl>(grid)) {}
SpectralPlan::~SpectralPlan() = default;
SpectralPlan::SpectralPlan(SpectralPlan&&) noexcept = default;
SpectralPlan& SpectralPlan::operator=(SpectralPlan&&) noexcept = default;

const Grid2D& SpectralPlan::grid() const noexcept { return impl_->grid; }
std::span<const double> SpectralPlan::symbol() const noexcept { return impl_->symbol; }
std::span<const double> SpectralPlan::riesz_kernel() const noexcept { return impl_->kernel; }

void SpectralPlan::half_laplacian(std::span<const double> in, std::span<double> out) {
  const auto& sym = impl_->symbol;
  impl_->filter_small(in, out, [&](std::size_t idx) { return sym[idx]; });
}

void SpectralPlan::precondition(std::span<const double> in, std::span<double> out, double a,
                                double sigma) {
  if (!(sigma > 0.0) || a < 0.0)
    throw Error(ErrorCode::InvalidArgument, "preconditioner needs a >= 0 and sigma > 0");
  const auto& sym = impl_->symbol;
  impl_->filter_small(in, out, [&](std::size_t idx) { return 1.0 / (a * sym[idx] + sigma); });
}

void SpectralPlan::riesz(std::span<const double> in, std::span<double> out) {
  impl_->filter_padded(in, out, impl_->kernel);
}

void SpectralPlan::half_laplacian_padded(std::span<const double> in, std::span<double> out) {
  impl_->filter_padded(in, out, impl_->padded_symbol);
}

double SpectralPlan::spectral_norm_sq(std::span<const double> in, int power) {
  if (power != 1 && power != -1) throw Error(ErrorCode::InvalidArgument, "power must be 1 or -1");
  Impl& d = *impl_;
  d.load_small(in);
  fftw_execute(d.small.forward);
  const auto n = d.n, nc = d.nc;
  std::vector<double> rows(n);
  const auto ni = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < ni; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double s = 0.0;
    for (std::size_t j = 0; j < nc; ++j) {
      const std::size_t idx = i * nc + j;
      const double k = d.symbol[idx];
      if (k == 0.0) continue;
      const double mag2 = d.spec[idx][0] * d.spec[idx][0] + d.spec[idx][1] * d.spec[idx][1];
      // columns 1..n/2-1 stand for themselves and their conjugate partners
      const double mult = (j == 0 || j == nc - 1) ? 1.0 : 2.0;
      s += mult * mag2 * (power == 1 ? k : 1.0 / k);
    }
    rows[i] = s;
  }
  double total = 0.0;
  for (double r : rows) total += r;
  const double h2 = d.grid.cell_area();
  return total * h2 / static_cast<double>(n * n);
}

Field half_laplacian(SpectralPlan& plan, const Field& u) {
  require_same_grid(plan.grid(), u);
  std::vector<double> out(u.values().size());
  plan.half_laplacian(u.values(), out);
  return Field(plan.grid(), std::move(out));
}

Field riesz_potential(SpectralPlan& plan, const Field& f) {
  require_same_grid(plan.grid(), f);
  std::vector<double> out(f.values().size());
  plan.riesz(f.values(), out);
  return Field(plan.grid(), std::move(out));
}

Field half_laplacian_padded(SpectralPlan& plan, const Field& u) {
  require_same_grid(plan.grid(), u);
  std::vector<double> out(u.values().size());
  plan.half_laplacian_padded(u.values(), out);
  return Field(plan.grid(), std::move(out));
}

double h_half_norm_sq_padded(SpectralPlan& plan, const Field& u) {
  const Field hu = half_laplacian_padded(plan, u);
  return kernels::dot(u.values(), hu.values(), u.grid().n()) * u.grid().cell_area();
}

double h_half_norm_sq(SpectralPlan& plan, const Field& u) {
  require_same_grid(plan.grid(), u);
  return plan.spectral_norm_sq(u.values(), 1);
}

double h_minus_half_norm_sq(SpectralPlan& plan, const Field& f, MeanPolicy policy, double mean_tol) {
  require_same_grid(plan.grid(), f);
  if (policy == MeanPolicy::Reject) {
    const std::size_t block = f.grid().n();
    const double total = kernels::sum(f.values(), block);
    const double mass = kernels::sum_abs_pow(f.values(), 1.0, block);
    if (std::abs(total) > mean_tol * mass)
      throw Error(ErrorCode::NonzeroMean,
                  "field has nonzero mean; pass MeanPolicy::Remove to drop the zero mode");
  }
  // The zero mode is excluded either way, which is exactly mean removal.
  return plan.spectral_norm_sq(f.values(), -1);
}

double coulomb_form(SpectralPlan& plan, const Field& f) {
  const Field u = riesz_potential(plan, f);
  return kernels::dot(f.values(), u.values(), f.grid().n()) * f.grid().cell_area();
}

double lp_norm(const Field& u, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidArgument, "lp_norm needs p >= 1");
  const double s = kernels::sum_abs_pow(u.values(), p, u.grid().n()) * u.grid().cell_area();
  return std::pow(s, 1.0 / p);
}

double origin_cell_inverse_radius(double h) {
  // (1/h^2) * integral over [-h/2,h/2]^2 of 1/|x| = 4 ln(1 + sqrt 2) / h
  return 4.0 * std::log1p(std::numbers::sqrt2) / h;
}

double inverse_radius_integral(const Field& u) {
  const Grid2D& g = u.grid();
  const std::size_t n = g.n();
  const double origin_weight = origin_cell_inverse_radius(g.spacing());
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = g.coord(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double r = std::hypot(x, g.coord(j));
      const double w = r == 0.0 ? origin_weight : 1.0 / r;
      s += u.at(i, j) * u.at(i, j) * w;
    }
  }
  return s * g.cell_area();
}

}  // namespace tfdw
