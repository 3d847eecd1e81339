#pragma once

#include <cstddef>
#include <memory>
#include <span>

#include "tfdw/grid.hpp"

namespace tfdw {

/// FFT workspaces and multipliers for one grid.
///
/// The periodic symbol |k| drives the half-Laplacian and the Hdot^{1/2}
/// norms. The Riesz potential is a free-space convolution with 1/(2 pi |x|):
/// sources are zero-padded to a (2n)^2 grid and multiplied by the transform
/// of the kernel truncated at radius L sqrt(2), which covers every pair of
/// points in the box. The truncated kernel's Fourier transform is smooth, so
/// it is sampled on a 4x oversampled grid and brought back to real space
/// once, when the plan is built.
///
/// Transforms use FFTW_ESTIMATE plans, so repeated calls give bitwise
/// identical results. A plan owns scratch buffers: one caller at a time.
class SpectralPlan {
 public:
  explicit SpectralPlan(const Grid2D& grid);
  ~SpectralPlan();
  SpectralPlan(const SpectralPlan&) = delete;
  SpectralPlan& operator=(const SpectralPlan&) = delete;
  SpectralPlan(SpectralPlan&&) noexcept;
  SpectralPlan& operator=(SpectralPlan&&) noexcept;

  const Grid2D& grid() const noexcept;

  /// |k| on the half spectrum, n rows by n/2+1 columns.
  std::span<const double> symbol() const noexcept;
  /// Real transform of the padded kernel (cell area folded in), 2n rows by n+1 columns.
  std::span<const double> riesz_kernel() const noexcept;

  // Span-level kernels used by the solver; `in` and `out` hold n*n values
  // and may alias.
  void half_laplacian(std::span<const double> in, std::span<double> out);
  void riesz(std::span<const double> in, std::span<double> out);
  /// Half-Laplacian of the zero extension of `in`, periodized on the doubled box.
  void half_laplacian_padded(std::span<const double> in, std::span<double> out);
  /// out = (a |k| + sigma)^{-1} in
  void precondition(std::span<const double> in, std::span<double> out, double a, double sigma);
  /// (h^2/n^2) sum_k w(|k|) |u_k|^2 with w = |k| (power 1) or 1/|k| (power -1, zero mode dropped).
  double spectral_norm_sq(std::span<const double> in, int power);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Field half_laplacian(SpectralPlan& plan, const Field& u);
Field riesz_potential(SpectralPlan& plan, const Field& f);

/// a |k|-weighted Parseval sum; equals integrate(u * half_laplacian(u)).
double h_half_norm_sq(SpectralPlan& plan, const Field& u);

/// Half-Laplacian and Hdot^{1/2} norm of u extended by zero outside the box.
/// Unlike the periodic form, a field that does not vanish at the box edge
/// pays for the jump there, as it would in the plane. Periodic images sit
/// one box length away.
Field half_laplacian_padded(SpectralPlan& plan, const Field& u);
double h_half_norm_sq_padded(SpectralPlan& plan, const Field& u);

enum class MeanPolicy { Reject, Remove };

/// Periodic Hdot^{-1/2} norm, zero mode excluded. With MeanPolicy::Reject a
/// field whose integral exceeds mean_tol * integral(|f|) throws NonzeroMean.
double h_minus_half_norm_sq(SpectralPlan& plan, const Field& f,
                            MeanPolicy policy = MeanPolicy::Reject, double mean_tol = 1e-10);

/// <f, riesz_potential(f)>, the free-space Coulomb form.
double coulomb_form(SpectralPlan& plan, const Field& f);

/// (integral |u|^p)^{1/p}; throws InvalidArgument for p < 1.
double lp_norm(const Field& u, double p);

/// Mean of 1/|x| over a square cell of side h centred on the origin.
double origin_cell_inverse_radius(double h);

/// integral u^2/|x|, with the origin node weighted by origin_cell_inverse_radius.
double inverse_radius_integral(const Field& u);

}  // namespace tfdw
