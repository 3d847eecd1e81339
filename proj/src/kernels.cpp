#include "tfdw/kernels.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <vector>

namespace tfdw::kernels {

namespace {

// Sums f(idx) over [0, count) with the fixed block order described in the
// header. f must be callable concurrently.
template <class F>
double blocked_sum(std::size_t count, std::size_t block, F&& f) {
  if (count == 0) return 0.0;
  block = std::max<std::size_t>(block, 1);
  const auto nblocks = static_cast<std::ptrdiff_t>((count + block - 1) / block);
  std::vector<double> partial(static_cast<std::size_t>(nblocks));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ib = 0; ib < nblocks; ++ib) {
    const std::size_t lo = static_cast<std::size_t>(ib) * block;
    const std::size_t hi = std::min(count, lo + block);
    double s = 0.0;
    for (std::size_t idx = lo; idx < hi; ++idx) s += f(idx);
    partial[static_cast<std::size_t>(ib)] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

template <class F>
void for_each_index(std::size_t count, F&& f) {
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < n; ++idx) f(static_cast<std::size_t>(idx));
}

}  // namespace

double sum(std::span<const double> v, std::size_t block) {
  return blocked_sum(v.size(), block, [&](std::size_t i) { return v[i]; });
}

double dot(std::span<const double> a, std::span<const double> b, std::size_t block) {
  assert(a.size() == b.size());
  return blocked_sum(a.size(), block, [&](std::size_t i) { return a[i] * b[i]; });
}

double sum_abs_pow(std::span<const double> v, double p, std::size_t block) {
  if (p == 1.0) return blocked_sum(v.size(), block, [&](std::size_t i) { return std::abs(v[i]); });
  if (p == 2.0) return blocked_sum(v.size(), block, [&](std::size_t i) { return v[i] * v[i]; });
  return blocked_sum(v.size(), block, [&](std::size_t i) { return std::pow(std::abs(v[i]), p); });
}

LocalSums local_energy_sums(std::span<const double> u, std::span<const double> v, double ubar,
                            Branch branch, std::size_t block) {
  assert(u.size() == v.size());
  LocalSums out;
  if (branch == Branch::Signed) {
    out.phi = blocked_sum(u.size(), block, [&](std::size_t i) { return phi_of_u(u[i], ubar); });
    out.potential =
        blocked_sum(u.size(), block, [&](std::size_t i) { return v[i] * s_of_u(u[i], ubar); });
  } else {
    out.phi = blocked_sum(u.size(), block, [&](std::size_t i) { return phi_plus(u[i], ubar); });
    out.potential =
        blocked_sum(u.size(), block, [&](std::size_t i) { return v[i] * s_plus(u[i], ubar); });
  }
  return out;
}

void charge_density(std::span<const double> u, double ubar, Branch branch, std::span<double> out) {
  assert(u.size() == out.size());
  if (branch == Branch::Signed)
    for_each_index(u.size(), [&](std::size_t i) { out[i] = s_of_u(u[i], ubar); });
  else
    for_each_index(u.size(), [&](std::size_t i) { out[i] = s_plus(u[i], ubar); });
}

void el_residual(std::span<const double> half_lap_u, std::span<const double> u,
                 std::span<const double> v, std::span<const double> coulomb, double a, double b,
                 double ubar, std::span<double> out) {
  for_each_index(u.size(), [&](std::size_t i) {
    out[i] = a * half_lap_u[i] + std::abs(u[i] + ubar) * (u[i] + v[i] + b * coulomb[i]);
  });
}

void step_reflect(std::span<const double> u, std::span<const double> g, double tau, double ubar,
                  std::span<double> out) {
  for_each_index(u.size(), [&](std::size_t i) { out[i] = reflect(u[i] - tau * g[i], ubar); });
}

namespace serial {

double sum(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sum_abs_pow(std::span<const double> v, double p) {
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x), p);
  return s;
}

LocalSums local_energy_sums(std::span<const double> u, std::span<const double> v, double ubar,
                            Branch branch) {
  LocalSums out;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const bool plus = branch == Branch::Plus;
    out.phi += plus ? phi_plus(u[i], ubar) : phi_of_u(u[i], ubar);
    out.potential += v[i] * (plus ? s_plus(u[i], ubar) : s_of_u(u[i], ubar));
  }
  return out;
}

void charge_density(std::span<const double> u, double ubar, Branch branch, std::span<double> out) {
  for (std::size_t i = 0; i < u.size(); ++i)
    out[i] = branch == Branch::Plus ? s_plus(u[i], ubar) : s_of_u(u[i], ubar);
}

void el_residual(std::span<const double> half_lap_u, std::span<const double> u,
                 std::span<const double> v, std::span<const double> coulomb, double a, double b,
                 double ubar, std::span<double> out) {
  for (std::size_t i = 0; i < u.size(); ++i)
    out[i] = a * half_lap_u[i] + std::abs(u[i] + ubar) * (u[i] + v[i] + b * coulomb[i]);
}

void step_reflect(std::span<const double> u, std::span<const double> g, double tau, double ubar,
                  std::span<double> out) {
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = reflect(u[i] - tau * g[i], ubar);
}

}  // namespace serial

}  // namespace tfdw::kernels
