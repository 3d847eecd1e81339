#pragma once

#include <cstddef>
#include <span>

#include "tfdw/nonlinearity.hpp"

// Elementwise kernels and reductions over grid samples.
//
// tfdw::kernels holds the OpenMP implementations the library uses.
// tfdw::kernels::serial holds plain single-loop reference versions with the
// same signatures; tests check the two against each other and the benchmark
// target times them side by side.
//
// Reduction order: the input is cut into consecutive blocks of `block`
// elements (one grid row in practice). Each block is summed left to right and
// the block partials are then summed in block order. The result is therefore
// bitwise identical for any thread count.

namespace tfdw::kernels {

double sum(std::span<const double> v, std::size_t block);
double dot(std::span<const double> a, std::span<const double> b, std::size_t block);
/// sum |v|^p
double sum_abs_pow(std::span<const double> v, double p, std::size_t block);

struct LocalSums {
  double phi = 0.0;        // sum Phi(u)
  double potential = 0.0;  // sum V S(u)
};

LocalSums local_energy_sums(std::span<const double> u, std::span<const double> v, double ubar,
                            Branch branch, std::size_t block);

/// out = S(u) (or S_+ for Branch::Plus)
void charge_density(std::span<const double> u, double ubar, Branch branch, std::span<double> out);

/// out = a*H + |u+ubar| (u + V + b U)
void el_residual(std::span<const double> half_lap_u, std::span<const double> u,
                 std::span<const double> v, std::span<const double> coulomb, double a, double b,
                 double ubar, std::span<double> out);

/// out = |u - tau g + ubar| - ubar
void step_reflect(std::span<const double> u, std::span<const double> g, double tau, double ubar,
                  std::span<double> out);

namespace serial {

double sum(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
double sum_abs_pow(std::span<const double> v, double p);
LocalSums local_energy_sums(std::span<const double> u, std::span<const double> v, double ubar,
                            Branch branch);
void charge_density(std::span<const double> u, double ubar, Branch branch, std::span<double> out);
void el_residual(std::span<const double> half_lap_u, std::span<const double> u,
                 std::span<const double> v, std::span<const double> coulomb, double a, double b,
                 double ubar, std::span<double> out);
void step_reflect(std::span<const double> u, std::span<const double> g, double tau, double ubar,
                  std::span<double> out);

}  // namespace serial

}  // namespace tfdw::kernels
