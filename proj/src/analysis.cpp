#include "tfdw/analysis.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "tfdw/energy.hpp"
#include "tfdw/error.hpp"
#include "tfdw/kernels.hpp"
#include "tfdw/specfun.hpp"

namespace tfdw {

double hardy_constant() {
  const double g1 = specfun::gamma(0.25), g3 = specfun::gamma(0.75);
  return g1 * g1 / (2.0 * g3 * g3);
}

Bifurcation classify_bifurcation(double a) {
  return a >= hardy_constant() ? Bifurcation::Trivial : Bifurcation::Nontrivial;
}

namespace {

// C-infinity step: 1 on s <= 1/2, 0 on s >= 1.
double smooth_cutoff(double s) {
  if (s <= 0.5) return 1.0;
  if (s >= 1.0) return 0.0;
  auto psi = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  const double x = 2.0 * s - 1.0;
  return psi(1.0 - x) / (psi(1.0 - x) + psi(x));
}

}  // namespace

Field witness_profile(const Grid2D& grid, double lambda, double core_radius, double cutoff_radius) {
  return Field::sample(grid, [&](double x, double y) {
    const double r = std::hypot(x, y);
    return smooth_cutoff(r / cutoff_radius) / std::sqrt(std::max(r / lambda, core_radius));
  });
}

Witness negative_energy_witness(const ModelParams& params, const Field& v, SpectralPlan& plan,
                                const WitnessOptions& options) {
  const double ac = hardy_constant();
  if (!(params.a < ac - options.margin))
    throw Error(ErrorCode::InvalidArgument,
                "witness needs a < a_c - " + std::to_string(options.margin) + " (a_c = " +
                    std::to_string(ac) + ")");
  require_same_grid(plan.grid(), v);
  const Grid2D& g = plan.grid();
  const double cutoff =
      options.cutoff_radius > 0.0 ? options.cutoff_radius : 0.25 * g.box_length();

  for (double lambda : options.dilations) {
    Field u = witness_profile(g, lambda, options.core_radius, cutoff);
    std::vector<double> u2(g.size());
    for (std::size_t i = 0; i < u2.size(); ++i) u2[i] = v[i] * u[i] * u[i];
    const double quad =
        params.a * h_half_norm_sq(plan, u) + kernels::sum(u2, g.n()) * g.cell_area();
    if (!(quad < 0.0)) continue;

    Witness best{Field(g), 0.0, lambda, std::numeric_limits<double>::infinity(), quad};
    for (int k = 0; k <= 80; ++k) {
      const double t = std::pow(10.0, -6.0 + 0.075 * k);
      std::vector<double> tu(u.values().begin(), u.values().end());
      for (double& x : tu) x *= t;
      Field candidate(g, std::move(tu));
      const double e = energy_plus(candidate, params, v, plan).total;
      if (e < best.energy) {
        best.energy = e;
        best.t = t;
        best.u = std::move(candidate);
      }
    }
    if (best.energy < 0.0) return best;
  }
  throw Error(ErrorCode::WitnessNotFound,
              "no negative-energy witness found; try larger dilations, a larger box or a finer grid");
}

double decay_lhs(double a, double s) {
  using specfun::gamma;
  return 2.0 * a * gamma(0.5 * (s + 1.0)) * gamma(0.5 * (2.0 - s)) /
         (gamma(0.5 * (1.0 - s)) * gamma(0.5 * s));
}

DecayPrediction solve_decay_exponent(double a, double b, double l1_charge) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(l1_charge))
    throw Error(ErrorCode::InvalidArgument, "decay exponent needs a > 0, b > 0");
  const double rhs = 1.0 - b * l1_charge / (2.0 * std::numbers::pi);
  double lo = 1.001, hi = 1.999;
  auto f = [&](double s) { return decay_lhs(a, s) - rhs; };
  double flo = f(lo), fhi = f(hi);
  if (rhs >= 0.0 || flo <= 0.0)
    throw Error(ErrorCode::RhsNonnegative,
                "1 - b Q/(2 pi) = " + std::to_string(rhs) + " admits no exponent in (1,2)");
  if (fhi > 0.0) throw Error(ErrorCode::RootNotBracketed, "decay exponent root lies beyond s = 1.999");
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm > 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  const double s = 0.5 * (lo + hi);
  return {s, 2.0 * s, f(s)};
}

TailFit fit_tail(const RadialProfile& profile, double r_min, double r_max) {
  if (!(r_min < r_max)) throw Error(ErrorCode::InvalidArgument, "tail window needs r_min < r_max");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < profile.radii.size(); ++i) {
    const double r = profile.radii[i];
    if (r < r_min || r > r_max) continue;
    if (!(profile.means[i] > 0.0))
      throw Error(ErrorCode::NonpositiveValues, "profile mean <= 0 at r = " + std::to_string(r));
    xs.push_back(std::log(r));
    ys.push_back(std::log(profile.means[i]));
  }
  if (xs.size() < 6)
    throw Error(ErrorCode::InsufficientBins,
                "tail window holds " + std::to_string(xs.size()) + " bins, need 6");
  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  TailFit fit;
  fit.exponent = -slope;
  fit.prefactor = std::exp(my - slope * mx);
  fit.r_min = r_min;
  fit.r_max = r_max;
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  fit.bins = xs.size();
  return fit;
}

double extrapolated_charge(const Field& f, const TailFit& fit) {
  if (!(fit.exponent > 2.0))
    throw Error(ErrorCode::InvalidArgument, "tail exponent <= 2 has no finite integral");
  const Grid2D& g = f.grid();
  const std::size_t n = g.n();
  double inner = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (g.radius(i, j) <= fit.r_max) inner += f.at(i, j);
  const double p = fit.exponent;
  const double tail = 2.0 * std::numbers::pi * fit.prefactor * std::pow(fit.r_max, 2.0 - p) / (p - 2.0);
  return inner * g.cell_area() + tail;
}

double green_function(double a, double c, double r) {
  if (!(a > 0.0) || !(c > 0.0) || !(r > 0.0))
    throw Error(ErrorCode::Domain, "green_function needs a, c, r > 0");
  const double z = c * r / a;
  return c / (4.0 * a * a) * specfun::struve_y0_remainder(z);
}

std::vector<std::pair<double, double>> green_table(double a, double c, double r_min, double r_max,
                                                   std::size_t count) {
  if (!(r_min > 0.0) || !(r_max > r_min) || count < 2)
    throw Error(ErrorCode::InvalidArgument, "green table needs 0 < r_min < r_max and count >= 2");
  std::vector<std::pair<double, double>> out;
  const double step = std::log(r_max / r_min) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double r = r_min * std::exp(step * static_cast<double>(i));
    out.emplace_back(r, green_function(a, c, r));
  }
  return out;
}

}  // namespace tfdw
