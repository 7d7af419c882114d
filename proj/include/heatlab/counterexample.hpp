#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "heatlab/common.hpp"
#include "heatlab/grid.hpp"
#include "heatlab/heat.hpp"
#include "heatlab/observability.hpp"
#include "heatlab/sets.hpp"
#include "heatlab/weights.hpp"

namespace heatlab {

/// Translated Gaussian solutions u_k with center (k, 0, ..., 0); the family
/// that defeats ball-to-ball observability as k → ∞.
struct TranslatedGaussianFamily {
  int dim = 1;
  double index = 0.0;  ///< k

  GaussianSolutionSpec solution() const {
    GaussianSolutionSpec spec;
    spec.dim = dim;
    spec.center.assign(static_cast<std::size_t>(dim), 0.0);
    spec.center[0] = index;
    return spec;
  }
};

inline double translated_gaussian_eval(const TranslatedGaussianFamily& fam, double t,
                                       std::span<const double> x) {
  return gaussian_solution_eval(fam.solution(), t, x);
}

inline double counterexample_validity_threshold(int dim, double horizon, double r, double r_prime) {
  return std::max(r + std::sqrt(2.0 * dim * (horizon + 1.0)), r_prime);
}

/// Closed-form bound on ∫₀ᵀ∫_{B_r}u_k² / ∫_{B_r'}u_k(T)²:
/// T(3r/σ)^n exp[((σ/3)² − (2σ/3)(k−r)) / (2(T+1))], σ = r' − r.
/// Valid once k clears the monotonicity threshold; decays to 0 as k → ∞.
inline double ratio_bound_closed_form(int dim, double horizon, double r, double r_prime,
                                      double k) {
  if (!(r > 0.0) || !(r_prime > r)) fail(Errc::InvalidRadii, "need r' > r > 0");
  if (!(horizon > 0.0)) fail(Errc::InvalidTime, "T must be positive");
  if (!(k > counterexample_validity_threshold(dim, horizon, r, r_prime)))
    fail(Errc::BoundNotApplicable, "k below the validity threshold");
  const double sigma = r_prime - r;
  const double expo = (sq(sigma / 3.0) - 2.0 * sigma / 3.0 * (k - r)) / (2.0 * (horizon + 1.0));
  return horizon * std::pow(3.0 * r / sigma, dim) * std::exp(expo);
}

/// Per-k grid sizing: both the origin balls and the Gaussian center keep
/// >= 20 units of tail margin.
inline TorusGrid counterexample_grid(int dim, double k, int samples_per_dim = 8192) {
  const double side = 2.0 * k + 40.0;
  return TorusGrid(dim, side, samples_per_dim);
}

struct RatioNumericResult {
  double num = 0.0;    ///< Σ w_i ∫_{B_r} u_k(t_i)²
  double den = 0.0;    ///< ∫_{B_r'} u_k(T)²
  double ratio = 0.0;
  FlagSet flags;
};

/// Quadrature of the family ratio. The solution is evaluated in closed form at
/// the time nodes: by k = 20 the observed far field sits ~40 orders of
/// magnitude below the field's peak, far beneath the noise floor any
/// transform-based propagation could resolve, while the closed form quadrates
/// cleanly. Family-vs-propagator agreement is tested separately at moderate k.
inline RatioNumericResult ratio_numeric(int dim, double horizon, double r, double r_prime,
                                        double k, const TorusGrid& grid,
                                        const TimeQuadrature& quad) {
  if (!(r > 0.0) || !(r_prime > r)) fail(Errc::InvalidRadii, "need r' > r > 0");
  TranslatedGaussianFamily fam{dim, k};
  const GaussianSolutionSpec sol = fam.solution();
  GridFunction u0 = sample_gaussian_solution(sol, grid, 0.0);

  RatioNumericResult out;
  if (!periodization_ok(u0)) out.flags.add(flag::kPeriodizationRisk);

  const IndicatorMask inner = rasterize(SetSpec::ball(std::vector<double>(dim, 0.0), r), grid);
  const IndicatorMask outer = rasterize(SetSpec::ball(std::vector<double>(dim, 0.0), r_prime), grid);

  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    if (quad.weights[i] == 0.0) continue;
    const GridFunction ut = sample_gaussian_solution(sol, grid, quad.nodes[i]);
    out.num += quad.weights[i] * energy(ut, &inner);
  }
  const GridFunction uT = sample_gaussian_solution(sol, grid, horizon);
  out.den = energy(uT, &outer);
  out.ratio = out.den > 0.0 ? out.num / out.den : std::numeric_limits<double>::infinity();
  return out;
}

struct FarGaussianResult {
  double obs_energy = 0.0;     ///< ∫₀¹ ∫_{|x-x₀|>=L} |v|², numeric
  double decay_bound = 0.0;    ///< (2π)^{-n/2} e^{-L²/8}
  double target_energy = 0.0;  ///< ∫ |v(1,·)|², numeric
  double measure_lower_bound = 0.0;  ///< π^{n/2}/(2C) for the supplied C_obs
  FlagSet flags;
};

/// The contradiction engine behind thickness necessity: the far-field
/// observation of the special solution is exponentially small in L while its
/// target energy stays fixed.
inline FarGaussianResult far_gaussian_demo(int dim, std::span<const double> x0, double scale_l,
                                           const TorusGrid& grid, const TimeQuadrature& quad,
                                           double candidate_cobs = 0.0) {
  if (!(scale_l > 0.0)) fail(Errc::PreconditionFailed, "L must be positive");
  GaussianSolutionSpec spec;
  spec.dim = dim;
  spec.center.assign(x0.begin(), x0.end());
  GridFunction v0 = sample_gaussian_solution(spec, grid, 0.0);

  FarGaussianResult out;
  if (!periodization_ok(v0)) out.flags.add(flag::kPeriodizationRisk);

  const IndicatorMask far_field = rasterize(
      SetSpec::complement(SetSpec::ball(std::vector<double>(x0.begin(), x0.end()), scale_l)),
      grid);

  SpectrumFunction hat = forward_transform(v0);
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    if (quad.weights[i] == 0.0) continue;
    GridFunction vt = inverse_transform(propagate_spectrum(hat, quad.nodes[i]));
    out.obs_energy += quad.weights[i] * energy(vt, &far_field);
  }
  GridFunction v1 = inverse_transform(propagate_spectrum(hat, 1.0));
  out.target_energy = energy(v1);
  out.decay_bound = std::pow(kTwoPi, -0.5 * dim) * std::exp(-sq(scale_l) / 8.0);
  if (candidate_cobs > 0.0)
    out.measure_lower_bound = std::pow(kPi, 0.5 * dim) / (2.0 * candidate_cobs);
  return out;
}

/// Weighted-recovery failure ratio ∫ρ|u_k(T)|² / ∫₀ᵀ∫_{B_r}|u_k|² for the
/// decaying weights ρ; diverges along k → ∞, so no decaying weight rescues
/// ball observation.
inline double weighted_failure_ratio(int dim, const WeightSpec& rho, double horizon, double r,
                                     double k, const TorusGrid& grid,
                                     const TimeQuadrature& quad) {
  TranslatedGaussianFamily fam{dim, k};
  const GaussianSolutionSpec sol = fam.solution();
  const IndicatorMask inner = rasterize(SetSpec::ball(std::vector<double>(dim, 0.0), r), grid);
  double den = 0.0;
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    if (quad.weights[i] == 0.0) continue;
    const GridFunction ut = sample_gaussian_solution(sol, grid, quad.nodes[i]);
    den += quad.weights[i] * energy(ut, &inner);
  }
  const GridFunction uT = sample_gaussian_solution(sol, grid, horizon);
  const double num = weighted_norm_sq(uT, rho);
  return den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
}

}  // namespace heatlab
