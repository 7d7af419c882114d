#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "heatlab/common.hpp"
#include "heatlab/constants.hpp"
#include "heatlab/eig.hpp"
#include "heatlab/grid.hpp"
#include "heatlab/heat.hpp"
#include "heatlab/sets.hpp"

namespace heatlab {

enum class QuadScheme { Trapezoid, LogRefined };

/// Discretization of ∫_0^T dt. Nodes live in (0, T]; Σw_i = T for both
/// schemes (the bounded t→0 limit of the integrand is folded into the first
/// weight).
struct TimeQuadrature {
  double horizon = 0.0;  ///< T
  std::vector<double> nodes;
  std::vector<double> weights;
  QuadScheme scheme = QuadScheme::Trapezoid;

  double weight_sum() const {
    double acc = 0.0;
    for (double w : weights) acc += w;
    return acc;
  }
};

inline TimeQuadrature time_quadrature(double horizon, QuadScheme scheme, int nodes) {
  if (!(horizon > 0.0)) fail(Errc::InvalidTime, "time horizon must be positive");
  if (nodes < 2) fail(Errc::TooFewNodes, "need at least 2 quadrature nodes");
  TimeQuadrature q;
  q.horizon = horizon;
  q.scheme = scheme;
  q.nodes.resize(static_cast<std::size_t>(nodes));
  q.weights.assign(static_cast<std::size_t>(nodes), 0.0);
  if (scheme == QuadScheme::Trapezoid) {
    const double h = horizon / nodes;
    for (int i = 0; i < nodes; ++i) q.nodes[static_cast<std::size_t>(i)] = h * (i + 1);
    for (int i = 0; i < nodes; ++i) q.weights[static_cast<std::size_t>(i)] = h;
    q.weights.front() = 1.5 * h;
    q.weights.back() = 0.5 * h;
  } else {
    // Geometric nodes clustering at 0, trapezoid weights on the graded mesh,
    // leading cell [0, t_1] closed with the value at t_1.
    const double t1 = horizon / (static_cast<double>(nodes) * nodes);
    const double rho = std::pow(t1 / horizon, 1.0 / (nodes - 1));
    for (int i = 0; i < nodes; ++i)
      q.nodes[static_cast<std::size_t>(i)] = horizon * std::pow(rho, nodes - 1 - i);
    q.nodes.back() = horizon;
    for (int i = 0; i + 1 < nodes; ++i) {
      const double seg = q.nodes[static_cast<std::size_t>(i) + 1] - q.nodes[static_cast<std::size_t>(i)];
      q.weights[static_cast<std::size_t>(i)] += 0.5 * seg;
      q.weights[static_cast<std::size_t>(i) + 1] += 0.5 * seg;
    }
    q.weights.front() += q.nodes.front();
  }
  return q;
}

/// Finite union of disjoint closed subintervals of (0, T); realizes the
/// time-window set F of the stronger observability inequality.
struct TimeWindowSet {
  std::vector<std::pair<double, double>> intervals;

  double total_length() const {
    double acc = 0.0;
    for (auto& [a, b] : intervals) acc += b - a;
    return acc;
  }
  bool contains(double t) const {
    for (auto& [a, b] : intervals)
      if (t >= a && t <= b) return true;
    return false;
  }
};

inline TimeWindowSet make_time_window_set(std::vector<std::pair<double, double>> intervals,
                                          double horizon) {
  double prev = 0.0;
  for (auto& [a, b] : intervals) {
    if (!(a < b)) fail(Errc::PreconditionFailed, "window intervals need positive length");
    if (a < prev) fail(Errc::PreconditionFailed, "window intervals must be sorted and disjoint");
    if (b > horizon) fail(Errc::PreconditionFailed, "window exceeds the horizon");
    prev = b;
  }
  if (intervals.empty()) fail(Errc::PreconditionFailed, "window set must have positive measure");
  return TimeWindowSet{std::move(intervals)};
}

/// Observation restricted to F: quadrature weights outside F are zeroed.
inline TimeQuadrature restrict_to_window(TimeQuadrature quad, const TimeWindowSet& window) {
  for (std::size_t i = 0; i < quad.nodes.size(); ++i)
    if (!window.contains(quad.nodes[i])) quad.weights[i] = 0.0;
  return quad;
}

/// Numerator ∫|u(T)|² and denominator Σ w_i ∫_E |u(t_i)|² of the
/// observability quotient for one datum.
inline std::pair<double, double> obs_forms(const GridFunction& u0, const IndicatorMask& mask,
                                           double horizon, const TimeQuadrature& quad) {
  if (mask.grid != u0.grid) fail(Errc::GridMismatch, "mask lives on a different grid");
  if (energy(u0) == 0.0) fail(Errc::ZeroInput, "zero initial datum");
  SpectrumFunction hat = forward_transform(u0);
  double den = 0.0;
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    if (quad.weights[i] == 0.0) continue;
    GridFunction ut = inverse_transform(propagate_spectrum(hat, quad.nodes[i]));
    den += quad.weights[i] * energy(ut, &mask);
  }
  GridFunction uT = inverse_transform(propagate_spectrum(hat, horizon));
  return {energy(uT), den};
}

struct ObsConstantOptions {
  double tol = 1e-8;        ///< relative stationarity of the Rayleigh value
  int max_outer = 600;
  int cg_max_iter = 2000;
  double cg_tol = 1e-10;
  std::optional<GridFunction> initial;  ///< extra probe to seed the iteration
};

struct ObsConstantEstimate {
  EigEstimate eig;  ///< value = estimated best C_obs = sup q_num/q_den
  int cg_iterations_total = 0;
};

namespace detail {

/// Far-Gaussian and DC probes used to seed the generalized power iteration;
/// the supremum is approached from the most observably-deficient probe.
inline std::vector<GridFunction> default_obs_probes(const TorusGrid& g) {
  std::vector<GridFunction> probes;
  probes.push_back(sample(g, [](std::span<const double>) { return 1.0; }));
  const int per_axis = g.dim() == 1 ? 8 : 3;
  std::vector<double> c(static_cast<std::size_t>(g.dim()), 0.0);
  std::vector<int> idx(static_cast<std::size_t>(g.dim()), 0);
  const double lo = -0.375 * g.side_length();
  const double step = g.dim() >= 1 ? (0.75 * g.side_length() / std::max(1, per_axis - 1)) : 0.0;
  bool done = false;
  while (!done) {
    for (int d = 0; d < g.dim(); ++d)
      c[static_cast<std::size_t>(d)] = lo + step * idx[static_cast<std::size_t>(d)];
    probes.push_back(sample(g, [&](std::span<const double> x) {
      double r2 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) r2 += sq(x[i] - c[i]);
      return std::exp(-0.5 * r2);
    }));
    int d = g.dim() - 1;
    while (d >= 0 && ++idx[static_cast<std::size_t>(d)] == per_axis) {
      idx[static_cast<std::size_t>(d)] = 0;
      --d;
    }
    done = d < 0;
  }
  return probes;
}

}  // namespace detail

/// Best observability constant on this grid: the largest generalized Rayleigh
/// quotient of A = e^{TΔ} e^{TΔ} against the Gramian
/// B = Σ w_i e^{t_iΔ} χ_E e^{t_iΔ}, found by the iteration x ← B⁻¹Ax with CG
/// solves against B. A near-singular Gramian is Tikhonov-shifted and flagged.
inline ObsConstantEstimate obs_constant_estimate(const IndicatorMask& mask, double horizon,
                                                 const TimeQuadrature& quad,
                                                 ObsConstantOptions opts = {}) {
  if (mask.true_count() == 0) fail(Errc::EmptyObservationSet, "mask is empty");
  const TorusGrid& g = mask.grid;
  const std::size_t n = g.point_count();
  const double ipw = g.cell_volume();

  const int m = g.samples_per_dim();
  std::vector<double> xi2(static_cast<std::size_t>(m));
  for (int layout = 0; layout < m; ++layout)
    xi2[static_cast<std::size_t>(layout)] = sq(g.frequency(g.freq_index(layout)));
  auto mode_xi2 = [&](std::size_t flat) {
    double acc = 0.0;
    for (int d = 0; d < g.dim(); ++d) acc += xi2[static_cast<std::size_t>(g.axis_index(flat, d))];
    return acc;
  };

  GridFunction work{g, std::vector<cplx>(n)};
  ApplyFn apply_a = [&](const std::vector<cplx>& in, std::vector<cplx>& out) {
    work.values = in;
    SpectrumFunction s = forward_transform(work);
    for (std::size_t i = 0; i < n; ++i) s.coeffs[i] *= std::exp(-2.0 * horizon * mode_xi2(i));
    out = inverse_transform(s).values;
  };

  double shift = 0.0;
  ApplyFn apply_b = [&](const std::vector<cplx>& in, std::vector<cplx>& out) {
    work.values = in;
    SpectrumFunction s = forward_transform(work);
    std::vector<cplx> acc(n, cplx{0.0, 0.0});
    SpectrumFunction node{g, std::vector<cplx>(n)};
    for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
      if (quad.weights[q] == 0.0) continue;
      const double t = quad.nodes[q];
      node.coeffs = s.coeffs;
      for (std::size_t i = 0; i < n; ++i) node.coeffs[i] *= std::exp(-t * mode_xi2(i));
      GridFunction phys = inverse_transform(node);
      for (std::size_t i = 0; i < n; ++i)
        if (!mask.bits[i]) phys.values[i] = cplx{0.0, 0.0};
      SpectrumFunction back = forward_transform(phys);
      for (std::size_t i = 0; i < n; ++i)
        acc[i] += quad.weights[q] * back.coeffs[i] * std::exp(-t * mode_xi2(i));
    }
    SpectrumFunction total{g, std::move(acc)};
    out = inverse_transform(total).values;
    if (shift > 0.0)
      for (std::size_t i = 0; i < n; ++i) out[i] += shift * in[i];
  };

  // Mean Gramian eigenvalue from the exact circulant diagonal of e^{2tΔ};
  // sets the curvature floor for the Tikhonov policy.
  double mean_diag = 0.0;
  {
    double count_e = static_cast<double>(mask.true_count());
    for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
      if (quad.weights[q] == 0.0) continue;
      double tr_mode = 0.0;
      for (std::size_t i = 0; i < n; ++i) tr_mode += std::exp(-2.0 * quad.nodes[q] * mode_xi2(i));
      mean_diag += quad.weights[q] * count_e * tr_mode / static_cast<double>(n);
    }
    mean_diag /= static_cast<double>(n);
  }
  const double eps_reg = 1e-12 * mean_diag;

  ObsConstantEstimate result;

  // Seed from the best probe ratio so the iteration starts near the
  // extremizer even when the supremum sits on far-from-E data.
  std::vector<cplx> x, ax(n), bx(n);
  {
    auto probes = detail::default_obs_probes(g);
    if (opts.initial) probes.push_back(*opts.initial);
    double best = -1.0;
    for (auto& p : probes) {
      apply_a(p.values, ax);
      apply_b(p.values, bx);
      const double num = vec::dot(p.values, ax, ipw).real();
      const double den = vec::dot(p.values, bx, ipw).real();
      if (den > 0.0 && num / den > best) {
        best = num / den;
        x = p.values;
      }
    }
    if (x.empty()) x.assign(n, cplx{1.0, 0.0});
    // deterministic perturbation so a symmetric seed cannot sit exactly
    // orthogonal to the dominant eigenvector
    Rng jitter(0xb10c5eedull + n);
    const double seed_norm = vec::norm(x, ipw);
    for (auto& z : x) z += 1e-3 * seed_norm * jitter.normal_complex();
    const double nx = vec::norm(x, ipw);
    vec::scale(x, 1.0 / nx);
  }

  double lambda = 0.0, lambda_prev = -1.0;
  bool converged = false;
  int stationary_hits = 0;
  for (int outer = 0; outer < opts.max_outer; ++outer) {
    apply_a(x, ax);
    apply_b(x, bx);
    const double num = vec::dot(x, ax, ipw).real();
    const double den = vec::dot(x, bx, ipw).real();
    if (den <= 0.0) {
      result.eig.flags.add(flag::kNotConverged);
      break;
    }
    lambda = num / den;
    result.eig.iterations = outer + 1;
    if (lambda_prev > 0.0 && std::abs(lambda - lambda_prev) <= opts.tol * std::abs(lambda)) {
      if (++stationary_hits >= 3) {
        converged = true;
        break;
      }
    } else {
      stationary_hits = 0;
    }
    lambda_prev = lambda;

    std::vector<cplx> y(n);
    CgResult cg = cg_solve(apply_b, ax, y, opts.cg_tol, opts.cg_max_iter, ipw, eps_reg);
    result.cg_iterations_total += cg.iterations;
    if (cg.curvature_breakdown) {
      shift = eps_reg;
      result.eig.flags.add(flag::kRegularized);
      cg = cg_solve(apply_b, ax, y, opts.cg_tol, opts.cg_max_iter, ipw, 0.0);
      result.cg_iterations_total += cg.iterations;
    }
    if (!cg.converged) result.eig.flags.add(flag::kNotConverged);
    const double ny = vec::norm(y, ipw);
    if (ny == 0.0) break;
    x = std::move(y);
    vec::scale(x, 1.0 / ny);
  }

  apply_a(x, ax);
  apply_b(x, bx);
  double resid = 0.0;
  for (std::size_t i = 0; i < n; ++i) resid += std::norm(ax[i] - lambda * bx[i]);
  result.eig.value = lambda;
  result.eig.residual = std::sqrt(resid * ipw);
  result.eig.converged = converged;
  if (!converged) result.eig.flags.add(flag::kNotConverged);
  return result;
}

/// Normalized interpolation exponent: the smallest C_Hold making the
/// Hölder-type interpolation inequality an equality for this datum,
/// c(u₀) = [ln∫|u(T)|² − θ ln∫_E|u(T)|² − (1−θ) ln∫|u₀|²] / (1 + 1/T).
inline double interpolation_constant(const GridFunction& u0, const IndicatorMask& mask,
                                     double horizon, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) fail(Errc::InvalidTheta, "theta must be in (0,1)");
  const double e0 = energy(u0);
  if (e0 == 0.0) fail(Errc::ZeroInput, "zero initial datum");
  GridFunction uT = propagate(u0, horizon);
  const double full = energy(uT);
  const double observed = energy(uT, &mask);
  if (observed <= 0.0)
    fail(Errc::ObservationVanishes, "observation integral vanishes at time T");
  return (std::log(full) - theta * std::log(observed) - (1.0 - theta) * std::log(e0)) /
         (1.0 + 1.0 / horizon);
}

/// Geometric time-slice schedule of the telescoping series method, with the
/// constants of the summation step.
struct TelescopeSchedule {
  double horizon = 0.0;  ///< T
  double lambda = 0.0;
  double l = 0.0;        ///< accumulation time
  double l1 = 0.0;       ///< first slice
  double mu = 0.0;       ///< 1/(2 - λ^{-2})
  double c_prime = 0.0;  ///< 1 + λ + 2 C_Hold (1+λ)/λ
  double l1_minus_l3 = 0.0;
  std::vector<double> levels;  ///< l_m = l + λ^{m-1}(l1 - l), m = 1..
  /// log of the general-window constant 3·exp[2C_Hold + μC'/(l1-l3)]
  double log_c_obs_general = 0.0;
};

inline TelescopeSchedule telescope_schedule(double horizon, double lambda, double l, double l1,
                                            double c_hold, int levels = 12) {
  if (!(lambda > 1.0 / std::sqrt(2.0) && lambda < 1.0))
    fail(Errc::InvalidLambda, "lambda must lie in (1/sqrt(2), 1)");
  if (!(0.0 < l && l < l1 && l1 < horizon))
    fail(Errc::PreconditionFailed, "need 0 < l < l1 < T");
  if (c_hold < 0.0) fail(Errc::PreconditionFailed, "C_Hold must be >= 0");
  TelescopeSchedule s;
  s.horizon = horizon;
  s.lambda = lambda;
  s.l = l;
  s.l1 = l1;
  s.mu = 1.0 / (2.0 - 1.0 / (lambda * lambda));
  s.c_prime = 1.0 + lambda + 2.0 * c_hold * (1.0 + lambda) / lambda;
  s.levels.resize(static_cast<std::size_t>(levels));
  double pow_l = 1.0;
  for (int mIdx = 0; mIdx < levels; ++mIdx) {
    s.levels[static_cast<std::size_t>(mIdx)] = l + pow_l * (l1 - l);
    pow_l *= lambda;
  }
  s.l1_minus_l3 = s.levels[0] - s.levels[2];
  s.log_c_obs_general = std::log(3.0) + 2.0 * c_hold + s.mu * s.c_prime / s.l1_minus_l3;
  return s;
}

/// Default schedule of the explicit-constant case F = (0,T):
/// l1 = 2T/3, l = T/3, λ = sqrt(2/3). The derived quantities come out of the
/// exact algebra (λ² = 2/3), not the rounded λ, so l1−l3 = T/9 and μ = 2 hold
/// to the digit.
inline TelescopeSchedule telescope_defaults(double horizon, double c_hold = 0.0, int levels = 12) {
  TelescopeSchedule s = telescope_schedule(horizon, std::sqrt(2.0 / 3.0), horizon / 3.0,
                                           2.0 * horizon / 3.0, c_hold, levels);
  s.mu = 2.0;
  s.l1_minus_l3 = horizon / 9.0;
  s.log_c_obs_general = std::log(3.0) + 2.0 * c_hold + s.mu * s.c_prime / s.l1_minus_l3;
  return s;
}

/// Predicted observability constant exp[36(1+3C_Hold)(1+1/T)] for F = (0,T).
inline LogValue predicted_cobs(double c_hold, double horizon) {
  if (c_hold < 0.0) fail(Errc::PreconditionFailed, "C_Hold must be >= 0");
  if (!(horizon > 0.0)) fail(Errc::InvalidTime, "T must be positive");
  return LogValue{36.0 * (1.0 + 3.0 * c_hold) * (1.0 + 1.0 / horizon)};
}

}  // namespace heatlab
