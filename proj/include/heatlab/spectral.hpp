#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "heatlab/common.hpp"
#include "heatlab/eig.hpp"
#include "heatlab/grid.hpp"
#include "heatlab/sets.hpp"

namespace heatlab {

/// Frequency-ball radius N for the band-limited class {f : supp f̂ ⊂ B_N}.
struct BandLimitSpec {
  double limit = 0.0;
};

namespace detail {

/// Flat layout indices of the modes with |ξ_k| <= N, in lexicographic order of
/// the signed index vector so the set is independent of grid resolution.
inline std::vector<std::size_t> band_modes(const TorusGrid& g, double limit) {
  if (!(limit > 0.0)) fail(Errc::PreconditionFailed, "band limit must be positive");
  if (limit >= g.max_frequency())
    fail(Errc::BandLimitTooLarge, "band limit reaches the grid Nyquist frequency");
  std::vector<std::pair<std::vector<int>, std::size_t>> found;
  const double lim2 = limit * limit;
  std::vector<int> idx(static_cast<std::size_t>(g.dim()));
  for (std::size_t i = 0; i < g.point_count(); ++i) {
    if (freq_norm2(g, i) <= lim2) {
      for (int d = 0; d < g.dim(); ++d)
        idx[static_cast<std::size_t>(d)] = g.freq_index(g.axis_index(i, d));
      found.emplace_back(idx, i);
    }
  }
  std::sort(found.begin(), found.end());
  std::vector<std::size_t> out;
  out.reserve(found.size());
  for (auto& [k, flat] : found) out.push_back(flat);
  return out;
}

}  // namespace detail

/// Orthogonal projection onto the band-limited subspace: spectrum zeroed for
/// |ξ_k| > N. Idempotent, self-adjoint, norm non-increasing.
inline GridFunction bandlimit_project(const GridFunction& f, BandLimitSpec band) {
  if (!(band.limit > 0.0)) fail(Errc::PreconditionFailed, "band limit must be positive");
  if (band.limit >= f.grid.max_frequency())
    fail(Errc::BandLimitTooLarge, "projection would be the identity on this grid");
  SpectrumFunction s = forward_transform(f);
  const double lim2 = sq(band.limit);
  for (std::size_t i = 0; i < s.coeffs.size(); ++i)
    if (freq_norm2(f.grid, i) > lim2) s.coeffs[i] = cplx{0.0, 0.0};
  return inverse_transform(s);
}

/// Unit-norm test vector with spectrum supported in B_N, deterministic per
/// seed and independent of the grid resolution (coefficients are drawn in
/// lexicographic frequency order).
inline GridFunction random_bandlimited(const TorusGrid& grid, BandLimitSpec band,
                                       std::uint64_t seed) {
  const auto modes = detail::band_modes(grid, band.limit);
  SpectrumFunction s{grid, std::vector<cplx>(grid.point_count(), cplx{0.0, 0.0})};
  Rng rng(seed);
  for (std::size_t mode : modes) s.coeffs[mode] = rng.normal_complex();
  GridFunction f = inverse_transform(s);
  const double n = norm_l2(f);
  if (n == 0.0) fail(Errc::ZeroInput, "degenerate random draw");
  for (auto& v : f.values) v /= n;
  return f;
}

/// Root of h(s) = s^n (s-1)^{-n} - 1 = 1/2 on [2, ∞), by bisection to 1e-12.
/// h is continuous, strictly decreasing, h(2) >= 1 and h(∞) = 0.
inline double solve_A0(int dim) {
  if (dim < 1) fail(Errc::PreconditionFailed, "dimension must be >= 1");
  auto h = [dim](double s) { return std::exp(dim * (std::log(s) - std::log(s - 1.0))) - 1.0; };
  double lo = 2.0, hi = 4.0;
  while (h(hi) > 0.5) hi *= 2.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) > 0.5 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct SpectralConstantOptions {
  double tol = 1e-8;   ///< Lanczos residual tolerance
  int max_steps = 400;
};

struct SpectralConstantEstimate {
  EigEstimate eig;         ///< value = estimated best constant 1/λ_min
  double lambda_min = 0.0; ///< smallest Rayleigh quotient of P_N χ_E P_N
  std::size_t band_dim = 0;
};

/// Best constant in the spectral inequality on this grid: 1/λ_min of the
/// concentration operator P_N χ_E P_N on the band-limited subspace, computed
/// matrix-free as 1 - λ_max(P_N χ_{E^c} P_N) for conditioning.
inline SpectralConstantEstimate spectral_constant_estimate(const IndicatorMask& mask,
                                                           BandLimitSpec band,
                                                           SpectralConstantOptions opts = {}) {
  if (mask.true_count() == 0) fail(Errc::EmptyObservationSet, "mask is empty");
  const TorusGrid& g = mask.grid;
  const auto modes = detail::band_modes(g, band.limit);
  const std::size_t dim = modes.size();

  SpectrumFunction scratch{g, std::vector<cplx>(g.point_count())};
  ApplyFn apply = [&](const std::vector<cplx>& in, std::vector<cplx>& out) {
    std::fill(scratch.coeffs.begin(), scratch.coeffs.end(), cplx{0.0, 0.0});
    for (std::size_t j = 0; j < dim; ++j) scratch.coeffs[modes[j]] = in[j];
    GridFunction phys = inverse_transform(scratch);
    for (std::size_t i = 0; i < phys.values.size(); ++i)
      if (mask.bits[i]) phys.values[i] = cplx{0.0, 0.0};  // χ_{E^c}
    SpectrumFunction back = forward_transform(phys);
    out.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) out[j] = back.coeffs[modes[j]];
  };

  std::vector<cplx> start(dim);
  Rng rng(0x5eedu + static_cast<std::uint64_t>(dim));
  for (auto& z : start) z = rng.normal_complex();

  LanczosOptions lopts;
  lopts.tol = opts.tol;
  lopts.max_steps = opts.max_steps;
  lopts.ip_weight = g.freq_cell_volume();
  EigEstimate top = lanczos_largest(apply, dim, start, lopts);

  SpectralConstantEstimate out;
  out.band_dim = dim;
  out.lambda_min = std::max(0.0, 1.0 - top.value);
  out.eig = top;
  if (out.lambda_min < 1e-14) {
    out.eig.flags.add(flag::kConstantEffectivelyInfinite);
    out.eig.value = std::numeric_limits<double>::infinity();
  } else {
    out.eig.value = 1.0 / out.lambda_min;
  }
  return out;
}

/// Unit cubes Q(j) centered at integer lattice points, labelled good when
/// every tested derivative energy obeys ∫_Q |∂^β f|² <= A₀^{|β|} N^{2|β|} ∫_Q |f|².
struct CubeClassification {
  double a0 = 0.0;
  int betamax = 0;
  std::vector<std::uint8_t> good;   ///< one label per cube, row-major
  std::vector<double> energy;       ///< ∫_Q |f|² per cube
  int cubes_per_axis = 0;
  double total_energy = 0.0;

  double good_energy() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < good.size(); ++i)
      if (good[i]) acc += energy[i];
    return acc;
  }
};

namespace detail {

inline void enumerate_multi_indices(int dim, int max_total, std::vector<std::vector<int>>& out) {
  std::vector<int> beta(static_cast<std::size_t>(dim), 0);
  // counts all β with 1 <= |β| <= max_total
  std::function<void(int, int)> rec = [&](int axis, int remaining) {
    if (axis == dim) {
      int total = 0;
      for (int b : beta) total += b;
      if (total >= 1) out.push_back(beta);
      return;
    }
    for (int b = 0; b <= remaining; ++b) {
      beta[static_cast<std::size_t>(axis)] = b;
      rec(axis + 1, remaining - b);
    }
  };
  rec(0, max_total);
}

inline std::vector<double> per_cube_energy(const GridFunction& f, int cubes_per_axis) {
  const TorusGrid& g = f.grid;
  std::size_t n_cubes = 1;
  for (int d = 0; d < g.dim(); ++d) n_cubes *= static_cast<std::size_t>(cubes_per_axis);
  std::vector<double> acc(n_cubes, 0.0);
  std::vector<double> x(static_cast<std::size_t>(g.dim()));
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    g.point(i, x);
    std::size_t cube = 0;
    for (int d = 0; d < g.dim(); ++d) {
      int j = static_cast<int>(std::llround(x[static_cast<std::size_t>(d)]));
      j += cubes_per_axis / 2;  // centers run over -C/2 .. C/2-1
      if (j < 0) j += cubes_per_axis;
      if (j >= cubes_per_axis) j -= cubes_per_axis;
      cube = cube * static_cast<std::size_t>(cubes_per_axis) + static_cast<std::size_t>(j);
    }
    acc[cube] += std::norm(f.values[i]);
  }
  for (auto& e : acc) e *= g.cell_volume();
  return acc;
}

}  // namespace detail

/// Good/bad cube machinery. Quantification over all β is truncated at
/// |β| <= betamax; truncation can only relabel true-bad cubes as good, so the
/// good-cube mass bound survives it.
inline CubeClassification classify_cubes(const GridFunction& f, BandLimitSpec band, int betamax) {
  const TorusGrid& g = f.grid;
  if (betamax < 1) fail(Errc::PreconditionFailed, "betamax must be >= 1");
  const double side = g.side_length();
  if (std::abs(side - std::llround(side)) > 1e-9)
    fail(Errc::CubesDontTile, "unit cubes need an integer side length");
  if (energy(f) == 0.0) fail(Errc::ZeroInput, "cannot classify the zero function");

  CubeClassification out;
  out.a0 = solve_A0(g.dim());
  out.betamax = betamax;
  out.cubes_per_axis = static_cast<int>(std::llround(side));
  out.energy = detail::per_cube_energy(f, out.cubes_per_axis);
  out.total_energy = 0.0;
  for (double e : out.energy) out.total_energy += e;
  out.good.assign(out.energy.size(), 1);

  std::vector<std::vector<int>> betas;
  detail::enumerate_multi_indices(g.dim(), betamax, betas);
  for (const auto& beta : betas) {
    int order = 0;
    for (int b : beta) order += b;
    const double factor = std::pow(out.a0, order) * std::pow(band.limit, 2 * order);
    GridFunction df = spectral_derivative(f, beta, std::max(kMaxDerivativeOrder, betamax));
    const auto denergy = detail::per_cube_energy(df, out.cubes_per_axis);
    for (std::size_t c = 0; c < out.good.size(); ++c)
      if (denergy[c] > factor * out.energy[c]) out.good[c] = 0;
  }
  return out;
}

/// Minimal C' with ||f||² <= C'( ∫_E |f|² + ∫_{|ξ|>N} |f̂|² ).
inline double uncertainty_audit(const GridFunction& f, const IndicatorMask& mask,
                                BandLimitSpec band) {
  if (mask.grid != f.grid) fail(Errc::GridMismatch, "mask lives on a different grid");
  const double total = energy(f);
  const double observed = energy(f, &mask);
  SpectrumFunction s = forward_transform(f);
  double tail = 0.0;
  const double lim2 = sq(band.limit);
  for (std::size_t i = 0; i < s.coeffs.size(); ++i)
    if (freq_norm2(f.grid, i) > lim2) tail += std::norm(s.coeffs[i]);
  tail *= f.grid.freq_cell_volume();
  if (observed + tail == 0.0) fail(Errc::ZeroInput, "both observation terms vanish");
  return total / (observed + tail);
}

}  // namespace heatlab
