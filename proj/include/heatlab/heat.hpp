#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "heatlab/common.hpp"
#include "heatlab/grid.hpp"

namespace heatlab {

/// K(t,x) = (4πt)^{-n/2} e^{-|x|²/4t}, t > 0.
inline double heat_kernel_eval(int dim, double t, std::span<const double> x) {
  if (!(t > 0.0)) fail(Errc::InvalidTime, "heat kernel needs t > 0");
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  return std::pow(4.0 * kPi * t, -0.5 * dim) * std::exp(-r2 / (4.0 * t));
}

inline SpectrumFunction propagate_spectrum(SpectrumFunction s, double t) {
  if (t < 0.0) fail(Errc::InvalidTime, "heat semigroup needs t >= 0");
  if (t == 0.0) return s;
  const TorusGrid& g = s.grid;
  const int m = g.samples_per_dim();
  std::vector<double> xi2(static_cast<std::size_t>(m));
  for (int layout = 0; layout < m; ++layout)
    xi2[static_cast<std::size_t>(layout)] = sq(g.frequency(g.freq_index(layout)));
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    double total = 0.0;
    for (int d = 0; d < g.dim(); ++d)
      total += xi2[static_cast<std::size_t>(g.axis_index(i, d))];
    s.coeffs[i] *= std::exp(-t * total);
  }
  return s;
}

/// Exact heat semigroup on the torus: spectrum scaled by e^{-t|ξ|²} per mode,
/// no time stepping.
inline GridFunction propagate(const GridFunction& u, double t) {
  if (t < 0.0) fail(Errc::InvalidTime, "heat semigroup needs t >= 0");
  if (t == 0.0) return u;
  return inverse_transform(propagate_spectrum(forward_transform(u), t));
}

/// The closed-form solution v(t,x) = (4π(t+1))^{-n/2} e^{-|x-x₀|²/(4(t+1))},
/// the heat evolution of a unit-mass Gaussian bump at x₀.
struct GaussianSolutionSpec {
  int dim = 1;
  std::vector<double> center;
};

inline double gaussian_solution_eval(const GaussianSolutionSpec& spec, double t,
                                     std::span<const double> x) {
  if (t < 0.0) fail(Errc::InvalidTime, "closed-form solution needs t >= 0");
  double r2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double c = i < spec.center.size() ? spec.center[i] : 0.0;
    r2 += sq(x[i] - c);
  }
  return std::pow(4.0 * kPi * (t + 1.0), -0.5 * spec.dim) * std::exp(-r2 / (4.0 * (t + 1.0)));
}

inline GridFunction sample_gaussian_solution(const GaussianSolutionSpec& spec,
                                             const TorusGrid& grid, double t) {
  return sample(grid, [&](std::span<const double> x) { return gaussian_solution_eval(spec, t, x); });
}

}  // namespace heatlab
