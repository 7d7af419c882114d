#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "heatlab/common.hpp"
#include "heatlab/grid.hpp"
#include "heatlab/sets.hpp"

namespace heatlab {

/// Radial weights of the weighted L² spaces; |x| is measured in the
/// fundamental cell of the torus.
struct WeightSpec {
  enum class Kind { ExpGrowth, PolyGrowth, ExpDecay, PolyDecay };

  Kind kind = Kind::ExpDecay;
  double a = 1.0;   ///< ExpGrowth rate
  double nu = 1.0;  ///< exponent for ExpGrowth / PolyGrowth / PolyDecay

  static WeightSpec exp_growth(double a, double nu) {
    if (!(a > 0.0) || !(nu > 0.0)) fail(Errc::PreconditionFailed, "need a > 0 and nu > 0");
    return WeightSpec{Kind::ExpGrowth, a, nu};
  }
  static WeightSpec poly_growth(double nu) {
    if (!(nu > 0.0)) fail(Errc::PreconditionFailed, "need nu > 0");
    return WeightSpec{Kind::PolyGrowth, 0.0, nu};
  }
  static WeightSpec exp_decay() { return WeightSpec{Kind::ExpDecay, 0.0, 0.0}; }
  static WeightSpec poly_decay(double nu) {
    if (!(nu > 0.0)) fail(Errc::PreconditionFailed, "need nu > 0");
    return WeightSpec{Kind::PolyDecay, 0.0, nu};
  }
};

inline double weight_eval(const WeightSpec& w, std::span<const double> x) {
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  const double r = std::sqrt(r2);
  switch (w.kind) {
    case WeightSpec::Kind::ExpGrowth: return std::exp(w.a * std::pow(r, w.nu));
    case WeightSpec::Kind::PolyGrowth: return std::pow(std::sqrt(1.0 + r2), w.nu);
    case WeightSpec::Kind::ExpDecay: return std::exp(-r);
    case WeightSpec::Kind::PolyDecay: return std::pow(std::sqrt(1.0 + r2), -w.nu);
  }
  return 1.0;
}

/// h^n Σ w(x)|f(x)|².
inline double weighted_norm_sq(const GridFunction& f, const WeightSpec& w) {
  double acc = 0.0;
  std::vector<double> x(static_cast<std::size_t>(f.grid.dim()));
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    f.grid.point(i, x);
    const double term = weight_eval(w, x) * std::norm(f.values[i]);
    if (!std::isfinite(term)) fail(Errc::NonFiniteInput, "weighted integrand is not finite");
    acc += term;
  }
  return acc * f.grid.cell_volume();
}

/// (2π/Λ)^n Σ e^{a|ξ|^s} |f̂|², each mode in log space so the growth factor
/// never meets an underflowed coefficient as 0·inf.
inline double spectral_weighted_energy(const SpectrumFunction& s, double a, double power) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    const double mag2 = std::norm(s.coeffs[i]);
    if (mag2 == 0.0) continue;
    const double xi = std::sqrt(freq_norm2(s.grid, i));
    const double log_term = a * std::pow(xi, power) + std::log(mag2);
    acc += std::exp(log_term);
  }
  return acc * s.grid.freq_cell_volume();
}

/// h^n Σ w(|x|)|f(x)|² for an arbitrary radial weight.
template <class Fn>
double radial_weighted_energy(const GridFunction& f, Fn&& weight_of_r) {
  double acc = 0.0;
  std::vector<double> x(static_cast<std::size_t>(f.grid.dim()));
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    f.grid.point(i, x);
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    acc += weight_of_r(std::sqrt(r2)) * std::norm(f.values[i]);
  }
  return acc * f.grid.cell_volume();
}

/// Annuli Ω_j = {j-1 <= |x| < j}, j = 1..jmax. Pairwise disjoint, union B_jmax,
/// and Ω₁ is exactly the rasterized unit ball.
struct AnnulusSet {
  std::vector<IndicatorMask> masks;  ///< masks[j-1] = Ω_j
};

inline AnnulusSet annulus_masks(const TorusGrid& grid, int jmax) {
  if (jmax < 1) fail(Errc::PreconditionFailed, "jmax must be >= 1");
  if (static_cast<double>(jmax) > 0.5 * grid.side_length())
    fail(Errc::OutOfDomain, "annuli exceed the torus radius");
  AnnulusSet out;
  out.masks.reserve(static_cast<std::size_t>(jmax));
  for (int j = 1; j <= jmax; ++j)
    out.masks.push_back(
        IndicatorMask{grid, std::vector<std::uint8_t>(grid.point_count(), 0)});
  std::vector<double> x(static_cast<std::size_t>(grid.dim()));
  for (std::size_t i = 0; i < grid.point_count(); ++i) {
    grid.point(i, x);
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    const double r = std::sqrt(r2);
    const int j = static_cast<int>(std::floor(r)) + 1;
    if (j >= 1 && j <= jmax) out.masks[static_cast<std::size_t>(j - 1)].bits[i] = 1;
  }
  return out;
}

}  // namespace heatlab
