#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "heatlab/common.hpp"
#include "heatlab/grid.hpp"

namespace heatlab {

/// Algebraic description of a measurable set E ⊂ R^n. Rasterization tests the
/// cell center, so masks stay boolean and window counts exact.
struct SetSpec {
  enum class Kind { FullSpace, Ball, Box, Stripes, Pattern, Union, Intersection, Complement };

  Kind kind = Kind::FullSpace;
  std::vector<double> center;  // Ball center / Box corner
  std::vector<double> sides;   // Box side lengths
  double radius = 0.0;         // Ball
  int axis = 0;                // Stripes
  double width = 0.0;          // Stripes
  double period = 0.0;         // Stripes / Pattern
  double phase = 0.0;          // Stripes
  std::vector<SetSpec> children;  // Pattern cell / Union / Intersection / Complement

  static SetSpec full_space() { return SetSpec{}; }

  static SetSpec ball(std::vector<double> c, double r) {
    if (!(r > 0.0)) fail(Errc::PreconditionFailed, "ball radius must be positive");
    SetSpec s;
    s.kind = Kind::Ball;
    s.center = std::move(c);
    s.radius = r;
    return s;
  }

  static SetSpec box(std::vector<double> corner, std::vector<double> side_lengths) {
    for (double v : side_lengths)
      if (!(v > 0.0)) fail(Errc::PreconditionFailed, "box sides must be positive");
    if (corner.size() != side_lengths.size())
      fail(Errc::PreconditionFailed, "box corner/sides dimension mismatch");
    SetSpec s;
    s.kind = Kind::Box;
    s.center = std::move(corner);
    s.sides = std::move(side_lengths);
    return s;
  }

  static SetSpec stripes(int axis, double width, double period, double phase = 0.0) {
    if (!(width > 0.0) || !(period > 0.0))
      fail(Errc::PreconditionFailed, "stripe width and period must be positive");
    if (width > period) fail(Errc::PreconditionFailed, "stripe width must be <= period");
    SetSpec s;
    s.kind = Kind::Stripes;
    s.axis = axis;
    s.width = width;
    s.period = period;
    s.phase = phase;
    return s;
  }

  static SetSpec pattern(SetSpec cell, double period) {
    if (!(period > 0.0)) fail(Errc::PreconditionFailed, "pattern period must be positive");
    SetSpec s;
    s.kind = Kind::Pattern;
    s.period = period;
    s.children.push_back(std::move(cell));
    return s;
  }

  static SetSpec set_union(std::vector<SetSpec> parts) {
    SetSpec s;
    s.kind = Kind::Union;
    s.children = std::move(parts);
    return s;
  }

  static SetSpec intersection(std::vector<SetSpec> parts) {
    SetSpec s;
    s.kind = Kind::Intersection;
    s.children = std::move(parts);
    return s;
  }

  static SetSpec complement(SetSpec inner) {
    SetSpec s;
    s.kind = Kind::Complement;
    s.children.push_back(std::move(inner));
    return s;
  }

  bool contains(std::span<const double> x) const {
    switch (kind) {
      case Kind::FullSpace:
        return true;
      case Kind::Ball: {
        double d2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
          const double c = i < center.size() ? center[i] : 0.0;
          d2 += sq(x[i] - c);
        }
        return d2 < radius * radius;
      }
      case Kind::Box: {
        for (std::size_t i = 0; i < x.size(); ++i) {
          const double lo = i < center.size() ? center[i] : 0.0;
          const double len = i < sides.size() ? sides[i] : 0.0;
          if (x[i] < lo || x[i] >= lo + len) return false;
        }
        return true;
      }
      case Kind::Stripes: {
        const double v = x[static_cast<std::size_t>(axis)] - phase;
        double frac = std::fmod(v, period);
        if (frac < 0.0) frac += period;
        return frac < width;
      }
      case Kind::Pattern: {
        std::vector<double> wrapped(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
          double v = std::fmod(x[i] + 0.5 * period, period);
          if (v < 0.0) v += period;
          wrapped[i] = v - 0.5 * period;
        }
        return children[0].contains(wrapped);
      }
      case Kind::Union: {
        for (const auto& c : children)
          if (c.contains(x)) return true;
        return false;
      }
      case Kind::Intersection: {
        for (const auto& c : children)
          if (!c.contains(x)) return false;
        return true;
      }
      case Kind::Complement:
        return !children[0].contains(x);
    }
    return false;
  }
};

/// Cell is true iff its center lies in the set. A degenerate spec rasterizes
/// to the all-false mask rather than erroring.
inline IndicatorMask rasterize(const SetSpec& spec, const TorusGrid& grid) {
  IndicatorMask mask{grid, std::vector<std::uint8_t>(grid.point_count(), 0)};
  std::vector<double> x(static_cast<std::size_t>(grid.dim()));
  for (std::size_t i = 0; i < mask.bits.size(); ++i) {
    grid.point(i, x);
    mask.bits[i] = spec.contains(x) ? 1 : 0;
  }
  return mask;
}

inline IndicatorMask complement_mask(const IndicatorMask& mask) {
  IndicatorMask out = mask;
  for (auto& b : out.bits) b = b ? 0 : 1;
  return out;
}

/// Result of the thickness sweep: inf over grid-aligned window offsets of
/// |E ∩ (x+LQ)| / L^n, with the committed one-cell-per-face uncertainty.
struct ThicknessReport {
  double scale = 0.0;                ///< L
  double gamma_min = 0.0;            ///< min window density, clamped to [0,1]
  double gamma_max = 0.0;            ///< max window density (complement checks)
  double gamma_uncertainty = 0.0;    ///< n·(2h/L)
  int window_cells = 0;              ///< cells per axis in the sliding window
  std::vector<int> argmin_offset;    ///< layout offset of a minimizing window
  std::array<std::uint64_t, 10> histogram{};  ///< window-density histogram
};

namespace detail {

/// Periodic sliding-window sums along one axis of a row-major cube, in place.
/// Exact in integer arithmetic.
inline void sliding_sum_axis(std::vector<std::int64_t>& a, const TorusGrid& g, int axis, int w) {
  const int m = g.samples_per_dim();
  const std::size_t mm = static_cast<std::size_t>(m);
  std::size_t stride = 1;
  for (int d = g.dim() - 1; d > axis; --d) stride *= mm;
  const std::size_t block = stride * mm;  // one full line period along `axis`
  std::vector<std::int64_t> line(mm), out(mm);
  for (std::size_t base = 0; base < a.size(); base += block) {
    for (std::size_t off = 0; off < stride; ++off) {
      for (std::size_t j = 0; j < mm; ++j) line[j] = a[base + off + j * stride];
      std::int64_t acc = 0;
      for (int j = 0; j < w; ++j) acc += line[static_cast<std::size_t>(j)];
      for (std::size_t j = 0; j < mm; ++j) {
        out[j] = acc;
        acc -= line[j];
        acc += line[(j + static_cast<std::size_t>(w)) % mm];
      }
      for (std::size_t j = 0; j < mm; ++j) a[base + off + j * stride] = out[j];
    }
  }
}

}  // namespace detail

/// Thickness analyzer: sweeps the window x+LQ over every grid-aligned offset
/// with periodic wrap, O(M^n) per axis via running sums.
inline ThicknessReport thickness_profile(const IndicatorMask& mask, double scale) {
  const TorusGrid& g = mask.grid;
  if (scale < 2.0 * g.spacing()) fail(Errc::ScaleTooFine, "window must span >= 2 cells per axis");
  if (scale > g.side_length()) fail(Errc::ScaleTooCoarse, "window exceeds the torus");

  const int w = static_cast<int>(std::llround(scale / g.spacing()));
  std::vector<std::int64_t> counts(mask.bits.size());
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] = mask.bits[i];
  for (int d = 0; d < g.dim(); ++d) detail::sliding_sum_axis(counts, g, d, w);

  std::int64_t cmin = counts[0], cmax = counts[0];
  std::size_t argmin = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < cmin) {
      cmin = counts[i];
      argmin = i;
    }
    cmax = std::max(cmax, counts[i]);
  }

  ThicknessReport rep;
  rep.scale = scale;
  rep.window_cells = w;
  const double denom = std::pow(scale, g.dim());
  rep.gamma_min = std::clamp(static_cast<double>(cmin) * g.cell_volume() / denom, 0.0, 1.0);
  rep.gamma_max = std::clamp(static_cast<double>(cmax) * g.cell_volume() / denom, 0.0, 1.0);
  rep.gamma_uncertainty = g.dim() * 2.0 * g.spacing() / scale;
  rep.argmin_offset.resize(static_cast<std::size_t>(g.dim()));
  g.decode(argmin, rep.argmin_offset);

  const double window_cells_total = std::pow(static_cast<double>(w), g.dim());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    double density = static_cast<double>(counts[i]) / window_cells_total;
    int bin = std::min(9, static_cast<int>(density * 10.0));
    rep.histogram[static_cast<std::size_t>(bin)]++;
  }
  return rep;
}

inline bool is_thick(const IndicatorMask& mask, double gamma, double scale, double tol) {
  if (!(gamma > 0.0 && gamma <= 1.0)) fail(Errc::InvalidThickness, "gamma must be in (0, 1]");
  if (tol < 0.0) fail(Errc::PreconditionFailed, "tolerance must be >= 0");
  return thickness_profile(mask, scale).gamma_min >= gamma - tol;
}

}  // namespace heatlab
