#pragma once

#include <cmath>
#include <limits>

#include "heatlab/common.hpp"

namespace heatlab {

/// A positive quantity carried by its natural log, so constants of the form
/// e^{thousands} keep their exact exponent when the double value overflows.
struct LogValue {
  double log = 0.0;

  bool overflows() const { return log > 709.0; }
  double value() const {
    return overflows() ? std::numeric_limits<double>::infinity() : std::exp(log);
  }
  FlagSet flags() const {
    FlagSet f;
    if (overflows()) f.add(flag::kOverflow);
    return f;
  }
};

/// C_spec = C(n)·(1+L)·(1+ln(1/γ)) for a γ-thick-at-scale-L set.
inline double c_spec_formula(int dim, double gamma, double scale, double generic_c) {
  (void)dim;  // the dimension enters only through the generic constant knob
  if (!(gamma > 0.0 && gamma <= 1.0)) fail(Errc::InvalidThickness, "gamma must be in (0,1]");
  if (!(scale > 0.0)) fail(Errc::PreconditionFailed, "scale L must be positive");
  if (!(generic_c > 0.0)) fail(Errc::PreconditionFailed, "generic constant must be positive");
  return generic_c * (1.0 + scale) * (1.0 + std::log(1.0 / gamma));
}

/// C_Hold = (1/(1-θ))(C_spec+1)² + ln 12.
inline double c_hold_formula(double c_spec, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) fail(Errc::InvalidTheta, "theta must be in (0,1)");
  if (c_spec < 0.0) fail(Errc::PreconditionFailed, "C_spec must be >= 0");
  return sq(c_spec + 1.0) / (1.0 - theta) + std::log(12.0);
}

/// All explicit constants of the thickness → spectral → interpolation →
/// observability chain for one parameter tuple, by the single-shot route and
/// by composing the stage formulas. Routes are reported as log-ratios, never
/// asserted equal (the single-shot form absorbs generic factors).
struct ConstantChain {
  int dim = 1;
  double gamma = 1.0;
  double scale = 1.0;     ///< L
  double theta = 0.5;
  double horizon = 1.0;   ///< T
  double generic_c = 1.0;

  double c_spec = 0.0;
  double c_hold_direct = 0.0; ///< single-shot: (C/(1-θ))(1+L)²(1+ln(1/γ))²
  LogValue c_obs_direct;      ///< single-shot: exp[300(1+C)(1+L)²(1+ln(1/γ))²(1+1/T)]
  double c_hold_chained = 0.0;   ///< c_spec_formula ∘ c_hold_formula
  LogValue c_obs_chained;        ///< ... ∘ predicted_cobs
  double log_ratio_hold = 0.0;   ///< ln(chained/single-shot)
  double log_ratio_obs = 0.0;    ///< log-exponent ratio chained/single-shot
  FlagSet flags;
};

inline ConstantChain evaluate_constant_chain(int dim, double gamma, double scale, double theta,
                                     double horizon, double generic_c) {
  if (!(horizon > 0.0)) fail(Errc::InvalidTime, "T must be positive");
  ConstantChain chain;
  chain.dim = dim;
  chain.gamma = gamma;
  chain.scale = scale;
  chain.theta = theta;
  chain.horizon = horizon;
  chain.generic_c = generic_c;

  chain.c_spec = c_spec_formula(dim, gamma, scale, generic_c);
  const double shape = sq(1.0 + scale) * sq(1.0 + std::log(1.0 / gamma));
  if (!(theta > 0.0 && theta < 1.0)) fail(Errc::InvalidTheta, "theta must be in (0,1)");
  chain.c_hold_direct = generic_c / (1.0 - theta) * shape;
  chain.c_obs_direct =
      LogValue{300.0 * (1.0 + generic_c) * shape * (1.0 + 1.0 / horizon)};

  chain.c_hold_chained = c_hold_formula(chain.c_spec, theta);
  chain.c_obs_chained =
      LogValue{36.0 * (1.0 + 3.0 * chain.c_hold_chained) * (1.0 + 1.0 / horizon)};

  chain.log_ratio_hold = std::log(chain.c_hold_chained / chain.c_hold_direct);
  chain.log_ratio_obs = chain.c_obs_chained.log / chain.c_obs_direct.log;
  chain.flags.merge(chain.c_obs_direct.flags());
  chain.flags.merge(chain.c_obs_chained.flags());
  return chain;
}

}  // namespace heatlab
