#include <doctest.h>

#include <cmath>

#include "heatlab/constants.hpp"
#include "heatlab/observability.hpp"

using namespace heatlab;

namespace {

// Independently coded duplicate evaluators (kept deliberately naive).
double ref_c_spec(double gamma, double scale, double c) {
  return c * (1 + scale) * (1 + std::log(1 / gamma));
}
double ref_c_hold(double c_spec, double theta) {
  return (c_spec + 1) * (c_spec + 1) / (1 - theta) + std::log(12.0);
}
double ref_log_cobs_chain(double c_hold, double horizon) {
  return 36 * (1 + 3 * c_hold) * (1 + 1 / horizon);
}
double ref_log_cobs_direct(double gamma, double scale, double horizon, double c) {
  const double shape = (1 + scale) * (1 + scale) * (1 + std::log(1 / gamma)) *
                       (1 + std::log(1 / gamma));
  return 300 * (1 + c) * shape * (1 + 1 / horizon);
}

}  // namespace

TEST_CASE("spectral constant formula") {
  CHECK(c_spec_formula(1, 1.0, 2.0, 1.5) == doctest::Approx(4.5).epsilon(1e-15));
  CHECK(c_spec_formula(1, std::exp(-1.0), 1.0, 1.0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK_THROWS_AS(c_spec_formula(1, 2.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(c_spec_formula(1, 0.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(c_spec_formula(1, 0.5, -1.0, 1.0), Error);
}

TEST_CASE("interpolation constant formula") {
  CHECK(c_hold_formula(1.0, 0.5) == doctest::Approx(8.0 + std::log(12.0)).epsilon(1e-15));
  CHECK(c_hold_formula(1.0, 0.5) == doctest::Approx(10.48490665).epsilon(1e-9));
  CHECK(c_hold_formula(0.0, 0.25) ==
        doctest::Approx(1.0 / 0.75 + std::log(12.0)).epsilon(1e-15));
  CHECK_THROWS_AS(c_hold_formula(1.0, 1.0), Error);
  CHECK_THROWS_AS(c_hold_formula(1.0, 0.0), Error);
  CHECK_THROWS_AS(c_hold_formula(-1.0, 0.5), Error);
}

TEST_CASE("constant chain values and overflow handling") {
  const ConstantChain chain = evaluate_constant_chain(1, 1.0, 1.0, 0.5, 1.0, 1.0);
  CHECK(chain.c_obs_direct.log == doctest::Approx(4800.0).epsilon(1e-15));
  CHECK(chain.c_obs_direct.overflows());
  CHECK(std::isinf(chain.c_obs_direct.value()));
  CHECK(chain.flags.contains(flag::kOverflow));
  CHECK(chain.c_hold_direct == doctest::Approx(8.0).epsilon(1e-15));

  // L → 0+ limit of the single-shot interpolation constant
  const ConstantChain tiny = evaluate_constant_chain(1, 1.0, 1e-12, 0.5, 1.0, 1.0);
  CHECK(tiny.c_hold_direct == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("log-space evaluation matches the duplicate evaluator on random tuples") {
  Rng rng(314);
  for (int trial = 0; trial < 1000; ++trial) {
    const double gamma = 0.05 + 0.95 * rng.uniform();
    const double scale = 0.1 + 5.0 * rng.uniform();
    const double theta = 0.05 + 0.9 * rng.uniform();
    const double horizon = 0.1 + 4.0 * rng.uniform();
    const double c = 0.5 + 2.0 * rng.uniform();

    const ConstantChain chain = evaluate_constant_chain(1, gamma, scale, theta, horizon, c);
    const double c_spec = ref_c_spec(gamma, scale, c);
    CHECK(chain.c_spec == doctest::Approx(c_spec).epsilon(1e-12));
    CHECK(chain.c_hold_chained == doctest::Approx(ref_c_hold(c_spec, theta)).epsilon(1e-12));
    CHECK(chain.c_obs_chained.log ==
          doctest::Approx(ref_log_cobs_chain(ref_c_hold(c_spec, theta), horizon)).epsilon(1e-12));
    CHECK(chain.c_obs_direct.log ==
          doctest::Approx(ref_log_cobs_direct(gamma, scale, horizon, c)).epsilon(1e-12));
    CHECK(predicted_cobs(ref_c_hold(c_spec, theta), horizon).log ==
          doctest::Approx(chain.c_obs_chained.log).epsilon(1e-14));

    // log-space and direct evaluation agree whenever both are finite
    if (!chain.c_obs_direct.overflows()) {
      CHECK(chain.c_obs_direct.value() ==
            doctest::Approx(std::exp(chain.c_obs_direct.log)).epsilon(1e-12));
    }
  }
}

TEST_CASE("monotonicity of the chain in gamma and L") {
  Rng rng(2718);
  for (int trial = 0; trial < 1000; ++trial) {
    const double gamma = 0.05 + 0.9 * rng.uniform();
    const double scale = 0.1 + 5.0 * rng.uniform();
    const double theta = 0.3;
    const double horizon = 1.0;
    const ConstantChain base = evaluate_constant_chain(1, gamma, scale, theta, horizon, 1.0);
    const ConstantChain thicker = evaluate_constant_chain(1, std::min(1.0, gamma * 1.1), scale, theta,
                                                  horizon, 1.0);
    const ConstantChain coarser = evaluate_constant_chain(1, gamma, scale * 1.1, theta, horizon, 1.0);
    CHECK(thicker.c_spec <= base.c_spec * (1 + 1e-14));
    CHECK(thicker.c_obs_direct.log <= base.c_obs_direct.log * (1 + 1e-14));
    CHECK(coarser.c_spec >= base.c_spec * (1 - 1e-14));
    CHECK(coarser.c_obs_direct.log >= base.c_obs_direct.log * (1 - 1e-14));
  }
}
