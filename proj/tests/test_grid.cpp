#include <doctest.h>

#include <cmath>

#include "heatlab/grid.hpp"
#include "heatlab/spectral.hpp"

using namespace heatlab;

namespace {

GridFunction random_function(const TorusGrid& g, std::uint64_t seed) {
  Rng rng(seed);
  GridFunction f = zeros(g);
  for (auto& v : f.values) v = rng.normal_complex();
  return f;
}

double max_rel_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return den > 0.0 ? num / den : num;
}

}  // namespace

TEST_CASE("grid construction and invariants") {
  const TorusGrid g = make_grid(1, 40.0, 2048);
  CHECK(g.spacing() == 0.01953125);  // 40/2048 is exact in binary
  CHECK(g.spacing() * g.samples_per_dim() == 40.0);
  CHECK(g.max_frequency() == doctest::Approx(kPi * 2048 / 40.0).epsilon(1e-15));
  CHECK(g.max_frequency() > 160.0);

  CHECK_THROWS_AS(make_grid(1, 40.0, 2047), Error);
  CHECK_THROWS_AS(make_grid(1, 40.0, 2), Error);
  CHECK_THROWS_AS(make_grid(1, -1.0, 64), Error);
  CHECK_THROWS_AS(make_grid(0, 40.0, 64), Error);

  CHECK(g.freq_index(0) == 0);
  CHECK(g.freq_index(1024) == -1024);
  CHECK(g.freq_index(2047) == -1);
}

TEST_CASE("pure lattice mode transforms to a single spectral index") {
  const TorusGrid g = make_grid(1, 20.0, 256);
  const double xi0 = g.frequency(5);
  GridFunction f = sample(g, [&](std::span<const double> x) {
    return cplx{std::cos(xi0 * x[0]), std::sin(xi0 * x[0])};
  });
  const SpectrumFunction s = forward_transform(f);
  const double expected = g.side_length() / std::sqrt(kTwoPi);
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    if (g.freq_index(static_cast<int>(i)) == 5) {
      CHECK(std::abs(s.coeffs[i] - cplx{expected, 0.0}) < 1e-10 * expected);
    } else {
      CHECK(std::abs(s.coeffs[i]) < 1e-11 * expected);
    }
  }
}

TEST_CASE("Gaussian transform matches the continuum closed form") {
  const TorusGrid g = make_grid(1, 40.0, 2048);
  GridFunction f = sample(g, [](std::span<const double> x) { return std::exp(-0.5 * x[0] * x[0]); });
  const SpectrumFunction s = forward_transform(f);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    const double xi = g.frequency(g.freq_index(static_cast<int>(i)));
    worst = std::max(worst, std::abs(s.coeffs[i] - cplx{std::exp(-0.5 * xi * xi), 0.0}));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("round trip and Parseval at 1e-12") {
  // includes a non-power-of-two size: even M is the only requirement
  for (const TorusGrid& g :
       {make_grid(1, 40.0, 128), make_grid(2, 10.0, 16), make_grid(1, 15.0, 90)}) {
    for (int trial = 0; trial < 50; ++trial) {
      const GridFunction f = random_function(g, 1000 + static_cast<std::uint64_t>(trial));
      const SpectrumFunction s = forward_transform(f);
      const GridFunction back = inverse_transform(s);
      CHECK(max_rel_diff(back.values, f.values) < 1e-12);
      const double phys = energy(f);
      const double spec = spectral_energy(s);
      CHECK(std::abs(phys - spec) / phys < 1e-12);
    }
  }
}

TEST_CASE("non-finite input is rejected") {
  const TorusGrid g = make_grid(1, 10.0, 16);
  GridFunction f = zeros(g);
  f.values[3] = cplx{std::numeric_limits<double>::quiet_NaN(), 0.0};
  CHECK_THROWS_AS(forward_transform(f), Error);
}

TEST_CASE("integrate: Gaussian mass, zero function, mask identity") {
  const TorusGrid g = make_grid(1, 40.0, 2048);
  GridFunction f = sample(g, [](std::span<const double> x) { return std::exp(-x[0] * x[0]); });
  const double sqrt_pi = 1.7724538509055160273;
  CHECK(std::abs(integrate(f, Integrand::Values) - sqrt_pi) < 1e-10);

  CHECK(integrate(zeros(g), Integrand::Values) == 0.0);
  CHECK(integrate(zeros(g), Integrand::SquaredModulus) == 0.0);

  IndicatorMask full{g, std::vector<std::uint8_t>(g.point_count(), 1)};
  CHECK(integrate(f, Integrand::Values, &full) == integrate(f, Integrand::Values));

  const TorusGrid other = make_grid(1, 40.0, 1024);
  IndicatorMask wrong{other, std::vector<std::uint8_t>(other.point_count(), 1)};
  CHECK_THROWS_AS(integrate(f, Integrand::Values, &wrong), Error);
}

TEST_CASE("spectral derivative: identity, eigenfunction, band-limited bound") {
  const TorusGrid g = make_grid(1, 20.0, 256);

  SUBCASE("beta = 0 is the identity") {
    const GridFunction f = random_function(g, 7);
    const GridFunction df = spectral_derivative(f, std::vector<int>{0});
    CHECK(df.values == f.values);
  }

  SUBCASE("pure mode is an eigenfunction") {
    const double xi0 = g.frequency(9);
    GridFunction f = sample(g, [&](std::span<const double> x) {
      return cplx{std::cos(xi0 * x[0]), std::sin(xi0 * x[0])};
    });
    const GridFunction df = spectral_derivative(f, std::vector<int>{1});
    double worst = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
      worst = std::max(worst, std::abs(df.values[i] - cplx{0.0, xi0} * f.values[i]));
    CHECK(worst < 1e-10 * xi0);
  }

  SUBCASE("derivative energy bounded by N^{2|beta|} for band-limited f") {
    const double band = 5.0;
    for (int trial = 0; trial < 10; ++trial) {
      const GridFunction f =
          random_bandlimited(g, BandLimitSpec{band}, 42 + static_cast<std::uint64_t>(trial));
      for (int order = 1; order <= 3; ++order) {
        const GridFunction df = spectral_derivative(f, std::vector<int>{order});
        CHECK(energy(df) <= std::pow(band, 2 * order) * energy(f) * (1.0 + 1e-12));
      }
    }
  }

  SUBCASE("order cap") {
    const GridFunction f = random_function(g, 9);
    CHECK_THROWS_AS(spectral_derivative(f, std::vector<int>{7}), Error);
  }

  SUBCASE("mixed derivative of a plane wave in two dimensions") {
    const TorusGrid g2 = make_grid(2, 10.0, 32);
    const double xi1 = g2.frequency(3), xi2 = g2.frequency(-5);
    GridFunction f = sample(g2, [&](std::span<const double> x) {
      const double phase = xi1 * x[0] + xi2 * x[1];
      return cplx{std::cos(phase), std::sin(phase)};
    });
    const GridFunction df = spectral_derivative(f, std::vector<int>{1, 1});
    const cplx factor = cplx{0.0, xi1} * cplx{0.0, xi2};
    double worst = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
      worst = std::max(worst, std::abs(df.values[i] - factor * f.values[i]));
    CHECK(worst < 1e-10 * std::abs(factor));
  }
}

TEST_CASE("derivative commutes with band-limit projection on the lattice") {
  const TorusGrid g = make_grid(1, 20.0, 256);
  const GridFunction f = random_function(g, 11);
  const BandLimitSpec band{6.0};
  const GridFunction a =
      spectral_derivative(bandlimit_project(f, band), std::vector<int>{2});
  const GridFunction b =
      bandlimit_project(spectral_derivative(f, std::vector<int>{2}), band);
  // both orders multiply the same lattice symbols; only transform round-off
  // can differ
  CHECK(max_rel_diff(a.values, b.values) < 1e-13);
}

TEST_CASE("boundary tail monitor") {
  const TorusGrid g = make_grid(1, 40.0, 512);
  const GridFunction centered =
      sample(g, [](std::span<const double> x) { return std::exp(-0.5 * x[0] * x[0]); });
  CHECK(boundary_tail_fraction(centered) < 1e-12);
  CHECK(periodization_ok(centered));

  const GridFunction shifted = sample(g, [&](std::span<const double> x) {
    return std::exp(-0.5 * sq(x[0] - 19.5));
  });
  CHECK(boundary_tail_fraction(shifted) > 0.1);
  CHECK_FALSE(periodization_ok(shifted));
}
