#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace heatlab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Error kinds raised on invalid inputs. Numerical outcomes of a valid run
/// (non-convergence, overflow, periodization risk) travel as flags instead,
/// so experiment rows can still be emitted.
enum class Errc {
  InvalidGrid,
  NonFiniteInput,
  GridMismatch,
  OrderTooHigh,
  ScaleTooFine,
  ScaleTooCoarse,
  InvalidTime,
  BandLimitTooLarge,
  EmptyObservationSet,
  ZeroInput,
  CubesDontTile,
  InvalidLambda,
  InvalidThickness,
  InvalidTheta,
  InvalidRadii,
  BoundNotApplicable,
  PreconditionFailed,
  TooFewNodes,
  ObservationVanishes,
  OutOfDomain,
  ConfigError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::InvalidGrid: return "InvalidGrid";
    case Errc::NonFiniteInput: return "NonFiniteInput";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::OrderTooHigh: return "OrderTooHigh";
    case Errc::ScaleTooFine: return "ScaleTooFine";
    case Errc::ScaleTooCoarse: return "ScaleTooCoarse";
    case Errc::InvalidTime: return "InvalidTime";
    case Errc::BandLimitTooLarge: return "BandLimitTooLarge";
    case Errc::EmptyObservationSet: return "EmptyObservationSet";
    case Errc::ZeroInput: return "ZeroInput";
    case Errc::CubesDontTile: return "CubesDontTile";
    case Errc::InvalidLambda: return "InvalidLambda";
    case Errc::InvalidThickness: return "InvalidThickness";
    case Errc::InvalidTheta: return "InvalidTheta";
    case Errc::InvalidRadii: return "InvalidRadii";
    case Errc::BoundNotApplicable: return "BoundNotApplicable";
    case Errc::PreconditionFailed: return "PreconditionFailed";
    case Errc::TooFewNodes: return "TooFewNodes";
    case Errc::ObservationVanishes: return "ObservationVanishes";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

namespace flag {
inline constexpr const char* kOk = "OK";
inline constexpr const char* kRegularized = "REGULARIZED";
inline constexpr const char* kPeriodizationRisk = "PERIODIZATION_RISK";
inline constexpr const char* kOverflow = "OVERFLOW";
inline constexpr const char* kNotConverged = "NotConverged";
inline constexpr const char* kConstantEffectivelyInfinite = "ConstantEffectivelyInfinite";
inline constexpr const char* kInterpretedXAsB = "INTERPRETED_X_AS_B";
inline constexpr const char* kVacuousInput = "VacuousInput";
}  // namespace flag

/// Small ordered set of diagnostic flags. A clean result renders as "OK".
class FlagSet {
 public:
  void add(const std::string& f) {
    if (!contains(f)) flags_.push_back(f);
  }
  void merge(const FlagSet& other) {
    for (const auto& f : other.flags_) add(f);
  }
  bool contains(const std::string& f) const {
    for (const auto& g : flags_) {
      if (g == f) return true;
    }
    return false;
  }
  bool clean() const { return flags_.empty(); }
  const std::vector<std::string>& items() const { return flags_; }
  std::string render() const {
    if (flags_.empty()) return flag::kOk;
    std::string out;
    for (std::size_t i = 0; i < flags_.size(); ++i) {
      if (i) out += ';';
      out += flags_[i];
    }
    return out;
  }

 private:
  std::vector<std::string> flags_;
};

/// Deterministic RNG: splitmix64 stream + Box-Muller normals. The standard
/// library distributions are implementation-defined, so reports stay
/// byte-reproducible only with a hand-rolled generator.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = kTwoPi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  cplx normal_complex() { return {normal(), normal()}; }

  /// Per-tuple seed derivation so parallel and serial sweeps agree.
  static std::uint64_t derive(std::uint64_t master, std::uint64_t stream) {
    Rng r(master ^ (0x6a09e667f3bcc909ull + stream * 0x9e3779b97f4a7c15ull));
    return r.next_u64();
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Full-precision scientific rendering (17 significant digits) for
/// byte-stable CSV reports.
inline std::string sci17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

inline bool all_finite(const std::vector<cplx>& v) {
  for (const auto& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

inline double sq(double x) { return x * x; }

}  // namespace heatlab
