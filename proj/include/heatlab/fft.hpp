#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <tuple>

#include "heatlab/common.hpp"

namespace heatlab {
namespace detail {

/// Cached FFTW plans for in-place c2c transforms on rank-d cubes with M
/// samples per axis. Plans are created with FFTW_ESTIMATE | FFTW_UNALIGNED so
/// they are deterministic per build and reusable on any buffer via
/// fftw_execute_dft. Plan creation is serialized (FFTW requirement); execution
/// is thread-safe.
class FftPlans {
 public:
  static FftPlans& instance() {
    static FftPlans plans;
    return plans;
  }

  void execute(cplx* data, int rank, int m, bool inverse) {
    fftw_plan plan = acquire(rank, m, inverse);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
  }

 private:
  FftPlans() = default;
  ~FftPlans() {
    for (auto& [key, plan] : cache_) fftw_destroy_plan(plan);
  }
  FftPlans(const FftPlans&) = delete;

  fftw_plan acquire(int rank, int m, bool inverse) {
    const auto key = std::make_tuple(rank, m, inverse);
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<int> dims(static_cast<std::size_t>(rank), m);
    std::vector<cplx> scratch;
    scratch.resize(point_count(rank, m));
    fftw_plan plan = fftw_plan_dft(
        rank, dims.data(), reinterpret_cast<fftw_complex*>(scratch.data()),
        reinterpret_cast<fftw_complex*>(scratch.data()),
        inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache_.emplace(key, plan);
    return plan;
  }

  static std::size_t point_count(int rank, int m) {
    std::size_t n = 1;
    for (int d = 0; d < rank; ++d) n *= static_cast<std::size_t>(m);
    return n;
  }

  std::mutex mutex_;
  std::map<std::tuple<int, int, bool>, fftw_plan> cache_;
};

}  // namespace detail

/// Unnormalized DFT over a rank-d cube, in place, row-major.
/// forward: out_k = sum_j in_j exp(-2πi j·k / M); inverse uses +2πi and no 1/M.
inline void dft_cube(cplx* data, int rank, int samples_per_dim, bool inverse) {
  detail::FftPlans::instance().execute(data, rank, samples_per_dim, inverse);
}

}  // namespace heatlab
