#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "heatlab/common.hpp"

namespace heatlab {

/// Converged extremal Rayleigh-quotient value with residual diagnostics.
/// residual is ||A x - value·x|| / ||x|| (or the generalized analogue).
struct EigEstimate {
  double value = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  FlagSet flags;
};

/// Matrix-free self-adjoint operator on complex vectors.
using ApplyFn = std::function<void(const std::vector<cplx>&, std::vector<cplx>&)>;

namespace vec {

inline cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b, double w) {
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc * w;
}

inline double norm(const std::vector<cplx>& a, double w) {
  double acc = 0.0;
  for (const auto& z : a) acc += std::norm(z);
  return std::sqrt(acc * w);
}

inline void axpy(cplx alpha, const std::vector<cplx>& x, std::vector<cplx>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(std::vector<cplx>& x, double s) {
  for (auto& z : x) z *= s;
}

}  // namespace vec

namespace detail {

/// Eigenvalues of a symmetric tridiagonal matrix by QL with implicit shifts.
/// diag has n entries, off has n-1 (subdiagonal). Returns sorted ascending.
inline std::vector<double> tridiag_eigenvalues(std::vector<double> diag, std::vector<double> off) {
  const int n = static_cast<int>(diag.size());
  if (n == 0) return {};
  off.push_back(0.0);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
        if (std::abs(off[m]) <= 1e-15 * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) break;  // stagnation guard; values are already near-converged
        double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
        double r = std::hypot(g, 1.0);
        g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * off[i];
          const double b = c * off[i];
          r = std::hypot(f, g);
          off[i + 1] = r;
          if (r == 0.0) {
            diag[i + 1] -= p;
            off[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = diag[i + 1] - p;
          r = (diag[i] - g) * s + 2.0 * c * b;
          p = s * r;
          diag[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        diag[l] -= p;
        off[l] = g;
        off[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(diag.begin(), diag.end());
  return diag;
}

/// Eigenvector of a symmetric tridiagonal matrix for a known eigenvalue, by
/// inverse iteration with a pivoted tridiagonal solve.
inline std::vector<double> tridiag_eigenvector(const std::vector<double>& diag,
                                               const std::vector<double>& off, double lambda) {
  const int n = static_cast<int>(diag.size());
  std::vector<double> x(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
  double scale_guard = 0.0;
  for (int i = 0; i < n; ++i) scale_guard = std::max(scale_guard, std::abs(diag[i]));
  for (int i = 0; i + 1 < n; ++i) scale_guard = std::max(scale_guard, std::abs(off[i]));
  const double shift = lambda + 1e-13 * std::max(1.0, scale_guard);

  for (int pass = 0; pass < 3; ++pass) {
    // Pivoted elimination on the 3-band matrix (T - shift·I); fill-in adds one
    // extra superdiagonal.
    std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n)),
        c(static_cast<std::size_t>(n), 0.0), d2(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
      a[i] = diag[i] - shift;
      if (i + 1 < n) {
        b[i] = off[i];   // super
        c[i] = off[i];   // sub, eliminated in the sweep
      }
    }
    std::vector<double> rhs = x;
    for (int i = 0; i + 1 < n; ++i) {
      if (std::abs(c[i]) > std::abs(a[i])) {
        std::swap(a[i], c[i]);
        std::swap(b[i], a[i + 1]);
        std::swap(d2[i], b[i + 1]);
        std::swap(rhs[i], rhs[i + 1]);
      }
      if (a[i] == 0.0) a[i] = 1e-300;
      const double mfac = c[i] / a[i];
      a[i + 1] -= mfac * b[i];
      b[i + 1] -= mfac * d2[i];
      rhs[i + 1] -= mfac * rhs[i];
    }
    if (a[n - 1] == 0.0) a[n - 1] = 1e-300;
    x[n - 1] = rhs[n - 1] / a[n - 1];
    if (n >= 2) x[n - 2] = (rhs[n - 2] - b[n - 2] * x[n - 1]) / (a[n - 2] == 0.0 ? 1e-300 : a[n - 2]);
    for (int i = n - 3; i >= 0; --i)
      x[i] = (rhs[i] - b[i] * x[i + 1] - d2[i] * x[i + 2]) / (a[i] == 0.0 ? 1e-300 : a[i]);
    double nrm = 0.0;
    for (double v : x) nrm += v * v;
    nrm = std::sqrt(nrm);
    for (auto& v : x) v /= nrm;
  }
  return x;
}

}  // namespace detail

struct LanczosOptions {
  double tol = 1e-8;      ///< residual threshold ||Ax - λx||/||x||
  int max_steps = 400;    ///< Krylov dimension cap
  double ip_weight = 1.0; ///< uniform inner-product weight
};

/// Largest eigenvalue of a self-adjoint operator by Lanczos with full
/// reorthogonalization. Falls back to plain power iteration if the Krylov
/// sweep hits its cap without meeting the residual tolerance.
inline EigEstimate lanczos_largest(const ApplyFn& apply, std::size_t dim,
                                   const std::vector<cplx>& start, LanczosOptions opts = {}) {
  EigEstimate est;
  const double w = opts.ip_weight;
  const int cap = std::min<int>(opts.max_steps, static_cast<int>(dim));

  std::vector<std::vector<cplx>> basis;
  std::vector<double> alpha, beta;
  std::vector<cplx> v = start;
  {
    const double nv = vec::norm(v, w);
    if (nv == 0.0) fail(Errc::ZeroInput, "Lanczos start vector is zero");
    vec::scale(v, 1.0 / nv);
  }
  basis.push_back(v);

  std::vector<cplx> work(dim), ritz(dim), a_ritz(dim);
  bool exhausted = false;
  double lambda = 0.0;

  auto ritz_residual = [&](double lam, const std::vector<double>& s) {
    std::fill(ritz.begin(), ritz.end(), cplx{0.0, 0.0});
    for (std::size_t j = 0; j < s.size(); ++j) vec::axpy(cplx{s[j], 0.0}, basis[j], ritz);
    apply(ritz, a_ritz);
    est.iterations++;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      num += std::norm(a_ritz[i] - lam * ritz[i]);
      den += std::norm(ritz[i]);
    }
    return std::sqrt(num / den);
  };

  for (int k = 0; k < cap; ++k) {
    apply(basis.back(), work);
    est.iterations++;
    const double a = vec::dot(basis.back(), work, w).real();
    alpha.push_back(a);
    vec::axpy(cplx{-a, 0.0}, basis.back(), work);
    if (k > 0) vec::axpy(cplx{-beta.back(), 0.0}, basis[basis.size() - 2], work);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) vec::axpy(-vec::dot(q, work, w), q, work);

    const double b = vec::norm(work, w);
    auto evals = detail::tridiag_eigenvalues(alpha, beta);
    lambda = evals.back();

    if (b < 1e-14) {
      exhausted = true;  // invariant subspace: Ritz values exact
    }

    // Quick proxy first; confirm with the true Ritz residual.
    if (exhausted || k + 1 == cap ||
        std::abs(b) * 1.0 <= opts.tol * std::max(1.0, std::abs(lambda)) || (k >= 4 && k % 4 == 0)) {
      auto s = detail::tridiag_eigenvector(alpha, beta, lambda);
      const double res = ritz_residual(lambda, s);
      if (res <= opts.tol || exhausted) {
        est.value = lambda;
        est.residual = res;
        est.converged = res <= opts.tol || exhausted;
        if (!est.converged) est.flags.add(flag::kNotConverged);
        return est;
      }
    }
    if (exhausted) break;
    vec::scale(work, 1.0 / b);
    beta.push_back(b);
    basis.push_back(work);
  }

  // Fallback: plain power iteration from the best Ritz vector so far.
  std::vector<cplx> x = basis.back();
  if (!alpha.empty()) {
    auto evals = detail::tridiag_eigenvalues(alpha, beta);
    auto s = detail::tridiag_eigenvector(alpha, beta, evals.back());
    std::fill(x.begin(), x.end(), cplx{0.0, 0.0});
    for (std::size_t j = 0; j < s.size() && j < basis.size(); ++j)
      vec::axpy(cplx{s[j], 0.0}, basis[j], x);
  }
  double nx = vec::norm(x, w);
  if (nx == 0.0) x = basis.front(), nx = 1.0;
  vec::scale(x, 1.0 / nx);
  double res = 0.0;
  for (int it = 0; it < 4 * opts.max_steps; ++it) {
    apply(x, work);
    est.iterations++;
    lambda = vec::dot(x, work, w).real();
    double num = 0.0;
    for (std::size_t i = 0; i < dim; ++i) num += std::norm(work[i] - lambda * x[i]);
    res = std::sqrt(num) * std::sqrt(w);
    if (res <= opts.tol * std::max(1.0, std::abs(lambda))) {
      est.value = lambda;
      est.residual = res;
      est.converged = true;
      return est;
    }
    const double nw = vec::norm(work, w);
    if (nw == 0.0) break;
    x = work;
    vec::scale(x, 1.0 / nw);
  }
  est.value = lambda;
  est.residual = res;
  est.converged = false;
  est.flags.add(flag::kNotConverged);
  return est;
}

struct CgResult {
  int iterations = 0;
  bool converged = false;
  bool curvature_breakdown = false;  ///< probed curvature fell below the floor
};

/// Conjugate gradients for a self-adjoint positive operator, matrix-free.
/// Probes the Rayleigh curvature of every search direction; a probe below
/// curvature_floor aborts so the caller can regularize and retry.
inline CgResult cg_solve(const ApplyFn& apply_b, const std::vector<cplx>& rhs,
                         std::vector<cplx>& x, double tol_rel, int max_iter, double ip_weight,
                         double curvature_floor = 0.0) {
  CgResult out;
  const std::size_t n = rhs.size();
  x.assign(n, cplx{0.0, 0.0});
  std::vector<cplx> r = rhs, p = rhs, bp(n);
  double rs = vec::dot(r, r, ip_weight).real();
  const double rs0 = rs;
  if (rs0 == 0.0) {
    out.converged = true;
    return out;
  }
  for (int it = 0; it < max_iter; ++it) {
    apply_b(p, bp);
    out.iterations++;
    const double pbp = vec::dot(p, bp, ip_weight).real();
    const double pp = vec::dot(p, p, ip_weight).real();
    if (pp == 0.0) break;
    if (pbp / pp < curvature_floor) {
      out.curvature_breakdown = true;
      return out;
    }
    if (pbp <= 0.0) {
      out.curvature_breakdown = true;
      return out;
    }
    const double alpha = rs / pbp;
    vec::axpy(cplx{alpha, 0.0}, p, x);
    vec::axpy(cplx{-alpha, 0.0}, bp, r);
    const double rs_new = vec::dot(r, r, ip_weight).real();
    if (std::sqrt(rs_new) <= tol_rel * std::sqrt(rs0)) {
      out.converged = true;
      return out;
    }
    const double beta = rs_new / rs;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    rs = rs_new;
  }
  return out;
}

}  // namespace heatlab
