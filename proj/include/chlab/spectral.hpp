#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "chlab/peakon.hpp"

namespace chlab {

struct SpectralMapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Eigenvalues and initial weights parameterizing the determinant solution of
/// the peakon system. lambda_0 = 0 with fixed weight 1/2 is implicit.
struct SpectralData {
  std::vector<double> lambdas;  // nonzero, pairwise distinct, one sign
  std::vector<double> a0s;      // positive initial weights

  std::size_t size() const { return lambdas.size(); }

  void validate() const {
    if (lambdas.empty() || lambdas.size() != a0s.size())
      throw ConfigError("SpectralData: lambdas/a0s must be nonempty and equal length");
    const double s = sgn(lambdas[0]);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      if (lambdas[i] == 0.0 || sgn(lambdas[i]) != s)
        throw ConfigError("SpectralData: eigenvalues must be nonzero and of one sign");
      if (!(a0s[i] > 0.0)) throw ConfigError("SpectralData: weights must be positive");
      for (std::size_t j = i + 1; j < lambdas.size(); ++j)
        if (lambdas[i] == lambdas[j]) throw ConfigError("SpectralData: eigenvalues must be distinct");
    }
  }
};

// The Hankel-determinant pipeline runs in extended precision: Hankel matrices
// of moments are badly conditioned already at desk scale.
using XReal = long double;

/// a_j(tau) = a_j(0) e^{-2 tau / lambda_j}.
inline std::vector<double> evolve_weights(const SpectralData& d, double tau) {
  d.validate();
  std::vector<double> a(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) a[j] = d.a0s[j] * std::exp(-2.0 * tau / d.lambdas[j]);
  return a;
}

/// A_k = sum_{j=0}^N (-lambda_j)^k a_j(tau); the j=0 term contributes 1/2 at
/// k=0 only (lambda_0 = 0, 0^0 = 1).
inline std::vector<XReal> moments(const SpectralData& d, double tau, std::size_t k_max) {
  const std::vector<double> a = evolve_weights(d, tau);
  std::vector<XReal> A(k_max + 1, 0.0L);
  A[0] = 0.5L;
  for (std::size_t j = 0; j < d.size(); ++j) {
    XReal pow = 1.0L;
    const XReal nl = -static_cast<XReal>(d.lambdas[j]);
    for (std::size_t k = 0; k <= k_max; ++k) {
      A[k] += pow * static_cast<XReal>(a[j]);
      pow *= nl;
    }
  }
  return A;
}

/// k x k Hankel determinant det(A_{i+j+l})_{i,j=0..k-1}, with the empty
/// determinant equal to 1. The 0-based index convention is the one confirmed
/// by the ODE oracle (the 1-based alternative fails already for N=1; see the
/// spectral tests). LU with partial pivoting in extended precision.
inline XReal hankel_delta(const std::vector<XReal>& A, std::size_t k, std::size_t l) {
  if (k == 0) return 1.0L;
  if (2 * (k - 1) + l >= A.size())
    throw ConfigError("hankel_delta: not enough moments supplied");
  std::vector<std::vector<XReal>> M(k, std::vector<XReal>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) M[i][j] = A[i + j + l];
  XReal det = 1.0L;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
    if (M[piv][col] == 0.0L) return 0.0L;
    if (piv != col) {
      std::swap(M[piv], M[col]);
      det = -det;
    }
    det *= M[col][col];
    for (std::size_t r = col + 1; r < k; ++r) {
      const XReal f = M[r][col] / M[col][col];
      for (std::size_t c = col; c < k; ++c) M[r][c] -= f * M[col][c];
    }
  }
  return det;
}

/// Inverse-spectral solution of the peakon system at time t, rescaled to
/// (q, p) coordinates: q_j = 2 x_j, p_j = m_j / 2, with tau = t/2.
inline PeakonState peakon_state_from_spectral(const SpectralData& d, double t) {
  d.validate();
  const std::size_t N = d.size();
  const std::vector<XReal> A = moments(d, t / 2.0, 2 * N);
  PeakonState s;
  s.t = t;
  s.q.resize(N);
  s.p.resize(N);
  for (std::size_t j = 1; j <= N; ++j) {
    const XReal d_top = hankel_delta(A, N - j, 2);
    const XReal d_bot = hankel_delta(A, N - j + 1, 0);
    const XReal d_g1 = hankel_delta(A, N - j + 1, 1);
    const XReal d_g0 = hankel_delta(A, N - j, 1);
    if (d_bot == 0.0L || d_g1 == 0.0L || d_g0 == 0.0L)
      throw SpectralMapError("peakon_state_from_spectral: vanishing determinant");
    const XReal y = 1.0L - d_top / d_bot;
    if (!(y > -1.0L && y < 1.0L))
      throw SpectralMapError("peakon_state_from_spectral: y outside (-1, 1)");
    const XReal g = d_bot * d_bot / (d_g1 * d_g0);
    const XReal x = 0.5L * std::log((1.0L + y) / (1.0L - y));
    const XReal m = g * (1.0L - y * y);
    s.q[j - 1] = static_cast<double>(2.0L * x);
    s.p[j - 1] = static_cast<double>(m / 2.0L);
  }
  return s;
}

}  // namespace chlab
