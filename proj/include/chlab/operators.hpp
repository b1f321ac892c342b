#pragma once

#include <complex>

#include "chlab/fft.hpp"
#include "chlab/grid.hpp"

namespace chlab {

enum class OperatorKind { A, B, C };

inline constexpr std::size_t kMaxDiffOrder = 8;

/// Spectral derivative d^order/dx^order. The Nyquist mode is zeroed for odd
/// orders so derivatives of real fields stay real.
inline Field diff(const Field& f, std::size_t order) {
  if (order > kMaxDiffOrder) throw ConfigError("diff: order exceeds supported maximum");
  if (order == 0) return f;
  return apply_symbol(f, [order](double k) {
    return std::pow(std::complex<double>(0.0, k), static_cast<double>(order));
  });
}

// Fourier symbols of the constant-coefficient operators
//   A_2n = (-1)^{n+1} d^{2n} + 2 sum_{k=1}^{n-1} (-1)^{n+1-k} d^{2(n-k)} - 1
//   B_2n = sum_{k=0}^{n-1} (-1)^{n-k} d^{2(n-k)-1}
//   C_2n = sum_{k=0}^{n-1} (-1)^{n-k} d^{2(n-k-1)}
// in closed form. The closed forms are validated against term-by-term
// substitution d^{2j} -> (-1)^j k^{2j} in the test suite before anything
// else relies on them.

inline double geom_sum_k2(double k, std::size_t n) {
  // sum_{j=0}^{n-1} k^{2j}
  double s = 0.0, p = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    s += p;
    p *= k * k;
  }
  return s;
}

inline double symbol_A(double k, std::size_t n) { return -(1.0 + k * k) * geom_sum_k2(k, n); }

inline double symbol_C(double k, std::size_t n) { return -geom_sum_k2(k, n); }

inline std::complex<double> symbol_B(double k, std::size_t n) {
  return std::complex<double>(0.0, k) * symbol_C(k, n);
}

/// Symbol of -A_2n; equals (1+k^2) sum_{j<n} k^{2j} >= 1, so the operator
/// inverse is well defined.
inline double symbol_neg_A(double k, std::size_t n) { return (1.0 + k * k) * geom_sum_k2(k, n); }

inline Field apply_operator(const Field& f, OperatorKind kind, std::size_t n) {
  if (n < 1) throw ConfigError("apply_operator: n must be >= 1");
  switch (kind) {
    case OperatorKind::A:
      return apply_symbol(f, [n](double k) { return std::complex<double>(symbol_A(k, n), 0.0); });
    case OperatorKind::B:
      return apply_symbol(f, [n](double k) { return symbol_B(k, n); });
    case OperatorKind::C:
      return apply_symbol(f, [n](double k) { return std::complex<double>(symbol_C(k, n), 0.0); });
  }
  throw ConfigError("apply_operator: bad kind");
}

/// (-A_2n)^{-1} f, the spectral analogue of convolution with the Green's
/// kernel (for n=2: G = (1/4)(1+|x|)e^{-|x|}).
inline Field invert_neg_A2n(const Field& f, std::size_t n) {
  if (n < 1) throw ConfigError("invert_neg_A2n: n must be >= 1");
  return apply_symbol(
      f, [n](double k) { return std::complex<double>(1.0 / symbol_neg_A(k, n), 0.0); });
}

/// Green's kernel of (1-d^2)^{-2} on the line.
inline double greens_kernel(double x) {
  const double a = std::abs(x);
  return 0.25 * (1.0 + a) * std::exp(-a);
}

/// Green's kernel of (1-d^2)^{-1} on the line (Helmholtz kernel).
inline double helmholtz_kernel(double x) { return 0.5 * std::exp(-std::abs(x)); }

/// Exponential spectral filter, off by default everywhere. Available because
/// order-8 derivatives amplify rounding noise by k^8 at the grid scale.
inline Field exponential_filter(const Field& f, double alpha = 36.0, std::size_t order = 16) {
  const double knyq = f.grid.k(f.grid.nyquist());
  return apply_symbol(f, [=](double k) {
    return std::complex<double>(std::exp(-alpha * std::pow(std::abs(k) / knyq, static_cast<double>(order))), 0.0);
  });
}

}  // namespace chlab
