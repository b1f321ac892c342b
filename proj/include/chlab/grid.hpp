#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace chlab {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Uniform periodic grid on [-L, L) with N samples, h = 2L/N.
/// Wavenumbers are k_j = pi*j/L, j = -N/2 .. N/2-1.
struct GridSpec {
  double L = 0.0;
  std::size_t N = 0;
  double h = 0.0;

  double x(std::size_t i) const { return -L + static_cast<double>(i) * h; }
  /// Wavenumber of real-spectrum mode j, j = 0 .. N/2.
  double k(std::size_t j) const { return M_PI * static_cast<double>(j) / L; }
  std::size_t nyquist() const { return N / 2; }

  bool operator==(const GridSpec& o) const { return L == o.L && N == o.N; }
};

inline GridSpec make_grid(double L, std::size_t N) {
  if (!(L > 0.0)) throw ConfigError("make_grid: L must be positive");
  if (N < 8 || N % 2 != 0) throw ConfigError("make_grid: N must be even and >= 8");
  return GridSpec{L, N, 2.0 * L / static_cast<double>(N)};
}

/// Real-valued samples on a GridSpec.
struct Field {
  GridSpec grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(const GridSpec& g) : grid(g), values(g.N, 0.0) {}
  Field(const GridSpec& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != g.N) throw ConfigError("Field: values length != grid.N");
  }

  template <class F>
  static Field sample(const GridSpec& g, F&& f) {
    Field out(g);
    for (std::size_t i = 0; i < g.N; ++i) out.values[i] = f(g.x(i));
    return out;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }

  bool finite() const {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

inline Field operator+(const Field& a, const Field& b) {
  Field out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += b.values[i];
  return out;
}

inline Field operator-(const Field& a, const Field& b) {
  Field out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= b.values[i];
  return out;
}

inline Field operator*(double s, const Field& a) {
  Field out = a;
  for (double& v : out.values) v *= s;
  return out;
}

/// Pointwise product.
inline Field operator*(const Field& a, const Field& b) {
  Field out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= b.values[i];
  return out;
}

/// Periodic quadrature (rectangle rule; spectrally accurate for smooth data).
inline double integrate(const Field& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  return s * f.grid.h;
}

}  // namespace chlab
