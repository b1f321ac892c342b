#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "chlab/grid.hpp"

namespace chlab {

/// Normalized real spectrum of a Field: coefficients for modes j = 0 .. N/2,
/// u(x) = sum_j c_j e^{i k_j x} + c.c. (mode 0 and Nyquist counted once).
struct Spectrum {
  GridSpec grid;
  std::vector<std::complex<double>> coeffs;  // size N/2 + 1
};

namespace detail {

// FFTW plans are cached per size; planner access is serialized.
class FftPlans {
 public:
  static FftPlans& instance() {
    static FftPlans p;
    return p;
  }

  void forward(const std::vector<double>& in, std::vector<std::complex<double>>& out) {
    std::scoped_lock lock(mu_);
    const std::size_t n = in.size();
    Entry& e = entry(n);
    std::copy(in.begin(), in.end(), e.real);
    fftw_execute(e.fwd);
    out.resize(n / 2 + 1);
    for (std::size_t j = 0; j <= n / 2; ++j)
      out[j] = std::complex<double>(e.cplx[j][0], e.cplx[j][1]) / static_cast<double>(n);
  }

  void backward(const std::vector<std::complex<double>>& in, std::vector<double>& out,
                std::size_t n) {
    std::scoped_lock lock(mu_);
    Entry& e = entry(n);
    for (std::size_t j = 0; j <= n / 2; ++j) {
      e.cplx[j][0] = in[j].real();
      e.cplx[j][1] = in[j].imag();
    }
    fftw_execute(e.bwd);
    out.assign(e.real, e.real + n);
  }

 private:
  struct Entry {
    double* real = nullptr;
    fftw_complex* cplx = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
  };

  Entry& entry(std::size_t n) {
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    Entry e;
    e.real = fftw_alloc_real(n);
    e.cplx = fftw_alloc_complex(n / 2 + 1);
    e.fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), e.real, e.cplx, FFTW_ESTIMATE);
    e.bwd = fftw_plan_dft_c2r_1d(static_cast<int>(n), e.cplx, e.real, FFTW_ESTIMATE);
    return plans_.emplace(n, e).first->second;
  }

  ~FftPlans() {
    for (auto& [n, e] : plans_) {
      fftw_destroy_plan(e.fwd);
      fftw_destroy_plan(e.bwd);
      fftw_free(e.real);
      fftw_free(e.cplx);
    }
  }

  std::mutex mu_;
  std::map<std::size_t, Entry> plans_;
};

}  // namespace detail

inline Spectrum to_spectrum(const Field& f) {
  Spectrum s;
  s.grid = f.grid;
  detail::FftPlans::instance().forward(f.values, s.coeffs);
  return s;
}

inline Field to_field(const Spectrum& s) {
  Field f(s.grid);
  detail::FftPlans::instance().backward(s.coeffs, f.values, s.grid.N);
  return f;
}

/// Applies a Fourier multiplier sym(k) to a real field. The imaginary part of
/// sym at the Nyquist mode is dropped so the output stays real.
template <class Sym>
Field apply_symbol(const Field& f, Sym&& sym) {
  Spectrum s = to_spectrum(f);
  const std::size_t nyq = s.grid.nyquist();
  for (std::size_t j = 0; j <= nyq; ++j) {
    std::complex<double> m = sym(s.grid.k(j));
    if (j == nyq) m = std::complex<double>(m.real(), 0.0);
    s.coeffs[j] *= m;
  }
  return to_field(s);
}

/// Zeroes all modes with index above cutoff (2/3-rule helper).
inline Field truncate_modes(const Field& f, std::size_t cutoff) {
  Spectrum s = to_spectrum(f);
  for (std::size_t j = cutoff + 1; j < s.coeffs.size(); ++j) s.coeffs[j] = 0.0;
  return to_field(s);
}

/// Evaluates the trigonometric interpolant of f at an arbitrary point x.
inline double trig_eval(const Spectrum& s, double x) {
  const std::size_t nyq = s.grid.nyquist();
  double acc = s.coeffs[0].real();
  for (std::size_t j = 1; j < nyq; ++j) {
    const double kx = s.grid.k(j) * x;
    acc += 2.0 * (s.coeffs[j].real() * std::cos(kx) - s.coeffs[j].imag() * std::sin(kx));
  }
  acc += s.coeffs[nyq].real() * std::cos(s.grid.k(nyq) * x);
  return acc;
}

/// Zero-padded upsampling to a grid with factor*N points on the same domain.
inline Field upsample(const Field& f, std::size_t factor) {
  Spectrum s = to_spectrum(f);
  GridSpec fine = make_grid(f.grid.L, f.grid.N * factor);
  Spectrum sf;
  sf.grid = fine;
  sf.coeffs.assign(fine.N / 2 + 1, 0.0);
  for (std::size_t j = 0; j < s.coeffs.size(); ++j) sf.coeffs[j] = s.coeffs[j];
  // The old Nyquist coefficient is split between +/-N/2; it is real for real
  // input, so copying it once and halving keeps the interpolant consistent.
  sf.coeffs[f.grid.nyquist()] *= 0.5;
  return to_field(sf);
}

}  // namespace chlab
