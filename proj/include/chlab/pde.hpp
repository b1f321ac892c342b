#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "chlab/fft.hpp"
#include "chlab/grid.hpp"
#include "chlab/ode.hpp"
#include "chlab/operators.hpp"

namespace chlab {

struct SimConfig {
  std::size_t n = 2;  // equation order parameter; n=2 is the fifth-order equation
  GridSpec grid;
  double t_end = 1.0;
  double rtol = 1e-8;
  double atol = 1e-10;
  double monitor_dt = 0.05;
  bool dealias = true;
  double blowup_threshold = 1e6;       // halt when sup|u_xxx| exceeds this
  double m_norm_growth_cap = 1e8;      // halt when ||m||^2 grows by this factor

  void validate() const {
    if (!(t_end > 0.0)) throw ConfigError("SimConfig: t_end must be positive");
    if (!(rtol > 0.0) || !(atol > 0.0)) throw ConfigError("SimConfig: tolerances must be positive");
    if (!(monitor_dt > 0.0)) throw ConfigError("SimConfig: monitor_dt must be positive");
    if (grid.N == 0) throw ConfigError("SimConfig: grid not set");
  }
};

struct ConservedReport {
  double t = 0.0;
  double E0_squared = 0.0;
  double sup_uxxx = 0.0;
  double m_L2_squared = 0.0;
  double min_m = 0.0;
  double max_m = 0.0;
  bool blowup_suspected = false;
};

enum class Termination { reached_t_end, blowup_detected, step_failure };

inline std::string to_string(Termination t) {
  switch (t) {
    case Termination::reached_t_end: return "reached_t_end";
    case Termination::blowup_detected: return "blowup_detected";
    case Termination::step_failure: return "step_failure";
  }
  return "unknown";
}

struct PdeSolution {
  std::vector<double> times;
  std::vector<Field> m_snapshots;
  std::vector<ConservedReport> reports;
  Termination termination = Termination::reached_t_end;
  OdeStats stats;

  std::size_t nearest_snapshot(double t) const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < times.size(); ++i)
      if (std::abs(times[i] - t) < std::abs(times[best] - t)) best = i;
    return best;
  }
};

/// u recovered from m by exact symbol inversion.
inline Field u_from_m(const Field& m, std::size_t n) { return invert_neg_A2n(m, n); }

/// v = -C_2n(u); for n=2 this is u - u_xx.
inline Field v_from_u(const Field& u, std::size_t n) {
  return apply_symbol(u, [n](double k) { return std::complex<double>(-symbol_C(k, n), 0.0); });
}

namespace detail {
inline Field dealias_23(const Field& f) {
  return truncate_modes(f, f.grid.N / 3);
}
}  // namespace detail

/// Right-hand side of m_t = -2 v_x m - v m_x on the spectral grid.
inline Field pde_rhs(const Field& m, std::size_t n, bool dealias = false) {
  const Field u = u_from_m(m, n);
  const Field v = v_from_u(u, n);
  Field vx = diff(v, 1);
  Field mx = diff(m, 1);
  Field mm = m, vv = v;
  if (dealias) {
    vx = detail::dealias_23(vx);
    mx = detail::dealias_23(mx);
    mm = detail::dealias_23(mm);
    vv = detail::dealias_23(vv);
  }
  Field out = (-2.0 * vx * mm) - (vv * mx);
  if (dealias) out = detail::dealias_23(out);
  return out;
}

inline Field operator*(const Field& a, double s) { return s * a; }
inline Field operator-(const Field& a) { return -1.0 * a; }

/// Spectrally exact quadrature of u^2 + 3u_x^2 + 3u_xx^2 + u_xxx^2 over the
/// periodic domain: Parseval sum 2L * sum_k (1+k^2)^3 |u_hat_k|^2 with interior
/// modes counted twice.
inline double conserved_E0_squared(const Field& u) {
  const Spectrum s = to_spectrum(u);
  const std::size_t nyq = u.grid.nyquist();
  double acc = 0.0;
  for (std::size_t j = 0; j <= nyq; ++j) {
    const double k2 = u.grid.k(j) * u.grid.k(j);
    const double w = (j == 0 || j == nyq) ? 1.0 : 2.0;
    acc += w * std::pow(1.0 + k2, 3) * std::norm(s.coeffs[j]);
  }
  return 2.0 * u.grid.L * acc;
}

inline ConservedReport make_report(double t, const Field& m, std::size_t n) {
  ConservedReport r;
  r.t = t;
  const Field u = u_from_m(m, n);
  r.E0_squared = conserved_E0_squared(u);
  r.sup_uxxx = 0.0;
  const Field uxxx = diff(u, 3);
  for (double v : uxxx.values) r.sup_uxxx = std::max(r.sup_uxxx, v);
  double l2 = 0.0;
  for (double v : m.values) l2 += v * v;
  r.m_L2_squared = l2 * m.grid.h;
  r.min_m = *std::min_element(m.values.begin(), m.values.end());
  r.max_m = *std::max_element(m.values.begin(), m.values.end());
  return r;
}

/// Method-of-lines solve with blow-up detection. The detector is checked on
/// every accepted step; snapshots and reports are taken at the monitor cadence.
inline PdeSolution solve(const Field& m0, const SimConfig& cfg) {
  cfg.validate();
  if (!m0.finite()) throw ConfigError("solve: initial data must be finite");
  const std::size_t n = cfg.n;
  const GridSpec g = m0.grid;

  PdeSolution sol;
  auto rhs = [&](double, const std::vector<double>& y, std::vector<double>& dy) {
    Field m(g, y);
    dy = pde_rhs(m, n, cfg.dealias).values;
  };

  double m2_initial = 0.0;
  for (double v : m0.values) m2_initial += v * v;
  m2_initial = std::max(m2_initial * g.h, 1e-300);

  bool blowup = false;
  auto detector = [&](double, const std::vector<double>& y) {
    double sup3 = 0.0, l2 = 0.0;
    Field m(g, y);
    if (!m.finite()) {
      blowup = true;
      return false;
    }
    const Field uxxx = diff(u_from_m(m, n), 3);
    for (double v : uxxx.values) sup3 = std::max(sup3, v);
    for (double v : m.values) l2 += v * v;
    l2 *= g.h;
    if (sup3 > cfg.blowup_threshold || l2 > cfg.m_norm_growth_cap * m2_initial) {
      blowup = true;
      return false;
    }
    return true;
  };

  std::vector<double> y = m0.values;
  double t = 0.0;
  sol.times.push_back(0.0);
  sol.m_snapshots.push_back(m0);
  sol.reports.push_back(make_report(0.0, m0, n));

  DormandPrince54 solver(rhs, cfg.rtol, cfg.atol);
  try {
    while (t < cfg.t_end - 1e-12 * std::max(1.0, cfg.t_end)) {
      const double t_next = std::min(t + cfg.monitor_dt, cfg.t_end);
      const bool ok = solver.advance_to(y, t, t_next, detector);
      Field m(g, y);
      sol.times.push_back(t);
      sol.m_snapshots.push_back(m);
      ConservedReport rep = make_report(t, m, n);
      rep.blowup_suspected = blowup;
      sol.reports.push_back(rep);
      if (!ok) {
        sol.termination = Termination::blowup_detected;
        break;
      }
    }
  } catch (const IntegrationError& e) {
    Field m(g, e.last_state);
    sol.times.push_back(e.last_time);
    sol.m_snapshots.push_back(m);
    sol.reports.push_back(make_report(e.last_time, m, n));
    sol.termination = Termination::step_failure;
  }
  sol.stats = solver.stats();
  return sol;
}

// ---------------------------------------------------------------------------
// Initial-data classification

struct ClassificationReport {
  double E0 = 0.0;
  // (a) m0 sign-definite -> global existence predicted
  bool sign_definite = false;
  // (b) single sign change -/+ at some x0 -> global existence predicted
  bool single_sign_change = false;
  // (c) exists x0 with (u0x - u0xxx)(x0) < -E0/sqrt(2) -> blow-up, with bound
  bool blowup_criterion_slope = false;
  double slope_phi0 = 0.0;       // minimizing value of u0x - u0xxx
  double blowup_time_bound = 0.0;  // valid only when blowup_criterion_slope
  // (d) zero of m0 with e^x / e^-x weighted integral signs -> blow-up, no bound
  bool blowup_criterion_integral = false;
  bool global_predicted() const { return sign_definite || single_sign_change; }
  bool blowup_predicted() const { return blowup_criterion_slope || blowup_criterion_integral; }
};

/// Evaluates the global-existence and blow-up hypotheses on the fifth-order
/// equation (n=2). Sign tests use a tolerance band relative to max|m0|.
inline ClassificationReport classify_initial_data(const Field& u0, double band_rel = 1e-9) {
  ClassificationReport r;
  const Field m0 = apply_symbol(
      u0, [](double k) { return std::complex<double>(symbol_neg_A(k, 2), 0.0); });
  r.E0 = std::sqrt(conserved_E0_squared(u0));
  const double band = band_rel * std::max(1.0, m0.max_abs());

  bool any_pos = false, any_neg = false;
  for (double v : m0.values) {
    if (v > band) any_pos = true;
    if (v < -band) any_neg = true;
  }
  r.sign_definite = !(any_pos && any_neg);

  if (any_pos && any_neg) {
    // single -/+ transition scanning left to right
    int state = 0;  // 0: before first definite sign, 1: negative seen, 2: positive after negative
    bool ok = true;
    for (double v : m0.values) {
      if (std::abs(v) <= band) continue;
      if (v < 0) {
        if (state == 2) ok = false;
        if (state == 0) state = 1;
      } else {
        if (state == 0) ok = false;  // positive before any negative
        state = 2;
      }
    }
    r.single_sign_change = ok && state == 2;
  }

  const Field phi = diff(u0, 1) - diff(u0, 3);
  r.slope_phi0 = *std::min_element(phi.values.begin(), phi.values.end());
  if (r.slope_phi0 < -r.E0 / std::sqrt(2.0)) {
    r.blowup_criterion_slope = true;
    const double denom = -0.5 * r.slope_phi0 + r.E0 * r.E0 / (2.0 * r.slope_phi0);
    r.blowup_time_bound = 1.0 / denom;
  }

  // (d): zero crossings of m0 with weighted integral signs
  const GridSpec g = u0.grid;
  for (std::size_t i = 0; i + 1 < g.N; ++i) {
    if (m0.values[i] * m0.values[i + 1] < 0.0 || std::abs(m0.values[i]) <= band) {
      const double x0 = g.x(i);
      double left = 0.0, right = 0.0;
      for (std::size_t j = 0; j < g.N; ++j) {
        const double x = g.x(j);
        if (x <= x0)
          left += std::exp(x) * m0.values[j];
        else
          right += std::exp(-x) * m0.values[j];
      }
      left *= g.h;
      right *= g.h;
      if (left > band && right < -band) {
        r.blowup_criterion_integral = true;
        break;
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Particle trajectories

struct ParticlePaths {
  std::vector<double> times;                  // snapshot times of the source run
  std::vector<std::vector<double>> q;         // q[seed][time index]
  std::vector<bool> truncated;                // trajectory left the resolved region
};

namespace detail {

/// Cubic (Catmull-Rom) interpolation of snapshot spectra in time; falls back
/// to linear near the ends of the run.
class FieldTimeInterp {
 public:
  FieldTimeInterp(const PdeSolution& sol, std::vector<Spectrum> spectra)
      : times_(sol.times), spectra_(std::move(spectra)) {}

  double eval(double t, double x) const {
    const std::size_t m = times_.size();
    std::size_t i = 0;
    while (i + 2 < m && times_[i + 1] < t) ++i;
    const double t0 = times_[i], t1 = times_[i + 1];
    const double s = (t - t0) / (t1 - t0);
    const double f0 = trig_eval(spectra_[i], x), f1 = trig_eval(spectra_[i + 1], x);
    if (i == 0 || i + 2 >= m) return (1.0 - s) * f0 + s * f1;
    const double fm = trig_eval(spectra_[i - 1], x), f2 = trig_eval(spectra_[i + 2], x);
    // Catmull-Rom on uniform-in-index knots
    const double a = 2 * f0, b = f1 - fm, c = 2 * fm - 5 * f0 + 4 * f1 - f2,
                 d = -fm + 3 * f0 - 3 * f1 + f2;
    return 0.5 * (a + b * s + c * s * s + d * s * s * s);
  }

 private:
  std::vector<double> times_;
  std::vector<Spectrum> spectra_;
};

}  // namespace detail

/// Integrates the characteristic ODE q_t = v(q, t) through the stored
/// snapshots with RK4 substeps and trigonometric interpolation in x.
inline ParticlePaths particle_trajectories(const PdeSolution& sol, std::size_t n,
                                           const std::vector<double>& x0s,
                                           std::size_t substeps = 8) {
  if (sol.times.size() < 2) throw ConfigError("particle_trajectories: need at least 2 snapshots");
  std::vector<Spectrum> vspec;
  vspec.reserve(sol.times.size());
  for (const Field& m : sol.m_snapshots) vspec.push_back(to_spectrum(v_from_u(u_from_m(m, n), n)));
  detail::FieldTimeInterp v(sol, std::move(vspec));

  const double L = sol.m_snapshots.front().grid.L;
  ParticlePaths paths;
  paths.times = sol.times;
  paths.q.assign(x0s.size(), {});
  paths.truncated.assign(x0s.size(), false);
  for (std::size_t s = 0; s < x0s.size(); ++s) {
    double q = x0s[s];
    paths.q[s].push_back(q);
    for (std::size_t i = 0; i + 1 < sol.times.size(); ++i) {
      const double dt = (sol.times[i + 1] - sol.times[i]) / static_cast<double>(substeps);
      double t = sol.times[i];
      for (std::size_t ss = 0; ss < substeps; ++ss) {
        const double k1 = v.eval(t, q);
        const double k2 = v.eval(t + 0.5 * dt, q + 0.5 * dt * k1);
        const double k3 = v.eval(t + 0.5 * dt, q + 0.5 * dt * k2);
        const double k4 = v.eval(t + dt, q + dt * k3);
        q += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        t += dt;
      }
      if (std::abs(q) > L - 2.0) paths.truncated[s] = true;
      paths.q[s].push_back(q);
    }
  }
  return paths;
}

/// Discrete check of m(q(x,t),t) q_x^2 = m_0(x): returns the ratio against
/// m_0 at each interior seed, with q_x from centered differences across
/// neighboring trajectories.
inline std::vector<double> flow_invariant_ratio(const PdeSolution& sol, std::size_t n,
                                                const ParticlePaths& paths,
                                                const std::vector<double>& x0s,
                                                std::size_t time_index) {
  const Spectrum m_now = to_spectrum(sol.m_snapshots[time_index]);
  const Spectrum m_0 = to_spectrum(sol.m_snapshots[0]);
  std::vector<double> ratio(x0s.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t s = 1; s + 1 < x0s.size(); ++s) {
    const double qx = (paths.q[s + 1][time_index] - paths.q[s - 1][time_index]) /
                      (x0s[s + 1] - x0s[s - 1]);
    const double m0v = trig_eval(m_0, x0s[s]);
    if (m0v == 0.0) continue;
    ratio[s] = trig_eval(m_now, paths.q[s][time_index]) * qx * qx / m0v;
  }
  return ratio;
}

/// The non-travelling exact solution u = A e^{ct+x} + B e^{-ct-x} - c,
/// evaluated pointwise. Not periodic: used only for analytic residual checks,
/// never as solver input.
inline double exact_exponential_solution(double A, double B, double c, double x, double t) {
  const double e1 = c * t + x, e2 = -c * t - x;
  if (e1 > 700.0 || e2 > 700.0)
    throw DomainError("exact_exponential_solution: exponent out of floating-point range");
  return A * std::exp(e1) + B * std::exp(e2) - c;
}

inline Field exact_exponential_solution(double A, double B, double c, const GridSpec& g, double t) {
  return Field::sample(g, [&](double x) { return exact_exponential_solution(A, B, c, x, t); });
}

}  // namespace chlab
