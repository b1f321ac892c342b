#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "chlab/grid.hpp"
#include "chlab/ode.hpp"

namespace chlab {

struct SingularTimeError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Positions and momenta of an N-pseudo-peakon configuration.
struct PeakonState {
  double t = 0.0;
  std::vector<double> q;
  std::vector<double> p;

  std::size_t size() const { return q.size(); }

  double min_separation() const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < q.size(); ++i)
      for (std::size_t j = i + 1; j < q.size(); ++j) d = std::min(d, std::abs(q[i] - q[j]));
    return d;
  }
};

struct PeakonTrajectory {
  std::vector<PeakonState> states;  // strictly increasing time stamps
  OdeStats stats;
  bool collision = false;  // halted because peaks approached within collision_epsilon
};

inline constexpr double kCollisionEpsilon = 1e-8;

/// H = (1/2) sum_{i,j} p_i p_j e^{-|q_i - q_j|}, diagonal terms included.
inline double hamiltonian(const PeakonState& s) {
  double h = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      h += s.p[i] * s.p[j] * std::exp(-std::abs(s.q[i] - s.q[j]));
  return 0.5 * h;
}

inline double total_momentum(const PeakonState& s) {
  double p = 0.0;
  for (double v : s.p) p += v;
  return p;
}

inline double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

/// Canonical equations of the peakon Hamiltonian, with sgn(0) = 0:
///   dq_j = sum_k p_k e^{-|q_j-q_k|}
///   dp_j = p_j sum_k p_k sgn(q_j-q_k) e^{-|q_j-q_k|}
inline void peakon_rhs(const PeakonState& s, std::vector<double>& dq, std::vector<double>& dp) {
  const std::size_t n = s.size();
  dq.assign(n, 0.0);
  dp.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const double e = std::exp(-std::abs(s.q[j] - s.q[k]));
      dq[j] += s.p[k] * e;
      dp[j] += s.p[k] * sgn(s.q[j] - s.q[k]) * e;
    }
    dp[j] *= s.p[j];
  }
}

inline PeakonTrajectory integrate(const PeakonState& s0, double t_end, double tol,
                                  double monitor_dt = 0.0,
                                  double collision_epsilon = kCollisionEpsilon) {
  if (!(tol > 0.0)) throw ConfigError("integrate: tol must be positive");
  if (s0.min_separation() < collision_epsilon)
    throw ConfigError("integrate: initial state is collided");
  const std::size_t n = s0.size();
  if (monitor_dt <= 0.0) monitor_dt = (t_end - s0.t) / 100.0;

  auto rhs = [n](double, const std::vector<double>& y, std::vector<double>& dy) {
    PeakonState s;
    s.q.assign(y.begin(), y.begin() + n);
    s.p.assign(y.begin() + n, y.end());
    std::vector<double> dq, dp;
    peakon_rhs(s, dq, dp);
    dy.resize(2 * n);
    std::copy(dq.begin(), dq.end(), dy.begin());
    std::copy(dp.begin(), dp.end(), dy.begin() + n);
  };

  PeakonTrajectory traj;
  std::vector<double> y(2 * n);
  std::copy(s0.q.begin(), s0.q.end(), y.begin());
  std::copy(s0.p.begin(), s0.p.end(), y.begin() + n);
  double t = s0.t;
  traj.states.push_back(s0);

  DormandPrince54 solver(rhs, tol, tol);
  auto watch_collision = [&](double, const std::vector<double>& yy) {
    if (n < 2) return true;
    PeakonState s;
    s.q.assign(yy.begin(), yy.begin() + n);
    if (s.min_separation() < collision_epsilon) {
      traj.collision = true;
      return false;
    }
    return true;
  };

  while (t < t_end && !traj.collision) {
    const double t_next = std::min(t + monitor_dt, t_end);
    solver.advance_to(y, t, t_next, watch_collision);
    PeakonState s;
    s.t = t;
    s.q.assign(y.begin(), y.begin() + n);
    s.p.assign(y.begin() + n, y.end());
    traj.states.push_back(std::move(s));
  }
  traj.stats = solver.stats();
  return traj;
}

/// Closed-form 2-pseudo-peakon: p1 = -p2 = A coth(At), q1 = -q2 = ln cosh(At).
inline PeakonState two_peakon_exact(double A, double t) {
  if (A == 0.0) throw ConfigError("two_peakon_exact: A must be nonzero");
  if (t == 0.0) throw SingularTimeError("two_peakon_exact: momenta blow up at t = 0");
  PeakonState s;
  s.t = t;
  const double p1 = A / std::tanh(A * t);
  const double q1 = std::log(std::cosh(A * t));
  s.q = {q1, -q1};
  s.p = {p1, -p1};
  return s;
}

/// Single pseudo-peakon profile u = (c/2) e^{-|xi|}(1+|xi|) and its first two
/// derivatives, which are continuous; the third derivative is not.
inline double pseudo_peakon_profile(double c, double xi) {
  const double a = std::abs(xi);
  return 0.5 * c * std::exp(-a) * (1.0 + a);
}
inline double pseudo_peakon_profile_dx(double c, double xi) {
  return -0.5 * c * std::exp(-std::abs(xi)) * xi;
}
inline double pseudo_peakon_profile_dxx(double c, double xi) {
  const double a = std::abs(xi);
  return 0.5 * c * std::exp(-a) * (a - 1.0);
}

struct Reconstruction {
  Field u;
  Field v;
  std::vector<double> m_weights;  // delta amplitudes 2 p_j of the momentum measure
};

/// Samples the multi-peakon ansatz on a grid. The momentum m of a peakon
/// configuration is a measure, so it is returned as weights, not a Field.
inline Reconstruction reconstruct(const PeakonState& s, const GridSpec& g) {
  for (double qj : s.q)
    if (std::abs(qj) > g.L - 5.0)
      throw DomainError("reconstruct: peak too close to the periodic seam");
  Reconstruction r;
  r.u = Field(g);
  r.v = Field(g);
  for (std::size_t i = 0; i < g.N; ++i) {
    const double x = g.x(i);
    double u = 0.0, v = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      u += pseudo_peakon_profile(s.p[j], x - s.q[j]);
      v += s.p[j] * std::exp(-std::abs(x - s.q[j]));
    }
    r.u.values[i] = u;
    r.v.values[i] = v;
  }
  r.m_weights.resize(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) r.m_weights[j] = 2.0 * s.p[j];
  return r;
}

/// Closed-form 2-pseudo-peakon field u(x,t).
inline double evaluate_2peakon_field(double A, double t, double x) {
  const PeakonState s = two_peakon_exact(A, t);
  return pseudo_peakon_profile(s.p[0], x - s.q[0]) + pseudo_peakon_profile(s.p[1], x - s.q[1]);
}

}  // namespace chlab
