#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace chlab {

struct IntegrationError : std::runtime_error {
  std::vector<double> last_state;
  double last_time;
  IntegrationError(const std::string& msg, std::vector<double> y, double t)
      : std::runtime_error(msg), last_state(std::move(y)), last_time(t) {}
};

struct OdeStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  double max_error_estimate = 0.0;
};

/// Adaptive Dormand-Prince 5(4) embedded Runge-Kutta.
///
/// advance_to() integrates y from t to t_target, clamping the final step so
/// the target time is hit exactly. on_accept(t, y) is called after every
/// accepted step; returning false halts the integration at that state.
class DormandPrince54 {
 public:
  using Rhs = std::function<void(double, const std::vector<double>&, std::vector<double>&)>;
  using AcceptCb = std::function<bool(double, const std::vector<double>&)>;

  DormandPrince54(Rhs rhs, double rtol, double atol) : rhs_(std::move(rhs)), rtol_(rtol), atol_(atol) {
    if (!(rtol > 0.0) || !(atol > 0.0)) throw std::invalid_argument("DormandPrince54: tolerances must be positive");
  }

  OdeStats& stats() { return stats_; }

  /// Returns false if on_accept requested a halt; y/t are then the halt state.
  bool advance_to(std::vector<double>& y, double& t, double t_target,
                  const AcceptCb& on_accept = nullptr) {
    if (t_target == t) return true;
    const double dir = t_target > t ? 1.0 : -1.0;
    std::vector<double> f0(y.size());
    rhs_(t, y, f0);
    double h = have_h_ ? h_ : initial_step(y, f0, t, dir);
    std::vector<double> ynew(y.size()), err(y.size());
    while (dir * (t_target - t) > 0.0) {
      // a rounding-level sliver of the interval is not worth a step
      if (std::abs(t_target - t) <= 1e-13 * std::max(1.0, std::abs(t))) {
        t = t_target;
        break;
      }
      h = dir * std::min(std::abs(h), std::abs(t_target - t));
      bool last = std::abs(h) >= std::abs(t_target - t) - 1e-14 * std::abs(t_target - t);
      if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t)))
        throw IntegrationError("step-size underflow", y, t);
      step(t, y, f0, h, ynew, err);
      const double e = error_norm(y, ynew, err);
      if (e <= 1.0) {
        t = last ? t_target : t + h;
        y.swap(ynew);
        f0.swap(k_.back());  // FSAL
        ++stats_.steps;
        stats_.max_error_estimate = std::max(stats_.max_error_estimate, e);
        h_ = h * std::clamp(0.9 * std::pow(e > 0 ? e : 1e-10, -0.2), 0.2, 5.0);
        have_h_ = true;
        if (on_accept && !on_accept(t, y)) return false;
      } else {
        ++stats_.rejected;
        h *= std::clamp(0.9 * std::pow(e, -0.2), 0.1, 1.0);
        h_ = h;
        have_h_ = true;
      }
    }
    return true;
  }

 private:
  // Dormand-Prince coefficients.
  static constexpr double c_[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr double a_[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static constexpr double b5_[7] = {35.0 / 384,    0.0,  500.0 / 1113, 125.0 / 192,
                                    -2187.0 / 6784, 11.0 / 84, 0.0};
  static constexpr double b4_[7] = {5179.0 / 57600,  0.0,  7571.0 / 16695, 393.0 / 640,
                                    -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

  void step(double t, const std::vector<double>& y, const std::vector<double>& f0, double h,
            std::vector<double>& ynew, std::vector<double>& err) {
    const std::size_t n = y.size();
    k_.assign(7, std::vector<double>(n));
    k_[0] = f0;
    std::vector<double> ytmp(n);
    for (int s = 1; s < 7; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j) acc += a_[s][j] * k_[j][i];
        ytmp[i] = y[i] + h * acc;
      }
      rhs_(t + c_[s] * h, ytmp, k_[s]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      double y5 = 0.0, y4 = 0.0;
      for (int s = 0; s < 7; ++s) {
        y5 += b5_[s] * k_[s][i];
        y4 += b4_[s] * k_[s][i];
      }
      ynew[i] = y[i] + h * y5;
      err[i] = h * (y5 - y4);
    }
  }

  double error_norm(const std::vector<double>& y, const std::vector<double>& ynew,
                    const std::vector<double>& err) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double sc = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(ynew[i]));
      acc += (err[i] / sc) * (err[i] / sc);
    }
    return std::sqrt(acc / static_cast<double>(y.size()));
  }

  double initial_step(const std::vector<double>& y, const std::vector<double>& f, double t,
                      double dir) const {
    double ny = 0.0, nf = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      ny = std::max(ny, std::abs(y[i]));
      nf = std::max(nf, std::abs(f[i]));
    }
    (void)t;
    double h = (nf > 1e-12) ? 0.01 * std::max(ny, 1.0) / nf : 1e-3;
    return dir * std::min(h, 0.1);
  }

  Rhs rhs_;
  double rtol_, atol_;
  double h_ = 0.0;
  bool have_h_ = false;
  OdeStats stats_;
  std::vector<std::vector<double>> k_;
};

}  // namespace chlab
