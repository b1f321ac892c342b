#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chlab/spectral.hpp"

using namespace chlab;

namespace {

// alternative 1-based determinant convention (entries A_{i+j+l}, i,j = 1..k);
// kept only to show it does not solve the peakon system
XReal hankel_alt(const std::vector<XReal>& A, std::size_t k, std::size_t l) {
  return hankel_delta(A, k, l + 2);
}

PeakonState alt_state(const SpectralData& d, double t) {
  const std::size_t N = d.size();
  const std::vector<XReal> A = moments(d, t / 2.0, 2 * N + 2);
  PeakonState s;
  s.t = t;
  s.q.resize(N);
  s.p.resize(N);
  for (std::size_t j = 1; j <= N; ++j) {
    const XReal y = 1.0L - hankel_alt(A, N - j, 2) / hankel_alt(A, N - j + 1, 0);
    const XReal g = hankel_alt(A, N - j + 1, 0) * hankel_alt(A, N - j + 1, 0) /
                    (hankel_alt(A, N - j + 1, 1) * hankel_alt(A, N - j, 1));
    s.q[j - 1] = static_cast<double>(std::log((1.0L + y) / (1.0L - y)));
    s.p[j - 1] = static_cast<double>(g * (1.0L - y * y) / 2.0L);
  }
  return s;
}

}  // namespace

TEST_CASE("SpectralData validation") {
  SpectralData d;
  CHECK_THROWS_AS(d.validate(), ConfigError);  // empty
  d.lambdas = {-1.0, -2.0};
  d.a0s = {1.0};
  CHECK_THROWS_AS(d.validate(), ConfigError);  // length mismatch
  d.a0s = {1.0, -0.5};
  CHECK_THROWS_AS(d.validate(), ConfigError);  // nonpositive weight
  d.a0s = {1.0, 0.5};
  CHECK_NOTHROW(d.validate());
  d.lambdas = {-1.0, 2.0};
  CHECK_THROWS_AS(d.validate(), ConfigError);  // mixed signs
  d.lambdas = {-1.0, 0.0};
  CHECK_THROWS_AS(d.validate(), ConfigError);  // zero eigenvalue
  d.lambdas = {-1.0, -1.0};
  CHECK_THROWS_AS(d.validate(), ConfigError);  // repeated eigenvalue
}

TEST_CASE("weights evolve exponentially") {
  SpectralData d;
  d.lambdas = {-1.0, -4.0};
  d.a0s = {2.0, 0.5};
  auto a = evolve_weights(d, 0.7);
  CHECK(a[0] == doctest::Approx(2.0 * std::exp(1.4)).epsilon(1e-14));
  CHECK(a[1] == doctest::Approx(0.5 * std::exp(0.35)).epsilon(1e-14));
}

TEST_CASE("moments include the fixed weight 1/2 at k = 0 only") {
  SpectralData d;
  d.lambdas = {-2.0};
  d.a0s = {3.0};
  auto A = moments(d, 0.0, 3);
  CHECK(static_cast<double>(A[0]) == doctest::Approx(0.5 + 3.0).epsilon(1e-15));
  CHECK(static_cast<double>(A[1]) == doctest::Approx(2.0 * 3.0).epsilon(1e-15));
  CHECK(static_cast<double>(A[2]) == doctest::Approx(4.0 * 3.0).epsilon(1e-15));
  CHECK(static_cast<double>(A[3]) == doctest::Approx(8.0 * 3.0).epsilon(1e-15));
}

TEST_CASE("hankel_delta against direct cofactor expansion") {
  std::vector<XReal> A = {2.0L, -1.0L, 3.0L, 0.5L, 4.0L, -2.0L, 1.0L};
  CHECK(static_cast<double>(hankel_delta(A, 0, 5)) == 1.0);  // empty determinant
  CHECK(static_cast<double>(hankel_delta(A, 1, 3)) == doctest::Approx(0.5));
  // det [[A1,A2],[A2,A3]]
  const double d2 = -1.0 * 0.5 - 3.0 * 3.0;
  CHECK(static_cast<double>(hankel_delta(A, 2, 1)) == doctest::Approx(d2).epsilon(1e-15));
  // 3x3 starting at A0 by cofactors
  const double a = 2, b = -1, c = 3, dd = 0.5, e = 4;
  const double d3 = a * (c * e - dd * dd) - b * (b * e - dd * c) + c * (b * dd - c * c);
  CHECK(static_cast<double>(hankel_delta(A, 3, 0)) == doctest::Approx(d3).epsilon(1e-13));
  CHECK_THROWS_AS(hankel_delta(A, 4, 2), ConfigError);  // needs A_8
}

TEST_CASE("N = 1: uniform motion with p = -1/lambda") {
  SpectralData d;
  d.lambdas = {-2.0};
  d.a0s = {0.8};
  for (double t : {0.0, 1.0, 3.0}) {
    PeakonState s = peakon_state_from_spectral(d, t);
    CHECK(s.p[0] == doctest::Approx(0.5).epsilon(1e-12));
    // q(t) = log(2 a(0)) + t/2, speed equals the momentum
    CHECK(s.q[0] == doctest::Approx(std::log(1.6) + 0.5 * t).epsilon(1e-12));
  }
}

TEST_CASE("spectral map solves the peakon system, N = 2") {
  SpectralData d;
  d.lambdas = {-1.0, -3.0};
  d.a0s = {1.0, 0.4};
  PeakonState s0 = peakon_state_from_spectral(d, 0.0);
  PeakonTrajectory traj = integrate(s0, 2.0, 1e-12, 0.5);
  REQUIRE_FALSE(traj.collision);
  for (const PeakonState& ref : traj.states) {
    PeakonState s = peakon_state_from_spectral(d, ref.t);
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(s.q[j] == doctest::Approx(ref.q[j]).epsilon(1e-8));
      CHECK(s.p[j] == doctest::Approx(ref.p[j]).epsilon(1e-8));
    }
  }
}

TEST_CASE("spectral map solves the peakon system, N = 3") {
  SpectralData d;
  d.lambdas = {-0.8, -2.0, -5.0};
  d.a0s = {1.2, 0.6, 0.1};
  PeakonState s0 = peakon_state_from_spectral(d, -1.0);
  PeakonTrajectory traj = integrate(s0, 1.5, 1e-12, 0.5);
  REQUIRE_FALSE(traj.collision);
  for (const PeakonState& ref : traj.states) {
    PeakonState s = peakon_state_from_spectral(d, ref.t);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(s.q[j] == doctest::Approx(ref.q[j]).epsilon(1e-7));
      CHECK(s.p[j] == doctest::Approx(ref.p[j]).epsilon(1e-7));
    }
  }
}

TEST_CASE("Hamiltonian and momentum from the spectral map are constant in time") {
  SpectralData d;
  d.lambdas = {-1.0, -2.5};
  d.a0s = {0.9, 0.3};
  PeakonState s0 = peakon_state_from_spectral(d, 0.0);
  const double H0 = hamiltonian(s0);
  const double P0 = total_momentum(s0);
  for (double t : {0.7, 1.9, 4.0}) {
    PeakonState s = peakon_state_from_spectral(d, t);
    CHECK(hamiltonian(s) == doctest::Approx(H0).epsilon(1e-11));
    CHECK(total_momentum(s) == doctest::Approx(P0).epsilon(1e-11));
  }
}

TEST_CASE("the 1-based determinant convention does not solve the system") {
  // under that reading a single peakon's momentum is (2 A_2 - 1)/(2 A_3),
  // which is time dependent, while the canonical equations force a constant
  // momentum for N = 1; the 0-based convention above passes the same check
  SpectralData d;
  d.lambdas = {-2.0};
  d.a0s = {0.8};
  PeakonState a = alt_state(d, 0.0);
  PeakonState b = alt_state(d, 2.0);
  CHECK(std::abs(a.p[0] - b.p[0]) > 1e-3);
}

TEST_CASE("ill-posed evaluations raise SpectralMapError") {
  // push the weight to underflow: a_1 -> 0 sends y -> -1 and the moment A_1
  // in the denominator of g to zero
  SpectralData d;
  d.lambdas = {-1.0};
  d.a0s = {1e-9};
  CHECK_THROWS_AS((void)peakon_state_from_spectral(d, -4000.0), SpectralMapError);
}
