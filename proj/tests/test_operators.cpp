#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>

#include "chlab/operators.hpp"

using namespace chlab;

namespace {

// Term-by-term evaluation of the operator definitions, substituting
// d^{2j} -> (-1)^j k^{2j} and d^{2j-1} -> (-1)^{j-1} (ik) k^{2(j-1)}.
// Independent of the closed-form symbols in operators.hpp.
std::complex<double> oracle_symbol(OperatorKind kind, double k, std::size_t n) {
  const std::complex<double> ik(0.0, k);
  auto dpow = [&](std::size_t order) {  // symbol of d^order
    std::complex<double> p = 1.0;
    for (std::size_t j = 0; j < order; ++j) p *= ik;
    return p;
  };
  std::complex<double> s = 0.0;
  switch (kind) {
    case OperatorKind::A: {
      const double sgn_lead = (n + 1) % 2 == 0 ? 1.0 : -1.0;
      s += sgn_lead * dpow(2 * n);
      for (std::size_t kk = 1; kk + 1 <= n; ++kk) {
        const double sg = (n + 1 - kk) % 2 == 0 ? 1.0 : -1.0;
        s += 2.0 * sg * dpow(2 * (n - kk));
      }
      s -= 1.0;
      break;
    }
    case OperatorKind::B:
      for (std::size_t kk = 0; kk + 1 <= n; ++kk) {
        const double sg = (n - kk) % 2 == 0 ? 1.0 : -1.0;
        s += sg * dpow(2 * (n - kk) - 1);
      }
      break;
    case OperatorKind::C:
      for (std::size_t kk = 0; kk + 1 <= n; ++kk) {
        const double sg = (n - kk) % 2 == 0 ? 1.0 : -1.0;
        s += sg * dpow(2 * (n - kk - 1));
      }
      break;
  }
  return s;
}

Field random_bandlimited(const GridSpec& g, unsigned seed, std::size_t kmax = 6) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  Field f(g);
  for (std::size_t mode = 0; mode <= kmax; ++mode) {
    const double a = amp(rng), b = amp(rng);
    const double k = 2.0 * M_PI * static_cast<double>(mode) / (2.0 * g.L);
    for (std::size_t i = 0; i < g.N; ++i)
      f.values[i] += a * std::cos(k * g.x(i)) + b * std::sin(k * g.x(i));
  }
  return f;
}

}  // namespace

TEST_CASE("make_grid basics") {
  GridSpec g = make_grid(M_PI, 8);
  CHECK(g.h == doctest::Approx(M_PI / 4).epsilon(1e-15));
  CHECK(g.k(1) == doctest::Approx(1.0));
  CHECK(g.k(4) == doctest::Approx(4.0));

  GridSpec g2 = make_grid(20.0, 512);
  CHECK(g2.h == doctest::Approx(0.078125).epsilon(1e-15));

  CHECK_THROWS_AS(make_grid(-1.0, 8), ConfigError);
  CHECK_THROWS_AS(make_grid(1.0, 7), ConfigError);
  CHECK_THROWS_AS(make_grid(1.0, 4), ConfigError);
}

TEST_CASE("diff of sin is cos to machine precision") {
  GridSpec g = make_grid(M_PI, 64);
  Field f = Field::sample(g, [](double x) { return std::sin(x); });
  Field d = diff(f, 1);
  for (std::size_t i = 0; i < g.N; ++i)
    CHECK(d.values[i] == doctest::Approx(std::cos(g.x(i))).epsilon(1e-13));
}

TEST_CASE("diff of constant is zero") {
  GridSpec g = make_grid(5.0, 32);
  Field f = Field::sample(g, [](double) { return 3.7; });
  for (std::size_t order = 1; order <= 4; ++order) {
    Field d = diff(f, order);
    CHECK(d.max_abs() < 1e-13);
  }
}

TEST_CASE("diff order 3 of a Gaussian matches a 7-point finite-difference oracle") {
  GridSpec g = make_grid(10.0, 512);
  Field f = Field::sample(g, [](double x) { return std::exp(-x * x); });
  Field d3 = diff(f, 3);
  // centered 7-point stencil for the third derivative, O(h^4)
  const double h = g.h;
  double max_err = 0.0;
  for (std::size_t i = 0; i < g.N; ++i) {
    auto at = [&](long off) {
      const long idx = (static_cast<long>(i) + static_cast<long>(g.N) + off) %
                       static_cast<long>(g.N);
      return f.values[static_cast<std::size_t>(idx)];
    };
    const double fd = (at(-3) - 8 * at(-2) + 13 * at(-1) - 13 * at(1) + 8 * at(2) - at(3)) /
                      (8 * h * h * h);
    max_err = std::max(max_err, std::abs(d3.values[i] - fd));
  }
  CHECK(max_err < 5e-4);  // limited by the O(h^4) stencil, not the spectral path
}

TEST_CASE("diff rejects orders beyond the configured maximum") {
  GridSpec g = make_grid(1.0, 16);
  Field f(g);
  CHECK_THROWS_AS(diff(f, 9), ConfigError);
}

TEST_CASE("closed-form symbols match term-by-term substitution, n = 1..5") {
  const double ks[] = {0.0, 1.0, -1.0, 2.0, -2.0, 3.5, -3.5};
  for (std::size_t n = 1; n <= 5; ++n) {
    for (double k : ks) {
      const auto oa = oracle_symbol(OperatorKind::A, k, n);
      const auto ob = oracle_symbol(OperatorKind::B, k, n);
      const auto oc = oracle_symbol(OperatorKind::C, k, n);
      CHECK(std::abs(oa - std::complex<double>(symbol_A(k, n), 0.0)) <=
            1e-12 * std::max(1.0, std::abs(oa)));
      CHECK(std::abs(ob - symbol_B(k, n)) <= 1e-12 * std::max(1.0, std::abs(ob)));
      CHECK(std::abs(oc - std::complex<double>(symbol_C(k, n), 0.0)) <=
            1e-12 * std::max(1.0, std::abs(oc)));
    }
  }
}

TEST_CASE("-A_6 is (1+k^2)(1+k^2+k^4), not (1+k^2)^3") {
  // the middle coefficients differ: 2 vs 3 at k^2 and k^4
  for (double k : {1.0, 2.0, 3.5}) {
    const double actual = symbol_neg_A(k, 3);
    const double factored = (1 + k * k) * (1 + k * k + k * k * k * k);
    const double cubed = std::pow(1 + k * k, 3);
    CHECK(actual == doctest::Approx(factored).epsilon(1e-13));
    CHECK(std::abs(actual - cubed) > 0.1);
  }
  // n=1 and n=2 do factor
  for (double k : {0.5, 1.0, 2.0}) {
    CHECK(symbol_neg_A(k, 1) == doctest::Approx(1 + k * k).epsilon(1e-14));
    CHECK(symbol_neg_A(k, 2) == doctest::Approx(std::pow(1 + k * k, 2)).epsilon(1e-14));
  }
}

TEST_CASE("apply_operator: A at n=2 gives -(u - 2u_xx + u_xxxx)") {
  GridSpec g = make_grid(8.0, 128);
  Field u = random_bandlimited(g, 11);
  Field Au = apply_operator(u, OperatorKind::A, 2);
  Field expect = -1.0 * (u - 2.0 * diff(u, 2) + diff(u, 4));
  CHECK((Au - expect).max_abs() < 1e-10);
}

TEST_CASE("apply_operator: C at n=2 gives -(u - u_xx)") {
  GridSpec g = make_grid(8.0, 128);
  Field u = random_bandlimited(g, 12);
  Field Cu = apply_operator(u, OperatorKind::C, 2);
  Field expect = -1.0 * (u - diff(u, 2));
  CHECK((Cu - expect).max_abs() < 1e-11);
}

TEST_CASE("apply_operator: A at n=1 on e^{ikx} multiplies by -(1+k^2)") {
  GridSpec g = make_grid(M_PI, 64);
  const double k = 3.0;
  Field u = Field::sample(g, [&](double x) { return std::cos(k * x); });
  Field Au = apply_operator(u, OperatorKind::A, 1);
  Field expect = -(1 + k * k) * u;
  CHECK((Au - expect).max_abs() < 1e-12);
}

TEST_CASE("diff is linear and composes additively on band-limited fields") {
  GridSpec g = make_grid(6.0, 128);
  Field f = random_bandlimited(g, 21);
  Field gfld = random_bandlimited(g, 22);
  Field lhs = diff(f + gfld, 2);
  Field rhs = diff(f, 2) + diff(gfld, 2);
  CHECK((lhs - rhs).max_abs() < 1e-10);

  Field comp = diff(diff(f, 2), 3);
  Field direct = diff(f, 5);
  CHECK((comp - direct).max_abs() < 1e-10 * std::max(1.0, direct.max_abs()));
}

TEST_CASE("invert_neg_A2n round-trips with apply_operator") {
  GridSpec g = make_grid(10.0, 128);
  for (std::size_t n : {1u, 2u, 3u, 4u}) {
    Field f = random_bandlimited(g, 30 + static_cast<unsigned>(n));
    Field back = invert_neg_A2n(-1.0 * apply_operator(f, OperatorKind::A, n), n);
    CHECK((back - f).max_abs() < 1e-12 * std::max(1.0, f.max_abs()));
  }
}

TEST_CASE("invert_neg_A2n of a grid delta reproduces the Green's kernels") {
  GridSpec g = make_grid(30.0, 1024);
  Field delta(g);
  const std::size_t i0 = g.N / 2;  // x = 0
  delta.values[i0] = 1.0 / g.h;

  Field G4 = invert_neg_A2n(delta, 2);
  Field G2 = invert_neg_A2n(delta, 1);
  double err4 = 0.0, err2 = 0.0;
  for (std::size_t i = 0; i < g.N; ++i) {
    err4 = std::max(err4, std::abs(G4.values[i] - greens_kernel(g.x(i))));
    err2 = std::max(err2, std::abs(G2.values[i] - helmholtz_kernel(g.x(i))));
  }
  // periodic images decay like e^{-L}; the kernel kink limits pointwise order
  CHECK(err4 < 1e-3);
  CHECK(err2 < 2e-2);  // K has a kink at 0, trig interpolation rings at the delta
  // away from the kink both kernels are accurate
  double err4_away = 0.0, err2_away = 0.0;
  for (std::size_t i = 0; i < g.N; ++i) {
    if (std::abs(g.x(i)) < 1.0 || std::abs(g.x(i)) > 20.0) continue;
    err4_away = std::max(err4_away, std::abs(G4.values[i] - greens_kernel(g.x(i))));
    err2_away = std::max(err2_away, std::abs(G2.values[i] - helmholtz_kernel(g.x(i))));
  }
  CHECK(err4_away < 1e-4);
  CHECK(err2_away < 1e-3);
}

TEST_CASE("Green's kernel values and symmetry") {
  CHECK(greens_kernel(0.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(greens_kernel(1.0) == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-14));
  for (double x : {0.3, 1.7, 5.0}) CHECK(greens_kernel(x) == greens_kernel(-x));
}

TEST_CASE("spectral accuracy: error collapses as N doubles") {
  // analytic periodic target: d/dx exp(sin x) = cos x exp(sin x)
  auto err_at = [](std::size_t N) {
    GridSpec g = make_grid(M_PI, N);
    Field f = Field::sample(g, [](double x) { return std::exp(std::sin(x)); });
    Field d = diff(f, 1);
    double e = 0.0;
    for (std::size_t i = 0; i < g.N; ++i)
      e = std::max(e, std::abs(d.values[i] - std::cos(g.x(i)) * std::exp(std::sin(g.x(i)))));
    return e;
  };
  const double e16 = err_at(16), e32 = err_at(32), e64 = err_at(64);
  CHECK(e32 < e16 / 100.0);
  // below ~1e-14 we are at the rounding floor
  CHECK((e64 < e32 / 100.0 || e64 < 1e-13));
}
