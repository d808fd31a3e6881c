#include "test_main.hpp"

#include <intnum/wavefunctions.hpp>

#include <cmath>

using namespace intnum;

TEST_CASE("airy coefficient sequence") {
  auto w = airy_coeffs(10);
  CHECK(w.psi[0] == 1);
  CHECK(w.psi[1] == make_rational(5, 72));
  CHECK(w.dpsi[1] == make_rational(-7, 72));
  for (long k = 0; k <= 10; ++k) {
    Rational closed(factorial(6 * k), pow_int(Integer(864), k) * factorial(2 * k) * factorial(3 * k));
    closed.canonicalize();
    CHECK(w.psi[k] == closed);
    CHECK(w.dpsi[k] == w.psi[k] * make_rational(1 + 6 * k, 1 - 6 * k));
  }
}

TEST_CASE("bessel coefficient sequence") {
  auto w = bessel_coeffs(10);
  CHECK(w.psi[0] == 1);
  CHECK(w.psi[1] == make_rational(1, 8));
  CHECK(w.psi[2] == make_rational(9, 128));
  for (long k = 0; k <= 10; ++k) {
    Rational rising(1);
    for (long j = 0; j < k; ++j)
      rising *= make_rational(2 * j + 1, 2);
    Rational closed = rising * rising / Rational(pow_int(Integer(2), k) * factorial(k));
    CHECK(w.psi[k] == closed);
  }
}

TEST_CASE("higher airy coefficients satisfy the recursion and its closure") {
  for (long r : {3L, 4L, 5L}) {
    auto w = rairy_coeffs(r, 10);
    for (long m = 0; m < r; ++m)
      CHECK(w.a[0][m] == 1);
    for (long k = 1; k <= 10; ++k) {
      for (long m = 1; m < r; ++m)
        CHECK(w.a[k][m] - w.a[k][m - 1] ==
              -(Rational(k) - make_rational(1, 2) - make_rational(m, r + 1)) * w.a[k - 1][m - 1]);
      // wrap-around step recovers a_k^{(0)} = a_k^{(r)}
      CHECK(w.a[k][0] == w.a[k][r - 1] -
                             (Rational(k) - make_rational(1, 2) - make_rational(r, r + 1)) *
                                 w.a[k - 1][r - 1]);
      // the closure constraint that fixed the free constant
      Rational sum(0);
      for (long m = 1; m <= r; ++m)
        sum += (Rational(k) + make_rational(1, 2) - make_rational(m, r + 1)) * w.a[k][m - 1];
      CHECK(sum == 0);
    }
  }
}

TEST_CASE("r=2 higher airy reduces to airy") {
  auto w2 = rairy_coeffs(2, 12);
  auto wa = airy_coeffs(12);
  CHECK(w2.a[1][0] == make_rational(5, 72));
  for (long k = 0; k <= 12; ++k) {
    CHECK(w2.a[k][0] == wa.psi[k]);
    CHECK(w2.a[k][1] == wa.dpsi[k]);
  }
}

TEST_CASE("model constants") {
  auto airy = WaveModel::airy();
  CHECK(airy.exponent == make_rational(3, 2));
  CHECK(airy.actions[0] == Cyclotomic(make_rational(4, 3)));
  CHECK(airy.stokes[0] == Cyclotomic(1));

  auto bessel = WaveModel::bessel();
  CHECK(bessel.exponent == make_rational(1, 2));
  CHECK(bessel.actions[1] == Cyclotomic(-4));
  CHECK(bessel.stokes[0] == Cyclotomic(2));

  for (long r : {3L, 4L, 5L, 6L}) {
    auto m = WaveModel::rairy(r);
    CHECK(m.actions.size() == static_cast<size_t>(2 * (r - 1)));
    for (size_t i = 0; i < m.actions.size(); ++i)
      CHECK(!m.actions[i].is_zero());
    // |A_{r,alpha}| = |A_{r,r-alpha}|: conjugate sectors pair up
    for (long alpha = 1; alpha < r; ++alpha) {
      auto a1 = cyclo_embed(m.actions[2 * (alpha - 1)]);
      auto a2 = cyclo_embed(m.actions[2 * (r - alpha - 1)]);
      CHECK(std::fabs(static_cast<double>(std::abs(a1) - std::abs(a2))) < 1e-14);
    }
  }
  CHECK_THROWS_AS(WaveModel::rairy(1), std::domain_error);
  CHECK_THROWS_AS(rairy_coeffs(1, 5), std::domain_error);
}

TEST_CASE("wave matrix determinants are unit") {
  CHECK(wronskian_check(WaveModel::airy(), 10));
  CHECK(wronskian_check(WaveModel::bessel(), 10));
  for (long r = 2; r <= 5; ++r)
    CHECK(wronskian_check(WaveModel::rairy(r), 12));
}

TEST_CASE("plus and minus sectors are parity conjugate") {
  auto w = airy_coeffs(9);
  auto plus = detail::sequence_series(w.psi, false);
  auto minus = plus.parity_flipped();
  for (long k = 0; k <= 9; ++k)
    CHECK(minus.coeff(k) == (k % 2 ? -w.psi[k] : w.psi[k]));
}
