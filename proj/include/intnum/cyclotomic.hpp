#pragma once

#include <intnum/rational.hpp>

#include <complex>
#include <numeric>
#include <vector>

namespace intnum {

namespace detail {

inline void poly_trim(std::vector<Rational> &p) {
  while (!p.empty() && p.back() == 0)
    p.pop_back();
}

inline std::vector<Rational> poly_mul(const std::vector<Rational> &a,
                                      const std::vector<Rational> &b) {
  if (a.empty() || b.empty())
    return {};
  std::vector<Rational> c(a.size() + b.size() - 1, Rational(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0)
      continue;
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] += a[i] * b[j];
  }
  poly_trim(c);
  return c;
}

// Remainder of a modulo the monic polynomial m.
inline std::vector<Rational> poly_rem(std::vector<Rational> a,
                                      const std::vector<Rational> &m) {
  poly_trim(a);
  const size_t d = m.size() - 1;
  while (a.size() > d) {
    const Rational lead = a.back();
    const size_t shift = a.size() - 1 - d;
    if (lead != 0)
      for (size_t j = 0; j < d; ++j)
        a[shift + j] -= lead * m[j];
    a.pop_back();
    poly_trim(a);
  }
  return a;
}

// Exact quotient a / m for monic m dividing a.
inline std::vector<Rational> poly_div_exact(std::vector<Rational> a,
                                            const std::vector<Rational> &m) {
  poly_trim(a);
  if (a.empty())
    return {};
  std::vector<Rational> q(a.size() - m.size() + 1, Rational(0));
  while (a.size() >= m.size()) {
    const Rational lead = a.back();
    const size_t shift = a.size() - m.size();
    q[shift] = lead;
    for (size_t j = 0; j < m.size(); ++j)
      a[shift + j] -= lead * m[j];
    poly_trim(a);
  }
  if (!a.empty())
    throw std::logic_error("poly_div_exact: non-zero remainder");
  return q;
}

inline long euler_phi(long r) {
  long result = r, m = r;
  for (long p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      result -= result / p;
      while (m % p == 0)
        m /= p;
    }
  }
  if (m > 1)
    result -= result / m;
  return result;
}

// r-th cyclotomic polynomial, monic with rational coefficients; cached.
inline const std::vector<Rational> &cyclotomic_poly(long r) {
  static std::map<long, std::vector<Rational>> cache;
  auto it = cache.find(r);
  if (it != cache.end())
    return it->second;
  std::vector<Rational> p(r + 1, Rational(0));
  p[0] = -1;
  p[r] = 1; // x^r - 1
  for (long d = 1; d < r; ++d)
    if (r % d == 0)
      p = poly_div_exact(p, cyclotomic_poly(d));
  return cache.emplace(r, std::move(p)).first->second;
}

} // namespace detail

// Element of Q(zeta_r), stored as a residue modulo the r-th cyclotomic
// polynomial: coeffs[k] is the coefficient of zeta^k, k < phi(r).
struct Cyclotomic {
  long r = 1;
  std::vector<Rational> coeffs = {Rational(0)};

  Cyclotomic() = default;
  Cyclotomic(const Rational &q) : r(1), coeffs{q} {}
  Cyclotomic(long v) : r(1), coeffs{Rational(v)} {}
  Cyclotomic(long r_, std::vector<Rational> poly) : r(r_) { reduce_from(std::move(poly)); }

  static Cyclotomic zeta(long r, long power = 1) {
    power %= r;
    if (power < 0)
      power += r;
    std::vector<Rational> p(power + 1, Rational(0));
    p[power] = 1;
    return Cyclotomic(r, std::move(p));
  }

  long degree() const { return static_cast<long>(coeffs.size()); }

  bool is_zero() const {
    for (auto &c : coeffs)
      if (c != 0)
        return false;
    return true;
  }

  bool is_rational() const {
    for (size_t k = 1; k < coeffs.size(); ++k)
      if (coeffs[k] != 0)
        return false;
    return true;
  }

  Rational rational_value() const {
    if (!is_rational())
      throw std::domain_error("Cyclotomic: not a rational value");
    return coeffs[0];
  }

  // Re-express in Q(zeta_R) for r | R via zeta_r = zeta_R^{R/r}.
  Cyclotomic to_order(long R) const {
    if (R == r)
      return *this;
    if (R % r != 0)
      throw std::domain_error("Cyclotomic::to_order: not a field extension");
    const long step = R / r;
    std::vector<Rational> p(static_cast<size_t>(step) * (coeffs.size() - 1) + 1, Rational(0));
    for (size_t k = 0; k < coeffs.size(); ++k)
      p[k * step] = coeffs[k];
    return Cyclotomic(R, std::move(p));
  }

  // zeta -> zeta^a, requires gcd(a, r) = 1.
  Cyclotomic galois(long a) const {
    a %= r;
    if (a < 0)
      a += r;
    if (std::gcd(a, r) != 1)
      throw std::domain_error("Cyclotomic::galois: exponent not coprime to order");
    std::vector<Rational> p(r, Rational(0));
    for (size_t k = 0; k < coeffs.size(); ++k)
      p[(k * a) % r] += coeffs[k];
    return Cyclotomic(r, std::move(p));
  }

  Cyclotomic conj() const { return r == 1 ? *this : galois(r - 1); }

  friend Cyclotomic operator+(const Cyclotomic &x, const Cyclotomic &y) {
    auto [a, b] = promote(x, y);
    for (size_t k = 0; k < b.coeffs.size(); ++k)
      a.coeffs[k] += b.coeffs[k];
    return a;
  }
  friend Cyclotomic operator-(const Cyclotomic &x, const Cyclotomic &y) {
    auto [a, b] = promote(x, y);
    for (size_t k = 0; k < b.coeffs.size(); ++k)
      a.coeffs[k] -= b.coeffs[k];
    return a;
  }
  friend Cyclotomic operator-(const Cyclotomic &x) {
    Cyclotomic a = x;
    for (auto &c : a.coeffs)
      c = -c;
    return a;
  }
  friend Cyclotomic operator*(const Cyclotomic &x, const Cyclotomic &y) {
    auto [a, b] = promote(x, y);
    return Cyclotomic(a.r, detail::poly_mul(a.coeffs, b.coeffs));
  }
  friend Cyclotomic operator/(const Cyclotomic &x, const Cyclotomic &y) {
    return x * y.inverse();
  }
  Cyclotomic &operator+=(const Cyclotomic &y) { return *this = *this + y; }
  Cyclotomic &operator-=(const Cyclotomic &y) { return *this = *this - y; }
  Cyclotomic &operator*=(const Cyclotomic &y) { return *this = *this * y; }
  Cyclotomic &operator/=(const Cyclotomic &y) { return *this = *this / y; }

  friend bool operator==(const Cyclotomic &x, const Cyclotomic &y) {
    return (x - y).is_zero();
  }
  friend bool operator!=(const Cyclotomic &x, const Cyclotomic &y) { return !(x == y); }

  // Extended Euclid against the (irreducible) cyclotomic polynomial.
  Cyclotomic inverse() const {
    if (is_zero())
      throw std::domain_error("Cyclotomic::inverse: zero element");
    if (is_rational())
      return Cyclotomic(Rational(1) / coeffs[0]).to_order(r);
    std::vector<Rational> r0 = detail::cyclotomic_poly(r), r1 = coeffs;
    detail::poly_trim(r1);
    std::vector<Rational> s0 = {}, s1 = {Rational(1)}; // coefficients of *this
    while (true) {
      // r0 = q r1 + r2
      std::vector<Rational> q(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 1,
                              Rational(0));
      std::vector<Rational> r2 = r0;
      while (r2.size() >= r1.size() && !r2.empty()) {
        const Rational lead = r2.back() / r1.back();
        const size_t shift = r2.size() - r1.size();
        q[shift] = lead;
        for (size_t j = 0; j < r1.size(); ++j)
          r2[shift + j] -= lead * r1[j];
        detail::poly_trim(r2);
      }
      if (r2.empty()) {
        // r1 is the gcd: a non-zero constant times 1 since Phi_r is irreducible
        if (r1.size() != 1)
          throw std::logic_error("Cyclotomic::inverse: non-trivial gcd");
        std::vector<Rational> inv = s1;
        for (auto &c : inv)
          c /= r1[0];
        return Cyclotomic(r, std::move(inv));
      }
      std::vector<Rational> s2 = s0; // s2 = s0 - q s1
      {
        auto qs1 = detail::poly_mul(q, s1);
        if (s2.size() < qs1.size())
          s2.resize(qs1.size(), Rational(0));
        for (size_t j = 0; j < qs1.size(); ++j)
          s2[j] -= qs1[j];
        detail::poly_trim(s2);
      }
      r0 = std::move(r1);
      r1 = std::move(r2);
      s0 = std::move(s1);
      s1 = std::move(s2);
    }
  }

  std::complex<long double> embed() const {
    const long double tau = 6.283185307179586476925286766559L;
    std::complex<long double> z(0, 0);
    for (size_t k = coeffs.size(); k-- > 0;) {
      const long double angle = tau * static_cast<long double>(k) / static_cast<long double>(r);
      z += static_cast<long double>(mpq_get_d(coeffs[k].get_mpq_t())) *
           std::complex<long double>(std::cos(angle), std::sin(angle));
    }
    return z;
  }

private:
  void reduce_from(std::vector<Rational> poly) {
    const auto &phi_poly = detail::cyclotomic_poly(r);
    poly = detail::poly_rem(std::move(poly), phi_poly);
    poly.resize(phi_poly.size() - 1, Rational(0));
    if (poly.empty())
      poly.push_back(Rational(0));
    coeffs = std::move(poly);
  }

  static std::pair<Cyclotomic, Cyclotomic> promote(const Cyclotomic &x, const Cyclotomic &y) {
    if (x.r == y.r)
      return {x, y};
    const long R = std::lcm(x.r, y.r);
    return {x.to_order(R), y.to_order(R)};
  }
};

// High-precision complex embedding: returns (re, im) as GMP floats with
// `precision` decimal digits. Used only where long double is insufficient.
inline std::pair<mpf_class, mpf_class> cyclo_embed_mpf(const Cyclotomic &c, long precision) {
  const long bits = static_cast<long>(precision * 3.33) + 64;
  static const char *pi_digits =
      "3.14159265358979323846264338327950288419716939937510"
      "582097494459230781640628620899862803482534211706798214808651";
  mpf_class pi(pi_digits, bits);
  mpf_class eps(1, bits);
  mpf_div_2exp(eps.get_mpf_t(), eps.get_mpf_t(), static_cast<unsigned long>(bits));
  auto sin_taylor = [&](mpf_class x) {
    // reduce to |x| <= pi
    mpf_class two_pi = 2 * pi;
    mpf_class k = floor(x / two_pi + 0.5);
    x -= k * two_pi;
    mpf_class term = x, sum = x, x2 = x * x;
    for (int j = 1; j < 300; ++j) {
      term *= -x2 / ((2 * j) * (2 * j + 1));
      sum += term;
      if (abs(term) < eps)
        break;
    }
    return sum;
  };
  mpf_class re(0, bits), im(0, bits);
  for (size_t k = 0; k < c.coeffs.size(); ++k) {
    if (c.coeffs[k] == 0)
      continue;
    mpf_class coeff(c.coeffs[k], bits);
    mpf_class angle = 2 * pi * static_cast<long>(k) / c.r;
    re += coeff * sin_taylor(pi / 2 - angle);
    im += coeff * sin_taylor(angle);
  }
  return {re, im};
}

// Numerical value under zeta -> e^{2 pi i / r}; long double path by default.
inline std::complex<long double> cyclo_embed(const Cyclotomic &c, long precision = 15) {
  if (precision <= 18)
    return c.embed();
  auto [re, im] = cyclo_embed_mpf(c, precision);
  return {static_cast<long double>(re.get_d()), static_cast<long double>(im.get_d())};
}

// Exact sin(a k pi / r) as an element of Q(zeta_{lcm(2r,4)}).
inline Cyclotomic exact_sin(long k, long r, long a = 1) {
  const long R = std::lcm(2 * r, 4L);
  const Cyclotomic i = Cyclotomic::zeta(R, R / 4);
  const Cyclotomic num =
      Cyclotomic::zeta(2 * r, a * k).to_order(R) - Cyclotomic::zeta(2 * r, -a * k).to_order(R);
  return num / (Cyclotomic(2) * i);
}

} // namespace intnum
