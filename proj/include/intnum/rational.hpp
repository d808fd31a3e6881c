#pragma once

#include <gmpxx.h>

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace intnum {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer &num, const Integer &den) {
  if (den == 0)
    throw std::domain_error("make_rational: zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational make_rational(long num, long den) {
  return make_rational(Integer(num), Integer(den));
}

// Serialization: always "num/den" with den > 0, gcd = 1.
inline std::string rational_to_string(const Rational &q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rational rational_from_string(const std::string &s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos)
    return make_rational(Integer(s), 1);
  return make_rational(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
}

inline int sign(const Rational &q) { return sgn(q); }

// log|q| as long double, usable far beyond floating-point range.
inline long double log_abs(const Rational &q) {
  if (q == 0)
    throw std::domain_error("log_abs: zero");
  long exp_num, exp_den;
  const double mant_num = mpz_get_d_2exp(&exp_num, q.get_num().get_mpz_t());
  const double mant_den = mpz_get_d_2exp(&exp_den, q.get_den().get_mpz_t());
  return std::log(std::fabs(mant_num)) - std::log(std::fabs(mant_den)) +
         (static_cast<long double>(exp_num - exp_den)) * 0.693147180559945309417232121458L;
}

template <typename S> S pow_int(S base, long e) {
  if (e < 0) {
    base = S(1) / base;
    e = -e;
  }
  S result(1);
  while (e > 0) {
    if (e & 1)
      result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

inline Integer factorial(long m) {
  if (m < 0)
    throw std::domain_error("factorial: negative argument");
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(m));
  return f;
}

// m (m-r) (m-2r) ... down to the least positive residue.
inline Integer r_factorial(long m, long r) {
  if (m <= 0)
    throw std::domain_error("r_factorial: m must be positive");
  if (r < 2)
    throw std::domain_error("r_factorial: r must be >= 2");
  Integer f(1);
  for (long v = m; v > 0; v -= r)
    f *= v;
  return f;
}

inline Integer double_factorial(long m) { return r_factorial(m, 2); }

// x (x-1) ... (x-k+1); empty product = 1.
template <typename S> S falling_factorial(S x, long k) {
  if (k < 0)
    throw std::domain_error("falling_factorial: negative k");
  S result(1);
  for (long j = 0; j < k; ++j)
    result *= x - S(j);
  return result;
}

inline Integer binomial(long n, long k) {
  if (k < 0)
    return Integer(0);
  Integer b;
  mpz_bin_ui(b.get_mpz_t(), Integer(n).get_mpz_t(), static_cast<unsigned long>(k));
  return b;
}

// Multiplicity data p_m = #{d_i = m} attached to an n-point configuration.
struct Multiplicities {
  long n = 0;
  std::map<long, long> p;

  Multiplicities() = default;
  Multiplicities(long n_, std::map<long, long> p_) : n(n_), p(std::move(p_)) {
    long total = 0;
    for (auto &[m, c] : p) {
      if (m < 0 || c < 0)
        throw std::domain_error("Multiplicities: negative entry");
      total += c;
    }
    if (total > n)
      throw std::domain_error("Multiplicities: counts exceed n");
  }

  long count(long m) const {
    auto it = p.find(m);
    return it == p.end() ? 0 : it->second;
  }

  template <typename It> static Multiplicities of_exponents(It begin, It end) {
    Multiplicities mult;
    for (It it = begin; it != end; ++it) {
      mult.p[static_cast<long>(*it)]++;
      mult.n++;
    }
    return mult;
  }
};

// Genus determined by the r-spin degree bookkeeping
// r|d| + |a| = (r+1)(2g-2+n); throws if the input is inconsistent.
inline long rspin_genus(long r, const std::vector<long> &d, const std::vector<long> &a) {
  if (r < 2)
    throw std::domain_error("rspin_genus: r must be >= 2");
  if (d.size() != a.size() || d.empty())
    throw std::domain_error("rspin_genus: index tuples must have equal positive length");
  long total = 0;
  for (size_t i = 0; i < d.size(); ++i) {
    if (d[i] < 0)
      throw std::domain_error("rspin_genus: negative exponent");
    if (a[i] < 1 || a[i] > r - 1)
      throw std::domain_error("rspin_genus: twist out of range");
    total += r * d[i] + a[i];
  }
  if (total % (r + 1) != 0)
    throw std::domain_error("rspin_genus: degree constraint violated");
  const long euler = total / (r + 1); // 2g - 2 + n
  const long n = static_cast<long>(d.size());
  if ((euler + 2 - n) % 2 != 0 || euler + 2 - n < 0)
    throw std::domain_error("rspin_genus: degree constraint violated");
  return (euler + 2 - n) / 2;
}

} // namespace intnum
