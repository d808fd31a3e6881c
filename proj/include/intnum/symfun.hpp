#pragma once

#include "cyclotomic.hpp"
#include "rational.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

namespace intnum {

// Partition with weakly decreasing parts; zero parts are implicit and their
// multiplicity p_0 is recovered from the ambient variable count n.
struct Partition {
  std::vector<long> parts; // strictly positive, weakly decreasing

  Partition() = default;
  explicit Partition(std::vector<long> p) : parts(std::move(p)) {
    for (long v : parts)
      if (v < 0)
        throw std::domain_error("Partition: negative part");
    std::sort(parts.begin(), parts.end(), std::greater<long>());
    while (!parts.empty() && parts.back() == 0)
      parts.pop_back();
  }

  long weight() const {
    long w = 0;
    for (long v : parts)
      w += v;
    return w;
  }
  long length() const { return static_cast<long>(parts.size()); }
  long max_part() const { return parts.empty() ? 0 : parts.front(); }

  // p_k: multiplicity of k among the n parts (zero parts included)
  long multiplicity(long k, long n) const {
    if (length() > n)
      throw std::domain_error("Partition: more parts than variables");
    if (k == 0)
      return n - length();
    long c = 0;
    for (long v : parts)
      c += v == k;
    return c;
  }

  // z_lambda = prod_k p_k(lambda)!
  Integer aut_factor(long n) const {
    Integer z = factorial(multiplicity(0, n));
    for (long k = 1; k <= max_part(); ++k)
      z *= factorial(multiplicity(k, n));
    return z;
  }

  bool operator==(const Partition &) const = default;
  auto operator<=>(const Partition &) const = default;
};

// Descending length-n exponent vector with explicit zero parts.
inline std::vector<long> partition_padded(const Partition &p, long n) {
  if (p.length() > n)
    throw std::domain_error("partition_padded: more parts than variables");
  std::vector<long> v = p.parts;
  v.resize(n, 0);
  return v;
}

// All distinct permutations of the length-n exponent vector.
inline std::vector<std::vector<long>> partition_orbit(const Partition &p, long n) {
  std::vector<long> v = partition_padded(p, n);
  std::sort(v.begin(), v.end());
  std::vector<std::vector<long>> out;
  do
    out.push_back(v);
  while (std::next_permutation(v.begin(), v.end()));
  return out;
}

enum class SymBasis { Monomial, Elementary, Complete, ShiftedElemMinus, ShiftedElemPlus };

// Symmetric polynomial in n variables over an exact coefficient ring. Keys
// index m_lambda (monomial basis) or products e_lambda / h_lambda /
// ehat_lambda (multiplicative bases).
template <typename S> struct BasicSymPoly {
  long n = 0;
  SymBasis basis = SymBasis::Monomial;
  std::map<Partition, S> coeffs;

  BasicSymPoly() = default;
  BasicSymPoly(long n_, SymBasis basis_) : n(n_), basis(basis_) {}

  void add_term(const Partition &key, const S &c) {
    if (basis == SymBasis::Monomial && key.length() > n)
      throw std::domain_error("BasicSymPoly: monomial key has too many parts");
    if (basis != SymBasis::Monomial && key.max_part() > n)
      throw std::domain_error("BasicSymPoly: generator index exceeds variable count");
    auto [it, inserted] = coeffs.emplace(key, c);
    if (!inserted)
      it->second += c;
    if (it->second == S(0))
      coeffs.erase(it);
  }

  bool operator==(const BasicSymPoly &o) const {
    return n == o.n && basis == o.basis && coeffs == o.coeffs;
  }
};

using SymPoly = BasicSymPoly<Rational>;

namespace detail {

template <typename S> using MonoMap = std::map<Partition, S>;

template <typename S>
void mono_accumulate(MonoMap<S> &m, const Partition &key, const S &c) {
  auto [it, ins] = m.emplace(key, c);
  if (!ins)
    it->second += c;
  if (it->second == S(0))
    m.erase(it);
}

// product of two symmetric polynomials in the monomial basis
template <typename S>
MonoMap<S> monomial_product(long n, const MonoMap<S> &a, const MonoMap<S> &b) {
  MonoMap<S> out;
  for (auto &[la, ca] : a)
    for (auto &[lb, cb] : b) {
      auto orb = partition_orbit(la, n);
      auto rep = partition_padded(lb, n);
      // every orbit key of the product arises as sort(w + rep)
      std::map<Partition, long> counts;
      std::vector<long> s(n);
      for (auto &w : orb) {
        for (long i = 0; i < n; ++i)
          s[i] = w[i] + rep[i];
        counts.emplace(Partition(s), 0);
      }
      for (auto &[key, cnt] : counts) {
        auto target = partition_padded(key, n);
        // count pairs w + v = target with v a permutation of lb
        for (auto &w : orb) {
          std::vector<long> v(n);
          bool ok = true;
          for (long i = 0; i < n && ok; ++i) {
            v[i] = target[i] - w[i];
            ok = v[i] >= 0;
          }
          if (ok && Partition(v) == lb)
            ++cnt;
        }
      }
      for (auto &[key, cnt] : counts)
        if (cnt != 0)
          mono_accumulate(out, key, S(ca * cb * S(cnt)));
    }
  return out;
}

template <typename S> MonoMap<S> expand_e(long n, long k) {
  MonoMap<S> m;
  if (k == 0) {
    m.emplace(Partition{}, S(1));
    return m;
  }
  if (k > n)
    return m;
  m.emplace(Partition(std::vector<long>(k, 1)), S(1));
  return m;
}

inline void list_partitions(long d, long max_part, long max_len, std::vector<long> &cur,
                            std::vector<Partition> &out) {
  if (d == 0) {
    out.push_back(Partition(cur));
    return;
  }
  if (max_len == 0)
    return;
  for (long p = std::min(d, max_part); p >= 1; --p) {
    cur.push_back(p);
    list_partitions(d - p, p, max_len - 1, cur, out);
    cur.pop_back();
  }
}

inline std::vector<Partition> partitions_of(long d, long max_part, long max_len) {
  std::vector<Partition> out;
  std::vector<long> cur;
  if (d == 0)
    out.push_back(Partition{});
  else
    list_partitions(d, max_part, max_len, cur, out);
  return out;
}

template <typename S> MonoMap<S> expand_h(long n, long k) {
  MonoMap<S> m;
  for (auto &lam : partitions_of(k, k, n))
    m.emplace(lam, S(1));
  return m;
}

// ehat_k with shift sigma: e_k(u + sigma) = sum_m binom(n-k+m, m) sigma^m e_{k-m}(u)
template <typename S> MonoMap<S> expand_shifted_e(long n, long k, const S &sigma) {
  MonoMap<S> m;
  for (long j = 0; j <= k; ++j) {
    const long mm = k - j;
    S c = S(Rational(binomial(n - k + mm, mm)));
    for (long t = 0; t < mm; ++t)
      c = c * sigma;
    if (c == S(0))
      continue;
    for (auto &[key, v] : expand_e<S>(n, j))
      mono_accumulate(m, key, S(v * c));
  }
  return m;
}

template <typename S> MonoMap<S> expand_generator(SymBasis basis, long n, long k) {
  switch (basis) {
  case SymBasis::Elementary:
    return expand_e<S>(n, k);
  case SymBasis::Complete:
    return expand_h<S>(n, k);
  case SymBasis::ShiftedElemMinus:
    return expand_shifted_e<S>(n, k, S(-1));
  case SymBasis::ShiftedElemPlus:
    return expand_shifted_e<S>(n, k, S(1));
  default:
    throw std::logic_error("expand_generator: not a multiplicative basis");
  }
}

template <typename S> MonoMap<S> expand_key(SymBasis basis, long n, const Partition &key) {
  MonoMap<S> acc;
  acc.emplace(Partition{}, S(1));
  for (long part : key.parts)
    acc = monomial_product(n, acc, expand_generator<S>(basis, n, part));
  return acc;
}

} // namespace detail

template <typename S> BasicSymPoly<S> to_monomial(const BasicSymPoly<S> &p) {
  if (p.basis == SymBasis::Monomial)
    return p;
  BasicSymPoly<S> out(p.n, SymBasis::Monomial);
  for (auto &[key, c] : p.coeffs)
    for (auto &[lam, v] : detail::expand_key<S>(p.basis, p.n, key))
      out.add_term(lam, v * c);
  return out;
}

template <typename S>
BasicSymPoly<S> sym_mul(const BasicSymPoly<S> &a, const BasicSymPoly<S> &b) {
  if (a.n != b.n)
    throw std::domain_error("sym_mul: variable count mismatch");
  BasicSymPoly<S> out(a.n, SymBasis::Monomial);
  out.coeffs = detail::monomial_product(a.n, to_monomial(a).coeffs, to_monomial(b).coeffs);
  return out;
}

// Substitute a fixed value q for the last variable (monomial basis): each
// orbit term either leaves that slot at exponent 0 or spends one part on it.
template <typename S> BasicSymPoly<S> specialize_last(const BasicSymPoly<S> &p, const S &q) {
  if (p.basis != SymBasis::Monomial)
    throw std::domain_error("specialize_last: monomial basis required");
  if (p.n < 1)
    throw std::domain_error("specialize_last: no variables left");
  BasicSymPoly<S> out(p.n - 1, SymBasis::Monomial);
  for (auto &[nu, c] : p.coeffs) {
    if (nu.length() < p.n)
      out.add_term(nu, c);
    std::set<long> vals(nu.parts.begin(), nu.parts.end());
    for (long v : vals) {
      std::vector<long> rest = nu.parts;
      rest.erase(std::find(rest.begin(), rest.end(), v));
      out.add_term(Partition(std::move(rest)), c * pow_int(q, v));
    }
  }
  return out;
}

namespace detail {

// exact dense linear solve A x = b (A square, invertible)
template <typename S>
std::vector<S> solve_linear(std::vector<std::vector<S>> A, std::vector<S> b) {
  const size_t m = A.size();
  for (size_t col = 0; col < m; ++col) {
    size_t piv = col;
    while (piv < m && A[piv][col] == S(0))
      ++piv;
    if (piv == m)
      throw std::logic_error("solve_linear: singular system");
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (size_t row = 0; row < m; ++row) {
      if (row == col || A[row][col] == S(0))
        continue;
      S f = A[row][col] / A[col][col];
      for (size_t j = col; j < m; ++j)
        A[row][j] -= f * A[col][j];
      b[row] -= f * b[col];
    }
  }
  std::vector<S> x(m);
  for (size_t i = 0; i < m; ++i)
    x[i] = b[i] / A[i][i];
  return x;
}

} // namespace detail

// Exact change of basis at fixed n. Works degree by degree from the top: the
// leading component of a shifted-elementary product equals the plain
// elementary one, so each step reduces to a homogeneous solve.
template <typename S>
BasicSymPoly<S> basis_convert(const BasicSymPoly<S> &p, SymBasis target) {
  BasicSymPoly<S> mono = to_monomial(p);
  if (target == SymBasis::Monomial)
    return mono;
  const long n = p.n;
  BasicSymPoly<S> out(n, target);
  detail::MonoMap<S> rem = mono.coeffs;
  long maxw = 0;
  for (auto &[lam, c] : rem)
    maxw = std::max(maxw, lam.weight());
  const SymBasis top_basis =
      (target == SymBasis::Complete) ? SymBasis::Complete : SymBasis::Elementary;
  for (long w = maxw; w >= 1; --w) {
    std::vector<Partition> coords = detail::partitions_of(w, w, n); // monomial keys
    std::vector<Partition> keys = detail::partitions_of(w, n, w);   // generator products
    if (coords.size() != keys.size())
      throw std::logic_error("basis_convert: dimension mismatch");
    std::map<Partition, size_t> coord_index;
    for (size_t i = 0; i < coords.size(); ++i)
      coord_index.emplace(coords[i], i);
    std::vector<std::vector<S>> A(coords.size(), std::vector<S>(keys.size(), S(0)));
    for (size_t j = 0; j < keys.size(); ++j)
      for (auto &[lam, c] : detail::expand_key<S>(top_basis, n, keys[j]))
        A[coord_index.at(lam)][j] = c;
    std::vector<S> b(coords.size(), S(0));
    bool any = false;
    for (auto &[lam, c] : rem)
      if (lam.weight() == w) {
        b[coord_index.at(lam)] = c;
        any = true;
      }
    if (!any)
      continue;
    auto x = detail::solve_linear(std::move(A), std::move(b));
    for (size_t j = 0; j < keys.size(); ++j) {
      if (x[j] == S(0))
        continue;
      out.add_term(keys[j], x[j]);
      for (auto &[lam, c] : detail::expand_key<S>(target, n, keys[j]))
        detail::mono_accumulate(rem, lam, S(-c * x[j]));
    }
  }
  // degree-zero remainder becomes the constant term
  auto it = rem.find(Partition{});
  if (it != rem.end()) {
    out.add_term(Partition{}, it->second);
    rem.erase(it);
  }
  if (!rem.empty())
    throw std::logic_error("basis_convert: residual terms after elimination");
  return out;
}

// M_{n,mu,nu} = [u^mu] m_nu h_{|mu|-|nu|}
inline Rational m_times_h_coeff(long n, const Partition &mu, const Partition &nu) {
  if (mu.length() > n || nu.length() > n)
    throw std::domain_error("m_times_h_coeff: more parts than variables");
  if (mu.weight() < nu.weight())
    throw std::domain_error("m_times_h_coeff: |mu| < |nu|");
  const long nu1 = nu.max_part();
  Rational val(1);
  for (long k = 0; k <= nu1; ++k) {
    long base = n;
    for (long i = 0; i < k; ++i)
      base -= mu.multiplicity(i, n);
    for (long j = k + 1; j <= nu1; ++j)
      base -= nu.multiplicity(j, n);
    val *= Rational(falling_factorial(Integer(base), nu.multiplicity(k, n)));
  }
  val /= Rational(nu.aut_factor(n));
  val.canonicalize();
  return val;
}

// sum of Euclidean quotients of the parts by r (including zero parts)
inline long quotient_sum(const Partition &p, long r) {
  long q = 0;
  for (long v : p.parts)
    q += v / r;
  return q;
}

// coefficient weight of the sine-weighted complete homogeneous polynomial:
// [u^k] h^{(r,alpha)}_D = prod_i sin(alpha k_i pi / r), exactly
inline Cyclotomic h_r_alpha(long D, long r, long alpha, const std::vector<long> &k) {
  if (alpha < 1 || alpha >= r)
    throw std::domain_error("h_r_alpha: invalid sector");
  if (D < 0)
    throw std::domain_error("h_r_alpha: negative degree");
  long total = 0;
  for (long ki : k) {
    if (ki < 0)
      throw std::domain_error("h_r_alpha: negative exponent");
    total += ki;
  }
  if (total != D)
    throw std::domain_error("h_r_alpha: exponents do not sum to the degree");
  Cyclotomic out(1);
  for (long ki : k)
    out = out * exact_sin(ki, r, alpha);
  return out;
}

// M^{(r,alpha)}_{n,mu,nu}(A): the joint-multiplicity falling-factorial product.
// A is aligned with the descending length-n padding of nu.
inline Rational weighted_m_times_h_coeff(long n, const Partition &mu, const Partition &nu, long r,
                                         long alpha, const std::vector<long> &A) {
  if (alpha < 1 || alpha >= r)
    throw std::domain_error("weighted_m_times_h_coeff: invalid sector");
  if (static_cast<long>(A.size()) != n)
    throw std::domain_error("weighted_m_times_h_coeff: offset tuple has wrong length");
  for (long s : A)
    if (s <= -r || s >= r)
      throw std::domain_error("weighted_m_times_h_coeff: offset out of range");
  auto nupad = partition_padded(nu, n);
  auto mupad = partition_padded(mu, n);
  const long nu1 = nu.max_part();
  auto joint = [&](long k, long s) {
    long c = 0;
    for (long i = 0; i < n; ++i)
      c += nupad[i] == k && A[i] == s;
    return c;
  };
  // A part of value k with offset s sits under an exponent m >= k whose
  // remainder mod r exceeds that of k by exactly s; larger parts j already
  // occupy the slots of that remainder class reachable with offset s+<k>-<j>.
  Rational val(1);
  for (long k = 0; k <= nu1; ++k)
    for (long s = -(r - 1); s <= r - 1; ++s) {
      const long pks = joint(k, s);
      if (pks == 0)
        continue;
      long base = 0;
      for (long m : mupad)
        base += m >= k && m % r - k % r == s;
      for (long j = k + 1; j <= nu1; ++j)
        base -= joint(j, s + k % r - j % r);
      val *= Rational(falling_factorial(Integer(base), pks));
    }
  val /= Rational(nu.aut_factor(n));
  val.canonicalize();
  return val;
}

// [u^mu] m_nu h^{(r,alpha)}_{|mu|-|nu|}, exactly, via the offset-tuple sum
inline Cyclotomic weighted_monomial_coeff(long n, const Partition &mu, const Partition &nu, long r,
                                          long alpha) {
  if (mu.weight() < nu.weight())
    throw std::domain_error("weighted_monomial_coeff: |mu| < |nu|");
  std::vector<long> A(n, 1 - r);
  Cyclotomic total(0);
  while (true) {
    bool all_nonzero = true;
    for (long s : A)
      all_nonzero = all_nonzero && s != 0;
    if (all_nonzero) {
      Rational m = weighted_m_times_h_coeff(n, mu, nu, r, alpha, A);
      if (m != 0) {
        Cyclotomic sines(m);
        for (long s : A)
          sines = sines * exact_sin(s, r, alpha);
        total = total + sines;
      }
    }
    long i = 0;
    while (i < n && A[i] == r - 1)
      A[i++] = 1 - r;
    if (i == n)
      break;
    ++A[i];
  }
  if ((alpha * (quotient_sum(mu, r) - quotient_sum(nu, r))) % 2 != 0)
    total = -total;
  return total;
}

} // namespace intnum
