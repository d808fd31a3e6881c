#pragma once

#include "correlators.hpp"
#include "symfun.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

namespace intnum {

// ------------------------------------------------------------------------
// Subleading polynomial extraction.
//
// In w = x^{1/(2r)} the hbar^k part of a one-instanton minor factors as a
// model constant, a power of the x's, the root-difference denominator, and a
// symmetric polynomial in the ratios u_j = (w_i/w_j)^2. Clearing everything
// but the polynomial and decoding the remaining w-exponents recovers it; all
// structural expectations (balance, parity, per-variable degree) are checked
// and any violation aborts the pipeline.

namespace detail {

// expected model constant multiplying the cleared minor, to divide out
template <typename S> S subleading_scale(const KernelModelData &d, long k, long n, long alpha) {
  if (d.model.kind != WaveKind::RAiry)
    return scalar_from_rational<S>(Rational(-pow_int(Rational(2), k + 2)));
  const long r = d.r;
  Cyclotomic c = Cyclotomic::zeta(4, ((alpha - r) % 4 + 4) % 4) *
                 Cyclotomic::zeta(2 * r, ((-alpha) % (2 * r) + 2 * r) % (2 * r)) *
                 Cyclotomic(pow_int(Rational(r), n));
  const Cyclotomic om = Cyclotomic(1) - Cyclotomic::zeta(r, alpha);
  for (long t = 0; t < n - 2; ++t)
    c = c / om;
  for (long t = 0; t < 2 - n; ++t) // n = 1: the factor moves to the numerator
    c = c * om;
  if (n % 2 == 0)
    c = -c;
  return scalar_from_cyclotomic<S>(c);
}

} // namespace detail

// P_{k,n-1} / Q_{k,n-1} / R^{(alpha)}_{k,n-1} extracted from the n-point
// minor; r = 2 results are in squared variables (entries count u^2 powers).
template <typename S = Rational>
BasicSymPoly<S> subleading_poly(const WaveModel &model, long k, long n, long alpha = 1) {
  if (k < 0 || n < 1)
    throw std::domain_error("subleading_poly: need k >= 0, n >= 1");
  const KernelModelData probe = KernelModelData::make(model, 0);
  const long r = probe.r, drop = probe.drop;
  const bool squared = model.kind != WaveKind::RAiry;
  const long step = squared ? 4 : 2; // w-exponent per unit partition entry
  if (n == 1) {
    auto ms = minor_series<S>(model, alpha, 0, 1, k, 0);
    const auto &block = ms.data.coeff(k);
    const std::vector<int> e0(1, static_cast<int>(-2 * r - drop * k));
    if (!block.reliable(e0))
      throw std::runtime_error("subleading_poly: one-point series too shallow");
    for (auto &[e, c] : block.terms)
      if (e != e0)
        throw std::logic_error("subleading_poly: unexpected one-point term");
    S v = block.coefficient(e0) * detail::subleading_scale<S>(probe, k, 1, alpha);
    BasicSymPoly<S> out(0, SymBasis::Monomial);
    if (!(v == S(0)))
      out.add_term(Partition{}, v);
    return out;
  }
  // the decode only needs exponents down to -drop*k - guard, whatever n is;
  // cost grows steeply with depth, so start at the minimum and let the
  // floors check drive retries
  const long guard = 4 * r;
  long depth = (drop * k + guard) / (2 * r) + 2;
  // prune raw-minor exponents that cannot reach the decode window even after
  // the clearing factors and shift; the headroom keeps genuine violations of
  // the structural checks visible
  const long head = 8;
  const long dv = squared ? 2 : 2 * (r - 1);
  const long d0 = dv + (squared ? -(2 * n - 4) : -2 * (n - 2)) + drop * k;
  std::vector<long> caps(n, head - dv);
  caps[0] = drop * k * (n - 1) - d0 + head;
  for (int attempt = 0; attempt < 6; ++attempt, depth *= 2) {
    auto ms = minor_series<S>(model, alpha, 0, n, k, depth, false, caps);
    LaurentBlock<S> block = ms.data.coeff(k);
    for (long j = 1; j < n; ++j) {
      std::vector<int> ei(n, 0), ej(n, 0);
      if (squared) {
        ei[0] = 4;
        ej[j] = 4;
        block = block * (LaurentBlock<S>::monomial(n, ei, S(1)) -
                         LaurentBlock<S>::monomial(n, ej, S(1)));
      } else {
        ei[0] = 2;
        ej[j] = 2;
        auto za = scalar_from_cyclotomic<S>(Cyclotomic::zeta(r, alpha));
        block = block * (LaurentBlock<S>::monomial(n, ei, S(1)) -
                         LaurentBlock<S>::monomial(n, ej, S(1)));
        block = block * (LaurentBlock<S>::monomial(n, ei, za) -
                         LaurentBlock<S>::monomial(n, ej, S(1)));
      }
    }
    std::vector<int> delta(n, squared ? 2 : static_cast<int>(2 * (r - 1)));
    delta[0] += static_cast<int>(squared ? -(2 * n - 4) + drop * k : -2 * (n - 2) + drop * k);
    block = block.shifted(delta).scaled(detail::subleading_scale<S>(probe, k, n, alpha));
    bool deep_enough = true;
    for (long v = 0; v < n; ++v) {
      const long need = (v == 0 ? 0 : -drop * k) - guard;
      if (block.floors[v] != kNoFloor && block.floors[v] > need)
        deep_enough = false;
    }
    if (!deep_enough)
      continue;
    BasicSymPoly<S> out(n - 1, SymBasis::Monomial);
    std::map<Partition, S> seen;
    for (auto &[e, c] : block.terms) {
      // terms above the pruning ceiling are telescoping boundary artifacts of
      // the capped tails; exponents in (0, head] stay fully verified below
      bool artifact = e[0] > caps[0] + d0;
      for (long v = 1; v < n; ++v)
        if (e[v] > head)
          artifact = true;
      if (artifact)
        continue;
      long balance = 0;
      std::vector<long> entries;
      for (long v = 1; v < n; ++v) {
        const long ev = e[v];
        if (ev > 0 || ev < -drop * k || (-ev) % step != 0)
          throw std::logic_error("subleading_poly: non-polynomial remainder");
        balance += ev;
        if (ev != 0)
          entries.push_back(-ev / step);
      }
      if (e[0] != -balance)
        throw std::logic_error("subleading_poly: unbalanced exponents");
      Partition key(std::move(entries));
      auto [it, inserted] = seen.emplace(key, c);
      if (!inserted) {
        if (!(it->second == c))
          throw std::logic_error("subleading_poly: asymmetric coefficients");
        continue;
      }
      out.add_term(key, c);
    }
    return out;
  }
  throw std::runtime_error("subleading_poly: truncation depth insufficient");
}

// ------------------------------------------------------------------------
// Family extension: in the elementary basis shifted by -1 the expansions
// stop changing once the variable count passes the degree bound, which
// determines the polynomial for every larger variable count.

template <typename S> struct SubleadingFamilyT {
  WaveModel model;
  long k = 0;
  long alpha = 1;
  long n_stable = 0;                  // members with more variables share stable_hat
  std::vector<BasicSymPoly<S>> seeds; // seeds[m]: the m-variable member, monomial basis
  std::map<Partition, S> stable_hat;  // shifted-elementary coefficients
  // monomial coefficient of each key as a polynomial in the variable count
  // (ascending powers); filled for rational-coefficient models only
  std::map<Partition, std::vector<Rational>> closed_form;

  BasicSymPoly<S> member(long m) const {
    if (m < 0)
      throw std::domain_error("SubleadingFamily::member: negative variable count");
    if (m <= n_stable)
      return seeds[m];
    BasicSymPoly<S> hat(m, SymBasis::ShiftedElemMinus);
    hat.coeffs = stable_hat;
    return to_monomial(hat);
  }
};
using SubleadingFamily = SubleadingFamilyT<Rational>;

namespace detail {

inline std::vector<Rational> interpolate_in_n(const std::vector<std::pair<long, Rational>> &pts) {
  const size_t m = pts.size();
  std::vector<std::vector<Rational>> A(m, std::vector<Rational>(m, Rational(0)));
  std::vector<Rational> b(m);
  for (size_t i = 0; i < m; ++i) {
    Rational x(pts[i].first), p(1);
    for (size_t j = 0; j < m; ++j) {
      A[i][j] = p;
      p *= x;
    }
    b[i] = pts[i].second;
  }
  auto sol = solve_linear(std::move(A), std::move(b));
  while (!sol.empty() && sol.back() == 0)
    sol.pop_back();
  return sol;
}

inline Rational eval_in_n(const std::vector<Rational> &c, long n) {
  Rational v(0);
  for (size_t j = c.size(); j-- > 0;)
    v = Rational(v * Rational(n) + c[j]);
  return v;
}

template <typename S> S coeff_or_zero(const BasicSymPoly<S> &p, const Partition &key) {
  auto it = p.coeffs.find(key);
  return it == p.coeffs.end() ? S(0) : it->second;
}

} // namespace detail

template <typename S = Rational>
SubleadingFamilyT<S> extend_family(const WaveModel &model, long k, long alpha = 1) {
  SubleadingFamilyT<S> fam;
  fam.model = model;
  fam.k = k;
  fam.alpha = alpha;
  const KernelModelData probe = KernelModelData::make(model, 0);
  // total-weight bound of the k-th row, which is also where the
  // shifted-elementary coefficients stop depending on the variable count
  const long W = model.kind == WaveKind::Airy    ? 2 * k
                 : model.kind == WaveKind::Bessel ? std::max<long>(k - 1, 0)
                                                  : probe.drop * k / 2;
  const long degmax = W;
  std::vector<std::map<Partition, S>> hats;
  std::vector<BasicSymPoly<S>> monos;
  long stable = -1;
  for (long m = 0; stable < 0; ++m) {
    if (m > W + 1)
      throw std::runtime_error("extend_family: no stabilization within the degree bound");
    auto p = subleading_poly<S>(model, k, m + 1, alpha);
    monos.push_back(p);
    hats.push_back(m == 0 ? p.coeffs : basis_convert(p, SymBasis::ShiftedElemMinus).coeffs);
    if (m >= 1 && hats[m] == hats[m - 1]) {
      stable = m - 1;
      break;
    }
    // At the weight bound, equality with the next member is certified without
    // computing its minor: merging two points (last ratio variable set to 1)
    // must reproduce the current member, and that map is injective on
    // polynomials of weight <= W in at least W variables.
    if (m == W && model.kind != WaveKind::RAiry) {
      BasicSymPoly<S> cand(m + 1, SymBasis::ShiftedElemMinus);
      cand.coeffs = hats[m];
      if (specialize_last(to_monomial(cand), S(1)) == monos[m])
        stable = m;
      else
        throw std::logic_error("extend_family: merge identity fails at the weight bound");
    }
  }
  fam.n_stable = stable;
  fam.stable_hat = hats[stable];
  fam.seeds.assign(monos.begin(), monos.begin() + stable + 1);
  if constexpr (std::is_same_v<S, Rational>) {
    const long M0 = std::max<long>({fam.n_stable, degmax, 1});
    const long npts = degmax + 3;
    std::vector<std::pair<long, BasicSymPoly<S>>> evals;
    for (long t = 0; t < npts; ++t)
      evals.emplace_back(M0 + t, fam.member(M0 + t));
    std::set<Partition> support;
    for (auto &[m, poly] : evals)
      for (auto &[nu, c] : poly.coeffs)
        support.insert(nu);
    for (auto &seed : fam.seeds)
      for (auto &[nu, c] : seed.coeffs)
        support.insert(nu);
    for (auto &nu : support) {
      const long dn = std::max<long>(degmax - nu.weight(), 0);
      std::vector<std::pair<long, Rational>> pts;
      for (long t = 0; t <= dn; ++t)
        pts.emplace_back(evals[t].first, detail::coeff_or_zero(evals[t].second, nu));
      auto poly = detail::interpolate_in_n(pts);
      for (long t = dn + 1; t < npts; ++t)
        if (detail::eval_in_n(poly, evals[t].first) != detail::coeff_or_zero(evals[t].second, nu))
          throw std::logic_error("extend_family: coefficient not polynomial in the variable count");
      for (long m = nu.length(); m <= fam.n_stable; ++m)
        if (detail::eval_in_n(poly, m) != detail::coeff_or_zero(fam.seeds[m], nu))
          throw std::logic_error("extend_family: closed form disagrees with a seed");
      fam.closed_form.emplace(nu, std::move(poly));
    }
  }
  return fam;
}

// ------------------------------------------------------------------------
// Correction coefficients: contract a family member against the covering
// counts determined by the exponent multiplicities.

// k-th correction for the r = 2 models at point count n with multiplicities
// p[m] = #{i : d_i = m}; unlisted exponents are implicitly large.
inline Rational correction_from_member(const SymPoly &mem, long n, const std::vector<long> &p) {
  if (mem.n != n)
    throw std::domain_error("correction_from_member: variable count mismatch");
  long used = 0;
  for (long v : p) {
    if (v < 0)
      throw std::domain_error("correction_from_member: negative multiplicity");
    used += v;
  }
  if (used > n)
    throw std::domain_error("correction_from_member: multiplicities exceed the point count");
  long big = static_cast<long>(p.size()) + 1;
  for (auto &[nu, c] : mem.coeffs)
    big = std::max(big, nu.max_part() + 1);
  std::vector<long> parts;
  for (size_t m = 1; m < p.size(); ++m)
    parts.insert(parts.end(), p[m], static_cast<long>(m));
  const long p0 = p.empty() ? 0 : p[0];
  parts.insert(parts.end(), n - used, big);
  Partition mu(std::move(parts));
  if (mu.length() != n - p0)
    throw std::logic_error("correction_from_member: inconsistent multiplicities");
  Rational out(0);
  for (auto &[nu, c] : mem.coeffs) {
    if (nu.weight() > mu.weight())
      continue;
    out += c * m_times_h_coeff(n, mu, nu);
  }
  out.canonicalize();
  return out;
}

// k-th correction of the r-spin sector alpha at exponents (d, a); the
// conjugate sector is already folded in.
inline Cyclotomic rspin_correction_from_member(const BasicSymPoly<Cyclotomic> &mem, long r,
                                               long alpha, long k, const std::vector<long> &d,
                                               const std::vector<long> &a) {
  const long n = static_cast<long>(d.size());
  if (mem.n != n || static_cast<long>(a.size()) != n)
    throw std::domain_error("rspin_correction_from_member: arity mismatch");
  long dsum = 0;
  std::vector<long> muv;
  for (long i = 0; i < n; ++i) {
    if (a[i] < 1 || a[i] >= r || d[i] < 0)
      throw std::domain_error("rspin_correction_from_member: exponent out of range");
    muv.push_back(r * d[i] + a[i]);
    dsum += d[i];
  }
  Partition mu(std::move(muv));
  Cyclotomic total(0);
  for (auto &[nu, c] : mem.coeffs) {
    if (nu.weight() > mu.weight())
      continue;
    Cyclotomic cbar =
        c * Cyclotomic::zeta(4, ((-k) % 4 + 4) % 4) *
        Cyclotomic::zeta(2 * r, ((-alpha * (nu.weight() - k)) % (2 * r) + 2 * r) % (2 * r));
    total = total + cbar * weighted_monomial_coeff(n, mu, nu, r, alpha);
  }
  total = total / exact_sin(1, r, alpha);
  if (((dsum + (alpha - 1) * n) % 2 + 2) % 2 == 1)
    total = -total;
  return total;
}

// ------------------------------------------------------------------------
// Floating asymptotic estimates with log-space gamma handling.

struct SectorEstimate {
  long alpha = 1;
  long double weight = 1;     // 1, or 1/2 for the self-conjugate sector
  long double correction = 0; // contribution relative to exp(log_scale)
};

struct AsymptoticEstimate {
  long double log_scale = 0; // log of the positive overall prefactor
  long double correction = 1;
  std::vector<SectorEstimate> sectors; // r-spin only
  long double value() const { return std::exp(log_scale) * correction; }
};

namespace detail {

inline long double embed_real(const Cyclotomic &c) {
  auto z = cyclo_embed(c);
  if (std::fabs(static_cast<double>(z.imag())) >
      1e-9 * (1 + std::fabs(static_cast<double>(z.real()))))
    throw std::runtime_error("asymptotic_estimate: correction coefficient is not real");
  return z.real();
}

inline std::vector<long> exponent_multiplicities(const std::vector<long> &d) {
  long top = 0;
  for (long v : d)
    top = std::max(top, v);
  std::vector<long> p(top + 1, 0);
  for (long v : d)
    ++p[v];
  return p;
}

} // namespace detail

// Cached per-(model, k, sector) families; evaluation is pure.
class AsymptoticContext {
public:
  const SubleadingFamily &family(const WaveModel &model, long k) {
    auto key = std::make_pair(static_cast<int>(model.kind), k);
    auto it = families_.find(key);
    if (it == families_.end())
      it = families_.emplace(key, extend_family<Rational>(model, k)).first;
    return it->second;
  }

  const SubleadingFamilyT<Cyclotomic> &rspin_family(long r, long k, long alpha) {
    auto key = std::make_tuple(r, k, alpha);
    auto it = rspin_families_.find(key);
    if (it == rspin_families_.end())
      it = rspin_families_
               .emplace(key, extend_family<Cyclotomic>(WaveModel::rairy(r), k, alpha))
               .first;
    return it->second;
  }

  // the nvars-variable member: small counts directly, larger via the family
  const SymPoly &member(const WaveModel &model, long k, long nvars) {
    auto key = std::make_tuple(static_cast<int>(model.kind), k, nvars);
    auto it = members_.find(key);
    if (it != members_.end())
      return it->second;
    SymPoly p = nvars <= 2 ? subleading_poly<Rational>(model, k, nvars + 1)
                           : family(model, k).member(nvars);
    return members_.emplace(key, std::move(p)).first->second;
  }

  const BasicSymPoly<Cyclotomic> &rspin_member(long r, long k, long alpha, long nvars) {
    auto key = std::make_tuple(r, k, alpha, nvars);
    auto it = rspin_members_.find(key);
    if (it != rspin_members_.end())
      return it->second;
    BasicSymPoly<Cyclotomic> p =
        nvars <= 2 ? subleading_poly<Cyclotomic>(WaveModel::rairy(r), k, nvars + 1, alpha)
                   : rspin_family(r, k, alpha).member(nvars);
    return rspin_members_.emplace(key, std::move(p)).first->second;
  }

  Rational correction_coeff(const WaveModel &model, long k, long n, const std::vector<long> &p) {
    return correction_from_member(member(model, k, n), n, p);
  }

  Cyclotomic rspin_correction_coeff(long r, long alpha, long k, const std::vector<long> &d,
                                    const std::vector<long> &a) {
    return rspin_correction_from_member(rspin_member(r, k, alpha, static_cast<long>(d.size())), r,
                                        alpha, k, d, a);
  }

  AsymptoticEstimate estimate(const WaveModel &model, long g, const std::vector<long> &d,
                              const std::vector<long> &a, long K) {
    const long n = static_cast<long>(d.size());
    const long T = 2 * g - 2 + n;
    if (T <= 0 || n < 1 || K < 0)
      throw std::domain_error("asymptotic_estimate: invalid arguments");
    const long double pi = std::numbers::pi_v<long double>;
    auto fall = [&](long k) {
      long double f = 1;
      for (long t = 0; t < k; ++t)
        f *= static_cast<long double>(T - 1 - t);
      return f;
    };
    AsymptoticEstimate est;
    long dsum = 0;
    for (long v : d) {
      if (v < 0)
        throw std::domain_error("asymptotic_estimate: negative exponent");
      dsum += v;
    }
    if (model.kind != WaveKind::RAiry) {
      if (!a.empty())
        throw std::domain_error("asymptotic_estimate: spin indices need the r-spin model");
      const long target = model.kind == WaveKind::Airy ? 3 * g - 3 + n : g - 1;
      if (dsum != target)
        throw std::domain_error("asymptotic_estimate: degree constraint violated");
      const bool airy = model.kind == WaveKind::Airy;
      est.log_scale = n * std::log(2.0L) - std::log((airy ? 4 : 2) * pi) +
                      std::lgamma(static_cast<long double>(T)) +
                      T * (airy ? std::log(1.5L) : -std::log(2.0L));
      const long double base = airy ? 2.0L / 3 : 2.0L;
      const auto p = detail::exponent_multiplicities(d);
      long double sum = 0, bk = 1;
      for (long k = 0; k <= K; ++k) {
        sum += bk * static_cast<long double>(correction_coeff(model, k, n, p).get_d()) / fall(k);
        bk *= base;
      }
      est.correction = sum;
      return est;
    }
    const long r = model.r_eff;
    long asum = 0;
    for (long v : a) {
      if (v < 1 || v >= r)
        throw std::domain_error("asymptotic_estimate: spin index out of range");
      asum += v;
    }
    if (static_cast<long>(a.size()) != n || r * dsum + asum != (r + 1) * T)
      throw std::domain_error("asymptotic_estimate: degree constraint violated");
    auto kappa = [&](long alpha) {
      return (2.0L * r / (r + 1)) * std::sin(alpha * pi / r);
    };
    est.log_scale = n * std::log(2.0L) - std::log(2 * pi) +
                    std::lgamma(static_cast<long double>(T)) -
                    (g - 1 - dsum) * std::log(static_cast<long double>(r)) -
                    T * std::log(kappa(1));
    long double total = 0;
    for (long alpha = 1; 2 * alpha <= r; ++alpha) {
      SectorEstimate sec;
      sec.alpha = alpha;
      sec.weight = 2 * alpha == r ? 0.5L : 1.0L;
      const long double ka = kappa(alpha);
      long double sum = 0, bk = 1;
      for (long k = 0; k <= K; ++k) {
        sum += bk * detail::embed_real(rspin_correction_coeff(r, alpha, k, d, a)) / fall(k);
        bk *= ka;
      }
      sec.correction = sec.weight * std::exp(T * (std::log(kappa(1)) - std::log(ka))) * sum;
      est.sectors.push_back(sec);
      total += sec.correction;
    }
    est.correction = total;
    return est;
  }

private:
  std::map<std::pair<int, long>, SubleadingFamily> families_;
  std::map<std::tuple<long, long, long>, SubleadingFamilyT<Cyclotomic>> rspin_families_;
  std::map<std::tuple<int, long, long>, SymPoly> members_;
  std::map<std::tuple<long, long, long, long>, BasicSymPoly<Cyclotomic>> rspin_members_;
};

} // namespace intnum
