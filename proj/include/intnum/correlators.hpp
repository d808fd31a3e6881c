#pragma once

#include "cyclotomic.hpp"
#include "hbar_series.hpp"
#include "laurent.hpp"
#include "rational.hpp"
#include "wavefunctions.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace intnum {

template <typename S> S scalar_from_rational(const Rational &q);
template <> inline Rational scalar_from_rational<Rational>(const Rational &q) { return q; }
template <> inline Cyclotomic scalar_from_rational<Cyclotomic>(const Rational &q) {
  return Cyclotomic(q);
}

template <typename S> S scalar_from_cyclotomic(const Cyclotomic &c);
template <> inline Rational scalar_from_cyclotomic<Rational>(const Cyclotomic &c) {
  if (!c.is_rational())
    throw std::domain_error("scalar_from_cyclotomic: value is not rational");
  return c.rational_value();
}
template <> inline Cyclotomic scalar_from_cyclotomic<Cyclotomic>(const Cyclotomic &c) { return c; }

template <typename S> Rational scalar_to_rational(const S &s);
template <> inline Rational scalar_to_rational<Rational>(const Rational &s) { return s; }
template <> inline Rational scalar_to_rational<Cyclotomic>(const Cyclotomic &s) {
  if (!s.is_rational())
    throw std::domain_error("scalar_to_rational: value is not rational");
  return s.rational_value();
}

// Uniform description of the three models for kernel assembly. All variables
// are w_i = x_i^{1/(2r)}, so every exponent is an integer:
//   component m of sector alpha (alpha = r is the perturbative sector) is
//     phase(alpha, m) * w^{2m-(r-1)} * sum_k seq[k][m] (zeta^-alpha base)^k hbar^k w^{-drop*k}.
struct KernelModelData {
  WaveModel model;
  long r = 2;            // matrix rank
  long drop = 6;         // w-exponent drop per hbar power
  Rational base;         // rational part of the hbar bookkeeping factor
  bool trace_inv_x = false; // one-point trace carries an extra 1/x (Bessel)
  std::vector<std::vector<Rational>> seq; // seq[k][m], k <= order
  long order = 0;

  static KernelModelData make(const WaveModel &model, long order) {
    KernelModelData d;
    d.model = model;
    d.order = order;
    switch (model.kind) {
    case WaveKind::Airy: {
      auto w = airy_coeffs(order);
      d.r = 2;
      d.drop = 6;
      d.base = make_rational(3, 2);
      for (long k = 0; k <= order; ++k)
        d.seq.push_back({w.psi[k], w.dpsi[k]});
      break;
    }
    case WaveKind::Bessel: {
      auto w = bessel_coeffs(order);
      d.r = 2;
      d.drop = 2;
      d.base = make_rational(1, 2);
      d.trace_inv_x = true;
      for (long k = 0; k <= order; ++k)
        d.seq.push_back({w.psi[k], w.dpsi[k]});
      break;
    }
    case WaveKind::RAiry: {
      auto w = rairy_coeffs(model.r_eff, order);
      d.r = model.r_eff;
      d.drop = 2 * (d.r + 1);
      d.base = make_rational(d.r + 1, d.r);
      d.seq = w.a;
      break;
    }
    }
    return d;
  }
};

// phase(alpha, m) = i^(r-alpha+2) zeta_{2r}^{alpha(2m+1)}
inline Cyclotomic sector_phase(long r, long alpha, long m) {
  return Cyclotomic::zeta(4, ((r - alpha + 2) % 4 + 4) % 4) *
         Cyclotomic::zeta(2 * r, ((alpha * (2 * m + 1)) % (2 * r) + 2 * r) % (2 * r));
}

// Scaled wave-function component (the 1/sqrt(r) factors are accounted for by
// the 1/r prefactor of each kernel). `dual` flips the sign of hbar.
template <typename S>
HbarSeries<LaurentBlock<S>> wave_component(const KernelModelData &d, long alpha, long m, long var,
                                           long nvars, long order, bool dual) {
  if (order > d.order)
    throw std::domain_error("wave_component: coefficient table too short");
  const long r = d.r;
  S acc = scalar_from_cyclotomic<S>(sector_phase(r, alpha, m));
  S mult = scalar_from_rational<S>(dual ? -d.base : d.base) *
           scalar_from_cyclotomic<S>(Cyclotomic::zeta(r, ((-alpha) % r + r) % r));
  std::vector<LaurentBlock<S>> coeffs;
  std::vector<int> e(nvars, 0);
  for (long k = 0; k <= order; ++k) {
    e[var] = static_cast<int>(2 * m - (r - 1) - d.drop * k);
    coeffs.push_back(LaurentBlock<S>::monomial(nvars, e, acc * scalar_from_rational<S>(d.seq[k][m])));
    acc = acc * mult;
  }
  return HbarSeries<LaurentBlock<S>>(0, std::move(coeffs));
}

namespace detail {

template <typename S>
HbarSeries<LaurentBlock<S>> series_scale_block(const HbarSeries<LaurentBlock<S>> &s,
                                               const LaurentBlock<S> &b) {
  HbarSeries<LaurentBlock<S>> out = s;
  for (auto &c : out.coeffs)
    c = c * b;
  return out;
}

template <typename S>
HbarSeries<LaurentBlock<S>> series_scale(const HbarSeries<LaurentBlock<S>> &s, const S &f) {
  HbarSeries<LaurentBlock<S>> out = s;
  for (auto &c : out.coeffs)
    c = c.scaled(f);
  return out;
}

} // namespace detail

// K_{+alpha,-}(x_i, x_j): alpha = r gives the perturbative kernel K_{+,-}.
template <typename S>
HbarSeries<LaurentBlock<S>> kernel_block(const KernelModelData &d, long alpha, long i, long j,
                                         long nvars, long order, long depth) {
  if (i == j)
    throw std::domain_error("kernel_block: coincident variables");
  const long r = d.r;
  HbarSeries<LaurentBlock<S>> sum;
  for (long m = 0; m < r; ++m) {
    auto px = wave_component<S>(d, alpha, m, i, nvars, order, false);
    auto py = wave_component<S>(d, r, r - 1 - m, j, nvars, order, true);
    auto term = px * py;
    sum = m == 0 ? term : sum + term;
  }
  auto inv = invert_difference<S>(nvars, i, j, depth, 2 * r);
  return detail::series_scale(detail::series_scale_block(sum, inv),
                              scalar_from_rational<S>(make_rational(1, r)));
}

// The dual kernel K_{-alpha,+}(x,y;hbar) = -K_{+alpha,-}(x,y;-hbar).
template <typename S>
HbarSeries<LaurentBlock<S>> kernel_block_dual(const KernelModelData &d, long alpha, long i, long j,
                                              long nvars, long order, long depth) {
  return -kernel_block<S>(d, alpha, i, j, nvars, order, depth).parity_flipped();
}

// One-point correlator (alpha = r) or one-instanton minor (alpha < r):
//   (1/(r hbar)) [ sum_{m=0}^{r-2} dual^{(r-1-m)} psi_alpha^{(m+1)}
//                  + x dual^{(0)} psi_alpha^{(0)} ]   (times 1/x for Bessel)
template <typename S>
HbarSeries<LaurentBlock<S>> one_point_series(const KernelModelData &d, long alpha, long order,
                                             long nvars = 1, long var = 0) {
  const long r = d.r;
  HbarSeries<LaurentBlock<S>> sum;
  for (long m = 0; m <= r - 2; ++m) {
    auto term = wave_component<S>(d, r, r - 1 - m, var, nvars, order, true) *
                wave_component<S>(d, alpha, m + 1, var, nvars, order, false);
    sum = m == 0 ? term : sum + term;
  }
  std::vector<int> e(nvars, 0);
  e[var] = static_cast<int>(2 * r);
  auto x_mono = LaurentBlock<S>::monomial(nvars, e, S(1));
  auto lead = detail::series_scale_block(wave_component<S>(d, r, 0, var, nvars, order, true) *
                                             wave_component<S>(d, alpha, 0, var, nvars, order, false),
                                         x_mono);
  sum = r == 1 ? lead : sum + lead;
  if (d.trace_inv_x) {
    e[var] = static_cast<int>(-2 * r);
    sum = detail::series_scale_block(sum, LaurentBlock<S>::monomial(nvars, e, S(1)));
  }
  return detail::series_scale(sum, scalar_from_rational<S>(make_rational(1, r))).shifted(-1);
}

namespace detail {

// Visit all permutations of [n] consisting of a single n-cycle; cb receives
// sigma as a lookup table.
template <typename F> void for_each_full_cycle(long n, F &&cb) {
  std::vector<long> rest;
  for (long v = 1; v < n; ++v)
    rest.push_back(v);
  std::vector<long> sigma(n);
  do {
    long prev = 0;
    for (long v : rest) {
      sigma[prev] = v;
      prev = v;
    }
    sigma[prev] = 0;
    cb(sigma);
  } while (std::next_permutation(rest.begin(), rest.end()));
}

} // namespace detail

namespace detail {

// Drop terms whose exponent in `var` exceeds `cap`; floors are unaffected
// since only high terms are removed.
template <typename S>
void cap_variable(HbarSeries<LaurentBlock<S>> &series, long var, long cap) {
  for (auto &block : series.coeffs)
    for (auto it = block.terms.begin(); it != block.terms.end();)
      it = it->first[var] > cap ? block.terms.erase(it) : std::next(it);
}

} // namespace detail

// n-point correlator W_n, n >= 2, as an hbar-series of Laurent blocks.
// special < 0: perturbative. special = i with sector alpha: the one-instanton
// minor W^{(+alpha,i)}_n. slot[i] gives the ordering position of marked point
// i (identity by default). caps[v], if given, bounds the useful exponent of
// variable v: once every kernel involving a marked point has entered a cycle
// product, higher exponents of its variable can no longer cancel down into
// the window of interest and are pruned.
template <typename S>
HbarSeries<LaurentBlock<S>> npoint_series(const KernelModelData &d, long n, long order, long depth,
                                          long special = -1, long alpha = 0,
                                          std::vector<long> slot = {},
                                          const std::vector<long> &caps = {}) {
  if (n < 2)
    throw std::domain_error("npoint_series: need n >= 2");
  if (slot.empty())
    for (long v = 0; v < n; ++v)
      slot.push_back(v);
  std::map<std::pair<long, long>, HbarSeries<LaurentBlock<S>>> pert, inst;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      if (i == j)
        continue;
      // Deeper truncation for kernels expanded around later variables: their
      // reliability floor must clear the positive tails fed in by the kernels
      // expanded around earlier variables.
      const long kernel_depth = depth * (std::min(slot[i], slot[j]) + 1);
      if (i != special)
        pert.emplace(std::make_pair(i, j),
                     kernel_block<S>(d, d.r, slot[i], slot[j], n, order, kernel_depth));
      else
        inst.emplace(std::make_pair(i, j),
                     kernel_block<S>(d, alpha, slot[i], slot[j], n, order, kernel_depth));
    }
  HbarSeries<LaurentBlock<S>> total;
  bool first = true;
  detail::for_each_full_cycle(n, [&](const std::vector<long> &sigma) {
    // multiply along the cycle path so each point's two kernels enter
    // consecutively, which lets its variable be pruned right away
    HbarSeries<LaurentBlock<S>> prod;
    long at = 0;
    for (long t = 0; t < n; ++t) {
      auto &k = at == special ? inst.at({at, sigma[at]}) : pert.at({at, sigma[at]});
      prod = t == 0 ? k : prod * k;
      if (!caps.empty() && t >= 1)
        detail::cap_variable(prod, slot[at], caps[slot[at]]);
      at = sigma[at];
    }
    if (!caps.empty())
      detail::cap_variable(prod, slot[0], caps[slot[0]]);
    total = first ? prod : total + prod;
    first = false;
  });
  if (n % 2 == 0)
    total = -total;
  return total;
}

// ------------------------------------------------------------------------
// Intersection-number extraction

struct CorrelatorPoly {
  WaveKind kind = WaveKind::Airy;
  long r = 2;
  long g = 0;
  long n = 0;
  // key: (d, a); a is empty except for the RAiry model
  std::map<std::pair<std::vector<long>, std::vector<long>>, Rational> coeffs;
};

namespace detail {

// decode a single w-exponent into (d, a); returns false if outside support
inline bool decode_exponent(WaveKind kind, long r, long e, long &d_out, long &a_out) {
  if (kind != WaveKind::RAiry) {
    // e = -4d - 6
    if (e > -6 || (e + 6) % 4 != 0)
      return false;
    d_out = (-e - 6) / 4;
    a_out = 0;
    return true;
  }
  // e = -2rd - 2a - 2r with a in 1..r-1
  long t = -e - 2 * r;
  if (t <= 0 || t % 2 != 0)
    return false;
  t /= 2; // t = rd + a
  long a = (t - 1) % r + 1;
  if (a < 1 || a > r - 1)
    return false;
  d_out = (t - a) / r;
  a_out = a;
  return d_out >= 0;
}

template <typename S>
CorrelatorPoly parse_correlator_block(const WaveModel &model, long g, long n,
                                      const LaurentBlock<S> &block,
                                      const std::vector<long> &slot) {
  CorrelatorPoly poly;
  poly.kind = model.kind;
  poly.r = model.kind == WaveKind::RAiry ? model.r_eff : 2;
  poly.g = g;
  poly.n = n;
  const long T = 2 * g - 2 + n;
  const long degree_target = model.kind == WaveKind::Airy    ? 3 * g - 3 + n
                             : model.kind == WaveKind::Bessel ? g - 1
                                                              : 0;
  for (auto &[e, c] : block.terms) {
    std::vector<long> d(n), a;
    if (model.kind == WaveKind::RAiry)
      a.resize(n);
    long dsum = 0;
    for (long i = 0; i < n; ++i) {
      long ai = 0;
      if (!decode_exponent(model.kind, poly.r, e[slot[i]], d[i], ai))
        throw std::logic_error("correlator: coefficient outside expected support");
      if (model.kind == WaveKind::RAiry)
        a[i] = ai;
      dsum += d[i];
    }
    Rational value;
    if (model.kind != WaveKind::RAiry) {
      if (dsum != degree_target)
        throw std::logic_error("correlator: degree constraint violated");
      Rational norm = pow_int(Rational(-2), T) * pow_int(Rational(2), n);
      for (long i = 0; i < n; ++i)
        norm /= Rational(double_factorial(2 * d[i] + 1));
      value = scalar_to_rational<S>(c) * norm;
    } else {
      long asum = 0;
      for (long ai : a)
        asum += ai;
      if (poly.r * dsum + asum != (poly.r + 1) * T)
        throw std::logic_error("correlator: degree constraint violated");
      Rational norm = pow_int(Rational(poly.r), n) / pow_int(Rational(-poly.r), g - 1 - dsum);
      for (long i = 0; i < n; ++i)
        norm /= Rational(r_factorial(poly.r * d[i] + a[i], poly.r));
      value = scalar_to_rational<S>(c) * norm;
    }
    poly.coeffs[{std::move(d), std::move(a)}] = value;
  }
  return poly;
}

template <typename S>
CorrelatorPoly correlator_impl(const WaveModel &model, long g, long n,
                               const std::vector<long> &ordering) {
  const long T = 2 * g - 2 + n;
  if (T <= 0)
    throw std::domain_error("correlator: 2g-2+n must be positive");
  // order T+1 so the 1/hbar in the one-point trace still leaves hbar^T known
  KernelModelData data = KernelModelData::make(model, T + 1);
  std::vector<long> slot = ordering;
  if (slot.empty())
    for (long v = 0; v < n; ++v)
      slot.push_back(v);
  // deepest expected w-exponent (one variable carrying the whole degree)
  long e_min = 0;
  if (model.kind == WaveKind::Airy)
    e_min = -4 * (3 * g - 3 + n) - 6;
  else if (model.kind == WaveKind::Bessel)
    e_min = -4 * (g - 1) - 6;
  else {
    const long dmax = ((data.r + 1) * T - n) / data.r;
    e_min = -2 * data.r * dmax - 2 * (data.r - 1) - 2 * data.r;
  }
  const long guard = 4 * data.r;
  if (n == 1) {
    auto series = one_point_series<S>(data, data.r, T + 1);
    return parse_correlator_block<S>(model, g, n, series.coeff(T), slot);
  }
  long depth = (-e_min + guard) / (2 * data.r) + 4;
  for (int attempt = 0; attempt < 6; ++attempt) {
    auto series = npoint_series<S>(data, n, T, depth, -1, 0, slot);
    const auto &block = series.coeff(T);
    bool deep_enough = true;
    for (long v = 0; v < n; ++v)
      if (block.floors[v] != kNoFloor && block.floors[v] > e_min - guard)
        deep_enough = false;
    if (deep_enough)
      return parse_correlator_block<S>(model, g, n, block, slot);
    depth *= 2;
  }
  throw std::runtime_error("correlator: truncation depth insufficient");
}

} // namespace detail

inline CorrelatorPoly correlator(const WaveModel &model, long g, long n,
                                 const std::vector<long> &ordering = {}) {
  if (model.kind == WaveKind::RAiry && model.r_eff > 2)
    return detail::correlator_impl<Cyclotomic>(model, g, n, ordering);
  return detail::correlator_impl<Rational>(model, g, n, ordering);
}

inline Rational extract_intersection(const CorrelatorPoly &poly, const std::vector<long> &d,
                                     const std::vector<long> &a = {}) {
  if (static_cast<long>(d.size()) != poly.n)
    throw std::domain_error("extract_intersection: wrong number of indices");
  long dsum = 0;
  for (long di : d)
    dsum += di;
  if (poly.kind == WaveKind::RAiry) {
    if (static_cast<long>(a.size()) != poly.n)
      throw std::domain_error("extract_intersection: wrong number of spin indices");
    long asum = 0;
    for (long ai : a) {
      if (ai < 1 || ai > poly.r - 1)
        throw std::domain_error("extract_intersection: spin index out of range");
      asum += ai;
    }
    if (poly.r * dsum + asum != (poly.r + 1) * (2 * poly.g - 2 + poly.n))
      throw std::domain_error("extract_intersection: degree constraint violated");
  } else {
    if (!a.empty())
      throw std::domain_error("extract_intersection: spin indices only valid for the r-spin model");
    const long target = poly.kind == WaveKind::Airy ? 3 * poly.g - 3 + poly.n : poly.g - 1;
    if (dsum != target)
      throw std::domain_error("extract_intersection: degree constraint violated");
  }
  auto it = poly.coeffs.find({d, a});
  return it == poly.coeffs.end() ? Rational(0) : it->second;
}

// ------------------------------------------------------------------------
// One-instanton minors and trans-series sectors

template <typename S> struct MinorSeries {
  WaveModel model;
  long n = 1;
  long special = 0; // marked point carrying the instanton
  long alpha = 0;   // sector (r-1 >= alpha >= 1; r for r=2 models means alpha=1)
  bool minus = false;
  HbarSeries<LaurentBlock<S>> data;
};

// W^{(+alpha,i)}_n (or W^{(-alpha,i)}_n = (-1)^n W^{(+alpha,i)}_n(-hbar)).
template <typename S>
MinorSeries<S> minor_series(const WaveModel &model, long alpha, long i, long n, long order,
                            long depth, bool minus = false,
                            const std::vector<long> &caps = {}) {
  KernelModelData data = KernelModelData::make(model, order + 1);
  if (i < 0 || i >= n)
    throw std::domain_error("minor_series: special index out of range");
  if (alpha < 1 || alpha >= data.r)
    throw std::domain_error("minor_series: invalid sector");
  MinorSeries<S> m;
  m.model = model;
  m.n = n;
  m.special = i;
  m.alpha = alpha;
  m.minus = minus;
  m.data = n == 1 ? one_point_series<S>(data, alpha, order + 1)
                  : npoint_series<S>(data, n, order, depth, i, alpha, {}, caps);
  if (minus) {
    m.data = m.data.parity_flipped();
    if (n % 2)
      m.data = -m.data;
  }
  return m;
}

template <typename S>
HbarSeries<LaurentBlock<S>> transseries_sector(const WaveModel &model,
                                               const std::vector<long> &i_plus,
                                               const std::vector<long> &i_minus, long n, long order,
                                               long depth) {
  if (i_plus.size() + i_minus.size() > 1)
    throw std::runtime_error("transseries_sector: multi-instanton sectors unsupported");
  KernelModelData data = KernelModelData::make(model, order + 1);
  if (i_plus.empty() && i_minus.empty())
    return n == 1 ? one_point_series<S>(data, data.r, order + 1)
                  : npoint_series<S>(data, n, order, depth);
  const bool minus = i_plus.empty();
  const long i = minus ? i_minus[0] : i_plus[0];
  return minor_series<S>(model, 1, i, n, order, depth, minus).data;
}

// ------------------------------------------------------------------------
// ODE verification for the one-point correlator (Airy):
//   W1''' - 4x W1' + 2 hbar W1 = 0 with f' = hbar d/dx f.
inline bool ode_check_w1(long order, bool perturb = false) {
  KernelModelData data = KernelModelData::make(WaveModel::airy(), order + 3);
  auto w1 = one_point_series<Rational>(data, 2, order + 3);
  if (perturb) {
    auto c = w1.coeffs[3 - w1.offset];
    c.add_term({-3}, Rational(1));
    w1.coeffs[3 - w1.offset] = c;
  }
  auto deriv = [](const HbarSeries<LaurentBlock<Rational>> &s) {
    HbarSeries<LaurentBlock<Rational>> out = s;
    for (auto &block : out.coeffs) {
      LaurentBlock<Rational> nb(block.nvars ? block.nvars : 1);
      if (block.nvars)
        nb.floors = block.floors;
      for (auto &[e, c] : block.terms)
        nb.add_term({e[0] - 4}, c * make_rational(e[0], 4));
      block = nb;
    }
    return out.shifted(1); // the hbar of hbar d/dx
  };
  auto x_times = [](const HbarSeries<LaurentBlock<Rational>> &s) {
    return detail::series_scale_block(s, LaurentBlock<Rational>::monomial(1, {4}, Rational(1)));
  };
  auto residual = deriv(deriv(deriv(w1))) -
                  detail::series_scale(x_times(deriv(w1)), Rational(4)) +
                  detail::series_scale(w1.shifted(1), Rational(2));
  for (long t = residual.offset; t <= residual.known_through && t <= order; ++t)
    if (!residual.coeff(t).is_zero())
      return false;
  return true;
}

} // namespace intnum
