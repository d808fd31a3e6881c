#pragma once

#include "cyclotomic.hpp"
#include "hbar_series.hpp"
#include "rational.hpp"

#include <numeric>
#include <stdexcept>
#include <vector>

namespace intnum {

enum class WaveKind { Airy, Bessel, RAiry };

// Model constants: action prefactors A (of the monomial in x), Stokes
// constants S, and the x-power appearing in the action.
struct WaveModel {
  WaveKind kind = WaveKind::Airy;
  long r_eff = 2;
  Rational exponent;                // power of x in A(x)
  std::vector<Cyclotomic> actions;  // prefactors, paired +/-
  std::vector<Cyclotomic> stokes;   // matching Stokes constants

  static WaveModel airy() {
    WaveModel m;
    m.kind = WaveKind::Airy;
    m.r_eff = 2;
    m.exponent = make_rational(3, 2);
    m.actions = {Cyclotomic(make_rational(4, 3)), Cyclotomic(make_rational(-4, 3))};
    m.stokes = {Cyclotomic(1), Cyclotomic(1)};
    return m;
  }

  static WaveModel bessel() {
    WaveModel m;
    m.kind = WaveKind::Bessel;
    m.r_eff = 2;
    m.exponent = make_rational(1, 2);
    m.actions = {Cyclotomic(4), Cyclotomic(-4)};
    m.stokes = {Cyclotomic(2), Cyclotomic(2)};
    return m;
  }

  // Sectors alpha = 1..r-1, each with both signs of the action
  // A = (r/(r+1))(1 - zeta^alpha); S carried as i^(alpha-r+1) so that
  // half-integer powers of -1 stay exact (branch fixed empirically against
  // low-genus data; see README).
  static WaveModel rairy(long r) {
    if (r < 2)
      throw std::domain_error("WaveModel::rairy: r must be >= 2");
    WaveModel m;
    m.kind = WaveKind::RAiry;
    m.r_eff = r;
    m.exponent = make_rational(r + 1, r);
    const Cyclotomic pref(make_rational(r, r + 1));
    for (long alpha = 1; alpha < r; ++alpha) {
      Cyclotomic a = pref * (Cyclotomic(1) - Cyclotomic::zeta(r, alpha));
      Cyclotomic s = Cyclotomic::zeta(4, ((alpha - r + 1) % 4 + 4) % 4);
      m.actions.push_back(a);
      m.stokes.push_back(s);
      m.actions.push_back(-a);
      m.stokes.push_back(s);
    }
    return m;
  }
};

struct WaveCoefficients {
  WaveModel model;
  long order = 0;
  std::vector<Rational> psi;               // Airy/Bessel: tilde-psi sequence
  std::vector<Rational> dpsi;              // Airy/Bessel: tilde-psi' sequence
  std::vector<std::vector<Rational>> a;    // RAiry: a[k][m], m = 0..r-1
};

// c_k = (6k)!/(864^k (2k)!(3k)!) via the ratio (6k-1)(6k-5)/(72k);
// derivative sequence d_k = c_k (1+6k)/(1-6k).
inline WaveCoefficients airy_coeffs(long order) {
  if (order < 0)
    throw std::domain_error("airy_coeffs: negative order");
  WaveCoefficients w;
  w.model = WaveModel::airy();
  w.order = order;
  w.psi.push_back(1);
  w.dpsi.push_back(1);
  for (long k = 1; k <= order; ++k) {
    w.psi.push_back(w.psi.back() * make_rational((6 * k - 1) * (6 * k - 5), 72 * k));
    w.dpsi.push_back(w.psi.back() * make_rational(1 + 6 * k, 1 - 6 * k));
  }
  return w;
}

// c_k = ((1/2)^rising(k))^2/(2^k k!) via the ratio (2k-1)^2/(8k); derivative
// sequence from the gauge-transformed system: c'_k = c_k - ((2k-1)/2) c_{k-1}.
inline WaveCoefficients bessel_coeffs(long order) {
  if (order < 0)
    throw std::domain_error("bessel_coeffs: negative order");
  WaveCoefficients w;
  w.model = WaveModel::bessel();
  w.order = order;
  w.psi.push_back(1);
  w.dpsi.push_back(1);
  for (long k = 1; k <= order; ++k) {
    w.psi.push_back(w.psi.back() * make_rational((2 * k - 1) * (2 * k - 1), 8 * k));
    w.dpsi.push_back(w.psi[k] - make_rational(2 * k - 1, 2) * w.psi[k - 1]);
  }
  return w;
}

// a_k^{(m)} = a_k^{(m-1)} - (k - 1/2 - m/(r+1)) a_{k-1}^{(m-1)}, a_0^{(m)} = 1.
// The recursion leaves a_k^{(0)} free; it is fixed by the next-level closure
// sum_{m=1}^{r} (k + 1/2 - m/(r+1)) a_k^{(m-1)} = 0, whose a_k^{(0)}
// coefficient sums to rk != 0. This choice makes a_k^{(r)} = a_k^{(0)} hold
// automatically at every level.
inline WaveCoefficients rairy_coeffs(long r, long order) {
  if (r < 2)
    throw std::domain_error("rairy_coeffs: r must be >= 2");
  if (order < 0)
    throw std::domain_error("rairy_coeffs: negative order");
  WaveCoefficients w;
  w.model = WaveModel::rairy(r);
  w.order = order;
  w.a.assign(order + 1, std::vector<Rational>(r, Rational(1)));
  for (long k = 1; k <= order; ++k) {
    // a_k^{(m)} = t + b_m with t = a_k^{(0)} unknown
    std::vector<Rational> b(r + 1, Rational(0));
    for (long m = 1; m <= r; ++m)
      b[m] = b[m - 1] -
             (Rational(k) - make_rational(1, 2) - make_rational(m, r + 1)) * w.a[k - 1][m - 1];
    Rational rhs(0);
    for (long m = 1; m <= r; ++m)
      rhs += (Rational(k) + make_rational(1, 2) - make_rational(m, r + 1)) * b[m - 1];
    Rational t = -rhs / Rational(r * k);
    for (long m = 0; m < r; ++m)
      w.a[k][m] = t + b[m];
    if (!(t + b[r] == t))
      throw std::logic_error("rairy_coeffs: cyclic closure violated");
  }
  return w;
}

namespace detail {

inline HbarSeries<Rational> sequence_series(const std::vector<Rational> &seq, bool alternate) {
  std::vector<Rational> coeffs = seq;
  if (alternate)
    for (size_t k = 1; k < coeffs.size(); k += 2)
      coeffs[k] = -coeffs[k];
  return HbarSeries<Rational>(0, std::move(coeffs));
}

template <typename C>
HbarSeries<C> series_determinant(std::vector<std::vector<HbarSeries<C>>> m) {
  const size_t n = m.size();
  if (n == 1)
    return m[0][0];
  // Leibniz expansion by the first row (matrices here are at most 5x5)
  HbarSeries<C> det;
  bool first = true;
  for (size_t j = 0; j < n; ++j) {
    std::vector<std::vector<HbarSeries<C>>> minor_m;
    for (size_t i = 1; i < n; ++i) {
      std::vector<HbarSeries<C>> row;
      for (size_t jj = 0; jj < n; ++jj)
        if (jj != j)
          row.push_back(m[i][jj]);
      minor_m.push_back(std::move(row));
    }
    HbarSeries<C> term = m[0][j] * series_determinant(std::move(minor_m));
    if (j % 2)
      term = -term;
    det = first ? term : det + term;
    first = false;
  }
  return det;
}

} // namespace detail

// True iff the wave matrix has the documented unit determinant through the
// requested series order. Airy/Bessel: the 2x2 determinant (x-powers cancel)
// must equal 1 exactly. RAiry: the r x r cyclotomic determinant with all
// phase prefactors (the 1/sqrt(r) factors stripped) must be constant in the
// series variable with square r^r and positive real embedding.
inline bool wronskian_check(const WaveModel &model, long order) {
  if (order < 1)
    throw std::domain_error("wronskian_check: order must be >= 1");
  if (model.kind != WaveKind::RAiry) {
    WaveCoefficients w =
        model.kind == WaveKind::Airy ? airy_coeffs(order) : bessel_coeffs(order);
    // plus-sector series argument is +t for Airy, -t for Bessel
    auto Cp = detail::sequence_series(w.psi, model.kind == WaveKind::Bessel);
    auto Cm = Cp.parity_flipped();
    auto Dp = detail::sequence_series(w.dpsi, model.kind == WaveKind::Bessel);
    auto Dm = Dp.parity_flipped();
    auto wr = (Cm * Dp + Cp * Dm).scaled(make_rational(1, 2));
    return agree(wr, HbarSeries<Rational>::constant(Rational(1), order));
  }
  const long r = model.r_eff;
  WaveCoefficients w = rairy_coeffs(r, order);
  const long field = std::lcm(2 * r, 4L);
  std::vector<std::vector<HbarSeries<Cyclotomic>>> m(
      r, std::vector<HbarSeries<Cyclotomic>>(r));
  for (long row = 0; row < r; ++row)    // derivative order m
    for (long col = 1; col <= r; ++col) // sector alpha
    {
      const long alpha = col;
      Cyclotomic phase = Cyclotomic::zeta(4, ((r - alpha + 2) % 4 + 4) % 4) *
                         Cyclotomic::zeta(2 * r, alpha * (2 * row + 1));
      std::vector<Cyclotomic> coeffs;
      for (long k = 0; k <= order; ++k)
        coeffs.push_back(phase.to_order(field) *
                         Cyclotomic::zeta(r, ((-alpha * k) % r + r) % r) *
                         Cyclotomic(w.a[k][row]));
      m[row][col - 1] = HbarSeries<Cyclotomic>(0, std::move(coeffs));
    }
  auto det = detail::series_determinant(std::move(m));
  Cyclotomic leading = det.coeff(0);
  if (!agree(det, HbarSeries<Cyclotomic>::constant(leading, order)))
    return false;
  Cyclotomic squared = leading * leading;
  if (!squared.is_rational() || !(squared.rational_value() == pow_int(Rational(r), r)))
    return false;
  auto emb = cyclo_embed(leading);
  return emb.real() > 0;
}

} // namespace intnum
