#pragma once

#include <stdexcept>
#include <vector>

namespace intnum {

// Truncated formal series in hbar: coeffs[k] multiplies hbar^{offset+k}.
// known_through is the largest absolute hbar-power whose coefficient is
// trustworthy; operations never consult anything beyond it.
template <typename C> struct HbarSeries {
  long offset = 0;
  long known_through = -1; // empty series knows nothing
  std::vector<C> coeffs;

  HbarSeries() = default;
  HbarSeries(long offset_, std::vector<C> coeffs_)
      : offset(offset_), known_through(offset_ + static_cast<long>(coeffs_.size()) - 1),
        coeffs(std::move(coeffs_)) {}

  static HbarSeries constant(const C &value, long known) {
    if (known < 0)
      throw std::domain_error("HbarSeries::constant: negative truncation");
    HbarSeries s;
    s.offset = 0;
    s.known_through = known;
    s.coeffs.assign(known + 1, C());
    s.coeffs[0] = value;
    return s;
  }

  static HbarSeries zero(long known) {
    HbarSeries s;
    s.offset = 0;
    s.known_through = known;
    s.coeffs.assign(known + 1, C());
    return s;
  }

  const C &coeff(long m) const {
    if (m > known_through)
      throw std::domain_error("HbarSeries::coeff: beyond truncation order");
    static const C zero_value = C();
    if (m < offset)
      return zero_value;
    return coeffs[m - offset];
  }

  HbarSeries shifted(long m) const {
    HbarSeries s = *this;
    s.offset += m;
    s.known_through += m;
    return s;
  }

  HbarSeries truncated(long known) const {
    if (known > known_through)
      throw std::domain_error("HbarSeries::truncated: cannot extend knowledge");
    HbarSeries s;
    s.offset = offset;
    s.known_through = known;
    if (known >= offset)
      s.coeffs.assign(coeffs.begin(), coeffs.begin() + (known - offset + 1));
    else {
      s.offset = known;
      s.coeffs.assign(1, C());
    }
    return s;
  }

  // hbar -> -hbar
  HbarSeries parity_flipped() const {
    HbarSeries s = *this;
    for (size_t k = 0; k < s.coeffs.size(); ++k)
      if ((s.offset + static_cast<long>(k)) % 2 != 0)
        s.coeffs[k] = -s.coeffs[k];
    return s;
  }

  friend HbarSeries operator+(const HbarSeries &a, const HbarSeries &b) {
    HbarSeries s;
    s.offset = std::min(a.offset, b.offset);
    s.known_through = std::min(a.known_through, b.known_through);
    if (s.known_through < s.offset)
      s.offset = s.known_through;
    s.coeffs.assign(s.known_through - s.offset + 1, C());
    for (long m = s.offset; m <= s.known_through; ++m) {
      if (m >= a.offset && m <= a.known_through)
        s.coeffs[m - s.offset] = s.coeffs[m - s.offset] + a.coeffs[m - a.offset];
      if (m >= b.offset && m <= b.known_through)
        s.coeffs[m - s.offset] = s.coeffs[m - s.offset] + b.coeffs[m - b.offset];
    }
    return s;
  }

  friend HbarSeries operator-(const HbarSeries &a) {
    HbarSeries s = a;
    for (auto &c : s.coeffs)
      c = -c;
    return s;
  }

  friend HbarSeries operator-(const HbarSeries &a, const HbarSeries &b) { return a + (-b); }

  friend HbarSeries operator*(const HbarSeries &a, const HbarSeries &b) {
    HbarSeries s;
    s.offset = a.offset + b.offset;
    s.known_through = std::min(a.known_through + b.offset, b.known_through + a.offset);
    if (s.known_through < s.offset) {
      s.offset = s.known_through;
      s.coeffs.assign(1, C());
      return s;
    }
    s.coeffs.assign(s.known_through - s.offset + 1, C());
    for (size_t i = 0; i < a.coeffs.size(); ++i) {
      const long mi = a.offset + static_cast<long>(i);
      for (size_t j = 0; j < b.coeffs.size(); ++j) {
        const long m = mi + b.offset + static_cast<long>(j);
        if (m > s.known_through)
          break;
        s.coeffs[m - s.offset] = s.coeffs[m - s.offset] + a.coeffs[i] * b.coeffs[j];
      }
    }
    return s;
  }

  HbarSeries scaled(const C &factor) const {
    HbarSeries s = *this;
    for (auto &c : s.coeffs)
      c = c * factor;
    return s;
  }

  // Equality on the commonly known window (truncation-aware).
  friend bool agree(const HbarSeries &a, const HbarSeries &b) {
    const long hi = std::min(a.known_through, b.known_through);
    const long lo = std::min(a.offset, b.offset);
    for (long m = lo; m <= hi; ++m)
      if (!(a.coeff(m) == b.coeff(m)))
        return false;
    return true;
  }
};

template <typename C>
HbarSeries<C> series_mul(const HbarSeries<C> &a, const HbarSeries<C> &b) {
  return a * b;
}

} // namespace intnum
