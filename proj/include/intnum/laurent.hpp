#pragma once

#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

namespace intnum {

// Sentinel floor meaning "exact in this variable" (polynomial mode).
inline constexpr long kNoFloor = std::numeric_limits<long>::min() / 4;

// Sparse multivariate Laurent polynomial/series in z_1..z_n under the fixed
// expansion ordering |z_1| > |z_2| > ... > |z_n|. floors[v] is the lowest
// exponent of z_v whose coefficients are reliable; terms below it are dropped.
template <typename S> struct LaurentBlock {
  long nvars = 0;
  std::map<std::vector<int>, S> terms;
  std::vector<long> floors;

  LaurentBlock() = default;
  explicit LaurentBlock(long nvars_) : nvars(nvars_), floors(nvars_, kNoFloor) {}

  static LaurentBlock constant(long nvars, const S &value) {
    LaurentBlock b(nvars);
    b.add_term(std::vector<int>(nvars, 0), value);
    return b;
  }

  static LaurentBlock monomial(long nvars, std::vector<int> exps, const S &value) {
    LaurentBlock b(nvars);
    b.add_term(std::move(exps), value);
    return b;
  }

  bool reliable(const std::vector<int> &exps) const {
    for (long v = 0; v < nvars; ++v)
      if (exps[v] < floors[v])
        return false;
    return true;
  }

  void add_term(std::vector<int> exps, const S &value) {
    if (static_cast<long>(exps.size()) != nvars)
      throw std::invalid_argument("LaurentBlock::add_term: wrong arity");
    if (!reliable(exps))
      return;
    auto [it, inserted] = terms.emplace(std::move(exps), value);
    if (!inserted) {
      it->second = it->second + value;
      if (it->second == S())
        terms.erase(it);
    } else if (it->second == S()) {
      terms.erase(it);
    }
  }

  S coefficient(const std::vector<int> &exps) const {
    if (!reliable(exps))
      throw std::domain_error("LaurentBlock::coefficient: below reliability floor");
    auto it = terms.find(exps);
    return it == terms.end() ? S() : it->second;
  }

  bool is_zero() const { return terms.empty(); }

  long max_exponent(long v) const {
    long best = std::numeric_limits<long>::min();
    for (auto &[e, c] : terms)
      best = std::max(best, static_cast<long>(e[v]));
    return best;
  }

  long min_exponent(long v) const {
    long best = std::numeric_limits<long>::max();
    for (auto &[e, c] : terms)
      best = std::min(best, static_cast<long>(e[v]));
    return best;
  }

  // default-constructed blocks (nvars 0, no terms) act as a universal zero
  bool is_default_zero() const { return nvars == 0 && terms.empty(); }

  friend LaurentBlock operator+(const LaurentBlock &a, const LaurentBlock &b) {
    if (a.is_default_zero())
      return b;
    if (b.is_default_zero())
      return a;
    if (a.nvars != b.nvars)
      throw std::invalid_argument("LaurentBlock: arity mismatch");
    LaurentBlock c(a.nvars);
    for (long v = 0; v < a.nvars; ++v)
      c.floors[v] = std::max(a.floors[v], b.floors[v]);
    for (auto &[e, s] : a.terms)
      c.add_term(e, s);
    for (auto &[e, s] : b.terms)
      c.add_term(e, s);
    return c;
  }

  friend LaurentBlock operator-(const LaurentBlock &a) {
    LaurentBlock c = a;
    for (auto &[e, s] : c.terms)
      s = -s;
    return c;
  }

  friend LaurentBlock operator-(const LaurentBlock &a, const LaurentBlock &b) {
    return a + (-b);
  }

  friend LaurentBlock operator*(const LaurentBlock &a, const LaurentBlock &b) {
    if (a.is_default_zero() || b.is_default_zero())
      return LaurentBlock();
    if (a.nvars != b.nvars)
      throw std::invalid_argument("LaurentBlock: arity mismatch");
    LaurentBlock c(a.nvars);
    if (a.terms.empty() || b.terms.empty())
      return c;
    for (long v = 0; v < a.nvars; ++v) {
      long f = kNoFloor;
      if (a.floors[v] != kNoFloor)
        f = std::max(f, a.floors[v] + b.max_exponent(v));
      if (b.floors[v] != kNoFloor)
        f = std::max(f, b.floors[v] + a.max_exponent(v));
      c.floors[v] = f;
    }
    std::vector<int> e(a.nvars);
    for (auto &[ea, sa] : a.terms)
      for (auto &[eb, sb] : b.terms) {
        for (long v = 0; v < a.nvars; ++v)
          e[v] = ea[v] + eb[v];
        c.add_term(e, sa * sb);
      }
    return c;
  }

  LaurentBlock scaled(const S &factor) const {
    LaurentBlock c = *this;
    if (factor == S()) {
      c.terms.clear();
      return c;
    }
    for (auto &[e, s] : c.terms)
      s = s * factor;
    return c;
  }

  LaurentBlock shifted(const std::vector<int> &delta) const {
    LaurentBlock c(nvars);
    for (long v = 0; v < nvars; ++v)
      c.floors[v] = floors[v] == kNoFloor ? kNoFloor : floors[v] + delta[v];
    for (auto &[e, s] : terms) {
      std::vector<int> shifted_e = e;
      for (long v = 0; v < nvars; ++v)
        shifted_e[v] += delta[v];
      c.terms.emplace(std::move(shifted_e), s);
    }
    return c;
  }

  LaurentBlock permuted(const std::vector<long> &perm) const {
    LaurentBlock c(nvars);
    for (long v = 0; v < nvars; ++v)
      c.floors[perm[v]] = floors[v];
    for (auto &[e, s] : terms) {
      std::vector<int> pe(nvars);
      for (long v = 0; v < nvars; ++v)
        pe[perm[v]] = e[v];
      c.add_term(std::move(pe), s);
    }
    return c;
  }

  template <typename T, typename F> LaurentBlock<T> mapped(F &&f) const {
    LaurentBlock<T> c(nvars);
    c.floors = floors;
    for (auto &[e, s] : terms)
      c.add_term(e, f(s));
    return c;
  }

  S evaluate(const std::vector<S> &values) const {
    S total = S();
    for (auto &[e, s] : terms) {
      S term = s;
      for (long v = 0; v < nvars; ++v) {
        if (e[v] == 0)
          continue;
        S p = values[v];
        long k = e[v] < 0 ? -static_cast<long>(e[v]) : e[v];
        S acc(1);
        while (k > 0) {
          if (k & 1)
            acc = acc * p;
          p = p * p;
          k >>= 1;
        }
        if (e[v] < 0)
          acc = S(1) / acc;
        term = term * acc;
      }
      total = total + term;
    }
    return total;
  }

  // Structural equality of the stored terms (floors not compared); empty
  // blocks of any arity compare equal as zero.
  friend bool operator==(const LaurentBlock &a, const LaurentBlock &b) {
    if (a.terms.empty() && b.terms.empty())
      return true;
    return a.nvars == b.nvars && a.terms == b.terms;
  }
  friend bool operator!=(const LaurentBlock &a, const LaurentBlock &b) { return !(a == b); }

  // Truncation-aware equality: coefficients are compared only where both
  // blocks consider them reliable.
  friend bool agree(const LaurentBlock &a, const LaurentBlock &b) {
    if (a.is_default_zero())
      return b.terms.empty();
    if (b.is_default_zero())
      return a.terms.empty();
    if (a.nvars != b.nvars)
      throw std::invalid_argument("LaurentBlock: arity mismatch");
    for (auto &[e, s] : a.terms)
      if (b.reliable(e) && !(b.coefficient(e) == s))
        return false;
    for (auto &[e, s] : b.terms)
      if (a.reliable(e) && !(a.coefficient(e) == s))
        return false;
    return true;
  }

  // Substitute variable `from` into variable `to` (exponents add). Only valid
  // once the block is certified polynomial in the merged variables: the
  // caller must ensure every true term was stored. Floors of the merged
  // variables are cleared.
  LaurentBlock substituted(long from, long to) const {
    LaurentBlock c(nvars);
    c.floors = floors;
    c.floors[from] = kNoFloor;
    c.floors[to] = kNoFloor;
    for (auto &[e, s] : terms) {
      std::vector<int> me = e;
      me[to] += me[from];
      me[from] = 0;
      c.add_term(std::move(me), s);
    }
    return c;
  }
};

// Expansion of 1/(z_i^p - z_j^p) in the global ordering (variables indexed
// from 0): for i < j the series is sum_{k<depth} z_i^{-p(k+1)} z_j^{pk};
// for i > j it is the negated expansion with the roles of i, j swapped.
template <typename S>
LaurentBlock<S> invert_difference(long nvars, long i, long j, long depth, long power = 1) {
  if (i == j)
    throw std::domain_error("invert_difference: equal variable indices");
  const bool flip = i > j;
  const long lo = flip ? j : i, hi = flip ? i : j;
  LaurentBlock<S> b(nvars);
  std::vector<int> e(nvars, 0);
  for (long k = 0; k < depth; ++k) {
    e[lo] = static_cast<int>(-power * (k + 1));
    e[hi] = static_cast<int>(power * k);
    b.add_term(e, flip ? S(-1) : S(1));
  }
  b.floors[lo] = -power * depth; // next dropped term sits at -power*(depth+1)
  return b;
}

} // namespace intnum
