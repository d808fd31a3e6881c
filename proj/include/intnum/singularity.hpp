#pragma once

#include "cyclotomic.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace intnum {

// One Borel singularity: its action A, Stokes constant S, the exponent data
// beta0/beta_i, and the one-instanton minor coefficients phi^{(i)}_k.
struct SingularityDatum {
  Cyclotomic action;
  Cyclotomic stokes;
  long beta0 = 0;
  long beta_i = 0;
  std::vector<Cyclotomic> minor_coeffs;
};

// Large-order prediction for the m-th series coefficient:
//   sum_i (S_i/2pi) Gamma(m+b0-b_i)/A_i^{m+b0-b_i}
//         * sum_{k<=K} A_i^k phi^{(i)}_k / falling(m+b0-b_i-1, k).
// The Gamma/power ratio is assembled in log-space so m can reach the
// thousands without overflow.
inline std::complex<long double> large_order_eval(const std::vector<SingularityDatum> &data,
                                                  long m, long K) {
  if (data.empty())
    throw std::domain_error("large_order_eval: empty singularity list");
  const long double two_pi = 2.0L * 3.141592653589793238462643383279502884L;
  std::complex<long double> total = 0;
  for (const auto &d : data) {
    const long M = m + d.beta0 - d.beta_i;
    if (M - 1 < K)
      throw std::domain_error("large_order_eval: order too small for requested K");
    if (static_cast<long>(d.minor_coeffs.size()) < K + 1)
      throw std::domain_error("large_order_eval: not enough minor coefficients");
    const std::complex<long double> A = cyclo_embed(d.action);
    if (std::abs(A) == 0.0L)
      throw std::domain_error("large_order_eval: vanishing action");
    const std::complex<long double> log_leading =
        lgammal(static_cast<long double>(M)) -
        static_cast<long double>(M) * std::log(A);
    std::complex<long double> inner = 0, A_pow = 1;
    long double falling = 1;
    for (long k = 0; k <= K; ++k) {
      if (k > 0) {
        A_pow *= A;
        falling *= static_cast<long double>(M - k);
      }
      inner += A_pow * cyclo_embed(d.minor_coeffs[k]) / falling;
    }
    total += cyclo_embed(d.stokes) / two_pi * std::exp(log_leading) * inner;
  }
  return total;
}

// Gevrey-2 entry point: genus-indexed coefficients sit at series order m = 2g.
inline std::complex<long double> large_order_eval_genus(const std::vector<SingularityDatum> &data,
                                                        long g, long K) {
  return large_order_eval(data, 2 * g, K);
}

} // namespace intnum
