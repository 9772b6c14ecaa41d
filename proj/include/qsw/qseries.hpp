#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "qsw/core.hpp"
#include "qsw/logreal.hpp"

namespace qsw {

/// Pass as n to request the infinite product (z; q)_inf.
inline constexpr long kInfinite = -1;

namespace detail {

/// (z; base)_n = prod_{k=1}^{n} (1 - z base^{k-1}) as a LogReal; n < 0
/// requests the infinite product, truncated once |z| base^{k-1} < eps.
/// The neglected tail then multiplies the result by 1 + O(eps/(1-base)).
inline LogReal pochhammer_log(double z, double base, long n, double eps, int max_terms) {
  if (n == 0 || z == 0.0) return LogReal::one();
  int sign = 1;
  CompensatedSum logmag;
  double zq = z;
  long k = 0;
  while (true) {
    if (n >= 0) {
      if (k >= n) break;
    } else {
      if (std::abs(zq) < eps) break;
      if (k >= max_terms) break;
    }
    const double f = 1.0 - zq;
    if (f == 0.0) return LogReal();  // a vanishing factor makes the product exactly 0
    if (f < 0.0) sign = -sign;
    logmag.add(std::abs(zq) < 0.5 ? std::log1p(-zq) : std::log(std::abs(f)));
    zq *= base;
    ++k;
  }
  return LogReal::from_log(sign, logmag.value());
}

}  // namespace detail

/// q-shifted factorial (z; q)_n with q taken from params; n = kInfinite
/// gives the infinite product. Returned as a LogReal so large |z| stays
/// representable.
inline LogReal qpochhammer(double z, const QParams& params, long n) {
  if (n < 0 && n != kInfinite)
    throw std::invalid_argument("qpochhammer: n must be nonnegative or kInfinite");
  return detail::pochhammer_log(z, params.q, n, params.eps, params.max_terms);
}

inline LogReal qpochhammer_inf(double z, const QParams& params) {
  return qpochhammer(z, params, kInfinite);
}

/// Gaussian q-binomial coefficient (q;q)_n / ((q;q)_k (q;q)_{n-k}),
/// computed as a product of factor ratios; symmetric in k <-> n-k.
inline double qbinomial(int n, int k, double q) {
  if (n < 0 || k < 0 || k > n)
    throw std::invalid_argument("qbinomial: require 0 <= k <= n");
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("qbinomial: require 0 < q < 1");
  k = std::min(k, n - k);
  double result = 1.0;
  double qhi = std::pow(q, n - k);  // q^{n-k+i} / q^i tracked incrementally
  double qlo = 1.0;
  for (int i = 1; i <= k; ++i) {
    qhi *= q;
    qlo *= q;
    result *= (1.0 - qhi) / (1.0 - qlo);
  }
  return result;
}

/// Difference of infinite products (p q^n; q)_inf - (q^n; q)_inf.
/// Both factors tend to 1, so the direct difference loses all digits once
/// q^n is small; instead the products are expanded over a matched factor
/// count K and telescoped,
///   prod a_i - prod b_i = sum_j (prod_{i<j} a_i) (a_j - b_j) (prod_{i>j} b_i),
/// where a_j - b_j = (1-p) q^{n+j-1} exactly. Every summand is positive,
/// which preserves the leading (1-p)/(1-q) q^n behaviour to full relative
/// accuracy.
inline double delta(const QParams& params, int n) {
  if (n < 0) throw std::invalid_argument("delta: n must be nonnegative");
  const double p = params.p, q = params.q;
  int K = static_cast<int>(std::ceil(std::log(params.eps) / std::log(q))) + 4;
  K = std::min(std::max(K, 4), params.max_terms);

  // suffix[j] = prod_{i=j}^{K} (1 - q^{n+i-1})
  std::vector<double> suffix(static_cast<size_t>(K) + 2, 1.0);
  {
    double qpow = std::pow(q, n + K - 1);
    for (int i = K; i >= 1; --i) {
      suffix[i] = suffix[i + 1] * (1.0 - qpow);
      qpow /= q;
    }
  }
  CompensatedSum sum;
  double prefix = 1.0;  // prod_{i<j} (1 - p q^{n+i-1})
  double qj = 1.0;      // q^{j-1}
  double qnj = std::pow(q, n);
  for (int j = 1; j <= K; ++j) {
    sum.add(prefix * qj * suffix[j + 1]);
    prefix *= 1.0 - p * qnj;
    qj *= q;
    qnj *= q;
  }
  return (1.0 - p) * std::pow(q, n) * sum.value();
}

/// Theta-type sum psi(q) = sum_{n>=0} q^{n(n+1)/2}.
inline double psi(double q, double eps = 1e-15) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("psi: require 0 < q < 1");
  CompensatedSum sum;
  double term = 1.0;  // q^{n(n+1)/2}
  double step = 1.0;  // q^{n+1} multiplier between triangular exponents
  for (int n = 0; n < 10000; ++n) {
    sum.add(term);
    if (term < 0.01 * eps * sum.value()) break;
    step *= q;
    term *= step;
  }
  return sum.value();
}

/// The same theta sum as the product (q^2; q^2)_inf / (q; q^2)_inf;
/// independent route used to cross-check psi().
inline double psi_product_form(double q, double eps = 1e-15) {
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("psi_product_form: require 0 < q < 1");
  const LogReal num = detail::pochhammer_log(q * q, q * q, kInfinite, 0.01 * eps, 100000);
  const LogReal den = detail::pochhammer_log(q, q * q, kInfinite, 0.01 * eps, 100000);
  return (num / den).to_double();
}

}  // namespace qsw
