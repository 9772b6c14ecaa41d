#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qsw/core.hpp"
#include "qsw/gsw.hpp"
#include "qsw/logreal.hpp"
#include "qsw/polynomial.hpp"
#include "qsw/qseries.hpp"
#include "qsw/recurrence.hpp"

namespace qsw {

/// The modified moment sequence: identical to the Stieltjes-Wigert one
/// except at order 0, where the mass
///   c = (q;q)_inf / (sqrt(q) (pq;q)_inf)
/// has been removed, leaving s~_0 = q^{-1/2} Delta_1 / (pq;q)_inf.
struct ModifiedMoments {
  MomentSequence moments;
  double mass_at_zero = 0.0;  // the removed atom c
};

inline ModifiedMoments modified_moments(const QParams& params, int count) {
  ModifiedMoments result;
  result.moments = gsw_moments(params, count);
  result.moments.source = MomentSequence::Source::modified;
  const LogReal pq_inf = qpochhammer_inf(params.p * params.q, params);
  const LogReal q_inf = qpochhammer_inf(params.q, params);
  const double lq = params.log_q();
  result.mass_at_zero =
      (q_inf / (pq_inf * LogReal::from_log(1, 0.5 * lq))).to_double();
  if (count > 0) {
    // s~_0 via the cancellation-safe Delta_1
    result.moments.values[0] = LogReal::from_log(
        1, std::log(delta(params, 1)) - pq_inf.logmag() - 0.5 * lq);
  }
  return result;
}

namespace detail {

/// The bracket 1 - ((1-q^k)/(1-p q^k)) (q^{n+1};q)_inf / (p q^{n+1};q)_inf
/// assembled from positive pieces,
///   [(1-p q^k) Delta_{n+1} + (1-p) q^k (q^{n+1};q)_inf]
///     / ((1-p q^k)(p q^{n+1};q)_inf),
/// which keeps ~1e-13 relative accuracy where the textbook form cancels.
inline double modified_bracket(const QParams& params, int n, int k) {
  const double p = params.p, q = params.q;
  const double qk = std::pow(q, k);
  const double d = delta(params, n + 1);
  const double qn1_inf = qpochhammer_inf(std::pow(q, n + 1), params).to_double();
  const double pqn1_inf = qpochhammer_inf(p * std::pow(q, n + 1), params).to_double();
  return ((1.0 - p * qk) * d + (1.0 - p) * qk * qn1_inf) / ((1.0 - p * qk) * pqn1_inf);
}

}  // namespace detail

/// Coefficient b~_{k,n} of the modified orthonormal polynomial, computed
/// along two routes: the direct closed form with its normalizer C~_n, and
/// the ratio route that multiplies the plain coefficient b_{k,n} by the
/// bracketed product difference. Returns {direct, ratio_route}.
inline std::pair<double, double> modified_coeff_both(const QParams& params, int n, int k) {
  if (n < 0 || k < 0 || k > n)
    throw std::invalid_argument("modified_coeff: require 0 <= k <= n");
  const double p = params.p, q = params.q, lq = params.log_q();
  const double dn = delta(params, n);
  const double dn1 = delta(params, n + 1);
  const LogReal pqn1_inf = qpochhammer_inf(p * std::pow(q, n + 1), params);

  // direct route: C~_n (-1)^k [n k]_q q^{k^2+k/2} / (p;q)_k * bracket
  const LogReal cn = LogReal::from_log(
      n % 2 == 0 ? 1 : -1,
      (0.5 * n + 0.25) * lq +
          0.5 * (qpochhammer(p, params, n + 1).logmag() -
                 qpochhammer(q, params, n).logmag()) +
          pqn1_inf.logmag() - 0.5 * (std::log(dn) + std::log(dn1)));
  const LogReal body = LogReal::from_log(
      k % 2 == 0 ? 1 : -1, std::log(qbinomial(n, k, q)) + (k * static_cast<double>(k) + 0.5 * k) * lq -
                               qpochhammer(p, params, k).logmag());
  const double direct = (cn * body * LogReal::from_double(detail::modified_bracket(params, n, k)))
                            .to_double();

  // ratio route: b_{k,n} times the literal product difference
  const double b_kn = gsw_orthonormal(params, n).coeff(k);
  const double qn1_inf = qpochhammer_inf(std::pow(q, n + 1), params).to_double();
  const double qk = std::pow(q, k);
  const double literal = pqn1_inf.to_double() - (1.0 - qk) / (1.0 - p * qk) * qn1_inf;
  const double ratio_route =
      b_kn * literal * std::sqrt((1.0 - p * std::pow(q, n)) / (dn * dn1));
  return {direct, ratio_route};
}

/// b~_{k,n} itself; the two routes are required to agree to 1e-11
/// relative (loosened by the condition of the literal difference when
/// q^k is tiny).
inline double modified_coeff(const QParams& params, int n, int k) {
  const auto [direct, ratio_route] = modified_coeff_both(params, n, k);
  // the literal difference in the ratio route conditions like 1/(q^k (1-p))
  const double conditioning = 1.0 / std::max(std::pow(params.q, k) * (1.0 - params.p), 1e-300);
  const double tol = std::max(1e-11, 4e-16 * conditioning);
  if (std::abs(direct - ratio_route) > tol * std::abs(direct))
    throw convergence_error("modified_coeff: closed-form routes disagree at (n,k) = (" +
                            std::to_string(n) + "," + std::to_string(k) + ")");
  return direct;
}

/// Modified Hankel determinant D~_n = (Delta_{n+1} / (p q^{n+1};q)_inf) D_n.
inline LogReal modified_hankel(const QParams& params, int n) {
  const LogReal dn = hankel_det(params, n);
  const double d = delta(params, n + 1);
  const LogReal pqn1_inf = qpochhammer_inf(params.p * std::pow(params.q, n + 1), params);
  return dn * LogReal::from_double(d) / pqn1_inf;
}

/// Monic three-term recurrence of the modified family:
///   c~_1 = (p;q)_inf q^{-3/2} / Delta_1,
///   c~_{n+1} = B_n q^{-2n-3/2} / ((1-q) Delta_{n+1})
///            - B_{n-1} q^{-2n+1/2} / ((1-q) Delta_n),
///   lambda~_{n+1} = (Delta_{n-1} Delta_{n+1} / Delta_n^2)
///                   (1-q^n)(1-p q^n) q^{-4n},
/// where B_m = (1-q^{m+1})(p q^m;q)_inf - (1-p q^{m+1})(q^m;q)_inf is
/// assembled as (1-q^{m+1}) Delta_m - (1-p) q^{m+1} (q^m;q)_inf to dodge
/// the cancellation between the raw products.
inline RecurrenceCoeffs modified_recurrence(const QParams& params, int count) {
  const double p = params.p, q = params.q, lq = params.log_q();
  std::vector<double> d(static_cast<size_t>(count) + 2);
  for (int i = 0; i <= count + 1; ++i) d[static_cast<size_t>(i)] = delta(params, i);

  const auto bracket = [&](int m) {
    const double qinf = qpochhammer_inf(std::pow(q, m), params).to_double();
    return (1.0 - std::pow(q, m + 1)) * d[static_cast<size_t>(m)] -
           (1.0 - p) * std::pow(q, m + 1) * qinf;
  };

  RecurrenceCoeffs rc;
  rc.c.reserve(static_cast<size_t>(count));
  rc.lambda.reserve(static_cast<size_t>(count));
  for (int n = 1; n <= count; ++n) {
    double cn;
    if (n == 1) {
      cn = qpochhammer_inf(p, params).to_double() * std::exp(-1.5 * lq) / d[1];
    } else {
      const int m = n - 1;  // c~_{m+1}
      cn = bracket(m) * std::exp(-(2.0 * m + 1.5) * lq) / ((1.0 - q) * d[static_cast<size_t>(m + 1)]) -
           bracket(m - 1) * std::exp(-(2.0 * m - 0.5) * lq) / ((1.0 - q) * d[static_cast<size_t>(m)]);
    }
    rc.c.push_back(cn);
    const double lam = d[static_cast<size_t>(n - 1)] * d[static_cast<size_t>(n + 1)] /
                       (d[static_cast<size_t>(n)] * d[static_cast<size_t>(n)]) *
                       (1.0 - std::pow(q, n)) * (1.0 - p * std::pow(q, n)) * std::exp(-4.0 * n * lq);
    rc.lambda.push_back(lam);
    if (!std::isfinite(cn) || !std::isfinite(lam))
      throw range_error("modified_recurrence: coefficients exceed double range at n = " +
                        std::to_string(n));
  }
  return rc;
}

/// Modified orthonormal polynomial P~_n as a coefficient vector.
inline Polynomial modified_orthonormal(const QParams& params, int n) {
  std::vector<double> coeffs(static_cast<size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) coeffs[static_cast<size_t>(k)] = modified_coeff(params, n, k);
  return Polynomial(std::move(coeffs));
}

/// Large-n profile of the modified family: P~_n(x) ~ (-1)^n c(x) q^{-n/2}
/// with
///   c(x) = q^{-1/4} ((1-q)/(1-p)) sqrt((p;q)_inf/(q;q)_inf)
///          sum_k q^{k^2+k/2} (-qx)^k / ((pq;q)_k (q;q)_k).
inline double modified_asymptotic_profile(const QParams& params, double x) {
  const double p = params.p, q = params.q, lq = params.log_q();
  CompensatedSum sum;
  double term = 1.0;
  double pqk = p * q, qk = q;
  for (int k = 0; k < params.max_terms; ++k) {
    sum.add(term);
    if (k > 2 && std::abs(term) < 0.1 * params.eps * std::abs(sum.value())) break;
    term *= std::pow(q, 2 * k + 1.5) * (-q * x) / ((1.0 - pqk) * (1.0 - qk));
    pqk *= q;
    qk *= q;
  }
  const double pref =
      std::exp(-0.25 * lq) * (1.0 - q) / (1.0 - p) *
      std::exp(0.5 * (qpochhammer_inf(p, params).logmag() - qpochhammer_inf(q, params).logmag()));
  return pref * sum.value();
}

}  // namespace qsw
