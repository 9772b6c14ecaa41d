#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qsw/core.hpp"
#include "qsw/logreal.hpp"
#include "qsw/polynomial.hpp"
#include "qsw/qseries.hpp"
#include "qsw/recurrence.hpp"

namespace qsw {

/// A moment sequence s_0, s_1, ... carried in log space; the generalized
/// Stieltjes-Wigert moments are s_n = (p;q)_n q^{-(n+1)^2/2}.
struct MomentSequence {
  enum class Source { gsw, modified, custom };
  std::vector<LogReal> values;
  Source source = Source::custom;

  const LogReal& at(int n) const {
    if (n < 0 || n >= static_cast<int>(values.size()))
      throw std::out_of_range("MomentSequence: index " + std::to_string(n));
    return values[static_cast<size_t>(n)];
  }
  int count() const { return static_cast<int>(values.size()); }
};

inline MomentSequence gsw_moments(const QParams& params, int count) {
  MomentSequence s;
  s.source = MomentSequence::Source::gsw;
  s.values.reserve(static_cast<size_t>(count));
  const double lq = params.log_q();
  CompensatedSum logpoch;  // log (p;q)_n accumulated factor by factor
  double ppow = params.p;  // p q^{n-1}
  for (int n = 0; n < count; ++n) {
    if (n > 0) {
      logpoch.add(std::log1p(-ppow));
      ppow *= params.q;
    }
    const double nn = static_cast<double>(n) + 1.0;
    s.values.push_back(LogReal::from_log(1, logpoch.value() - 0.5 * nn * nn * lq));
  }
  return s;
}

/// Orthogonality density on (0, inf):
///   (2 pi log(1/q))^{-1/2} exp(-(log x)^2 / (2 log(1/q)))
///     * (p; q)_inf (-p/(sqrt(q) x); q)_inf.
/// Evaluated in log space; strictly positive for x > 0.
inline double density(const QParams& params, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("density: x must be positive");
  const double L = -params.log_q();
  const double lx = std::log(x);
  double logval = -0.5 * std::log(2.0 * std::numbers::pi * L) - lx * lx / (2.0 * L);
  logval += qpochhammer_inf(params.p, params).logmag();
  if (params.p > 0.0)
    logval += qpochhammer_inf(-params.p / (std::sqrt(params.q) * x), params).logmag();
  return std::exp(logval);
}

namespace detail {

/// Coefficients shared by the monic and orthonormal families: both have
///   coeff_{k+1} / coeff_k = -(1 - q^{n-k}) q^{2k+3/2} / ((1 - q^{k+1})(1 - p q^k)),
/// only the k = 0 seed differs. Generating from the ratio keeps each
/// coefficient at a couple of ulps instead of cancelling factorial
/// products.
inline std::vector<LogReal> sw_coefficients(const QParams& params, int n, const LogReal& seed) {
  const double q = params.q, p = params.p;
  const double lq = params.log_q();
  std::vector<LogReal> coeffs(static_cast<size_t>(n) + 1);
  coeffs[0] = seed;
  double qnk = std::pow(q, n);  // q^{n-k}
  double qk1 = q;               // q^{k+1}
  double pqk = p;               // p q^k
  for (int k = 0; k < n; ++k) {
    const double lr = std::log1p(-qnk) + (2.0 * k + 1.5) * lq - std::log1p(-qk1) - std::log1p(-pqk);
    coeffs[static_cast<size_t>(k + 1)] = coeffs[static_cast<size_t>(k)] * LogReal::from_log(-1, lr);
    qnk /= q;
    qk1 *= q;
    pqk *= q;
  }
  return coeffs;
}

inline Polynomial to_polynomial(const std::vector<LogReal>& coeffs) {
  std::vector<double> c(coeffs.size());
  for (size_t i = 0; i < coeffs.size(); ++i) c[i] = coeffs[i].to_double();
  return Polynomial(std::move(c));
}

}  // namespace detail

/// Monic generalized Stieltjes-Wigert polynomial S_n(x; p, q).
inline Polynomial gsw_monic(const QParams& params, int n) {
  if (n < 0) throw std::invalid_argument("gsw_monic: n must be nonnegative");
  const double lq = params.log_q();
  const LogReal poch = qpochhammer(params.p, params, n);
  const LogReal seed =
      LogReal::from_log(n % 2 == 0 ? 1 : -1, -n * (n + 0.5) * lq + poch.logmag());
  return detail::to_polynomial(detail::sw_coefficients(params, n, seed));
}

/// Orthonormal generalized Stieltjes-Wigert polynomial P_n(x; p, q),
/// normalized against the measure of total mass s_0. Its value at 0 is
/// (-1)^n q^{n/2+1/4} sqrt((p;q)_n / (q;q)_n).
inline Polynomial gsw_orthonormal(const QParams& params, int n) {
  if (n < 0) throw std::invalid_argument("gsw_orthonormal: n must be nonnegative");
  const double lq = params.log_q();
  const LogReal pp = qpochhammer(params.p, params, n);
  const LogReal qq = qpochhammer(params.q, params, n);
  const LogReal seed = LogReal::from_log(
      n % 2 == 0 ? 1 : -1, (0.5 * n + 0.25) * lq + 0.5 * (pp.logmag() - qq.logmag()));
  return detail::to_polynomial(detail::sw_coefficients(params, n, seed));
}

/// Closed-form value P_n(0; p, q), kept separate from the coefficient
/// route for cross-checks.
inline double gsw_orthonormal_at_zero(const QParams& params, int n) {
  const LogReal pp = qpochhammer(params.p, params, n);
  const LogReal qq = qpochhammer(params.q, params, n);
  return LogReal::from_log(n % 2 == 0 ? 1 : -1,
                           (0.5 * n + 0.25) * params.log_q() +
                               0.5 * (pp.logmag() - qq.logmag()))
      .to_double();
}

/// Three-term recurrence of the monic family S_n:
///   c_n = (1 + q - (p+q) q^{n-1}) q^{-2n+1/2},
///   lambda_{n+1} = (1 - q^n)(1 - p q^{n-1}) q^{-4n}.
inline RecurrenceCoeffs gsw_recurrence(const QParams& params, int count) {
  const double p = params.p, q = params.q, lq = params.log_q();
  RecurrenceCoeffs rc;
  rc.c.reserve(static_cast<size_t>(count));
  rc.lambda.reserve(static_cast<size_t>(count));
  double qn1 = 1.0;  // q^{n-1}
  for (int n = 1; n <= count; ++n) {
    rc.c.push_back((1.0 + q - (p + q) * qn1) * std::exp(-(2.0 * n - 0.5) * lq));
    rc.lambda.push_back((1.0 - qn1 * q) * (1.0 - p * qn1) * std::exp(-4.0 * n * lq));
    if (!std::isfinite(rc.c.back()) || !std::isfinite(rc.lambda.back()))
      throw range_error("gsw_recurrence: coefficients exceed double range at n = " +
                        std::to_string(n));
    qn1 *= q;
  }
  return rc;
}

/// Recurrence (d_n, nu_{n+1}) of the monic kernel polynomials
/// q^{-n} S_n(qx; pq, q):
///   d_n = (1 + q - (1+p) q^n) q^{-2n-1/2},
///   nu_{n+1} = (1 - q^n)(1 - p q^n) q^{-4n-2}.
inline RecurrenceCoeffs kernel_recurrence(const QParams& params, int count) {
  const double p = params.p, q = params.q, lq = params.log_q();
  RecurrenceCoeffs rc;
  rc.c.reserve(static_cast<size_t>(count));
  rc.lambda.reserve(static_cast<size_t>(count));
  double qn = q;  // q^n
  for (int n = 1; n <= count; ++n) {
    rc.c.push_back((1.0 + q - (1.0 + p) * qn) * std::exp(-(2.0 * n + 0.5) * lq));
    rc.lambda.push_back((1.0 - qn) * (1.0 - p * qn) * std::exp(-(4.0 * n + 2.0) * lq));
    if (!std::isfinite(rc.c.back()) || !std::isfinite(rc.lambda.back()))
      throw range_error("kernel_recurrence: coefficients exceed double range at n = " +
                        std::to_string(n));
    qn *= q;
  }
  return rc;
}

/// Closed-form Hankel determinant of the moment matrix (s_{i+j}), size
/// (n+1) x (n+1):
///   D_n = (prod_{j=1}^n (p;q)_j (q;q)_j) q^{-(n+1)(2n+1)(2n+3)/6}.
inline LogReal hankel_det(const QParams& params, int n) {
  if (n < 0) throw std::invalid_argument("hankel_det: n must be nonnegative");
  CompensatedSum logprod;
  for (int j = 1; j <= n; ++j) {
    logprod.add(qpochhammer(params.p, params, j).logmag());
    logprod.add(qpochhammer(params.q, params, j).logmag());
  }
  const double e = static_cast<double>(n + 1) * (2 * n + 1) * (2 * n + 3) / 6.0;
  return LogReal::from_log(1, logprod.value() - e * params.log_q());
}

/// Ratio D_n / D_{n-1} = (p;q)_n (q;q)_n q^{-(2n+1)^2/2}.
inline LogReal hankel_det_ratio(const QParams& params, int n) {
  if (n < 1) throw std::invalid_argument("hankel_det_ratio: n must be positive");
  const double e = 0.5 * (2.0 * n + 1.0) * (2.0 * n + 1.0);
  return LogReal::from_log(1, qpochhammer(params.p, params, n).logmag() +
                                  qpochhammer(params.q, params, n).logmag() -
                                  e * params.log_q());
}

namespace detail {

/// Determinant of a Hankel minor (rows x cols of s_{i+j}) by LU with
/// partial pivoting after the symmetric diagonal scaling
/// s_{i+j} / sqrt(s_{2i} s_{2j}). For the moments at hand the scaled
/// entries behave like q^{(i-j)^2/2}, so the elimination runs entirely in
/// ordinary doubles and the determinant scale is restored in log space.
inline LogReal hankel_minor_det(const MomentSequence& s, const std::vector<int>& rows,
                                const std::vector<int>& cols) {
  const size_t n = rows.size();
  if (n != cols.size()) throw std::invalid_argument("hankel_minor_det: shape");
  if (n == 0) return LogReal::one();
  CompensatedSum logscale;
  for (int i : rows) {
    if (s.at(2 * i).sign() <= 0)
      throw std::domain_error("hankel_minor_det: moment sequence not positive definite at order " +
                              std::to_string(i));
    logscale.add(0.5 * s.at(2 * i).logmag());
  }
  for (int j : cols) {
    if (s.at(2 * j).sign() <= 0)
      throw std::domain_error("hankel_minor_det: moment sequence not positive definite at order " +
                              std::to_string(j));
    logscale.add(0.5 * s.at(2 * j).logmag());
  }

  std::vector<std::vector<double>> m(n, std::vector<double>(n));
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) {
      const LogReal& v = s.at(rows[a] + cols[b]);
      m[a][b] = v.sign() * std::exp(v.logmag() - 0.5 * s.at(2 * rows[a]).logmag() -
                                    0.5 * s.at(2 * cols[b]).logmag());
    }

  int sign = 1;
  CompensatedSum logdet;
  for (size_t k = 0; k < n; ++k) {
    size_t piv = k;
    for (size_t r = k + 1; r < n; ++r)
      if (std::abs(m[r][k]) > std::abs(m[piv][k])) piv = r;
    if (m[piv][k] == 0.0) return LogReal();
    if (piv != k) {
      std::swap(m[piv], m[k]);
      sign = -sign;
    }
    if (m[k][k] < 0.0) sign = -sign;
    logdet.add(std::log(std::abs(m[k][k])));
    for (size_t r = k + 1; r < n; ++r) {
      const double f = m[r][k] / m[k][k];
      for (size_t cidx = k; cidx < n; ++cidx) m[r][cidx] -= f * m[k][cidx];
    }
  }
  return LogReal::from_log(sign, logdet.value() + logscale.value());
}

}  // namespace detail

/// Brute-force Hankel determinant det(s_{i+j})_{0<=i,j<=n} by scaled
/// elimination; the independent counterpart of hankel_det's closed form.
inline LogReal hankel_det_bruteforce(const MomentSequence& s, int n) {
  if (n < 0) throw std::invalid_argument("hankel_det_bruteforce: n must be nonnegative");
  if (s.count() < 2 * n + 1)
    throw std::invalid_argument("hankel_det_bruteforce: need moments up to order 2n");
  std::vector<int> idx(static_cast<size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) idx[static_cast<size_t>(i)] = i;
  return detail::hankel_minor_det(s, idx, idx);
}

/// Orthonormal polynomial of degree n for an arbitrary moment sequence,
/// from the bordered-determinant formula: the coefficient of x^k is
/// (-1)^{n+k} M_k / sqrt(D_{n-1} D_n), where M_k strikes column k from
/// the (n) x (n+1) moment block. Oracle-scale only (n up to ~10); the
/// leading coefficient comes out positive.
inline Polynomial orthonormal_from_moments(const MomentSequence& s, int n) {
  if (n < 0) throw std::invalid_argument("orthonormal_from_moments: n must be nonnegative");
  if (s.count() < 2 * n + 1)
    throw std::invalid_argument("orthonormal_from_moments: need moments up to order 2n");
  // positive-definiteness of every leading minor, named failure otherwise
  std::vector<LogReal> minors(static_cast<size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    minors[static_cast<size_t>(k)] = hankel_det_bruteforce(s, k);
    if (minors[static_cast<size_t>(k)].sign() <= 0)
      throw std::domain_error("orthonormal_from_moments: Hankel minor of order " +
                              std::to_string(k) + " is not positive");
  }
  const LogReal norm = sqrt(n == 0 ? minors[0] : minors[static_cast<size_t>(n - 1)] *
                                                     minors[static_cast<size_t>(n)]);
  if (n == 0) return Polynomial({(LogReal::one() / norm).to_double()});

  std::vector<int> rows(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) rows[static_cast<size_t>(i)] = i;
  std::vector<LogReal> coeffs(static_cast<size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    std::vector<int> cols;
    cols.reserve(static_cast<size_t>(n));
    for (int j = 0; j <= n; ++j)
      if (j != k) cols.push_back(j);
    const LogReal mk = detail::hankel_minor_det(s, rows, cols);
    const int sgn = ((n + k) % 2 == 0) ? 1 : -1;
    coeffs[static_cast<size_t>(k)] =
        LogReal::from_log(sgn, 0.0) * mk / norm;
  }
  return detail::to_polynomial(coeffs);
}

/// Both sides of the generating-function identity
///   sum_n ((p;q)_n/(q;q)_n) (sum_k [n k]_q q^{k^2+k/2} z^k/(p;q)_k) t^n
///     = ((pt;q)_inf/(t;q)_inf) sum_n q^{n^2+n/2} (zt)^n / ((pt;q)_n (q;q)_n),
/// each truncated to the configured tolerance. Requires |t| < 1.
inline std::pair<double, double> generating_function_check(const QParams& params, double z,
                                                           double t) {
  if (!(std::abs(t) < 1.0))
    throw std::invalid_argument("generating_function_check: require |t| < 1");
  const double p = params.p, q = params.q;

  // left side: outer sum over n, inner sum regenerated by ratio recursion
  CompensatedSum lhs;
  double outer = 1.0;  // (p;q)_n / (q;q)_n * t^n
  double pqn = p, qqn = q;
  for (int n = 0; n < params.max_terms; ++n) {
    CompensatedSum inner;
    double term = 1.0;  // [n k]_q q^{k^2+k/2} z^k / (p;q)_k
    double qnk = std::pow(q, n), qk1 = q, pqk = p;
    for (int k = 0;; ++k) {
      inner.add(term);
      if (k == n) break;
      term *= (1.0 - qnk) / (1.0 - qk1) * std::pow(q, 2 * k + 1.5) * z / (1.0 - pqk);
      qnk /= q;
      qk1 *= q;
      pqk *= q;
    }
    const double contribution = outer * inner.value();
    lhs.add(contribution);
    if (n > 4 && std::abs(contribution) < 0.1 * params.eps * std::abs(lhs.value())) break;
    outer *= t * (1.0 - pqn) / (1.0 - qqn);
    pqn *= q;
    qqn *= q;
  }

  // right side: prefactor times a q^{n^2}-convergent series
  const LogReal pref = qpochhammer_inf(p * t, params) / qpochhammer_inf(t, params);
  CompensatedSum rhs;
  double term = 1.0;  // q^{n^2+n/2} (zt)^n / ((pt;q)_n (q;q)_n)
  double ptn = p * t, qn = q;
  for (int n = 0; n < params.max_terms; ++n) {
    rhs.add(term);
    if (n > 2 && std::abs(term) < 0.1 * params.eps * std::abs(rhs.value())) break;
    term *= std::pow(q, 2 * n + 1.5) * z * t / ((1.0 - ptn) * (1.0 - qn));
    ptn *= q;
    qn *= q;
  }
  return {lhs.value(), pref.to_double() * rhs.value()};
}

}  // namespace qsw
