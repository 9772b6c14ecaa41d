#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qsw/core.hpp"
#include "qsw/gsw.hpp"
#include "qsw/logreal.hpp"
#include "qsw/qseries.hpp"

namespace qsw {

/// D(z) together with the evaluation scale (the sum of absolute series
/// terms, same prefactor). Residual tests measure |value| against scale,
/// which is the attainable noise floor of the alternating series.
struct DValue {
  LogReal value;
  LogReal scale;
};

/// The entire function whose positive zeros carry the N-extremal measure:
///   D(z) = z sqrt(q) ((pq;q)_inf/(q;q)_inf)
///          sum_n (-1)^n q^{n(n+1)} (z sqrt(q))^n / ((pq;q)_n (q;q)_n).
/// The series is summed relative to its largest term, so evaluation never
/// overflows even when individual terms would.
inline DValue dfunction_scaled(const QParams& params, double z) {
  if (z == 0.0) return {LogReal(), LogReal()};
  const double p = params.p, q = params.q;
  const double zq = z * std::sqrt(q);
  const double lzq = std::log(std::abs(zq));
  const double lq = params.log_q();

  // log-magnitudes of the series terms via the ratio
  //   t_{n+1}/t_n = -q^{2(n+1)} (z sqrt q) / ((1-p q^{n+1})(1-q^{n+1}))
  std::vector<double> logt;
  std::vector<int> sgn;
  double cur = 0.0;
  int cursgn = 1;
  double maxlog = 0.0;
  const int zsign = zq > 0 ? 1 : -1;
  for (int n = 0; n < params.max_terms; ++n) {
    logt.push_back(cur);
    sgn.push_back(cursgn);
    maxlog = std::max(maxlog, cur);
    const double pq_f = 1.0 - p * std::pow(q, n + 1);
    const double q_f = 1.0 - std::pow(q, n + 1);
    cur += (2.0 * (n + 1)) * lq + lzq - std::log(pq_f) - std::log(q_f);
    cursgn = -cursgn * zsign;
    if (cur < maxlog - 40.0 && n >= 2) break;
  }
  CompensatedSum sum, absum;
  for (size_t i = 0; i < logt.size(); ++i) {
    const double e = std::exp(logt[i] - maxlog);
    sum.add(sgn[i] * e);
    absum.add(e);
  }
  const LogReal pref =
      LogReal::from_double(zq) * qpochhammer_inf(p * q, params) / qpochhammer_inf(q, params);
  const LogReal series = LogReal::from_double(sum.value());
  const LogReal value = pref * LogReal::from_log(1, maxlog) * series;
  const LogReal scale = abs(pref) * LogReal::from_log(1, maxlog + std::log(absum.value()));
  return {value, scale};
}

inline double dfunction(const QParams& params, double z) {
  return dfunction_scaled(params, z).value.to_double();
}

/// Hayman-type coefficients of the zero expansion
/// tau_n = q^{-2n-1/2} (1 + b1 q^n + b3 q^{3n} + b4 q^{4n} + ...):
///   b1 = -(1+p) / ((1-q) psi^2(q)),  b2 = 0,
///   b3 = -(q(1+q^2)(1+p^3) + 2pq(1+p)(1+q+q^2))
///          / ((1-q)(1-q^2)(1-q^3) psi^2(q))
///        + ((1+p)^3/((1-q)^3 psi^6(q))) sum_j (2j-1) q^{2j-1}/(1-q^{2j-1}),
///   b4 = b1 b3.
struct HaymanCoefficients {
  double b1, b2, b3, b4;
};

inline HaymanCoefficients hayman_coefficients(const QParams& params) {
  const double p = params.p, q = params.q;
  const double ps = psi(q, params.eps);
  const double b1 = -(1.0 + p) / ((1.0 - q) * ps * ps);
  CompensatedSum lambert;
  for (int j = 1; j < params.max_terms; ++j) {
    const double qe = std::pow(q, 2 * j - 1);
    const double t = (2.0 * j - 1.0) * qe / (1.0 - qe);
    lambert.add(t);
    if (t < 0.1 * params.eps * lambert.value()) break;
  }
  const double first = -(q * (1.0 + q * q) * (1.0 + p * p * p) +
                         2.0 * p * q * (1.0 + p) * (1.0 + q + q * q)) /
                       ((1.0 - q) * (1.0 - q * q) * (1.0 - q * q * q) * ps * ps);
  const double second = std::pow(1.0 + p, 3) / (std::pow(1.0 - q, 3) * std::pow(ps, 6)) *
                        lambert.value();
  const double b3 = first + second;
  return {b1, 0.0, b3, b1 * b3};
}

namespace detail {

/// Orthonormal values of the plain family along the three-term recurrence,
/// with every quantity carried as a LogReal so the Christoffel sums stay
/// representable at any support point. The symmetrized coefficients
///   A_k = sqrt(lambda_{k+1}),  B_k = c_k
/// are generated from their closed forms directly in log space.
class GswOrthonormalSeries {
 public:
  GswOrthonormalSeries(const QParams& params, double x)
      : p_(params.p), q_(params.q), lq_(params.log_q()), x_(x) {
    prev_ = LogReal();                                   // \hat P_{-1}
    curr_ = LogReal::from_log(1, 0.25 * lq_);            // \hat P_0 = q^{1/4}
  }

  /// \hat P_k(x) for k = 0, 1, 2, ... on successive calls.
  LogReal next() {
    if (k_ == 0) {
      ++k_;
      return curr_;
    }
    const int k = k_;  // producing \hat P_k
    const double ck = (1.0 + q_ - (p_ + q_) * std::pow(q_, k - 1));
    const double log_ck = std::log(ck) - (2.0 * k - 0.5) * lq_;
    const LogReal xm = LogReal::from_double(x_) - LogReal::from_log(1, log_ck);
    const LogReal num = xm * curr_ - a_of(k - 1) * prev_;
    const LogReal nxt = num / a_of(k);
    prev_ = curr_;
    curr_ = nxt;
    ++k_;
    return curr_;
  }

 private:
  // A_k = sqrt(lambda_{k+1}) with lambda_{k+1} = (1-q^k)(1-p q^{k-1}) q^{-4k}
  LogReal a_of(int k) const {
    if (k == 0) return LogReal();
    const double lm = 0.5 * (std::log1p(-std::pow(q_, k)) + std::log1p(-p_ * std::pow(q_, k - 1))) -
                      2.0 * k * lq_;
    return LogReal::from_log(1, lm);
  }

  double p_, q_, lq_, x_;
  LogReal prev_, curr_;
  int k_ = 0;
};

}  // namespace detail

/// Positive zeros tau_1 < ... < tau_count of the D-function. Each is
/// bracketed around the asymptotic seed q^{-2n-1/2}(1 + b1 q^n) by the
/// window [q T_n, T_n/q], widened by factors of q^{-1/2} when the sign
/// change has drifted, with a fine geometric scan above the previous zero
/// as the final fallback. Bisection runs on log tau down to machine width.
inline std::vector<double> zeros(const QParams& params, int count) {
  if (count < 1) throw std::invalid_argument("zeros: count must be positive");
  const double q = params.q;
  const double L = -params.log_q();
  const double b1 = hayman_coefficients(params).b1;

  const auto sign_at = [&](double u) { return dfunction_scaled(params, std::exp(u)).value.sign(); };

  std::vector<double> taus;
  taus.reserve(static_cast<size_t>(count));
  double u_prev = -1e306;  // log of previous zero
  for (int n = 1; n <= count; ++n) {
    double useed = (2.0 * n + 0.5) * L;
    if (useed > 700.0)
      throw range_error("zeros: tau_" + std::to_string(n) + " exceeds double range");
    const double corr = 1.0 + b1 * std::pow(q, n);
    if (corr > 0.1) useed += std::log(corr);

    double lo = useed - L, hi = useed + L;
    if (n > 1) lo = std::max(lo, u_prev + 1e-9);
    int slo = sign_at(lo), shi = sign_at(hi);
    for (int widen = 0; widen < 6 && slo == shi; ++widen) {
      if (lo - 0.5 * L > u_prev + 1e-9 || n == 1) lo -= 0.5 * L;
      hi += 0.5 * L;
      slo = sign_at(lo);
      shi = sign_at(hi);
    }
    if (slo == shi) {
      // fine geometric scan upward from the previous zero (or well below
      // the seed for the first one)
      double a = (n > 1) ? u_prev + 1e-9 : useed - 6.0 * L;
      const double step = L / 8.0;
      int sa = sign_at(a);
      bool found = false;
      for (double b = a + step; b < useed + 3.0 * L; b += step) {
        const int sb = sign_at(b);
        if (sb != sa && sb != 0) {
          lo = b - step;
          hi = b;
          slo = sa;
          shi = sb;
          found = true;
          break;
        }
        sa = sb;
        a = b;
      }
      if (!found)
        throw convergence_error("zeros: no sign change located for tau_" + std::to_string(n));
    }

    // bracket validation: keep the first sign-change subinterval
    for (int pass = 0; pass < 2; ++pass) {
      const int parts = 8;
      int s_left = slo;
      double a = lo;
      for (int i = 1; i <= parts; ++i) {
        const double b = lo + (hi - lo) * i / parts;
        const int s_right = (i == parts) ? shi : sign_at(b);
        if (s_right != s_left) {
          hi = b;
          shi = s_right;
          lo = a;
          slo = s_left;
          break;
        }
        a = b;
        s_left = s_right;
      }
    }

    // bisection to machine width in log space
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const int sm = sign_at(mid);
      if (sm == 0) {
        lo = hi = mid;
        break;
      }
      if (sm == slo)
        lo = mid;
      else
        hi = mid;
      if (hi - lo <= 4e-16 * std::max(1.0, std::abs(hi))) break;
    }
    const double u_root = 0.5 * (lo + hi);
    const double tau = std::exp(u_root);
    if (!taus.empty() && !(tau > taus.back()))
      throw convergence_error("zeros: ordering violated at tau_" + std::to_string(n));
    taus.push_back(tau);
    u_prev = u_root;
  }
  return taus;
}

/// Christoffel mass at a support point:
///   rho^{-1} = sum_k \hat P_k^2(tau).
/// The terms grow to a turning point and then decay geometrically; the
/// sum is truncated once a geometric extrapolation of the tail drops
/// below 1e-10 of the accumulated value.
inline LogReal christoffel_mass(const QParams& params, double tau) {
  detail::GswOrthonormalSeries series(params, tau);
  LogReal sum;
  LogReal prev_term, prev_prev;
  int decaying = 0;
  for (int k = 0; k < params.max_terms; ++k) {
    const LogReal pk = series.next();
    const LogReal term = pk * pk;
    sum += term;
    if (k >= 2 && !term.is_zero()) {
      if (LogReal::magnitude_less(term, prev_term) &&
          LogReal::magnitude_less(prev_term, prev_prev)) {
        ++decaying;
        const double r = std::exp(std::max(term.logmag() - prev_term.logmag(),
                                           prev_term.logmag() - prev_prev.logmag()));
        if (decaying >= 3 && r < 0.999) {
          const double tail_log = term.logmag() + std::log(r / (1.0 - r));
          if (tail_log < sum.logmag() + std::log(1e-10)) return LogReal::one() / sum;
        }
      } else {
        decaying = 0;
      }
    }
    if (!term.is_zero()) {
      prev_prev = prev_term;
      prev_term = term;
    }
  }
  throw convergence_error("christoffel_mass: series tail not decaying by max_terms (tau = " +
                          std::to_string(tau) + ")");
}

inline std::vector<LogReal> christoffel_masses(const QParams& params,
                                               const std::vector<double>& taus) {
  std::vector<LogReal> masses;
  masses.reserve(taus.size());
  for (double tau : taus) masses.push_back(christoffel_mass(params, tau));
  return masses;
}

/// A discrete measure: ordered atoms (tau_n, rho_n), an optional atom at
/// zero, and truncation metadata. Masses are carried as LogReals because
/// far atoms underflow double precision.
struct DiscreteMeasure {
  struct Atom {
    double point;
    LogReal mass;
  };
  std::vector<Atom> atoms;
  LogReal atom_at_zero;
  int truncation_count = 0;
  double tail_mass_bound = 0.0;

  LogReal total_mass() const {
    LogReal t = atom_at_zero;
    for (const auto& a : atoms) t += a.mass;
    return t;
  }
  /// sum rho_n tau_n^m (+ the zero atom when m = 0).
  LogReal moment(int m) const {
    LogReal t = (m == 0) ? atom_at_zero : LogReal();
    for (const auto& a : atoms)
      t += a.mass * LogReal::from_log(1, m * std::log(a.point));
    return t;
  }
};

/// The N-extremal measure nu_0 (atom c at zero plus atom_count atoms at
/// the D-function zeros) and the determinate measure mu^M = nu_0 - c
/// delta_0 obtained by removing the zero atom.
inline std::pair<DiscreteMeasure, DiscreteMeasure> build_measures(const QParams& params,
                                                                  int atom_count) {
  const std::vector<double> taus = zeros(params, atom_count);
  const std::vector<LogReal> masses = christoffel_masses(params, taus);
  DiscreteMeasure nu0;
  nu0.truncation_count = atom_count;
  nu0.atoms.reserve(static_cast<size_t>(atom_count));
  for (int i = 0; i < atom_count; ++i)
    nu0.atoms.push_back({taus[static_cast<size_t>(i)], masses[static_cast<size_t>(i)]});
  const LogReal c = qpochhammer_inf(params.q, params) /
                    (LogReal::from_log(1, 0.5 * params.log_q()) *
                     qpochhammer_inf(params.p * params.q, params));
  nu0.atom_at_zero = c;
  // geometric tail estimate from the last two masses
  if (atom_count >= 2) {
    const double r = std::exp(masses.back().logmag() - masses[masses.size() - 2].logmag());
    if (r < 1.0)
      nu0.tail_mass_bound = (abs(masses.back()) * LogReal::from_double(r / (1.0 - r))).to_double();
  }
  DiscreteMeasure muM = nu0;
  muM.atom_at_zero = LogReal();
  return {nu0, muM};
}

}  // namespace qsw
