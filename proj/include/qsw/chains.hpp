#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qsw/core.hpp"
#include "qsw/qseries.hpp"
#include "qsw/recurrence.hpp"

namespace qsw {

/// A chain sequence beta_1, beta_2, ... with 0 < beta_n < 1, admitting
/// parameter sequences beta_n = h_n (1 - h_{n-1}).
struct ChainSequence {
  enum class Origin { gsw, custom };
  std::vector<double> beta;  // beta[i] = beta_{i+1}
  Origin origin = Origin::custom;

  int count() const { return static_cast<int>(beta.size()); }
  double at(int n) const {  // 1-based
    if (n < 1 || n > count()) throw std::out_of_range("ChainSequence: index");
    return beta[static_cast<size_t>(n - 1)];
  }
};

/// A parameter sequence h_0, h_1, ... for a chain sequence. The minimal
/// sequence has h_0 = 0, the maximal one h_0 = M_0; the family of shell
/// polynomials is parametrized by 0 < h_0 <= M_0.
struct ParameterSequence {
  enum class Kind { minimal, maximal, gsw_intermediate, custom };
  std::vector<double> h;  // h[i] = h_i
  Kind kind = Kind::custom;

  int count() const { return static_cast<int>(h.size()); }
  double at(int n) const {  // 0-based
    if (n < 0 || n >= count()) throw std::out_of_range("ParameterSequence: index");
    return h[static_cast<size_t>(n)];
  }
};

/// Chain sequence attached to the kernel polynomials:
///   beta_n = q (1-q^n)(1-p q^n)
///            / ((1+q-(1+p) q^n)(1+q-(1+p) q^{n+1})).
/// For p = q this collapses to the constant q/(1+q)^2 < 1/4.
inline ChainSequence gsw_chain(const QParams& params, int count) {
  const double p = params.p, q = params.q;
  ChainSequence chain;
  chain.origin = ChainSequence::Origin::gsw;
  chain.beta.reserve(static_cast<size_t>(count));
  double qn = q;
  for (int n = 1; n <= count; ++n) {
    chain.beta.push_back(q * (1.0 - qn) * (1.0 - p * qn) /
                         ((1.0 + q - (1.0 + p) * qn) * (1.0 + q - (1.0 + p) * qn * q)));
    qn *= q;
  }
  return chain;
}

struct ParameterFamily {
  ParameterSequence minimal;       // m_n, m_0 = 0
  ParameterSequence maximal;       // M_n
  ParameterSequence intermediate;  // h_n of the plain Stieltjes-Wigert family
};

/// The three closed-form parameter sequences (indices 0..count):
///   M_n = (q / (1+q-(1+p) q^{n+1})) Delta_n / Delta_{n+1},
///   m_n = q (1-q^n) / (1+q-(1+p) q^{n+1}),
///   h_n = q (1-p q^n) / (1+q-(1+p) q^{n+1}).
/// Closed forms only: forward recursion h_n = beta_n/(1-h_{n-1}) started
/// at M_0 drifts to the minimal sequence and is never used here.
inline ParameterFamily parameter_sequences(const QParams& params, int count) {
  const double p = params.p, q = params.q;
  ParameterFamily fam;
  fam.minimal.kind = ParameterSequence::Kind::minimal;
  fam.maximal.kind = ParameterSequence::Kind::maximal;
  fam.intermediate.kind = ParameterSequence::Kind::gsw_intermediate;
  fam.minimal.h.reserve(static_cast<size_t>(count) + 1);
  fam.maximal.h.reserve(static_cast<size_t>(count) + 1);
  fam.intermediate.h.reserve(static_cast<size_t>(count) + 1);
  double dn = delta(params, 0);
  double qn = 1.0;  // q^n
  for (int n = 0; n <= count; ++n) {
    const double denom = 1.0 + q - (1.0 + p) * qn * q;
    const double dn1 = delta(params, n + 1);
    fam.maximal.h.push_back(q / denom * (dn / dn1));
    fam.minimal.h.push_back(q * (1.0 - qn) / denom);
    fam.intermediate.h.push_back(q * (1.0 - p * qn) / denom);
    dn = dn1;
    qn *= q;
  }
  return fam;
}

/// Recurrence coefficients of the shell polynomials built from the
/// kernel recurrence (d_n, nu_n) and a parameter sequence h with
/// 0 < h_0 <= M_0:
///   c^h_1 = h_0 d_1,
///   c^h_{n+1} = (1-h_{n-1}) d_n + h_n d_{n+1},
///   lambda^h_{n+1} = (1-h_{n-1}) h_{n-1} d_n^2.
inline RecurrenceCoeffs shell_recurrence(const RecurrenceCoeffs& kernel,
                                         const ParameterSequence& h, int count) {
  if (h.count() < 1 || !(h.at(0) > 0.0))
    throw std::invalid_argument(
        "shell_recurrence: requires a parameter sequence with h_0 > 0 "
        "(the minimal sequence has no shell family)");
  if (kernel.count() < count || h.count() < count)
    throw std::invalid_argument("shell_recurrence: inputs too short for requested count");
  RecurrenceCoeffs rc;
  rc.c.reserve(static_cast<size_t>(count));
  rc.lambda.reserve(static_cast<size_t>(count));
  for (int n = 1; n <= count; ++n) {
    if (n == 1)
      rc.c.push_back(h.at(0) * kernel.c_at(1));
    else
      rc.c.push_back((1.0 - h.at(n - 2)) * kernel.c_at(n - 1) + h.at(n - 1) * kernel.c_at(n));
    // lambda^h_{n+1} with the same storage offset as RecurrenceCoeffs
    const double d_n = kernel.c_at(n);
    rc.lambda.push_back((1.0 - h.at(n - 1)) * h.at(n - 1) * d_n * d_n);
  }
  return rc;
}

/// Depth-truncated continued fraction 1 - beta_1/(1 - beta_2/(1 - ...)),
/// evaluated backward with the innermost tail set to 1 (so depth 0 would
/// be exactly 1). For chain sequences the truncations converge to M_0.
inline double continued_fraction(const ChainSequence& chain, int depth) {
  if (depth < 1) throw std::invalid_argument("continued_fraction: depth must be >= 1");
  if (chain.count() < depth)
    throw std::invalid_argument("continued_fraction: chain shorter than requested depth");
  double t = 1.0;
  for (int i = depth; i >= 1; --i) {
    if (t == 0.0)
      throw std::domain_error("continued_fraction: zero denominator at level " +
                              std::to_string(i));
    t = 1.0 - chain.at(i) / t;
  }
  return t;
}

/// Closed-form value of the tail continued fraction starting at
/// beta_{k+1}: M_k = (q / (1+q-(1+p) q^{k+1})) Delta_k / Delta_{k+1}.
inline double cf_closed_form(const QParams& params, int k) {
  if (k < 0) throw std::invalid_argument("cf_closed_form: k must be nonnegative");
  const double q = params.q, p = params.p;
  return q / (1.0 + q - (1.0 + p) * std::pow(q, k + 1)) * delta(params, k) /
         delta(params, k + 1);
}

/// Partial series (1 + L, 1 + G) with
///   L = sum_n m_1...m_n / ((1-m_1)...(1-m_n)),
///   G = sum_n h_1...h_n / ((1-h_1)...(1-h_n)),
/// by direct product-ratio accumulation over the closed-form parameter
/// values. Their closed forms give M_0 = 1/(1+L) = h_0 + (1-h_0)/(1+G).
inline std::pair<double, double> lg_series(const QParams& params, int terms) {
  if (terms < 1) throw std::invalid_argument("lg_series: terms must be >= 1");
  const ParameterFamily fam = parameter_sequences(params, terms);
  CompensatedSum L, G;
  double prod_m = 1.0, prod_h = 1.0;
  for (int k = 1; k <= terms; ++k) {
    const double mk = fam.minimal.at(k), hk = fam.intermediate.at(k);
    prod_m *= mk / (1.0 - mk);
    prod_h *= hk / (1.0 - hk);
    L.add(prod_m);
    G.add(prod_h);
  }
  return {1.0 + L.value(), 1.0 + G.value()};
}

/// Witness of the divergence of sum_n M_1...M_n / ((1-M_1)...(1-M_n)).
/// direct_terms accumulates the products of M_k/(1-M_k); reduced_terms is
/// the equivalent closed form
///   (Delta_1 Delta_2 / (Delta_{n+1} Delta_{n+2})) q^n / ((q^2;q)_n (p q^2;q)_n),
/// and the two must agree termwise. The terms grow like q^{-n}, so the
/// partial sums increase without bound.
struct DivergenceWitness {
  std::vector<double> partial_sums;
  std::vector<double> direct_terms;
  std::vector<double> reduced_terms;
};

inline DivergenceWitness maximal_divergence_witness(const QParams& params, int terms) {
  if (terms < 1) throw std::invalid_argument("maximal_divergence_witness: terms must be >= 1");
  const double p = params.p, q = params.q;
  const ParameterFamily fam = parameter_sequences(params, terms);
  DivergenceWitness w;
  w.partial_sums.reserve(static_cast<size_t>(terms));
  w.direct_terms.reserve(static_cast<size_t>(terms));
  w.reduced_terms.reserve(static_cast<size_t>(terms));
  const double d1d2 = delta(params, 1) * delta(params, 2);
  CompensatedSum sum;
  double prod = 1.0;
  double poch_q2 = 1.0, poch_pq2 = 1.0;  // (q^2;q)_n and (p q^2;q)_n
  double qn = 1.0;
  for (int n = 1; n <= terms; ++n) {
    const double Mn = fam.maximal.at(n);
    prod *= Mn / (1.0 - Mn);
    w.direct_terms.push_back(prod);
    sum.add(prod);
    w.partial_sums.push_back(sum.value());
    poch_q2 *= 1.0 - std::pow(q, n + 1);
    poch_pq2 *= 1.0 - p * std::pow(q, n + 1);
    qn *= q;
    w.reduced_terms.push_back(d1d2 / (delta(params, n + 1) * delta(params, n + 2)) * qn /
                              (poch_q2 * poch_pq2));
  }
  return w;
}

}  // namespace qsw
