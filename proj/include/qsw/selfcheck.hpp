#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "qsw/chains.hpp"
#include "qsw/core.hpp"
#include "qsw/gsw.hpp"
#include "qsw/modified.hpp"
#include "qsw/quadrature.hpp"
#include "qsw/recurrence.hpp"
#include "qsw/spectrum.hpp"

namespace qsw {

/// One named invariant check: observed is the worst deviation seen,
/// tolerance the bound it must stay under.
struct CheckResult {
  std::string name;
  bool pass;
  double observed;
  double tolerance;
  std::string detail;
};

struct SelfCheckOptions {
  bool inject_fault = false;  // test hook: corrupt one quantity so a check trips
  int zero_count = 8;
  int atom_count = 30;
};

namespace detail {

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace detail

/// Runs the full invariant suite at the given parameters and returns one
/// result per named check. All checks are expected to pass inside the
/// supported parameter box (q in [0.1, 0.7], p in [0, 0.7]).
inline std::vector<CheckResult> run_selfcheck(const QParams& params,
                                              const SelfCheckOptions& opts = {}) {
  std::vector<CheckResult> results;
  const auto add = [&](const std::string& name, double observed, double tolerance,
                       const std::string& detail = "") {
    results.push_back({name, observed <= tolerance, observed, tolerance, detail});
  };
  const double p = params.p, q = params.q;

  // --- qseries ---------------------------------------------------------
  {
    double worst = 0.0;
    for (double z : {0.5, -1.2, 0.9}) {
      LogReal prod = LogReal::one();
      double zq = z;
      for (int n = 0; n < 30; ++n) {
        const LogReal direct = qpochhammer(z, params, n + 1);
        prod *= LogReal::from_double(1.0 - zq);
        if (direct.is_zero() || prod.is_zero()) continue;
        worst = std::max(worst, std::abs(direct.logmag() - prod.logmag()));
        zq *= q;
      }
    }
    add("qseries.pochhammer_recursion", worst, 1e-13, "log-magnitude drift over 30 factors");
  }
  {
    CompensatedSum s;
    double term = 1.0, pn = p, qn = q;
    for (int n = 0; n <= 200; ++n) {
      s.add(term);
      term *= q * (1.0 - pn) / (1.0 - qn);
      pn *= q;
      qn *= q;
    }
    const double target =
        (qpochhammer_inf(p * q, params) / qpochhammer_inf(q, params)).to_double();
    double observed = detail::rel_diff(s.value(), target);
    if (opts.inject_fault) observed += 1e-3;
    add("qseries.qbinomial_theorem", observed, 1e-12,
        "200-term partial sum vs infinite product");
  }
  add("qseries.psi_dual_formula", detail::rel_diff(psi(q), psi_product_form(q)), 1e-12);
  {
    double worst = 0.0;
    for (int n = 0; n <= 10; ++n)
      for (int k = 0; k <= n; ++k) {
        const double lhs = qbinomial(n, k, q) * qpochhammer(q, params, k).to_double() *
                           qpochhammer(q, params, n - k).to_double();
        worst = std::max(worst, detail::rel_diff(lhs, qpochhammer(q, params, n).to_double()));
      }
    add("qseries.qbinomial_product", worst, 1e-13);
  }

  // --- gsw --------------------------------------------------------------
  {
    const MomentSequence s = gsw_moments(params, 7);
    double worst = 0.0;
    for (int m = 0; m <= 5; ++m)
      worst = std::max(worst, detail::rel_diff(density_moment(params, m), s.at(m).to_double()));
    add("gsw.moment_quadrature", worst, 1e-7, "x^m density integrals vs closed moments, m<=5");
  }
  {
    const RecurrenceCoeffs rc = gsw_recurrence(params, 9);
    double worst = 0.0;
    for (double x : {0.25, 1.0, 4.0}) {
      std::vector<Polynomial> S;
      for (int n = 0; n <= 8; ++n) S.push_back(gsw_monic(params, n));
      for (int n = 2; n <= 8; ++n) {
        const double resid = S[static_cast<size_t>(n)](x) -
                             (x - rc.c_at(n)) * S[static_cast<size_t>(n - 1)](x) +
                             rc.lambda_at(n) * S[static_cast<size_t>(n - 2)](x);
        worst = std::max(worst, std::abs(resid) / std::max(1.0, std::abs(S[static_cast<size_t>(n)](x))));
      }
    }
    add("gsw.recurrence_residual", worst, 1e-9);
  }
  {
    const MomentSequence s = gsw_moments(params, 11);
    double worst = 0.0;
    for (int n = 0; n <= 5; ++n) {
      const LogReal closed = hankel_det(params, n);
      const LogReal brute = hankel_det_bruteforce(s, n);
      worst = std::max(worst, detail::rel_diff(closed.to_double(), brute.to_double()));
    }
    add("gsw.hankel_closed_vs_elimination", worst, 1e-8);
  }
  {
    double worst = 0.0;
    std::vector<Polynomial> P;
    for (int n = 0; n <= 4; ++n) P.push_back(gsw_orthonormal(params, n));
    for (int j = 0; j <= 4; ++j)
      for (int k = j; k <= 4; ++k) {
        const double integral = integrate_density(
            params, [&](double x) { return P[static_cast<size_t>(j)](x) * P[static_cast<size_t>(k)](x); },
            j + k);
        worst = std::max(worst, std::abs(integral - (j == k ? 1.0 : 0.0)));
      }
    add("gsw.orthonormality_quadrature", worst, 5e-6);
  }
  {
    double worst = 0.0;
    for (int n = 0; n <= 10; ++n)
      worst = std::max(worst, detail::rel_diff(gsw_orthonormal(params, n).coeff(0),
                                               gsw_orthonormal_at_zero(params, n)));
    add("gsw.value_at_zero", worst, 5e-15, "coefficient route vs closed form");
  }

  // --- modified ----------------------------------------------------------
  {
    double worst = 0.0;
    for (int n = 0; n <= 10; ++n)
      for (int k = 0; k <= n; ++k) {
        const auto [direct, ratio_route] = modified_coeff_both(params, n, k);
        worst = std::max(worst, detail::rel_diff(direct, ratio_route));
      }
    add("modified.coefficient_dual_formulas", worst, 1e-11);
  }
  {
    const ModifiedMoments mm = modified_moments(params, 13);
    double worst = 0.0;
    for (int n = 0; n <= 6; ++n) {
      const Polynomial oracle = orthonormal_from_moments(mm.moments, n);
      for (int k = 0; k <= n; ++k)
        worst = std::max(worst, detail::rel_diff(modified_coeff(params, n, k), oracle.coeff(k)));
    }
    add("modified.oracle_equivalence", worst, 1e-8,
        "closed-form coefficients vs bordered-determinant oracle");
  }
  {
    const RecurrenceCoeffs rc = modified_recurrence(params, 11);
    double worst = 0.0;
    // leading and subleading coefficients give the recurrence back
    for (int n = 1; n <= 10; ++n) {
      double cn;
      if (n == 1) {
        cn = -modified_coeff(params, 1, 0) / modified_coeff(params, 1, 1);
      } else {
        cn = modified_coeff(params, n - 1, n - 2) / modified_coeff(params, n - 1, n - 1) -
             modified_coeff(params, n, n - 1) / modified_coeff(params, n, n);
      }
      worst = std::max(worst, detail::rel_diff(cn, rc.c_at(n)));
      if (n >= 2) {
        const double ratio = modified_coeff(params, n - 2, n - 2) / modified_coeff(params, n - 1, n - 1);
        worst = std::max(worst, detail::rel_diff(ratio * ratio, rc.lambda_at(n)));
      }
    }
    add("modified.recurrence_vs_coefficient_ratios", worst, 1e-10);
  }
  {
    bool ok = true;
    for (int n = 0; n <= 10 && ok; ++n)
      for (int k = 0; k <= n && ok; ++k) {
        const double b = modified_coeff(params, n, k);
        ok = ((n + k) % 2 == 0) ? (b > 0.0) : (b < 0.0);
      }
    add("modified.sign_pattern", ok ? 0.0 : 1.0, 0.5, "sign(b~_{k,n}) = (-1)^{n+k}");
  }
  if (std::abs(p - q) < 1e-12) {
    // the p = q closed forms of the modified family
    double worst = 0.0;
    const double lq = params.log_q();
    for (int n = 0; n <= 8; ++n) {
      const double ctilde = std::exp(-(0.5 * n + 0.25) * lq);
      for (int k = 0; k <= n; ++k) {
        const double body = qbinomial(n, k, q) *
                            std::exp((k * static_cast<double>(k) + 0.5 * k) * lq) /
                            qpochhammer(q, params, k + 1).to_double();
        const double bracket =
            1.0 - std::pow(q, k + 1) - (1.0 - std::pow(q, k)) * (1.0 - std::pow(q, n + 1));
        const double sgn = ((n + k) % 2 == 0) ? 1.0 : -1.0;
        worst = std::max(worst,
                         detail::rel_diff(sgn * ctilde * body * bracket, modified_coeff(params, n, k)));
      }
      // recurrence in the special form
      const RecurrenceCoeffs rc = modified_recurrence(params, 9);
      if (n >= 1) {
        const double cn = (1.0 + q * q * q - (1.0 + q * q) * std::pow(q, n)) *
                          std::exp(-(2.0 * n + 0.5) * lq);
        worst = std::max(worst, detail::rel_diff(cn, rc.c_at(n)));
        const double lam = std::pow(1.0 - std::pow(q, n), 2) * std::exp(-4.0 * n * lq);
        if (n >= 2) worst = std::max(worst, detail::rel_diff(lam, rc.lambda_at(n + 1)));
      }
      // Hankel ratio
      worst = std::max(worst, detail::rel_diff((modified_hankel(params, n) / hankel_det(params, n)).to_double(),
                                               std::pow(q, n + 1)));
    }
    add("modified.p_eq_q_reduction", worst, 1e-10);
  }

  // --- chains -------------------------------------------------------------
  {
    const ChainSequence chain = gsw_chain(params, 50);
    const ParameterFamily fam = parameter_sequences(params, 50);
    double worst = 0.0;
    for (int n = 1; n <= 50; ++n)
      for (const ParameterSequence* seq : {&fam.minimal, &fam.maximal, &fam.intermediate})
        worst = std::max(worst,
                         detail::rel_diff(chain.at(n), seq->at(n) * (1.0 - seq->at(n - 1))));
    add("chains.parameter_identity", worst, 1e-12);
  }
  {
    const ChainSequence chain = gsw_chain(params, 50);
    const RecurrenceCoeffs kd = kernel_recurrence(params, 51);
    double worst = 0.0;
    for (int n = 1; n <= 50; ++n)
      worst = std::max(worst, detail::rel_diff(chain.at(n),
                                               kd.lambda_at(n + 1) / (kd.c_at(n) * kd.c_at(n + 1))));
    add("chains.kernel_chain_link", worst, 1e-12, "beta_n = nu_{n+1}/(d_n d_{n+1})");
  }
  {
    const ParameterFamily fam = parameter_sequences(params, 50);
    bool ok = fam.minimal.at(0) == 0.0;
    for (int n = 0; n <= 50; ++n) ok = ok && fam.minimal.at(n) <= fam.maximal.at(n);
    add("chains.ordering", ok ? 0.0 : 1.0, 0.5, "m_0 = 0 and m_n <= M_n");
  }
  {
    const ChainSequence chain = gsw_chain(params, 200);
    add("chains.cf_convergence",
        std::abs(continued_fraction(chain, 200) - cf_closed_form(params, 0)), 1e-7);
  }
  {
    const RecurrenceCoeffs kd = kernel_recurrence(params, 11);
    const ParameterFamily fam = parameter_sequences(params, 11);
    const RecurrenceCoeffs via_h = shell_recurrence(kd, fam.intermediate, 10);
    const RecurrenceCoeffs via_M = shell_recurrence(kd, fam.maximal, 10);
    const RecurrenceCoeffs plain = gsw_recurrence(params, 10);
    const RecurrenceCoeffs modr = modified_recurrence(params, 10);
    double worst = 0.0;
    for (int n = 1; n <= 10; ++n) {
      worst = std::max(worst, detail::rel_diff(via_h.c_at(n), plain.c_at(n)));
      worst = std::max(worst, detail::rel_diff(via_M.c_at(n), modr.c_at(n)));
      if (n >= 2) {
        worst = std::max(worst, detail::rel_diff(via_h.lambda_at(n), plain.lambda_at(n)));
        worst = std::max(worst, detail::rel_diff(via_M.lambda_at(n), modr.lambda_at(n)));
      }
    }
    add("chains.shell_round_trip", worst, 1e-10,
        "shell(kernel, h) = plain family, shell(kernel, M) = modified family");
  }
  {
    const auto [oneL, oneG] = lg_series(params, 300);
    const ParameterFamily fam = parameter_sequences(params, 1);
    const double M0 = cf_closed_form(params, 0);
    const double h0 = fam.intermediate.at(0);
    double worst = detail::rel_diff(M0, 1.0 / oneL);
    worst = std::max(worst, detail::rel_diff(M0, h0 + (1.0 - h0) / oneG));
    add("chains.lg_reconstruction", worst, 1e-9);
  }
  {
    const DivergenceWitness w = maximal_divergence_witness(params, 12);
    double worst = 0.0;
    bool increasing = true;
    for (size_t i = 0; i < w.direct_terms.size(); ++i) {
      worst = std::max(worst, detail::rel_diff(w.direct_terms[i], w.reduced_terms[i]));
      if (i > 0 && w.partial_sums[i] <= w.partial_sums[i - 1]) increasing = false;
    }
    add("chains.divergence_terms", increasing ? worst : 1.0, 1e-10,
        "termwise dual-formula match, increasing partial sums");
  }
  {
    // shell(h) moments differ from shell(M) moments only in order 0 by
    // the factor M_0/h_0
    const RecurrenceCoeffs kd = kernel_recurrence(params, 10);
    const ParameterFamily fam = parameter_sequences(params, 10);
    const auto mom_h = moments_from_recurrence(shell_recurrence(kd, fam.intermediate, 9), 9);
    const auto mom_M = moments_from_recurrence(shell_recurrence(kd, fam.maximal, 9), 9);
    const double factor = fam.intermediate.at(0) / fam.maximal.at(0);  // h_0/M_0
    double worst = 0.0;
    for (int m = 1; m <= 8; ++m)
      worst = std::max(worst, detail::rel_diff(mom_h[static_cast<size_t>(m)],
                                               mom_M[static_cast<size_t>(m)] * factor));
    add("chains.mu_h_moment_relation", worst, 1e-8,
        "unit-mass shell(h) moments = (h_0/M_0) shell(M) moments for m >= 1");
  }

  // --- spectrum ------------------------------------------------------------
  {
    const std::vector<double> taus = zeros(params, opts.zero_count);
    double worst = 0.0;
    for (int n = 0; n < std::min(opts.zero_count, 6); ++n) {
      const DValue d = dfunction_scaled(params, taus[static_cast<size_t>(n)]);
      if (!d.value.is_zero())
        worst = std::max(worst, std::exp(d.value.logmag() - d.scale.logmag()));
    }
    add("spectrum.zero_residuals", worst, 1e-10, "|D(tau_n)| against the series scale");

    bool simple = true;
    for (size_t i = 0; i + 1 < taus.size() && simple; ++i) {
      const int s_mid = dfunction_scaled(params, std::sqrt(taus[i] * taus[i + 1])).value.sign();
      int flips = 0;
      double prev_u = std::log(taus[i]) + 1e-7;
      int s_prev = dfunction_scaled(params, std::exp(prev_u)).value.sign();
      for (int j = 1; j <= 12; ++j) {
        const double u = std::log(taus[i]) + 1e-7 +
                         (std::log(taus[i + 1]) - 1e-7 - std::log(taus[i]) - 1e-7) * j / 12.0;
        const int s = dfunction_scaled(params, std::exp(u)).value.sign();
        if (s != s_prev) ++flips;
        s_prev = s;
      }
      simple = (flips == 0) && (s_mid != 0);
    }
    add("spectrum.zero_simplicity", simple ? 0.0 : 1.0, 0.5,
        "no sign change strictly between consecutive zeros");

    const HaymanCoefficients hay = hayman_coefficients(params);
    double worst_asym = 0.0;
    for (int n : {6, 8}) {
      if (n > opts.zero_count) continue;
      const double A = taus[static_cast<size_t>(n - 1)] * std::exp((2.0 * n + 0.5) * params.log_q());
      const double dev = std::abs(A - (1.0 + hay.b1 * std::pow(q, n)));
      worst_asym = std::max(worst_asym, dev / (2.0 * std::abs(hay.b3) * std::pow(q, 3 * n)));
    }
    add("spectrum.asymptotic_consistency", worst_asym, 1.0,
        "|tau_n q^{2n+1/2} - (1+b1 q^n)| within 2|b3| q^{3n}");
    add("spectrum.hayman_identities",
        (hay.b2 == 0.0 && hay.b4 == hay.b1 * hay.b3) ? 0.0 : 1.0, 0.5);

    const auto [nu0, muM] = build_measures(params, std::min(opts.atom_count, 20));
    const double s0 = gsw_moments(params, 1).at(0).to_double();
    add("spectrum.measure_total_mass",
        detail::rel_diff(nu0.total_mass().to_double(), s0), 1e-6);
    bool positive = !nu0.atom_at_zero.is_zero() && nu0.atom_at_zero.sign() > 0;
    for (size_t i = 0; i < nu0.atoms.size(); ++i) {
      positive = positive && nu0.atoms[i].mass.sign() > 0 && nu0.atoms[i].point > 0;
      if (i > 0) positive = positive && nu0.atoms[i].point > nu0.atoms[i - 1].point;
    }
    add("spectrum.measure_positivity", positive ? 0.0 : 1.0, 0.5,
        "positive masses on strictly increasing support");

    double worst_eval = 0.0;
    for (int which = 0; which < 2; ++which) {
      const double x = taus[static_cast<size_t>(which)];
      detail::GswOrthonormalSeries series(params, x);
      for (int k = 0; k <= 10; ++k) {
        const double via_rec = series.next().to_double();
        const double via_coeff = gsw_orthonormal(params, k)(x);
        if (std::abs(via_rec) > 1e-6)
          worst_eval = std::max(worst_eval, detail::rel_diff(via_rec, via_coeff));
      }
    }
    add("spectrum.eval_consistency", worst_eval, 1e-8,
        "recurrence evaluation vs coefficient expansion at support points");
  }

  return results;
}

}  // namespace qsw
