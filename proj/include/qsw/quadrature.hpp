#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "qsw/core.hpp"
#include "qsw/gsw.hpp"

namespace qsw {
namespace detail {

/// Nodes and weights of n-point Gauss-Legendre on [-1, 1], by Newton
/// iteration on the Legendre recurrence.
struct GaussLegendre {
  std::vector<double> node, weight;

  explicit GaussLegendre(int n) {
    node.resize(static_cast<size_t>(n));
    weight.resize(static_cast<size_t>(n));
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      node[static_cast<size_t>(i)] = -x;
      node[static_cast<size_t>(n - 1 - i)] = x;
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      weight[static_cast<size_t>(i)] = w;
      weight[static_cast<size_t>(n - 1 - i)] = w;
    }
  }
};

inline const GaussLegendre& gl20() {
  static const GaussLegendre rule(20);
  return rule;
}

}  // namespace detail

/// Integral of f(x) against the orthogonality density over (0, inf).
/// The substitution x = e^u turns the lognormal factor into a Gaussian
/// kernel in u; the window is grown until the envelope integrand (with
/// polynomial growth bound deg_hint) has decayed by e^{-45} relative to
/// its peak, then composite 20-point Gauss-Legendre panels are halved
/// until the value settles.
inline double integrate_density(const QParams& params, const std::function<double(double)>& f,
                                int deg_hint = 0) {
  const double L = -params.log_q();
  const double logp_const = qpochhammer_inf(params.p, params).logmag();
  const double sq = std::sqrt(params.q);

  const auto log_envelope = [&](double u) {
    double le = (deg_hint + 1.0) * u - u * u / (2.0 * L) + logp_const -
                0.5 * std::log(2.0 * std::numbers::pi * L);
    if (params.p > 0.0)
      le += qpochhammer_inf(-params.p / (sq * std::exp(u)), params).logmag();
    return le;
  };
  // integrand in u, including the Jacobian e^u
  const auto g = [&](double u) {
    const double x = std::exp(u);
    return f(x) * density(params, x) * x;
  };

  // locate the envelope peak, then extend until 45 e-folds below it
  double u_peak = (deg_hint + 1.0) * L;
  double peak = log_envelope(u_peak);
  for (double u = u_peak - 2.0 * L; u <= u_peak + 2.0 * L; u += 0.25 * L) {
    const double v = log_envelope(u);
    if (v > peak) {
      peak = v;
      u_peak = u;
    }
  }
  const double step = std::max(1.0, std::sqrt(L));
  double lo = u_peak, hi = u_peak;
  while (log_envelope(lo) > peak - 45.0 && lo > u_peak - 600.0) lo -= step;
  while (log_envelope(hi) > peak - 45.0 && hi < u_peak + 600.0) hi += step;

  const auto panels = [&](int count) {
    const auto& rule = detail::gl20();
    CompensatedSum total;
    const double w = (hi - lo) / count;
    for (int pnl = 0; pnl < count; ++pnl) {
      const double a = lo + pnl * w;
      const double half = 0.5 * w, mid = a + half;
      for (size_t i = 0; i < rule.node.size(); ++i)
        total.add(rule.weight[i] * half * g(mid + half * rule.node[i]));
    }
    return total.value();
  };

  int count = std::max(8, static_cast<int>(std::ceil((hi - lo) / std::max(0.5, 0.5 * std::sqrt(L)))));
  double prev = panels(count);
  for (int round = 0; round < 4; ++round) {
    count *= 2;
    const double next = panels(count);
    const double scale = std::max(std::abs(next), 1e-300);
    if (std::abs(next - prev) <= 1e-12 * scale) return next;
    prev = next;
  }
  return prev;
}

/// Moment integral of x^m against the density.
inline double density_moment(const QParams& params, int m) {
  return integrate_density(
      params, [m](double x) { return std::pow(x, m); }, m);
}

}  // namespace qsw
