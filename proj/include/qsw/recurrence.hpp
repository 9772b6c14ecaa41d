#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qsw/core.hpp"
#include "qsw/logreal.hpp"

namespace qsw {

/// Coefficients of a monic three-term recurrence
///   p_n(x) = (x - c_n) p_{n-1}(x) - lambda_n p_{n-2}(x),
/// stored as c_1..c_N and lambda_2..lambda_{N+1}. All lambdas of a
/// positive-definite moment problem are positive.
struct RecurrenceCoeffs {
  std::vector<double> c;
  std::vector<double> lambda;

  int count() const { return static_cast<int>(c.size()); }

  double c_at(int n) const {  // 1-based
    if (n < 1 || n > count()) throw std::out_of_range("RecurrenceCoeffs: c index");
    return c[static_cast<size_t>(n - 1)];
  }
  double lambda_at(int n) const {  // defined for n >= 2
    if (n < 2 || n > static_cast<int>(lambda.size()) + 1)
      throw std::out_of_range("RecurrenceCoeffs: lambda index");
    return lambda[static_cast<size_t>(n - 2)];
  }
};

/// Values p_0(x), ..., p_n(x) of the monic family by forward recurrence.
inline std::vector<double> eval_monic_all(const RecurrenceCoeffs& rc, int n, double x) {
  std::vector<double> p(static_cast<size_t>(n) + 1);
  p[0] = 1.0;
  if (n >= 1) p[1] = x - rc.c_at(1);
  for (int k = 2; k <= n; ++k)
    p[static_cast<size_t>(k)] =
        (x - rc.c_at(k)) * p[static_cast<size_t>(k - 1)] - rc.lambda_at(k) * p[static_cast<size_t>(k - 2)];
  return p;
}

inline double eval_monic(const RecurrenceCoeffs& rc, int n, double x) {
  return eval_monic_all(rc, n, x).back();
}

/// Orthonormal values \hat p_0(x), ..., \hat p_n(x) given the zeroth
/// moment s0 of the orthogonality measure. Plain doubles; fine for
/// moderate degrees, use log-scaled evaluation for large arguments.
inline std::vector<double> eval_orthonormal_all(const RecurrenceCoeffs& rc, double s0, int n,
                                                double x) {
  if (!(s0 > 0.0)) throw std::invalid_argument("eval_orthonormal_all: s0 must be positive");
  std::vector<double> v(static_cast<size_t>(n) + 1);
  v[0] = 1.0 / std::sqrt(s0);
  if (n >= 1) v[1] = (x - rc.c_at(1)) * v[0] / std::sqrt(rc.lambda_at(2));
  for (int k = 1; k < n; ++k)
    v[static_cast<size_t>(k + 1)] = ((x - rc.c_at(k + 1)) * v[static_cast<size_t>(k)] -
                                     std::sqrt(rc.lambda_at(k + 1)) * v[static_cast<size_t>(k - 1)]) /
                                    std::sqrt(rc.lambda_at(k + 2));
  return v;
}

/// Moments s_k / s_0 recovered from the recurrence by expanding x^k in
/// the monic basis: with x^k = sum_j a_{k,j} p_j(x), integrating kills
/// every j > 0 term, and the expansion coefficients satisfy
///   a_{k+1,j} = a_{k,j-1} + c_{j+1} a_{k,j} + lambda_{j+2} a_{k,j+1}.
inline std::vector<double> moments_from_recurrence(const RecurrenceCoeffs& rc, int count) {
  if (count < 1) return {};
  if (count > 1 && rc.count() < count - 1)
    throw std::invalid_argument("moments_from_recurrence: recurrence too short");
  std::vector<double> a(static_cast<size_t>(count), 0.0);  // a_{k,j} for current k
  a[0] = 1.0;
  std::vector<double> moments;
  moments.reserve(static_cast<size_t>(count));
  moments.push_back(1.0);
  std::vector<double> next(a.size(), 0.0);
  for (int k = 0; k + 1 < count; ++k) {
    for (int j = 0; j <= k + 1; ++j) {
      double v = 0.0;
      if (j >= 1) v += a[static_cast<size_t>(j - 1)];
      if (j <= k) v += rc.c_at(j + 1) * a[static_cast<size_t>(j)];
      if (j + 1 <= k) v += rc.lambda_at(j + 2) * a[static_cast<size_t>(j + 1)];
      next[static_cast<size_t>(j)] = v;
    }
    std::swap(a, next);
    std::fill(next.begin(), next.end(), 0.0);
    moments.push_back(a[0]);
  }
  return moments;
}

}  // namespace qsw
