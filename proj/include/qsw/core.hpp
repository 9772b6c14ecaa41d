#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace qsw {

/// Thrown when a computation leaves the numerically supported range,
/// e.g. support points beyond double precision.
class range_error : public std::runtime_error {
 public:
  explicit range_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an iterative computation does not settle within the
/// configured term budget.
class convergence_error : public std::runtime_error {
 public:
  explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

/// The parameter pair (p, q) together with the tolerances shared by all
/// infinite series and products in the library. Requires 0 <= p < 1 and
/// 0 < q < 1; p = 0 is the classical Stieltjes-Wigert case.
struct QParams {
  double p;
  double q;
  double eps;
  int max_terms;

  explicit QParams(double p_, double q_, double eps_ = 1e-15, int max_terms_ = 10000)
      : p(p_), q(q_), eps(eps_), max_terms(max_terms_) {
    if (!(p >= 0.0 && p < 1.0))
      throw std::invalid_argument("QParams: p must lie in [0, 1)");
    if (!(q > 0.0 && q < 1.0))
      throw std::invalid_argument("QParams: q must lie in (0, 1)");
    if (!(eps > 0.0)) throw std::invalid_argument("QParams: eps must be positive");
    if (max_terms < 1) throw std::invalid_argument("QParams: max_terms must be at least 1");
  }

  double log_q() const { return std::log(q); }
};

/// Neumaier-compensated accumulator: carries the rounding error of every
/// add so long sums stay at ~1 ulp per term.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace qsw
