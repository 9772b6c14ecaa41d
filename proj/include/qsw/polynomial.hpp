#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qsw/core.hpp"

namespace qsw {

/// Dense real polynomial in the monomial basis with exact degree tracking.
/// Trailing zero coefficients are trimmed on construction; the zero
/// polynomial has degree 0.
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  explicit Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  double coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[static_cast<size_t>(k)]
                                                            : 0.0;
  }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double leading() const { return coeffs_.back(); }

  /// Horner evaluation.
  double operator()(double x) const {
    double v = coeffs_.back();
    for (size_t i = coeffs_.size() - 1; i-- > 0;) v = v * x + coeffs_[i];
    return v;
  }

  /// Termwise evaluation with compensated accumulation; reference route
  /// for the Horner consistency property.
  double eval_termwise(double x) const {
    CompensatedSum sum;
    double xpow = 1.0;
    for (double c : coeffs_) {
      sum.add(c * xpow);
      xpow *= x;
    }
    return sum.value();
  }

 private:
  std::vector<double> coeffs_;
};

}  // namespace qsw
