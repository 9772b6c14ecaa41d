#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qsw {

/// Sign plus natural-log magnitude. Moments and Hankel determinants grow
/// like q^{-(n+1)^2/2}, far past double range for moderate n, so products
/// and quotients are carried in log space and converted to plain double
/// only at API boundaries (where the conversion may saturate; see
/// fits_double()).
class LogReal {
 public:
  constexpr LogReal() = default;  // exact zero

  static LogReal from_double(double x) {
    if (x == 0.0) return LogReal();
    return LogReal(x < 0.0 ? -1 : 1, std::log(std::abs(x)));
  }
  static LogReal from_log(int sign, double logmag) {
    if (sign == 0) return LogReal();
    return LogReal(sign < 0 ? -1 : 1, logmag);
  }
  static LogReal one() { return LogReal(1, 0.0); }

  int sign() const { return sign_; }
  double logmag() const { return logmag_; }
  bool is_zero() const { return sign_ == 0; }
  double log10_magnitude() const { return logmag_ / kLn10; }

  /// False when to_double() would overflow or underflow.
  bool fits_double() const {
    return sign_ == 0 || (logmag_ < 709.0 && logmag_ > -744.0);
  }
  double to_double() const { return sign_ == 0 ? 0.0 : sign_ * std::exp(logmag_); }

  LogReal operator-() const { return LogReal(-sign_, logmag_); }

  LogReal operator*(const LogReal& o) const {
    if (sign_ == 0 || o.sign_ == 0) return LogReal();
    return LogReal(sign_ * o.sign_, logmag_ + o.logmag_);
  }
  LogReal& operator*=(const LogReal& o) { return *this = *this * o; }

  LogReal operator/(const LogReal& o) const {
    if (o.sign_ == 0) throw std::domain_error("LogReal: division by zero");
    if (sign_ == 0) return LogReal();
    return LogReal(sign_ * o.sign_, logmag_ - o.logmag_);
  }

  /// Signed log-sum-exp. Opposite signs subtract in log space; the usual
  /// cancellation caveat of plain subtraction applies unchanged.
  LogReal operator+(const LogReal& o) const {
    if (sign_ == 0) return o;
    if (o.sign_ == 0) return *this;
    const LogReal& big = logmag_ >= o.logmag_ ? *this : o;
    const LogReal& small = logmag_ >= o.logmag_ ? o : *this;
    const double d = small.logmag_ - big.logmag_;  // <= 0
    if (sign_ == o.sign_) return LogReal(sign_, big.logmag_ + std::log1p(std::exp(d)));
    const double rest = -std::expm1(d);  // 1 - e^d in [0, 1]
    if (rest == 0.0) return LogReal();
    return LogReal(big.sign_, big.logmag_ + std::log(rest));
  }
  LogReal operator-(const LogReal& o) const { return *this + (-o); }
  LogReal& operator+=(const LogReal& o) { return *this = *this + o; }

  friend LogReal abs(const LogReal& a) {
    return a.sign_ == 0 ? LogReal() : LogReal(1, a.logmag_);
  }
  friend LogReal sqrt(const LogReal& a) {
    if (a.sign_ < 0) throw std::domain_error("LogReal: sqrt of negative value");
    if (a.sign_ == 0) return LogReal();
    return LogReal(1, 0.5 * a.logmag_);
  }
  /// a^e for a >= 0 (a = 0 needs e > 0).
  friend LogReal pow(const LogReal& a, double e) {
    if (a.sign_ < 0) throw std::domain_error("LogReal: pow of negative value");
    if (a.sign_ == 0) {
      if (e <= 0.0) throw std::domain_error("LogReal: pow(0, e) needs e > 0");
      return LogReal();
    }
    return LogReal(1, e * a.logmag_);
  }

  static bool magnitude_less(const LogReal& a, const LogReal& b) {
    if (a.sign_ == 0) return b.sign_ != 0;
    if (b.sign_ == 0) return false;
    return a.logmag_ < b.logmag_;
  }

 private:
  static constexpr double kLn10 = 2.302585092994045684;
  constexpr LogReal(int sign, double logmag) : sign_(sign), logmag_(logmag) {}

  int sign_ = 0;
  double logmag_ = -std::numeric_limits<double>::infinity();
};

}  // namespace qsw
