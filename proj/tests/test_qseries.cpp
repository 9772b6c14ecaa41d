#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qsw/qseries.hpp"

using namespace qsw;

namespace {

// 200-factor reference product in long double, the independent oracle for
// the truncated infinite products.
long double reference_pochhammer_inf(long double z, long double q, int terms = 200) {
  long double prod = 1.0L;
  long double zq = z;
  for (int k = 0; k < terms; ++k) {
    prod *= 1.0L - zq;
    zq *= q;
  }
  return prod;
}

}  // namespace

TEST_CASE("QParams validates its domain") {
  CHECK_THROWS_AS(QParams(-0.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(QParams(1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(QParams(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(QParams(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(QParams(0.0, 0.5, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(QParams(0.0, 0.5, 1e-15, 0), std::invalid_argument);
  CHECK_NOTHROW(QParams(0.0, 0.5));  // p = 0 is fully supported
}

TEST_CASE("LogReal round trip and arithmetic") {
  for (double x : {1.0, -3.5, 1e-20, 7.25e100, -2.3e-150}) {
    const double rt = LogReal::from_double(x).to_double();
    CHECK(std::abs(rt - x) <= 4e-16 * std::abs(x));
  }
  CHECK(LogReal::from_double(0.0).is_zero());
  CHECK(LogReal().to_double() == 0.0);

  // multiplication is exact in sign and additive in logmag
  const LogReal a = LogReal::from_log(-1, 3.0), b = LogReal::from_log(-1, 5.25);
  CHECK((a * b).sign() == 1);
  CHECK((a * b).logmag() == 8.25);

  // signed addition
  const LogReal s = LogReal::from_double(3.0) + LogReal::from_double(-2.0);
  CHECK(s.to_double() == Catch::Approx(1.0).epsilon(1e-14));
  CHECK((LogReal::from_double(2.0) - LogReal::from_double(2.0)).is_zero());

  // out-of-range magnitudes are flagged rather than silently saturated
  CHECK_FALSE(LogReal::from_log(1, 800.0).fits_double());
  CHECK(LogReal::from_log(1, 700.0).fits_double());
}

TEST_CASE("q-Pochhammer finite products") {
  const QParams pr(0.3, 0.5);
  CHECK(qpochhammer(0.7, pr, 0).to_double() == 1.0);   // empty product
  CHECK(qpochhammer(12.3, pr, 0).to_double() == 1.0);

  // (0.5; 0.5)_2 = (1 - 0.5)(1 - 0.25)
  const QParams half(0.0, 0.5);
  CHECK(qpochhammer(0.5, half, 2).to_double() == Catch::Approx(0.375).epsilon(1e-15));

  // a vanishing factor gives the exact zero
  CHECK(qpochhammer(1.0, half, 1).is_zero());
  CHECK(qpochhammer(1.0, half, kInfinite).is_zero());
  CHECK(qpochhammer(4.0, half, 3).is_zero());  // 1 - 4 q^2 = 0 at q = 0.5
}

TEST_CASE("q-Pochhammer infinite products against the reference oracle") {
  for (double q : {0.25, 0.5, 0.7}) {
    for (double z : {0.5, -0.8, 0.95, -3.0}) {
      const QParams pr(0.0, q, 1e-18);
      const double got = qpochhammer_inf(z, pr).to_double();
      const long double want = reference_pochhammer_inf(z, q);
      CHECK(got == Catch::Approx(static_cast<double>(want)).epsilon(5e-15));
    }
  }
}

TEST_CASE("q-Pochhammer step identity (z;q)_{n+1} = (z;q)_n (1 - z q^n)") {
  const QParams pr(0.2, 0.6);
  for (double z : {0.4, -1.7, 2.2}) {
    double zq = z;
    for (int n = 0; n <= 25; ++n) {
      const LogReal lhs = qpochhammer(z, pr, n + 1);
      const LogReal rhs = qpochhammer(z, pr, n) * LogReal::from_double(1.0 - zq);
      if (lhs.is_zero()) {
        CHECK(rhs.is_zero());
      } else {
        CHECK(lhs.sign() == rhs.sign());
        CHECK(lhs.logmag() == Catch::Approx(rhs.logmag()).margin(1e-13));
      }
      zq *= pr.q;
    }
  }
}

TEST_CASE("q-binomial coefficients") {
  CHECK(qbinomial(5, 0, 0.3) == 1.0);
  CHECK(qbinomial(7, 7, 0.3) == 1.0);
  // [2 1]_q = 1 + q
  CHECK(qbinomial(2, 1, 0.5) == Catch::Approx(1.5).epsilon(1e-15));
  // [4 2]_q = (1 + q^2)(1 + q + q^2)
  CHECK(qbinomial(4, 2, 0.5) == Catch::Approx(2.1875).epsilon(1e-15));
  CHECK_THROWS_AS(qbinomial(3, 4, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(qbinomial(3, -1, 0.5), std::invalid_argument);

  // symmetry and product identity
  const QParams pr(0.0, 0.45);
  for (int n = 0; n <= 12; ++n)
    for (int k = 0; k <= n; ++k) {
      CHECK(qbinomial(n, k, pr.q) == Catch::Approx(qbinomial(n, n - k, pr.q)).epsilon(1e-14));
      const double lhs = qbinomial(n, k, pr.q) * qpochhammer(pr.q, pr, k).to_double() *
                         qpochhammer(pr.q, pr, n - k).to_double();
      CHECK(lhs == Catch::Approx(qpochhammer(pr.q, pr, n).to_double()).epsilon(1e-13));
    }
}

TEST_CASE("delta difference of infinite products") {
  // p = 0 collapses to 1 - (q^n; q)_inf
  const QParams p0(0.0, 0.5);
  CHECK(delta(p0, 0) == Catch::Approx(1.0).epsilon(1e-15));
  for (int n : {1, 2, 5, 10}) {
    const double direct = 1.0 - qpochhammer_inf(std::pow(0.5, n), p0).to_double();
    CHECK(delta(p0, n) == Catch::Approx(direct).epsilon(1e-13));
  }

  // general p against the long double reference at matched truncation
  const QParams pr(0.5, 0.5, 1e-18);
  const long double want = reference_pochhammer_inf(0.5L * 0.5L, 0.5L) -
                           reference_pochhammer_inf(0.5L, 0.5L);
  CHECK(delta(pr, 1) == Catch::Approx(static_cast<double>(want)).epsilon(1e-13));

  // Delta_0 = (p;q)_inf exactly, since (1;q)_inf = 0
  const QParams pr2(0.3, 0.4);
  CHECK(delta(pr2, 0) ==
        Catch::Approx(qpochhammer_inf(0.3, pr2).to_double()).epsilon(1e-14));

  // positivity and the q^n leading behaviour survive out to n = 52
  double prev = delta(pr2, 1);
  for (int n = 2; n <= 52; ++n) {
    const double d = delta(pr2, n);
    CHECK(d > 0.0);
    CHECK(d / prev == Catch::Approx(0.4).margin(0.02));  // ratio tends to q
    prev = d;
  }
}

TEST_CASE("psi theta sum and its product form") {
  // leading behaviour 1 + q + O(q^3)
  CHECK(psi(0.01) == Catch::Approx(1.01).margin(1e-4));

  // dual-formula agreement, frozen reference values from a 50-digit run
  CHECK(psi(0.5) == Catch::Approx(1.6416325606551538663).epsilon(1e-14));
  CHECK(psi(0.25) == Catch::Approx(1.2658700952308663684).epsilon(1e-14));
  for (double q : {0.1, 0.3, 0.5, 0.7, 0.25}) {
    CHECK(psi(q) == Catch::Approx(psi_product_form(q)).epsilon(1e-12));
  }
}

TEST_CASE("q-binomial theorem partial sums") {
  for (double p : {0.0, 0.3, 0.6}) {
    for (double q : {0.3, 0.5, 0.6}) {
      const QParams pr(p, q);
      double sum = 0.0, term = 1.0, pn = p, qn = q;
      for (int n = 0; n <= 200; ++n) {
        sum += term;
        term *= q * (1.0 - pn) / (1.0 - qn);
        pn *= q;
        qn *= q;
      }
      const double target =
          (qpochhammer_inf(p * q, pr) / qpochhammer_inf(q, pr)).to_double();
      CHECK(sum == Catch::Approx(target).epsilon(1e-12));
    }
  }
}
