#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "rabistark/specialfn.hpp"

using namespace rabistark::specialfn;

namespace {
double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), std::numeric_limits<double>::min());
}
}  // namespace

TEST_CASE("laguerre closed values") {
  CHECK(laguerre(0, 0.37) == 1.0);
  CHECK(laguerre(1, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(assoc_laguerre1(5, 0.0) == 6.0);
  CHECK(assoc_laguerre1(0, 2.0) == 1.0);
  for (int n = 0; n <= 200; ++n) {
    CHECK(laguerre(n, 0.0) == 1.0);
    CHECK(assoc_laguerre1(n, 0.0) == static_cast<double>(n + 1));
  }
}

TEST_CASE("laguerre matches the series oracle") {
  CHECK(rel_err(laguerre(7, 0.04), oracle::laguerre_series(7, 0, 0.04)) <= 1e-12);
  CHECK(rel_err(assoc_laguerre1(4, 0.16), oracle::laguerre_series(4, 1, 0.16)) <= 1e-12);

  double worst = 0.0;
  for (int n = 0; n <= 60; ++n)
    for (double x : {0.0, 0.01, 0.1, 1.0, 4.0}) {
      worst = std::max(worst, rel_err(laguerre(n, x), oracle::laguerre_series(n, 0, x)));
      worst = std::max(worst, rel_err(assoc_laguerre1(n, x), oracle::laguerre_series(n, 1, x)));
    }
  CHECK(worst <= 1e-12);
}

TEST_CASE("laguerre domain errors") {
  CHECK_THROWS_AS((void)laguerre(-1, 0.5), std::domain_error);
  CHECK_THROWS_AS((void)laguerre(kMaxDegree + 1, 0.5), std::domain_error);
  CHECK_THROWS_AS((void)laguerre(3, -0.1), std::domain_error);
  CHECK_THROWS_AS((void)assoc_laguerre1(3, std::numeric_limits<double>::quiet_NaN()), std::domain_error);
  CHECK_THROWS_AS((void)assoc_laguerre1(3, std::numeric_limits<double>::infinity()), std::domain_error);
  CHECK_THROWS_AS((void)g0(2, 1.5), std::domain_error);
  CHECK_NOTHROW((void)laguerre(kMaxDegree, 1e-3));
}

TEST_CASE("kernel examples") {
  CHECK(g0(3, 0.0) == 1.0);
  CHECK(g0(0, 0.1) == doctest::Approx(std::exp(-0.02)).epsilon(1e-15));
  CHECK(f1(2, 0.0) == 0.0);
  CHECK(f1(0, 0.1) == doctest::Approx(0.2 * std::exp(-0.02)).epsilon(1e-15));
}

TEST_CASE("kernels equal displacement-operator matrix elements") {
  const int dim = 200;
  {
    const double lambda = 0.2;
    const Eigen::MatrixXd dp = oracle::displacement(2.0 * lambda, dim);
    const Eigen::MatrixXd dm = oracle::displacement(-2.0 * lambda, dim);
    const Eigen::MatrixXd cosh = 0.5 * (dp + dm);
    CHECK(std::abs(g0(6, lambda) - cosh(6, 6)) <= 1e-12);
  }
  {
    const double lambda = 0.25;
    const Eigen::MatrixXd dp = oracle::displacement(2.0 * lambda, dim);
    const Eigen::MatrixXd dm = oracle::displacement(-2.0 * lambda, dim);
    const Eigen::MatrixXd sinh = 0.5 * (dp - dm);
    // <n+1| sinh |n> = sqrt(n+1) F1(n)
    const int n = 5;
    CHECK(std::abs(f1(n, lambda) * std::sqrt(n + 1.0) - sinh(n + 1, n)) <= 1e-12);
  }
}

TEST_CASE("kernel parity in lambda") {
  for (int n = 0; n <= 20; ++n)
    for (double l : {0.01, 0.1, 0.3, 0.7, 1.0}) {
      CHECK(g0(n, -l) == g0(n, l));
      CHECK(f1(n, -l) == -f1(n, l));
    }
}

TEST_CASE("zero-order expansion limits") {
  for (int n = 0; n <= 10; ++n)
    for (double l : {0.001, 0.01, 0.05, 0.1, 0.15}) {
      const double e = std::exp(-2.0 * l * l);
      CHECK(std::abs(g0(n, l) - e) <= 4.0 * n * l * l * e * 2.0);
    }
  for (int n = 0; n <= 10; ++n) {
    double prev = std::numeric_limits<double>::infinity();
    for (double l : {0.1, 0.01, 0.001, 1e-4}) {
      const double dev = std::abs(f1(n, l) / (2.0 * l * std::exp(-2.0 * l * l)) - 1.0);
      CHECK(dev <= prev);
      prev = dev;
    }
    CHECK(prev < 1e-6);
  }
}
