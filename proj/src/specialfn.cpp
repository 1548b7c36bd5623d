#include "rabistark/specialfn.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rabistark::specialfn {
namespace {

void check_domain(int n, double x, const char* who) {
  if (n < 0 || n > kMaxDegree)
    throw std::domain_error(std::string(who) + ": degree out of range [0, 10000]");
  if (!std::isfinite(x) || x < 0.0)
    throw std::domain_error(std::string(who) + ": argument must be finite and >= 0");
}

void check_lambda(double lambda, const char* who) {
  if (!std::isfinite(lambda) || std::abs(lambda) > 1.0)
    throw std::domain_error(std::string(who) + ": |lambda| must be <= 1");
}

// (j + 1) L_{j+1}^k = (2j + 1 + k - x) L_j^k - (j + k) L_{j-1}^k
// Carried in long double: near a zero of L_n the double-precision recurrence
// loses a few bits of relative accuracy.
double laguerre_k(int n, int k, double x) {
  long double prev = 1.0L;
  if (n == 0) return 1.0;
  const long double xl = x;
  long double cur = 1.0L + k - xl;
  for (int j = 1; j < n; ++j) {
    const long double next = ((2 * j + 1 + k - xl) * cur - (j + k) * prev) / (j + 1);
    prev = cur;
    cur = next;
  }
  return static_cast<double>(cur);
}

}  // namespace

double laguerre(int n, double x) {
  check_domain(n, x, "laguerre");
  return laguerre_k(n, 0, x);
}

double assoc_laguerre1(int n, double x) {
  check_domain(n, x, "assoc_laguerre1");
  return laguerre_k(n, 1, x);
}

double g0(int n, double lambda) {
  check_lambda(lambda, "g0");
  const double l2 = lambda * lambda;
  return laguerre(n, 4.0 * l2) * std::exp(-2.0 * l2);
}

double f1(int n, double lambda) {
  check_lambda(lambda, "f1");
  const double l2 = lambda * lambda;
  return 2.0 * lambda * assoc_laguerre1(n, 4.0 * l2) * std::exp(-2.0 * l2) / (n + 1);
}

}  // namespace rabistark::specialfn
