#pragma once

// Laguerre polynomials and the displacement-operator kernels built from them.
//
// For D = exp[2 lambda (a^+ - a)] the diagonal and first off-diagonal Fock
// matrix elements of its even/odd parts are
//
//   g0(n, lambda) = <n|cosh[2 lambda (a^+ - a)]|n>   = L_n(4 lambda^2) exp(-2 lambda^2)
//   f1(n, lambda) = <n+1|sinh[2 lambda (a^+ - a)]|n> = 2 lambda L_n^1(4 lambda^2) exp(-2 lambda^2) / (n+1)
//
// All functions are pure and thread-safe. Invalid arguments raise std::domain_error.

namespace rabistark::specialfn {

inline constexpr int kMaxDegree = 10000;

/// L_n(x) by forward three-term recurrence. Requires 0 <= n <= kMaxDegree, finite x >= 0.
[[nodiscard]] double laguerre(int n, double x);

/// Associated Laguerre polynomial L_n^1(x), same domain as laguerre().
[[nodiscard]] double assoc_laguerre1(int n, double x);

/// L_n(4 lambda^2) exp(-2 lambda^2); requires |lambda| <= 1.
[[nodiscard]] double g0(int n, double lambda);

/// 2 lambda L_n^1(4 lambda^2) exp(-2 lambda^2) / (n + 1); requires |lambda| <= 1.
[[nodiscard]] double f1(int n, double lambda);

}  // namespace rabistark::specialfn
