#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "rabistark/model.hpp"

namespace rabistark {

inline constexpr std::size_t kDefaultMaxDim = std::size_t{1} << 22;

enum class Spin : int { Down = 0, Up = 1 };

/// Position of |n, s> in the interleaved spin (x) Fock ordering.
[[nodiscard]] constexpr std::size_t basis_index(std::size_t n, Spin s) noexcept {
  return 2 * n + static_cast<std::size_t>(s);
}

/// Real symmetric banded matrix.
///
/// Only the lower band is stored, so H(i, j) and H(j, i) read the same
/// double. Matrices produced by build_hamiltonian() use the basis
/// |n, s> -> 2n + (s == Up), s an eigenstate of sigma_z, and have bandwidth 3.
class HamiltonianMatrix {
 public:
  HamiltonianMatrix(std::size_t dim, std::size_t bandwidth, std::size_t cutoff = 0);

  /// Wraps a dense symmetric matrix; throws ValidationError when it is not
  /// exactly symmetric. The bandwidth is the widest nonzero diagonal.
  [[nodiscard]] static HamiltonianMatrix from_dense(const Eigen::MatrixXd& dense);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  /// Largest Fock occupation N_c; zero for matrices not built over a Fock basis.
  [[nodiscard]] std::size_t cutoff() const noexcept { return cutoff_; }
  [[nodiscard]] std::size_t bandwidth() const noexcept { return bandwidth_; }
  /// True when the rows follow the interleaved |n, s> ordering.
  [[nodiscard]] bool fock_ordered() const noexcept { return fock_ordered_; }

  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double value);

  [[nodiscard]] Eigen::MatrixXd dense() const;
  /// y = H x
  [[nodiscard]] Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// Max absolute row sum (an upper bound on the spectral radius).
  [[nodiscard]] double norm_inf() const;

 private:
  friend HamiltonianMatrix build_hamiltonian(const ModelParams&, std::size_t, std::size_t);
  friend HamiltonianMatrix mean_photon_operator(std::size_t);

  std::size_t dim_;
  std::size_t bandwidth_;
  std::size_t cutoff_;
  bool fock_ordered_ = false;
  Eigen::MatrixXd band_;  // band_(d, j) == H(j + d, j)
};

/// Truncated Hamiltonian of the selected model variant over n = 0..cutoff.
///
/// Diagonal:     <n,s|H|n,s> = omega n + s (delta/2 + U n/2) + kappa n^2, s = +-1
/// Off-diagonal: <n+1,-s|H|n,s> = g sqrt(n+1)
///
/// Throws std::invalid_argument for cutoff == 0 and DimensionError when
/// 2 (cutoff + 1) exceeds max_dim.
[[nodiscard]] HamiltonianMatrix build_hamiltonian(const ModelParams& params, std::size_t cutoff,
                                                  std::size_t max_dim = kDefaultMaxDim);

/// a^+a (x) 1 over the same basis as build_hamiltonian().
[[nodiscard]] HamiltonianMatrix mean_photon_operator(std::size_t cutoff);

/// Diagonal of the parity operator sigma_z (-1)^{a^+a} in the interleaved basis.
[[nodiscard]] Eigen::VectorXd parity_diagonal(std::size_t cutoff);

/// One parity block of a Fock Hamiltonian: a symmetric tridiagonal chain
/// |0,s0> - |1,-s0> - |2,s0> - ...
struct ParitySector {
  std::vector<double> diag;
  std::vector<double> off;          // off[m] couples chain sites m and m + 1
  std::vector<std::size_t> basis;   // basis[m] = row of chain site m in the full matrix
};

/// Splits a Fock-ordered Hamiltonian into its two parity chains
/// (sector 0 starts at |0,Down>, sector 1 at |0,Up>). Returns nullopt when
/// the matrix is not Fock ordered or has couplings that break parity.
[[nodiscard]] std::optional<std::array<ParitySector, 2>> parity_sectors(const HamiltonianMatrix& h);

}  // namespace rabistark
