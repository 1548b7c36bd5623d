#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "rabistark/fockspace.hpp"
#include "rabistark/model.hpp"

namespace rabistark {

// ---------------------------------------------------------------------------
// Symmetric tridiagonal kernel
// ---------------------------------------------------------------------------

struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // size diag.size() - 1
};

/// Number of eigenvalues of t strictly below x (Sturm sequence count).
[[nodiscard]] std::size_t sturm_count(const SymTridiagonal& t, double x);

/// The k smallest eigenvalues of t, ascending, by Sturm bisection.
[[nodiscard]] std::vector<double> tridiagonal_lowest(const SymTridiagonal& t, std::size_t k);

/// Unit eigenvectors for the given (ascending) eigenvalues of t by inverse
/// iteration. Vectors for nearby eigenvalues are orthogonalized against each
/// other. Column j of the result belongs to values[j].
[[nodiscard]] Eigen::MatrixXd tridiagonal_vectors(const SymTridiagonal& t,
                                                  const std::vector<double>& values);

// ---------------------------------------------------------------------------
// Spectra of Hamiltonian matrices
// ---------------------------------------------------------------------------

struct Spectrum {
  std::vector<double> energies;          // ascending
  std::vector<Eigen::VectorXd> vectors;  // empty unless requested
  std::size_t cutoff = 0;
  std::size_t k_requested = 0;
};

struct SolverOptions {
  /// Solve Fock Hamiltonians as two independent tridiagonal parity chains.
  bool use_parity_sectors = true;
  /// Largest matrix accepted by the dense (Householder) path.
  std::size_t max_dense_dim = 8192;
};

/// Lowest k eigenpairs of h. Fock-ordered Hamiltonians go through the parity
/// chains; anything else is reduced with a dense Householder
/// tridiagonalization first. Vectors satisfy ||Hv - Ev|| <= 1e-8 (1 + |E|),
/// otherwise SolverError is thrown.
[[nodiscard]] Spectrum eigen_symmetric(const HamiltonianMatrix& h, std::size_t k,
                                       bool want_vectors, const SolverOptions& options = {});

// ---------------------------------------------------------------------------
// Cutoff convergence
// ---------------------------------------------------------------------------

enum class Classification { Converged, CollapsedDegenerate, UnboundedBelow, Undetermined };

[[nodiscard]] std::string_view to_string(Classification c) noexcept;

/// Converged or CollapsedDegenerate.
[[nodiscard]] constexpr bool is_converged(Classification c) noexcept {
  return c == Classification::Converged || c == Classification::CollapsedDegenerate;
}

struct CutoffRecord {
  std::size_t cutoff = 0;
  std::vector<double> energies;
};

struct ConvergenceReport {
  Classification classification = Classification::Undetermined;
  std::size_t final_cutoff = 0;
  std::vector<CutoffRecord> history;
  double tolerance = 0.0;
  /// Ground-energy decrease over the last cutoff doubling.
  double drift_rate = 0.0;
};

struct ConvergenceOptions {
  std::size_t initial_cutoff = 32;
  std::size_t max_cutoff = std::size_t{1} << 19;
  /// Spread of the tracked levels below which a converged spectrum counts as collapsed.
  double degeneracy_window = 1e-2;
  /// Ground-energy decrements must not shrink faster than this ratio to call divergence.
  double divergence_ratio = 0.95;
  bool want_vectors = false;
  SolverOptions solver{};
};

/// Lowest k levels under the cutoff doubling schedule initial, 2 initial, ...
/// (the last step is clamped to max_cutoff).
///
///   Converged           max_k |E_k(N) - E_k(N_prev)| <= tol
///   CollapsedDegenerate Converged, >= 3 levels tracked and all inside degeneracy_window
///   UnboundedBelow      the ground energy fell by > 10 tol on each of the last three
///                       doublings without the decrements contracting
///   Undetermined        max_cutoff reached first
[[nodiscard]] std::pair<Spectrum, ConvergenceReport> converged_spectrum(
    const ModelParams& params, std::size_t k, double tol, const ConvergenceOptions& options);

[[nodiscard]] std::pair<Spectrum, ConvergenceReport> converged_spectrum(const ModelParams& params,
                                                                        std::size_t k, double tol,
                                                                        std::size_t max_cutoff);

}  // namespace rabistark
