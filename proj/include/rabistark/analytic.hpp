#pragma once

// Jaynes-Cummings-like reduction of the (completed) Rabi-Stark model.
//
// After rotating about y and displacing with exp[lambda sz (a^+ - a)] the
// Hamiltonian is block diagonal, up to neglected higher-order terms, in the
// pairs {|+x,n>, |-x,n+1>}. lambda is fixed by a self-consistency condition
// that depends on the ladder index n and a sign T_z = +-1.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rabistark/eigen.hpp"
#include "rabistark/model.hpp"

namespace rabistark {

enum class Tz : int { Plus = 1, Minus = -1 };

[[nodiscard]] constexpr double sign(Tz t) noexcept { return static_cast<double>(static_cast<int>(t)); }

enum class LambdaMode { Full, ZeroOrder, CompletedFull, CoLimit };

[[nodiscard]] std::string_view to_string(LambdaMode m) noexcept;

/// Left-hand side of the displacement condition
///
///   lambda omega + g - (U/2) G0(n) lambda T_z + (F1(n)/2)(delta + U lambda^2 + U n)
///     [+ 2 kappa lambda^3 + 2 kappa lambda n + kappa lambda T_z]
///
/// The bracketed photon terms are live only for the completed variant.
/// Requires |lambda| < 1.
[[nodiscard]] double lambda_condition_residual(const ModelParams& params, int n, Tz t_z,
                                               double lambda);

/// Displacement parameter for ladder index n.
///
///  Full / CompletedFull  root of the residual nearest zero on [-1, 0]
///                        (Full drops the photon terms even for the completed variant)
///  ZeroOrder             closed form with L_n -> 1, L_n^1 -> n + 1
///  CoLimit               -g / (U n + delta + G [+ 2 kappa n - kappa T_z]), G = omega - U T_z / 2
///
/// Throws NoRootError when Full/CompletedFull find no sign change.
[[nodiscard]] double solve_lambda(const ModelParams& params, int n, Tz t_z, LambdaMode mode);

/// General (not necessarily symmetric) real 2x2 block on {|+x,n>, |-x,n+1>}.
struct Block2 {
  double h11 = 0.0;
  double h12 = 0.0;
  double h21 = 0.0;
  double h22 = 0.0;

  /// Both eigenvalues, ascending. Throws RegimeError when they are complex.
  [[nodiscard]] std::array<double, 2> eigenvalues() const;
  /// Right eigenvector (c1, c2) for eigenvalue e, unit 2-norm, c1 >= 0.
  [[nodiscard]] std::array<double, 2> eigenvector(double e) const;
};

/// JC-like block for ladder index n at displacement lambda, with the photon
/// corrections added for the completed variant.
[[nodiscard]] Block2 jc_block(const ModelParams& params, int n, double lambda);

/// <-x,0|H_E|-x,0> for the original model:
///   omega l^2 + 2 l g - (delta - U l^2 + 4 U l^4) exp(-2 l^2) / 2
[[nodiscard]] double ground_energy_original(const ModelParams& params, double lambda);

/// Completed-model form:
///   omega l^2 + 2 l g + ((U l^2 - delta)/2 - 2 U l^4) exp(-2 l^2) + kappa l^2 (1 + l^2)
[[nodiscard]] double ground_energy_completed(const ModelParams& params, double lambda);

/// Analytic ground energy, lambda solved at n = 0 with T_z = -1.
[[nodiscard]] double analytic_ground_energy(const ModelParams& params);

enum class BranchSign { Positive, Negative };

[[nodiscard]] std::string_view to_string(BranchSign s) noexcept;

struct AnalyticBranch {
  int n = 0;
  Tz t_z = Tz::Minus;
  double lambda = 0.0;
  Block2 block{};
  std::array<double, 2> energies{};      // ascending
  std::array<BranchSign, 2> labels{};    // by dominant eigenvector component
  double residual = 0.0;
};

struct BranchFailure {
  int n = 0;
  Tz t_z = Tz::Minus;
  std::string reason;
};

struct AnalyticSpectrum {
  double ground_energy = 0.0;
  std::vector<AnalyticBranch> branches;  // ordered by n, then T_z = +1 before -1
  std::vector<BranchFailure> failures;
};

/// Every block n = 0..n_max solved for both T_z signs. Per-branch failures
/// (no root, complex eigenvalues, residual above 1e-10) are collected rather
/// than thrown.
[[nodiscard]] AnalyticSpectrum analytic_spectrum(const ModelParams& params, int n_max);

/// How analytic levels are read off the blocks.
///  Uniform  both eigenvalues of the T_z = -1 block
///  PerRow   positive-branch level from the T_z = +1 block, negative from T_z = -1
enum class TzPolicy { Uniform, PerRow };

struct AnalyticLevel {
  double energy = 0.0;
  BranchSign sign = BranchSign::Negative;
  /// Fock label of the dominant state: n for |+x,n>, n+1 for |-x,n+1>, 0 for |-x,0>.
  int ladder = 0;
};

/// Ground level |-x,0> plus one positive and one negative level per block, ascending.
[[nodiscard]] std::vector<AnalyticLevel> analytic_levels(const AnalyticSpectrum& spectrum,
                                                         TzPolicy policy = TzPolicy::Uniform);

/// Lowest eigenvalue over the T_z = -1 blocks n = 0..n_max (region-II ground candidate).
[[nodiscard]] std::optional<double> lowest_block_energy(const AnalyticSpectrum& spectrum);

// ---------------------------------------------------------------------------
// Ground-state error map
// ---------------------------------------------------------------------------

enum class Region { I, II };

struct ErrorMapPoint {
  double g = 0.0;
  double u = 0.0;
  std::optional<double> e_analytic;
  std::optional<double> e_numeric;
  std::optional<double> delta_e;
  Region region = Region::I;
  /// First g (per U column) where the ground candidate switches region.
  bool crossing = false;
  std::size_t cutoff = 0;
  Classification classification = Classification::Undetermined;
  std::string error;
};

struct ErrorMapOptions {
  int n_max = 40;
  double tol = 1e-8;
  std::size_t max_cutoff = std::size_t{1} << 14;
  unsigned workers = 1;
};

/// delta E = |E_analytic - E_numeric| on a g x U grid, g-major order. The
/// analytic value is the |-x,0> energy in region I and the lowest block
/// eigenvalue in region II.
[[nodiscard]] std::vector<ErrorMapPoint> error_map(const ModelParams& base,
                                                   std::span<const double> g_grid,
                                                   std::span<const double> u_grid,
                                                   const ErrorMapOptions& options = {});

}  // namespace rabistark
