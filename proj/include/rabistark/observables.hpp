#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "rabistark/eigen.hpp"
#include "rabistark/model.hpp"
#include "rabistark/sweep.hpp"

namespace rabistark {

struct MeanPhotonOptions {
  /// Occupation allowed in the two highest Fock levels of the ground vector.
  double tail_tolerance = 1e-8;
  std::size_t max_cutoff = std::size_t{1} << 16;
  /// Start from 4x the CO-limit occupation estimate instead of the default 32.
  bool co_cutoff_policy = true;
};

struct MeanPhotonResult {
  double value = 0.0;
  std::size_t cutoff = 0;
  Classification classification = Classification::Undetermined;
  double tail = 0.0;  // occupation of the two highest Fock levels
};

/// CO-limit occupation estimate n* = (U - 2 omega - 2 kappa) / (4 kappa),
/// clamped to zero below the first crossing (or when kappa == 0).
[[nodiscard]] double co_occupation_estimate(const ModelParams& params);

/// <psi0| a^+a (x) 1 |psi0> of the converged ground state. Throws
/// DivergenceError when the spectrum is unbounded from below and SolverError
/// when it cannot be classified or the tail never drops below tolerance.
[[nodiscard]] MeanPhotonResult mean_photon_ground(const ModelParams& params, double tol,
                                                  const MeanPhotonOptions& options = {});

struct StaircaseOptions {
  double tol = 1e-8;
  /// Edge positions are refined until the bracket is this narrow (units of omega).
  double edge_tolerance = 1e-7;
  /// A grid interval whose mean photon number jumps by at least this is a step.
  double step_threshold = 0.5;
  /// Minimum number of steps inside the slope-fit window.
  std::size_t min_fit_steps = 5;
  unsigned workers = 1;
  MeanPhotonOptions photon{};
};

struct StaircasePoint {
  double u = 0.0;
  double mean_photon = 0.0;
  double renormalized = 0.0;
  std::size_t cutoff = 0;
  Classification classification = Classification::Undetermined;
};

struct StaircaseReport {
  std::vector<double> u_values;
  std::vector<double> mean_photon;
  std::vector<double> renormalized;  // mean_photon / delta
  std::vector<std::size_t> cutoffs;
  std::vector<Classification> classifications;
  std::vector<double> edges;     // refined step positions in U, increasing
  std::vector<double> widths;    // edges[i + 1] - edges[i]
  /// Median mean photon of each plateau: before the first edge, between
  /// consecutive edges and after the last one (edges.size() + 1 entries).
  std::vector<double> plateaus;
  /// Least-squares slope of the renormalized staircase midline; NaN when the
  /// window holds fewer than min_fit_steps steps.
  double fitted_slope = 0.0;
  std::pair<double, double> fit_window{0.0, 0.0};
};

/// Ground-state mean photon number along a U grid of the completed model.
/// Requires kappa > 0 and delta / omega >= 50. Throws ResolutionError when two
/// edges are fewer than 3 grid points apart.
[[nodiscard]] StaircaseReport staircase_scan(const ModelParams& params, const GridSpec& u_grid,
                                             const StaircaseOptions& options = {});

struct LevelCrossing {
  double value = 0.0;  // refined sweep-parameter position
  std::size_t lower = 0;
  std::size_t upper = 0;
  double gap = 0.0;    // E_upper - E_lower at value
};

struct CrossingOptions {
  double tol = 1e-8;
  double gap_threshold = 1e-6;
  /// Refinement stops once the bracket on the sweep parameter is this narrow.
  double refine_tolerance = 1e-11;
  std::size_t max_cutoff = std::size_t{1} << 14;
  unsigned workers = 1;
};

/// Crossings between adjacent tracked levels (j, j + 1), j + 1 < levels:
/// local minima of the gap on the grid, refined by bracketed minimization and
/// kept when the refined gap is below gap_threshold. Grid points whose
/// spectrum is not converged are skipped.
[[nodiscard]] std::vector<LevelCrossing> detect_level_crossings(const ModelParams& params,
                                                                SweepParam sweep,
                                                                std::span<const double> grid,
                                                                std::size_t levels,
                                                                const CrossingOptions& options = {});

}  // namespace rabistark
