#pragma once

// Classical-oscillator (delta >> omega) limit of the JC-like reduction.

#include <vector>

#include "rabistark/analytic.hpp"
#include "rabistark/model.hpp"

namespace rabistark {

inline constexpr double kCoRegimeMinRatio = 50.0;

enum class CoGuard { Enforce, Override };

/// Throws RegimeError when delta / omega < kCoRegimeMinRatio and the guard is enforced.
void check_co_regime(const ModelParams& params, CoGuard guard = CoGuard::Enforce);

struct CoLimitParams {
  ModelParams base;
  int n = 0;
  Tz t_z = Tz::Minus;
  double lambda = 0.0;   // CoLimit-mode displacement
  double G = 0.0;        // omega - U T_z / 2
  double Omega_n = 0.0;  // (delta - 2 U lambda^2) exp(-2 lambda^2)
  double Gamma_n = 0.0;  // g + lambda (G - U n - delta)
  double C = 0.0;        // 4 g^2 G^2 / [delta (U n + delta + G)^2]
};

[[nodiscard]] CoLimitParams co_limit_params(const ModelParams& params, int n = 0,
                                            Tz t_z = Tz::Minus, CoGuard guard = CoGuard::Enforce);

struct ExcitationEnergy {
  double with_c = 0.0;     // omega - U/2 - C
  double without_c = 0.0;  // omega - U/2
};

[[nodiscard]] ExcitationEnergy co_excitation_energy(const ModelParams& params, int n = 0,
                                                    Tz t_z = Tz::Minus,
                                                    CoGuard guard = CoGuard::Enforce);

/// Lower eigenenergy of block n in the CO limit,
///   -n U/2 - delta/2 + n (n kappa + omega) + 2 lambda g,
/// lambda from the CoLimit mode on the negative (T_z = -1) row.
[[nodiscard]] double co_branch_energy(const ModelParams& params, int n,
                                      CoGuard guard = CoGuard::Enforce);

struct CrossingLadder {
  std::vector<double> positions;  // U_n = 2 omega + 2 kappa + 4 n kappa
  double kappa = 0.0;
  int n_max = 0;
};

/// Throws RegimeError for kappa == 0, where every crossing sits at U = 2 omega.
[[nodiscard]] CrossingLadder crossing_ladder(const ModelParams& params, int n_max);

/// <a^+a> of the physical state behind C1 |+x,n> + C2 |-x,n+1>:
///   (n + l^2) C1^2 + (n + 1 + l^2) C2^2 + 2 l sqrt(n+1) C1 C2
/// Throws std::invalid_argument unless C1^2 + C2^2 = 1 within 1e-10.
[[nodiscard]] double analytic_mean_photon(int n, double lambda, double c1, double c2);

/// Staircase slope of <a^+a>/delta against U: (1/delta) / (4 kappa).
[[nodiscard]] double slope_prediction(const ModelParams& params);

}  // namespace rabistark
