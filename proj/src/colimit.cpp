#include "rabistark/colimit.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "rabistark/errors.hpp"

namespace rabistark {

void check_co_regime(const ModelParams& params, CoGuard guard) {
  params.validate();
  if (guard == CoGuard::Override) return;
  const double ratio = params.delta / params.omega;
  if (!(ratio >= kCoRegimeMinRatio))
    throw RegimeError(fmt::format("CO limit needs delta/omega >= {} (got {:.4g})", kCoRegimeMinRatio,
                                  ratio));
}

CoLimitParams co_limit_params(const ModelParams& params, int n, Tz t_z, CoGuard guard) {
  check_co_regime(params, guard);
  if (n < 0) throw std::invalid_argument("co_limit_params: n must be >= 0");
  if (params.delta == 0.0) throw RegimeError("CO limit undefined at delta = 0");

  CoLimitParams out;
  out.base = params;
  out.n = n;
  out.t_z = t_z;
  const double u = params.stark();
  out.G = params.omega - 0.5 * u * sign(t_z);
  out.lambda = solve_lambda(params, n, t_z, LambdaMode::CoLimit);
  const double l2 = out.lambda * out.lambda;
  out.Omega_n = (params.delta - 2.0 * u * l2) * std::exp(-2.0 * l2);
  out.Gamma_n = params.g + out.lambda * (out.G - u * n - params.delta);
  const double denom = u * n + params.delta + out.G;
  out.C = 4.0 * params.g * params.g * out.G * out.G / (params.delta * denom * denom);
  return out;
}

ExcitationEnergy co_excitation_energy(const ModelParams& params, int n, Tz t_z, CoGuard guard) {
  const CoLimitParams c = co_limit_params(params, n, t_z, guard);
  const double bare = params.omega - 0.5 * params.stark();
  return {bare - c.C, bare};
}

double co_branch_energy(const ModelParams& params, int n, CoGuard guard) {
  check_co_regime(params, guard);
  if (n < 0) throw std::invalid_argument("co_branch_energy: n must be >= 0");
  const double lambda = solve_lambda(params, n, Tz::Minus, LambdaMode::CoLimit);
  const double nd = n;
  return -nd * params.stark() / 2.0 - params.delta / 2.0 +
         nd * (nd * params.photon() + params.omega) + 2.0 * lambda * params.g;
}

CrossingLadder crossing_ladder(const ModelParams& params, int n_max) {
  params.validate();
  if (n_max < 0) throw std::invalid_argument("crossing_ladder: n_max must be >= 0");
  const double kappa = params.photon();
  if (kappa == 0.0)
    throw RegimeError("crossing ladder needs kappa != 0; without it all crossings collapse onto U = 2 omega");
  CrossingLadder out;
  out.kappa = kappa;
  out.n_max = n_max;
  out.positions.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n)
    out.positions.push_back(2.0 * params.omega + 2.0 * kappa + 4.0 * n * kappa);
  return out;
}

double analytic_mean_photon(int n, double lambda, double c1, double c2) {
  if (n < 0) throw std::invalid_argument("analytic_mean_photon: n must be >= 0");
  if (std::abs(c1 * c1 + c2 * c2 - 1.0) > 1e-10)
    throw std::invalid_argument("analytic_mean_photon: (c1, c2) must be normalized");
  const double nd = n;
  const double l2 = lambda * lambda;
  return (nd + l2) * c1 * c1 + (nd + 1.0 + l2) * c2 * c2 + 2.0 * lambda * std::sqrt(nd + 1.0) * c1 * c2;
}

double slope_prediction(const ModelParams& params) {
  const double kappa = params.photon();
  if (!(kappa > 0.0)) throw std::invalid_argument("slope_prediction: needs kappa > 0");
  if (!(params.delta > 0.0)) throw std::invalid_argument("slope_prediction: needs delta > 0");
  return (1.0 / params.delta) / (4.0 * kappa);
}

}  // namespace rabistark
