#include "rabistark/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "rabistark/errors.hpp"
#include "rabistark/specialfn.hpp"
#include "rabistark/sweep.hpp"

namespace rabistark {
namespace {

constexpr double kResidualLimit = 1e-10;
constexpr double kScanStep = 1e-3;
constexpr double kBisectionWidth = 1e-14;

double residual_with(const ModelParams& p, int n, Tz t_z, double l, double kappa) {
  const double u = p.stark();
  const double tz = sign(t_z);
  double r = l * p.omega + p.g - 0.5 * u * specialfn::g0(n, l) * l * tz +
             0.5 * specialfn::f1(n, l) * (p.delta + u * l * l + u * n);
  if (kappa != 0.0) r += 2.0 * kappa * l * l * l + 2.0 * kappa * l * n + kappa * l * tz;
  return r;
}

// Root of the condition nearest to zero on [-1, 0]: the residual equals g > 0 at
// lambda = 0, so scan downward to the first sign change, bisect, then polish
// with secant steps that stay inside the bracket.
double root_nearest_zero(const ModelParams& p, int n, Tz t_z, double kappa) {
  auto f = [&](double l) { return residual_with(p, n, t_z, l, kappa); };
  double hi = 0.0;
  double f_hi = f(hi);
  double lo = 0.0;
  double f_lo = f_hi;
  bool found = false;
  while (hi > -1.0) {
    lo = std::max(hi - kScanStep, -1.0);
    f_lo = f(lo);
    if (f_lo == 0.0) return lo;
    if ((f_lo < 0.0) != (f_hi < 0.0)) {
      found = true;
      break;
    }
    hi = lo;
    f_hi = f_lo;
  }
  if (!found)
    throw NoRootError(fmt::format("no displacement root in [-1, 0] for n={}, T_z={:+d}, {}", n,
                                  static_cast<int>(t_z), describe(p)));

  while (hi - lo > kBisectionWidth) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  double best = std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
  double f_best = f(best);
  for (int i = 0; i < 3 && f_hi != f_lo; ++i) {
    const double x = hi - f_hi * (hi - lo) / (f_hi - f_lo);
    if (!(x >= lo && x <= hi)) break;
    const double fx = f(x);
    if (std::abs(fx) >= std::abs(f_best)) break;
    best = x;
    f_best = fx;
  }
  return best;
}

double photon_for(const ModelParams& p, LambdaMode mode) {
  return mode == LambdaMode::CompletedFull ? p.photon() : 0.0;
}

LambdaMode exact_mode(const ModelParams& p) {
  return p.variant == Variant::CompletedRabiStark ? LambdaMode::CompletedFull : LambdaMode::Full;
}

}  // namespace

std::string_view to_string(LambdaMode m) noexcept {
  switch (m) {
    case LambdaMode::Full: return "full";
    case LambdaMode::ZeroOrder: return "zero_order";
    case LambdaMode::CompletedFull: return "completed_full";
    case LambdaMode::CoLimit: return "co_limit";
  }
  return "?";
}

std::string_view to_string(BranchSign s) noexcept {
  return s == BranchSign::Positive ? "positive" : "negative";
}

double lambda_condition_residual(const ModelParams& params, int n, Tz t_z, double lambda) {
  if (n < 0) throw std::invalid_argument("lambda_condition_residual: n must be >= 0");
  if (!(std::abs(lambda) < 1.0)) throw std::domain_error("lambda_condition_residual: need |lambda| < 1");
  return residual_with(params, n, t_z, lambda, params.photon());
}

double solve_lambda(const ModelParams& params, int n, Tz t_z, LambdaMode mode) {
  params.validate();
  if (n < 0) throw std::invalid_argument("solve_lambda: n must be >= 0");
  if (params.g == 0.0) return 0.0;

  const double u = params.stark();
  const double tz = sign(t_z);
  switch (mode) {
    case LambdaMode::Full:
    case LambdaMode::CompletedFull:
      return root_nearest_zero(params, n, t_z, photon_for(params, mode));
    case LambdaMode::ZeroOrder: {
      // The +-U/2 of the closed form is -T_z U/2.
      const double shifted = params.delta - tz * 0.5 * u + u * n;
      const double scale = params.omega + shifted;
      if (!(scale > 0.0))
        throw RegimeError(fmt::format("zero-order lambda undefined: omega + delta -+ U/2 + Un = {}", scale));
      const double ratio = params.g / scale;
      return -params.g / (params.omega + shifted * std::exp(-2.0 * ratio * ratio));
    }
    case LambdaMode::CoLimit: {
      const double kappa = params.photon();
      const double big_g = params.omega - 0.5 * u * tz;
      const double denom = u * n + params.delta + big_g + 2.0 * kappa * n - kappa * tz;
      if (denom == 0.0) throw RegimeError("CO-limit lambda denominator vanishes");
      return -params.g / denom;
    }
  }
  throw std::invalid_argument("solve_lambda: unknown mode");
}

std::array<double, 2> Block2::eigenvalues() const {
  const double mean = 0.5 * (h11 + h22);
  const double half_diff = 0.5 * (h11 - h22);
  const double disc = half_diff * half_diff + h12 * h21;
  if (disc < 0.0)
    throw RegimeError(fmt::format("JC block has complex eigenvalues (discriminant {:.3e})", disc));
  const double root = std::sqrt(disc);
  return {mean - root, mean + root};
}

std::array<double, 2> Block2::eigenvector(double e) const {
  // Either row of (H - e) v = 0 gives a candidate; take the better conditioned one.
  double a1 = h12, a2 = e - h11;
  double b1 = e - h22, b2 = h21;
  double c1, c2;
  if (std::hypot(a1, a2) >= std::hypot(b1, b2)) {
    c1 = a1;
    c2 = a2;
  } else {
    c1 = b1;
    c2 = b2;
  }
  double norm = std::hypot(c1, c2);
  if (norm == 0.0) {
    // Diagonal block with a degenerate pair: pick the unit vector of the nearer diagonal.
    c1 = std::abs(e - h11) <= std::abs(e - h22) ? 1.0 : 0.0;
    c2 = 1.0 - c1;
    norm = 1.0;
  }
  c1 /= norm;
  c2 /= norm;
  if (c1 < 0.0 || (c1 == 0.0 && c2 < 0.0)) {
    c1 = -c1;
    c2 = -c2;
  }
  return {c1, c2};
}

Block2 jc_block(const ModelParams& params, int n, double lambda) {
  if (n < 0) throw std::invalid_argument("jc_block: n must be >= 0");
  if (!(std::abs(lambda) <= 1.0)) throw std::domain_error("jc_block: need |lambda| <= 1");
  using specialfn::assoc_laguerre1;
  using specialfn::laguerre;

  const double w = params.omega;
  const double d = params.delta;
  const double g = params.g;
  const double u = params.stark();
  const double l = lambda;
  const double l2 = l * l;
  const double x = 4.0 * l2;
  const double e = std::exp(-2.0 * l2);
  const double nd = n;

  const double ln0 = laguerre(n, x);
  const double ln1 = laguerre(n + 1, x);
  const double a0 = assoc_laguerre1(n, x);
  const double a1 = assoc_laguerre1(n + 1, x);
  const double a2 = assoc_laguerre1(n + 2, x);
  const double root = std::sqrt(nd + 1.0);

  Block2 b;
  b.h11 = nd * w + 2.0 * g * l + l2 * w + e * ln0 * (d + nd * u + l2 * u) / 2.0 +
          l2 * u * e * (a1 / (nd + 2.0) - a0 / (nd + 1.0));
  b.h12 = root * (g + l * w - 0.5 * l * u * e * ln0 - l * e * a0 * (d + nd * u + l2 * u) / (nd + 1.0));
  b.h21 = root * (g + l * w + 0.5 * l * u * e * ln1 -
                  l * e * a1 * (d + (nd + 1.0) * u + l2 * u) / (nd + 2.0));
  b.h22 = (nd + 1.0) * w + 2.0 * g * l + l2 * w -
          e * (ln1 * (d + (nd + 1.0 + l2) * u) / 2.0 + u * l2 * (a2 / (nd + 3.0) - a1 / (nd + 2.0)));

  const double kappa = params.photon();
  if (kappa != 0.0) {
    const double l4 = l2 * l2;
    b.h11 += kappa * (l4 + l2 + 4.0 * l2 * nd + nd * nd);
    b.h22 += kappa * (l4 + l2 + 4.0 * l2 * (nd + 1.0) + (nd + 1.0) * (nd + 1.0));
    const double off = 2.0 * kappa * l2 * l + kappa * l * (2.0 * nd + 1.0);
    b.h12 += off;
    b.h21 += off;
  }
  return b;
}

double ground_energy_original(const ModelParams& params, double lambda) {
  const double u = params.stark();
  const double l2 = lambda * lambda;
  return params.omega * l2 + 2.0 * lambda * params.g -
         (params.delta - u * l2 + 4.0 * u * l2 * l2) / 2.0 * std::exp(-2.0 * l2);
}

double ground_energy_completed(const ModelParams& params, double lambda) {
  const double u = params.stark();
  const double l2 = lambda * lambda;
  return params.omega * l2 + 2.0 * lambda * params.g +
         ((u * l2 - params.delta) / 2.0 - 2.0 * u * l2 * l2) * std::exp(-2.0 * l2) +
         params.photon() * l2 * (1.0 + l2);
}

double analytic_ground_energy(const ModelParams& params) {
  const LambdaMode mode = exact_mode(params);
  const double lambda = solve_lambda(params, 0, Tz::Minus, mode);
  return mode == LambdaMode::CompletedFull ? ground_energy_completed(params, lambda)
                                           : ground_energy_original(params, lambda);
}

AnalyticSpectrum analytic_spectrum(const ModelParams& params, int n_max) {
  params.validate();
  if (n_max < 0) throw std::invalid_argument("analytic_spectrum: n_max must be >= 0");
  const LambdaMode mode = exact_mode(params);

  AnalyticSpectrum out;
  out.ground_energy = analytic_ground_energy(params);
  for (int n = 0; n <= n_max; ++n) {
    for (Tz t_z : {Tz::Plus, Tz::Minus}) {
      try {
        AnalyticBranch br;
        br.n = n;
        br.t_z = t_z;
        br.lambda = solve_lambda(params, n, t_z, mode);
        br.residual = lambda_condition_residual(params, n, t_z, br.lambda);
        if (std::abs(br.residual) > kResidualLimit)
          throw NoRootError(fmt::format("lambda residual {:.3e} above {:.0e}", br.residual, kResidualLimit));
        br.block = jc_block(params, n, br.lambda);
        br.energies = br.block.eigenvalues();
        const auto lo = br.block.eigenvector(br.energies[0]);
        const auto hi = br.block.eigenvector(br.energies[1]);
        // The eigenvector with more weight on |+x,n> belongs to the positive branch.
        if (lo[0] * lo[0] > hi[0] * hi[0])
          br.labels = {BranchSign::Positive, BranchSign::Negative};
        else
          br.labels = {BranchSign::Negative, BranchSign::Positive};
        out.branches.push_back(br);
      } catch (const Error& e) {
        out.failures.push_back({n, t_z, e.what()});
      }
    }
  }
  return out;
}

std::vector<AnalyticLevel> analytic_levels(const AnalyticSpectrum& spectrum, TzPolicy policy) {
  std::vector<AnalyticLevel> levels;
  levels.push_back({spectrum.ground_energy, BranchSign::Negative, 0});
  for (const auto& br : spectrum.branches) {
    for (std::size_t i = 0; i < 2; ++i) {
      const BranchSign s = br.labels[i];
      const bool take = policy == TzPolicy::Uniform
                            ? br.t_z == Tz::Minus
                            : (s == BranchSign::Positive) == (br.t_z == Tz::Plus);
      if (!take) continue;
      levels.push_back({br.energies[i], s, s == BranchSign::Positive ? br.n : br.n + 1});
    }
  }
  std::sort(levels.begin(), levels.end(), [](const AnalyticLevel& a, const AnalyticLevel& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.ladder < b.ladder;
  });
  return levels;
}

std::optional<double> lowest_block_energy(const AnalyticSpectrum& spectrum) {
  std::optional<double> best;
  for (const auto& br : spectrum.branches)
    if (br.t_z == Tz::Minus && (!best || br.energies[0] < *best)) best = br.energies[0];
  return best;
}

std::vector<ErrorMapPoint> error_map(const ModelParams& base, std::span<const double> g_grid,
                                     std::span<const double> u_grid,
                                     const ErrorMapOptions& options) {
  const std::size_t ng = g_grid.size();
  const std::size_t nu = u_grid.size();

  auto points = parallel_map(ng * nu, options.workers, [&](std::size_t idx) {
    ErrorMapPoint pt;
    pt.g = g_grid[idx / nu];
    pt.u = u_grid[idx % nu];
    ModelParams p = base;
    p.g = pt.g;
    p.u = pt.u;
    try {
      const AnalyticSpectrum s = analytic_spectrum(p, options.n_max);
      const auto block_min = lowest_block_energy(s);
      if (block_min && *block_min < s.ground_energy) {
        pt.region = Region::II;
        pt.e_analytic = *block_min;
      } else {
        pt.region = Region::I;
        pt.e_analytic = s.ground_energy;
      }
      ConvergenceOptions co;
      co.max_cutoff = options.max_cutoff;
      const auto [spec, report] = converged_spectrum(p, 1, options.tol, co);
      pt.cutoff = report.final_cutoff;
      pt.classification = report.classification;
      if (is_converged(report.classification)) {
        pt.e_numeric = spec.energies[0];
        pt.delta_e = std::abs(*pt.e_analytic - *pt.e_numeric);
      }
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
    return pt;
  });

  for (std::size_t iu = 0; iu < nu; ++iu)
    for (std::size_t ig = 1; ig < ng; ++ig) {
      auto& cur = points[ig * nu + iu];
      const auto& prev = points[(ig - 1) * nu + iu];
      if (cur.e_analytic && prev.e_analytic && cur.region != prev.region) cur.crossing = true;
    }
  return points;
}

}  // namespace rabistark
