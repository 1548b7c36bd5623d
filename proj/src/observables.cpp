#include "rabistark/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include <fmt/format.h>

#include "rabistark/colimit.hpp"
#include "rabistark/errors.hpp"

namespace rabistark {
namespace {

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  if (v.size() % 2 == 1) return v[mid];
  const double upper = v[mid];
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

double co_occupation_estimate(const ModelParams& params) {
  const double kappa = params.photon();
  if (!(kappa > 0.0)) return 0.0;
  const double n = (params.stark() - 2.0 * params.omega - 2.0 * kappa) / (4.0 * kappa);
  return std::max(n, 0.0);
}

MeanPhotonResult mean_photon_ground(const ModelParams& params, double tol,
                                    const MeanPhotonOptions& options) {
  params.validate();
  ConvergenceOptions co;
  co.max_cutoff = options.max_cutoff;
  co.want_vectors = true;
  if (options.co_cutoff_policy) {
    const double estimate = std::ceil(co_occupation_estimate(params));
    co.initial_cutoff = std::max<std::size_t>(32, 4 * static_cast<std::size_t>(estimate));
  }
  co.initial_cutoff = std::min(co.initial_cutoff, co.max_cutoff);

  for (;;) {
    const auto [spec, report] = converged_spectrum(params, 1, tol, co);
    if (report.classification == Classification::UnboundedBelow)
      throw DivergenceError(fmt::format("spectrum unbounded below at {}; no ground state", describe(params)));
    if (!is_converged(report.classification))
      throw SolverError(fmt::format("ground energy not converged by cutoff {} at {}", report.final_cutoff,
                                    describe(params)));

    const Eigen::VectorXd& v = spec.vectors.front();
    const std::size_t cutoff = spec.cutoff;
    double value = 0.0;
    double tail = 0.0;
    for (std::size_t n = 0; n <= cutoff; ++n) {
      const double pd = v(static_cast<Eigen::Index>(basis_index(n, Spin::Down)));
      const double pu = v(static_cast<Eigen::Index>(basis_index(n, Spin::Up)));
      const double occ = pd * pd + pu * pu;
      value += static_cast<double>(n) * occ;
      if (n + 2 > cutoff) tail += occ;
    }
    if (tail < options.tail_tolerance) return {value, cutoff, report.classification, tail};
    if (cutoff >= options.max_cutoff)
      throw SolverError(fmt::format("ground-state tail {:.3e} above {:.0e} at maximum cutoff {}", tail,
                                    options.tail_tolerance, cutoff));
    co.initial_cutoff = std::min(2 * cutoff, options.max_cutoff);
  }
}

StaircaseReport staircase_scan(const ModelParams& params, const GridSpec& u_grid,
                               const StaircaseOptions& options) {
  params.validate();
  if (params.variant != Variant::CompletedRabiStark || !(params.kappa > 0.0))
    throw ValidationError("staircase scan needs the completed model with kappa > 0");
  check_co_regime(params);

  StaircaseReport r;
  r.u_values = u_grid.values();
  const std::size_t count = r.u_values.size();
  auto at = [&](double u) {
    ModelParams p = params;
    p.u = u;
    return mean_photon_ground(p, options.tol, options.photon);
  };
  const auto points = parallel_map(count, options.workers, [&](std::size_t i) { return at(r.u_values[i]); });
  for (const auto& pt : points) {
    r.mean_photon.push_back(pt.value);
    r.renormalized.push_back(pt.value / params.delta);
    r.cutoffs.push_back(pt.cutoff);
    r.classifications.push_back(pt.classification);
  }

  std::vector<std::size_t> edge_cells;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    const double jump = r.mean_photon[i + 1] - r.mean_photon[i];
    if (std::abs(jump) < options.step_threshold) continue;
    if (std::abs(jump) >= 1.0 + options.step_threshold)
      throw ResolutionError(fmt::format("several steps between U = {} and U = {}; refine the grid",
                                        r.u_values[i], r.u_values[i + 1]));
    if (!edge_cells.empty() && i - edge_cells.back() < 3)
      throw ResolutionError(fmt::format("steps at U = {} and U = {} are fewer than 3 grid points apart",
                                        r.u_values[edge_cells.back()], r.u_values[i]));
    edge_cells.push_back(i);
  }

  // Bisect each edge on the half-way level between its neighbouring grid values.
  r.edges = parallel_map(edge_cells.size(), options.workers, [&](std::size_t e) {
    const std::size_t i = edge_cells[e];
    const double level = 0.5 * (r.mean_photon[i] + r.mean_photon[i + 1]);
    const bool rising = r.mean_photon[i + 1] > r.mean_photon[i];
    double lo = r.u_values[i];
    double hi = r.u_values[i + 1];
    while (hi - lo > options.edge_tolerance) {
      const double mid = 0.5 * (lo + hi);
      if ((at(mid).value > level) == rising)
        hi = mid;
      else
        lo = mid;
    }
    return 0.5 * (lo + hi);
  });
  for (std::size_t e = 0; e + 1 < r.edges.size(); ++e) r.widths.push_back(r.edges[e + 1] - r.edges[e]);

  // Plateau j lies between edge j-1 and edge j (open-ended at both ends).
  std::size_t begin = 0;
  for (std::size_t e = 0; e <= edge_cells.size(); ++e) {
    const std::size_t end = e < edge_cells.size() ? edge_cells[e] + 1 : count;
    r.plateaus.push_back(median({r.mean_photon.begin() + static_cast<std::ptrdiff_t>(begin),
                                 r.mean_photon.begin() + static_cast<std::ptrdiff_t>(end)}));
    begin = end;
  }

  // Fit the staircase midline from one full step after the first edge onwards.
  std::vector<double> xs, ys;
  for (std::size_t e = 1; e < r.edges.size(); ++e) {
    xs.push_back(r.edges[e]);
    ys.push_back(0.5 * (r.plateaus[e] + r.plateaus[e + 1]) / params.delta);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (xs.size() < 2 || xs.size() - 1 < options.min_fit_steps) {
    r.fitted_slope = nan;
    r.fit_window = {nan, nan};
  } else {
    r.fitted_slope = lsq_slope(xs, ys);
    r.fit_window = {xs.front(), xs.back()};
  }
  return r;
}

std::vector<LevelCrossing> detect_level_crossings(const ModelParams& params, SweepParam sweep,
                                                  std::span<const double> grid, std::size_t levels,
                                                  const CrossingOptions& options) {
  params.validate();
  if (levels < 2) throw std::invalid_argument("detect_level_crossings: need at least 2 levels");

  auto solve = [&](double x) -> std::optional<std::vector<double>> {
    const auto [spec, report] = converged_spectrum(with_param(params, sweep, x), levels, options.tol,
                                                   options.max_cutoff);
    if (!is_converged(report.classification)) return std::nullopt;
    return spec.energies;
  };
  const auto spectra =
      parallel_map(grid.size(), options.workers, [&](std::size_t i) { return solve(grid[i]); });

  std::vector<LevelCrossing> out;
  for (std::size_t j = 0; j + 1 < levels; ++j) {
    auto gap_at = [&](std::size_t i) { return (*spectra[i])[j + 1] - (*spectra[i])[j]; };
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      if (!spectra[i - 1] || !spectra[i] || !spectra[i + 1]) continue;
      const double g = gap_at(i);
      if (!(g < gap_at(i - 1) && g <= gap_at(i + 1))) continue;

      // Golden-section search on the bracketing cell pair.
      constexpr double inv_phi = 0.6180339887498949;
      double a = grid[i - 1];
      double b = grid[i + 1];
      auto gap = [&](double x) {
        const auto e = solve(x);
        return e ? (*e)[j + 1] - (*e)[j] : std::numeric_limits<double>::infinity();
      };
      double c = b - inv_phi * (b - a);
      double d = a + inv_phi * (b - a);
      double fc = gap(c);
      double fd = gap(d);
      for (int it = 0; it < 200 && b - a > options.refine_tolerance; ++it) {
        if (fc <= fd) {
          b = d;
          d = c;
          fd = fc;
          c = b - inv_phi * (b - a);
          fc = gap(c);
        } else {
          a = c;
          c = d;
          fc = fd;
          d = a + inv_phi * (b - a);
          fd = gap(d);
        }
      }
      const double x = fc <= fd ? c : d;
      const double best = std::min({fc, fd, g});
      if (best < options.gap_threshold) out.push_back({best == g ? grid[i] : x, j, j + 1, best});
    }
  }
  std::sort(out.begin(), out.end(), [](const LevelCrossing& l, const LevelCrossing& r) {
    return l.value != r.value ? l.value < r.value : l.lower < r.lower;
  });
  return out;
}

}  // namespace rabistark
