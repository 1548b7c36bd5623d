#include "rabistark/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <tuple>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "rabistark/errors.hpp"

namespace rabistark {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSafeMin = std::numeric_limits<double>::min();

double residual_bound(double e) { return 1e-8 * (1.0 + std::abs(e)); }

std::pair<double, double> gershgorin(const SymTridiagonal& t) {
  const std::size_t n = t.diag.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(t.off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(t.off[i]) : 0.0);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  // Widen so that the ends are strict bounds.
  const double pad = 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + kSafeMin;
  return {lo - pad, hi + pad};
}

double tri_norm(const SymTridiagonal& t) {
  const std::size_t n = t.diag.size();
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::abs(t.diag[i]) + (i > 0 ? std::abs(t.off[i - 1]) : 0.0) +
                     (i + 1 < n ? std::abs(t.off[i]) : 0.0);
    norm = std::max(norm, r);
  }
  return norm;
}

void check_shape(const SymTridiagonal& t) {
  if (t.diag.empty()) throw std::invalid_argument("tridiagonal matrix is empty");
  if (t.off.size() + 1 != t.diag.size())
    throw std::invalid_argument("tridiagonal off-diagonal must have size n - 1");
}

// LU factorization of T - shift I with partial pivoting (the dgttrf/dgtts2 scheme).
class ShiftedTridiagonalLU {
 public:
  ShiftedTridiagonalLU(const SymTridiagonal& t, double shift, double tiny)
      : n_(t.diag.size()), d_(n_), dl_(t.off), du_(t.off), du2_(n_, 0.0), swapped_(n_, false) {
    for (std::size_t i = 0; i < n_; ++i) d_[i] = t.diag[i] - shift;
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      if (std::abs(d_[i]) >= std::abs(dl_[i])) {
        if (d_[i] != 0.0) {
          const double fact = dl_[i] / d_[i];
          dl_[i] = fact;
          d_[i + 1] -= fact * du_[i];
        }
      } else {
        const double fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const double temp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = temp - fact * d_[i + 1];
        if (i + 2 < n_) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        swapped_[i] = true;
      }
    }
    // Exactly singular pivots are expected when the shift is an eigenvalue.
    for (auto& p : d_)
      if (std::abs(p) < tiny) p = std::copysign(tiny, p == 0.0 ? 1.0 : p);
  }

  void solve(Eigen::VectorXd& b) const {
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      if (!swapped_[i]) {
        b(ii + 1) -= dl_[i] * b(ii);
      } else {
        const double temp = b(ii);
        b(ii) = b(ii + 1);
        b(ii + 1) = temp - dl_[i] * b(ii);
      }
    }
    const auto last = static_cast<Eigen::Index>(n_ - 1);
    b(last) /= d_[n_ - 1];
    if (n_ > 1) b(last - 1) = (b(last - 1) - du_[n_ - 2] * b(last)) / d_[n_ - 2];
    for (std::size_t r = n_ >= 2 ? n_ - 2 : 0; r-- > 0;) {
      const auto i = static_cast<Eigen::Index>(r);
      b(i) = (b(i) - du_[r] * b(i + 1) - du2_[r] * b(i + 2)) / d_[r];
    }
  }

 private:
  std::size_t n_;
  std::vector<double> d_, dl_, du_, du2_;
  std::vector<bool> swapped_;
};

Eigen::VectorXd tri_apply(const SymTridiagonal& t, const Eigen::VectorXd& x) {
  const std::size_t n = t.diag.size();
  Eigen::VectorXd y(x.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    double s = t.diag[i] * x(ii);
    if (i > 0) s += t.off[i - 1] * x(ii - 1);
    if (i + 1 < n) s += t.off[i] * x(ii + 1);
    y(ii) = s;
  }
  return y;
}

struct SectorSolution {
  std::vector<double> values;
  Eigen::MatrixXd vectors;  // columns, only when requested
};

SectorSolution solve_tridiagonal(const SymTridiagonal& t, std::size_t k, bool want_vectors) {
  SectorSolution out;
  out.values = tridiagonal_lowest(t, std::min(k, t.diag.size()));
  if (want_vectors) out.vectors = tridiagonal_vectors(t, out.values);
  return out;
}

struct Candidate {
  double value;
  std::size_t sector;
  std::size_t index;
};

Spectrum solve_parity(const HamiltonianMatrix& h, const std::array<ParitySector, 2>& sectors,
                      std::size_t k, bool want_vectors) {
  std::array<SectorSolution, 2> sol;
  for (std::size_t s = 0; s < 2; ++s)
    sol[s] = solve_tridiagonal({sectors[s].diag, sectors[s].off}, k, want_vectors);

  std::vector<Candidate> all;
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t i = 0; i < sol[s].values.size(); ++i) all.push_back({sol[s].values[i], s, i});
  std::sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.value, a.sector, a.index) < std::tie(b.value, b.sector, b.index);
  });
  all.resize(k);

  Spectrum spec;
  spec.cutoff = h.cutoff();
  spec.k_requested = k;
  for (const auto& c : all) {
    spec.energies.push_back(c.value);
    if (want_vectors) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(h.dim()));
      const auto& basis = sectors[c.sector].basis;
      const auto col = sol[c.sector].vectors.col(static_cast<Eigen::Index>(c.index));
      for (std::size_t m = 0; m < basis.size(); ++m)
        v(static_cast<Eigen::Index>(basis[m])) = col(static_cast<Eigen::Index>(m));
      spec.vectors.push_back(std::move(v));
    }
  }
  return spec;
}

Spectrum solve_dense(const HamiltonianMatrix& h, std::size_t k, bool want_vectors,
                     const SolverOptions& options) {
  if (h.dim() > options.max_dense_dim)
    throw SolverError(fmt::format("dense eigensolver limited to dimension {}, got {}",
                                  options.max_dense_dim, h.dim()));
  Spectrum spec;
  spec.cutoff = h.cutoff();
  spec.k_requested = k;
  const Eigen::MatrixXd dense = h.dense();
  if (h.dim() == 1) {
    spec.energies.push_back(dense(0, 0));
    if (want_vectors) spec.vectors.push_back(Eigen::VectorXd::Ones(1));
    return spec;
  }
  Eigen::Tridiagonalization<Eigen::MatrixXd> tri(dense);
  SymTridiagonal t;
  const Eigen::VectorXd diag = tri.diagonal();
  const Eigen::VectorXd sub = tri.subDiagonal();
  t.diag.assign(diag.data(), diag.data() + diag.size());
  t.off.assign(sub.data(), sub.data() + sub.size());
  const SectorSolution sol = solve_tridiagonal(t, k, want_vectors);
  spec.energies = sol.values;
  if (want_vectors) {
    const Eigen::MatrixXd q = tri.matrixQ();
    for (Eigen::Index j = 0; j < sol.vectors.cols(); ++j) spec.vectors.emplace_back(q * sol.vectors.col(j));
  }
  return spec;
}

}  // namespace

// ---------------------------------------------------------------------------

std::size_t sturm_count(const SymTridiagonal& t, double x) {
  check_shape(t);
  double max_off2 = 0.0;
  for (double e : t.off) max_off2 = std::max(max_off2, e * e);
  const double pivmin = kSafeMin * std::max(1.0, max_off2);

  std::size_t count = 0;
  double q = t.diag[0] - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < t.diag.size(); ++i) {
    q = (t.diag[i] - x) - t.off[i - 1] * t.off[i - 1] / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<double> tridiagonal_lowest(const SymTridiagonal& t, std::size_t k) {
  check_shape(t);
  if (k == 0 || k > t.diag.size())
    throw std::invalid_argument(fmt::format("requested {} eigenvalues of a {}x{} matrix", k,
                                            t.diag.size(), t.diag.size()));
  const auto [lo, hi] = gershgorin(t);
  std::vector<double> lower(k, lo), upper(k, hi);

  for (std::size_t j = 0; j < k; ++j) {
    for (int iter = 0; iter < 256; ++iter) {
      const double a = lower[j];
      const double b = upper[j];
      const double width_tol = 2.0 * kEps * std::max(std::abs(a), std::abs(b)) + kSafeMin;
      if (b - a <= width_tol) break;
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      const std::size_t c = sturm_count(t, mid);
      // Every later eigenvalue benefits from the same count.
      for (std::size_t i = j; i < k; ++i) {
        if (c > i)
          upper[i] = std::min(upper[i], mid);
        else
          lower[i] = std::max(lower[i], mid);
      }
    }
  }
  std::vector<double> values(k);
  for (std::size_t j = 0; j < k; ++j) values[j] = 0.5 * (lower[j] + upper[j]);
  std::sort(values.begin(), values.end());
  return values;
}

Eigen::MatrixXd tridiagonal_vectors(const SymTridiagonal& t, const std::vector<double>& values) {
  check_shape(t);
  const std::size_t n = t.diag.size();
  const auto rows = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd vecs(rows, static_cast<Eigen::Index>(values.size()));
  if (n == 1) {
    vecs.setOnes();
    return vecs;
  }
  const double norm = std::max(tri_norm(t), kSafeMin);
  const double tiny = kEps * norm;
  const double cluster = 1e-3 * norm;

  std::mt19937_64 rng(0x5eed5eedULL);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);

  for (std::size_t j = 0; j < values.size(); ++j) {
    const double e = values[j];
    const ShiftedTridiagonalLU lu(t, e, tiny);
    Eigen::VectorXd x(rows);
    for (Eigen::Index i = 0; i < rows; ++i) x(i) = dist(rng);
    x.normalize();

    double resid = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 8; ++iter) {
      lu.solve(x);
      for (std::size_t p = 0; p < j; ++p)
        if (std::abs(values[p] - e) <= cluster) {
          const auto prev = vecs.col(static_cast<Eigen::Index>(p));
          x -= prev.dot(x) * prev;
        }
      const double xn = x.norm();
      if (!(xn > 0.0) || !std::isfinite(xn))
        throw SolverError(fmt::format("inverse iteration broke down at eigenvalue {}", e));
      x /= xn;
      resid = (tri_apply(t, x) - e * x).norm();
      if (iter >= 1 && resid <= 1e-3 * residual_bound(e)) break;
    }
    if (resid > residual_bound(e))
      throw SolverError(fmt::format(
          "inverse iteration did not converge: eigenvalue {}, residual {:.3e}, dimension {}", e,
          resid, n));
    // Fix the sign for reproducible output: largest component positive.
    Eigen::Index imax = 0;
    x.cwiseAbs().maxCoeff(&imax);
    if (x(imax) < 0.0) x = -x;
    vecs.col(static_cast<Eigen::Index>(j)) = x;
  }
  return vecs;
}

Spectrum eigen_symmetric(const HamiltonianMatrix& h, std::size_t k, bool want_vectors,
                         const SolverOptions& options) {
  if (k < 1 || k > h.dim())
    throw std::invalid_argument(
        fmt::format("eigen_symmetric: need 1 <= k <= {}, got {}", h.dim(), k));
  Spectrum spec;
  if (options.use_parity_sectors) {
    if (const auto sectors = parity_sectors(h)) spec = solve_parity(h, *sectors, k, want_vectors);
  }
  if (spec.energies.empty()) spec = solve_dense(h, k, want_vectors, options);

  if (want_vectors) {
    for (std::size_t j = 0; j < k; ++j) {
      const auto& v = spec.vectors[j];
      const double e = spec.energies[j];
      const double r = (h.apply(v) - e * v).norm();
      if (std::abs(v.norm() - 1.0) > 1e-10 || r > residual_bound(e))
        throw SolverError(fmt::format("eigenpair {} (E = {}) violates the residual contract: {:.3e}",
                                      j, e, r));
    }
  }
  return spec;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Classification c) noexcept {
  switch (c) {
    case Classification::Converged: return "converged";
    case Classification::CollapsedDegenerate: return "collapsed_degenerate";
    case Classification::UnboundedBelow: return "unbounded_below";
    case Classification::Undetermined: return "undetermined";
  }
  return "?";
}

std::pair<Spectrum, ConvergenceReport> converged_spectrum(const ModelParams& params,
                                                          std::size_t k, double tol,
                                                          const ConvergenceOptions& options) {
  params.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("converged_spectrum: tol must be > 0");
  if (k < 1) throw std::invalid_argument("converged_spectrum: k must be >= 1");

  // Each cutoff contributes 2 (N + 1) states.
  const std::size_t min_cutoff = std::max<std::size_t>(1, (k + 1) / 2);
  if (options.max_cutoff < min_cutoff)
    throw std::invalid_argument(
        fmt::format("max_cutoff {} cannot hold {} levels", options.max_cutoff, k));
  std::size_t cutoff = std::clamp(std::max(options.initial_cutoff, min_cutoff), min_cutoff,
                                  options.max_cutoff);

  ConvergenceReport report;
  report.tolerance = tol;
  std::vector<double> ground_drops;

  for (;;) {
    const HamiltonianMatrix h = build_hamiltonian(params, cutoff);
    const Spectrum spec = eigen_symmetric(h, k, false, options.solver);
    report.history.push_back({cutoff, spec.energies});
    report.final_cutoff = cutoff;

    const std::size_t steps = report.history.size();
    if (steps >= 2) {
      const auto& prev = report.history[steps - 2].energies;
      const auto& cur = report.history[steps - 1].energies;
      double max_drift = 0.0;
      for (std::size_t j = 0; j < k; ++j) max_drift = std::max(max_drift, std::abs(cur[j] - prev[j]));
      ground_drops.push_back(prev[0] - cur[0]);
      report.drift_rate = ground_drops.back();

      if (max_drift <= tol) {
        report.classification = Classification::Converged;
        if (k >= 3 && cur.back() - cur.front() <= options.degeneracy_window)
          report.classification = Classification::CollapsedDegenerate;
        break;
      }
      const std::size_t m = ground_drops.size();
      if (m >= 3) {
        const double d0 = ground_drops[m - 3];
        const double d1 = ground_drops[m - 2];
        const double d2 = ground_drops[m - 1];
        const double floor = 10.0 * tol;
        if (d0 > floor && d1 > floor && d2 > floor && d1 >= options.divergence_ratio * d0 &&
            d2 >= options.divergence_ratio * d1) {
          report.classification = Classification::UnboundedBelow;
          break;
        }
      }
    }
    if (cutoff >= options.max_cutoff) break;
    cutoff = std::min(2 * cutoff, options.max_cutoff);
  }

  Spectrum spec;
  if (options.want_vectors) {
    spec = eigen_symmetric(build_hamiltonian(params, report.final_cutoff), k, true, options.solver);
  } else {
    spec.energies = report.history.back().energies;
    spec.cutoff = report.final_cutoff;
    spec.k_requested = k;
  }
  return {std::move(spec), std::move(report)};
}

std::pair<Spectrum, ConvergenceReport> converged_spectrum(const ModelParams& params,
                                                          std::size_t k, double tol,
                                                          std::size_t max_cutoff) {
  ConvergenceOptions options;
  options.max_cutoff = max_cutoff;
  return converged_spectrum(params, k, tol, options);
}

}  // namespace rabistark
