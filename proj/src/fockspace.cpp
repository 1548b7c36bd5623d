#include "rabistark/fockspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "rabistark/errors.hpp"

namespace rabistark {

HamiltonianMatrix::HamiltonianMatrix(std::size_t dim, std::size_t bandwidth, std::size_t cutoff)
    : dim_(dim), bandwidth_(std::min(bandwidth, dim == 0 ? 0 : dim - 1)), cutoff_(cutoff) {
  if (dim == 0) throw std::invalid_argument("HamiltonianMatrix: dimension must be positive");
  band_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(bandwidth_ + 1),
                                static_cast<Eigen::Index>(dim_));
}

HamiltonianMatrix HamiltonianMatrix::from_dense(const Eigen::MatrixXd& dense) {
  if (dense.rows() != dense.cols() || dense.rows() == 0)
    throw ValidationError("from_dense: matrix must be square and non-empty");
  const auto n = static_cast<std::size_t>(dense.rows());
  std::size_t bw = 0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      if (dense(ii, jj) != dense(jj, ii)) throw ValidationError("from_dense: matrix is not symmetric");
      if (dense(ii, jj) != 0.0) bw = std::max(bw, i - j);
    }
  HamiltonianMatrix h(n, bw);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j; i <= std::min(n - 1, j + bw); ++i)
      h.set(i, j, dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  return h;
}

double HamiltonianMatrix::operator()(std::size_t i, std::size_t j) const {
  if (i < j) std::swap(i, j);
  if (i >= dim_) throw std::out_of_range("HamiltonianMatrix index out of range");
  if (i - j > bandwidth_) return 0.0;
  return band_(static_cast<Eigen::Index>(i - j), static_cast<Eigen::Index>(j));
}

void HamiltonianMatrix::set(std::size_t i, std::size_t j, double value) {
  if (i < j) std::swap(i, j);
  if (i >= dim_) throw std::out_of_range("HamiltonianMatrix index out of range");
  if (i - j > bandwidth_) throw std::out_of_range("HamiltonianMatrix entry outside the band");
  band_(static_cast<Eigen::Index>(i - j), static_cast<Eigen::Index>(j)) = value;
}

Eigen::MatrixXd HamiltonianMatrix::dense() const {
  const auto n = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index d = 0; d <= static_cast<Eigen::Index>(bandwidth_) && j + d < n; ++d) {
      out(j + d, j) = band_(d, j);
      out(j, j + d) = band_(d, j);
    }
  return out;
}

Eigen::VectorXd HamiltonianMatrix::apply(const Eigen::VectorXd& x) const {
  const auto n = static_cast<Eigen::Index>(dim_);
  if (x.size() != n) throw std::invalid_argument("HamiltonianMatrix::apply: size mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    y(j) += band_(0, j) * x(j);
    for (Eigen::Index d = 1; d <= static_cast<Eigen::Index>(bandwidth_) && j + d < n; ++d) {
      const double h = band_(d, j);
      y(j + d) += h * x(j);
      y(j) += h * x(j + d);
    }
  }
  return y;
}

double HamiltonianMatrix::norm_inf() const {
  std::vector<double> rows(dim_, 0.0);
  for (std::size_t j = 0; j < dim_; ++j) {
    rows[j] += std::abs(band_(0, static_cast<Eigen::Index>(j)));
    for (std::size_t d = 1; d <= bandwidth_ && j + d < dim_; ++d) {
      const double h = std::abs(band_(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(j)));
      rows[j + d] += h;
      rows[j] += h;
    }
  }
  return *std::max_element(rows.begin(), rows.end());
}

HamiltonianMatrix build_hamiltonian(const ModelParams& params, std::size_t cutoff,
                                    std::size_t max_dim) {
  params.validate();
  if (cutoff < 1) throw std::invalid_argument("build_hamiltonian: cutoff must be >= 1");
  if (cutoff > max_dim / 2 || 2 * (cutoff + 1) > max_dim)
    throw DimensionError(
        fmt::format("cutoff {} needs dimension {} > maximum {}", cutoff, 2 * (cutoff + 1), max_dim));

  const double omega = params.omega;
  const double half_delta = 0.5 * params.delta;
  const double half_u = 0.5 * params.stark();
  const double kappa = params.photon();

  HamiltonianMatrix h(2 * (cutoff + 1), 3, cutoff);
  h.fock_ordered_ = true;
  for (std::size_t n = 0; n <= cutoff; ++n) {
    const double nd = static_cast<double>(n);
    const double common = omega * nd + kappa * nd * nd;
    const double spin = half_delta + half_u * nd;
    h.set(basis_index(n, Spin::Up), basis_index(n, Spin::Up), common + spin);
    h.set(basis_index(n, Spin::Down), basis_index(n, Spin::Down), common - spin);
    if (n < cutoff) {
      const double c = params.g * std::sqrt(nd + 1.0);
      h.set(basis_index(n + 1, Spin::Down), basis_index(n, Spin::Up), c);
      h.set(basis_index(n + 1, Spin::Up), basis_index(n, Spin::Down), c);
    }
  }
  return h;
}

HamiltonianMatrix mean_photon_operator(std::size_t cutoff) {
  if (cutoff < 1) throw std::invalid_argument("mean_photon_operator: cutoff must be >= 1");
  HamiltonianMatrix h(2 * (cutoff + 1), 0, cutoff);
  h.fock_ordered_ = true;
  for (std::size_t n = 0; n <= cutoff; ++n) {
    h.set(basis_index(n, Spin::Down), basis_index(n, Spin::Down), static_cast<double>(n));
    h.set(basis_index(n, Spin::Up), basis_index(n, Spin::Up), static_cast<double>(n));
  }
  return h;
}

Eigen::VectorXd parity_diagonal(std::size_t cutoff) {
  Eigen::VectorXd p(static_cast<Eigen::Index>(2 * (cutoff + 1)));
  for (std::size_t n = 0; n <= cutoff; ++n) {
    const double fock = (n % 2 == 0) ? 1.0 : -1.0;
    p(static_cast<Eigen::Index>(basis_index(n, Spin::Down))) = -fock;
    p(static_cast<Eigen::Index>(basis_index(n, Spin::Up))) = fock;
  }
  return p;
}

std::optional<std::array<ParitySector, 2>> parity_sectors(const HamiltonianMatrix& h) {
  if (!h.fock_ordered() || h.dim() % 2 != 0) return std::nullopt;
  const std::size_t levels = h.dim() / 2;

  // Every nonzero entry must connect states of equal parity sz (-1)^n.
  const Eigen::VectorXd parity = parity_diagonal(levels - 1);
  for (std::size_t j = 0; j < h.dim(); ++j)
    for (std::size_t d = 1; d <= h.bandwidth() && j + d < h.dim(); ++d)
      if (h(j + d, j) != 0.0 && parity(static_cast<Eigen::Index>(j + d)) !=
                                    parity(static_cast<Eigen::Index>(j)))
        return std::nullopt;

  std::array<ParitySector, 2> sectors;
  for (int s = 0; s < 2; ++s) {
    auto& sec = sectors[static_cast<std::size_t>(s)];
    sec.diag.resize(levels);
    sec.basis.resize(levels);
    sec.off.resize(levels - 1);
    for (std::size_t m = 0; m < levels; ++m) {
      // Spin alternates along the chain.
      const auto spin = static_cast<Spin>((static_cast<std::size_t>(s) + m) % 2);
      sec.basis[m] = basis_index(m, spin);
      sec.diag[m] = h(sec.basis[m], sec.basis[m]);
    }
    for (std::size_t m = 0; m + 1 < levels; ++m) sec.off[m] = h(sec.basis[m + 1], sec.basis[m]);
  }

  // Couplings outside the two chains (e.g. |n,s> - |n+1,s>) would break the split.
  std::size_t chain_couplings = 0;
  for (const auto& sec : sectors)
    for (double o : sec.off)
      if (o != 0.0) ++chain_couplings;
  std::size_t band_couplings = 0;
  for (std::size_t j = 0; j < h.dim(); ++j)
    for (std::size_t d = 1; d <= h.bandwidth() && j + d < h.dim(); ++d)
      if (h(j + d, j) != 0.0) ++band_couplings;
  if (chain_couplings != band_couplings) return std::nullopt;
  return sectors;
}

}  // namespace rabistark
