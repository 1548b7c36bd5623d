#include "rabistark/sweep.hpp"

#include <cmath>

#include <fmt/format.h>

#include "rabistark/errors.hpp"

namespace rabistark {

void GridSpec::validate() const {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step))
    throw ValidationError("grid bounds must be finite");
  if (!(step > 0.0)) throw ValidationError(fmt::format("grid step must be > 0, got {}", step));
  if (!(start < stop))
    throw ValidationError(fmt::format("grid start {} must be below stop {}", start, stop));
}

std::vector<double> GridSpec::values() const {
  validate();
  // Tolerate the rounding in (stop - start) / step so that a stop on the grid is included.
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = start + static_cast<double>(i) * step;
  return out;
}

std::string_view to_string(SweepParam p) noexcept {
  switch (p) {
    case SweepParam::G: return "g";
    case SweepParam::U: return "u";
    case SweepParam::Kappa: return "kappa";
    case SweepParam::Delta: return "delta";
    case SweepParam::Omega: return "omega";
  }
  return "?";
}

SweepParam parse_sweep_param(std::string_view name) {
  if (name == "g") return SweepParam::G;
  if (name == "u" || name == "capital-u" || name == "U") return SweepParam::U;
  if (name == "kappa") return SweepParam::Kappa;
  if (name == "delta") return SweepParam::Delta;
  if (name == "omega") return SweepParam::Omega;
  throw ValidationError(fmt::format("unknown sweep parameter '{}'", name));
}

ModelParams with_param(ModelParams params, SweepParam which, double value) {
  switch (which) {
    case SweepParam::G: params.g = value; break;
    case SweepParam::U: params.u = value; break;
    case SweepParam::Kappa: params.kappa = value; break;
    case SweepParam::Delta: params.delta = value; break;
    case SweepParam::Omega: params.omega = value; break;
  }
  return params;
}

unsigned default_workers() noexcept {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace rabistark
