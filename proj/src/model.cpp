#include "rabistark/model.hpp"

#include <cmath>

#include <fmt/format.h>

#include "rabistark/errors.hpp"

namespace rabistark {

void ModelParams::validate() const {
  for (double v : {omega, delta, g, u, kappa})
    if (!std::isfinite(v)) throw ValidationError("model parameters must be finite");
  if (!(omega > 0.0)) throw ValidationError(fmt::format("omega must be positive, got {}", omega));
  if (delta < 0.0) throw ValidationError(fmt::format("delta must be >= 0, got {}", delta));
  if (g < 0.0) throw ValidationError(fmt::format("g must be >= 0, got {}", g));
  if (kappa < 0.0) throw ValidationError(fmt::format("kappa must be >= 0, got {}", kappa));
}

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::Rabi: return "rabi";
    case Variant::RabiStark: return "stark";
    case Variant::CompletedRabiStark: return "completed";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  if (name == "rabi") return Variant::Rabi;
  if (name == "stark") return Variant::RabiStark;
  if (name == "completed") return Variant::CompletedRabiStark;
  throw ValidationError(fmt::format("unknown model '{}' (expected rabi|stark|completed)", name));
}

std::string describe(const ModelParams& p) {
  return fmt::format("{}(omega={}, delta={}, g={}, U={}, kappa={})", to_string(p.variant), p.omega,
                     p.delta, p.g, p.stark(), p.photon());
}

}  // namespace rabistark
