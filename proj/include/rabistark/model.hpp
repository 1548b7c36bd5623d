#pragma once

#include <string>
#include <string_view>

namespace rabistark {

enum class Variant { Rabi, RabiStark, CompletedRabiStark };

/// Physical couplings of the (completed) Rabi-Stark Hamiltonian
///
///   H = omega a^+a + delta/2 sz + g (a^+ + a) sx + u/2 a^+a sz + kappa (a^+a)^2
///
/// All couplings are in the same energy unit as omega. The variant tag
/// decides which couplings are live: Rabi ignores u and kappa, RabiStark
/// ignores kappa.
struct ModelParams {
  double omega = 1.0;
  double delta = 1.0;
  double g = 0.0;
  double u = 0.0;
  double kappa = 0.0;
  Variant variant = Variant::RabiStark;

  /// Stark coupling as seen by the selected variant.
  [[nodiscard]] double stark() const noexcept { return variant == Variant::Rabi ? 0.0 : u; }
  /// Photon-photon coupling as seen by the selected variant.
  [[nodiscard]] double photon() const noexcept {
    return variant == Variant::CompletedRabiStark ? kappa : 0.0;
  }

  /// Throws ValidationError unless omega > 0, delta >= 0, g >= 0, kappa >= 0
  /// and every field is finite.
  void validate() const;
};

[[nodiscard]] std::string_view to_string(Variant v) noexcept;
/// Accepts the CLI spellings "rabi", "stark" and "completed".
[[nodiscard]] Variant parse_variant(std::string_view name);

[[nodiscard]] std::string describe(const ModelParams& p);

}  // namespace rabistark
