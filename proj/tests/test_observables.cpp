#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rabistark/colimit.hpp"
#include "rabistark/errors.hpp"
#include "rabistark/observables.hpp"

using namespace rabistark;

namespace {

ModelParams completed(double delta, double g, double u, double kappa) {
  ModelParams p;
  p.delta = delta;
  p.g = g;
  p.u = u;
  p.kappa = kappa;
  p.variant = Variant::CompletedRabiStark;
  return p;
}

ModelParams stark(double g, double u) {
  ModelParams p;
  p.g = g;
  p.u = u;
  return p;
}

// Step position in U where the ground-state photon number passes `level`.
double photon_level_position(double delta, double kappa, double level, double lo, double hi) {
  return oracle::bisect(
      [&](double u) { return mean_photon_ground(completed(delta, 0.1, u, kappa), 1e-10).value - level; },
      lo, hi, 1e-10);
}

}  // namespace

TEST_CASE("mean photon number of simple ground states") {
  // Exact zero up to the round-off left in the inverse-iteration vector.
  for (double u : {0.0, 1.0, 1.9}) CHECK(mean_photon_ground(stark(0.0, u), 1e-10).value <= 1e-30);

  const ModelParams p = completed(200.0, 0.1, 1.5, 0.05);
  const MeanPhotonResult r = mean_photon_ground(p, 1e-10);
  const double lambda = solve_lambda(p, 0, Tz::Minus, LambdaMode::CoLimit);
  CHECK(std::abs(r.value - lambda * lambda) <= 1e-3);
  CHECK(r.tail < 1e-8);
  CHECK(is_converged(r.classification));

  const MeanPhotonResult one = mean_photon_ground(completed(200.0, 0.1, 2.15, 0.05), 1e-10);
  CHECK(std::abs(one.value - 1.0) <= 0.05);
}

TEST_CASE("mean photon number refuses divergent spectra") {
  CHECK_THROWS_AS((void)mean_photon_ground(stark(0.2, 2.5), 1e-8), DivergenceError);
}

TEST_CASE("occupation estimate") {
  CHECK(co_occupation_estimate(completed(200.0, 0.1, 1.5, 0.05)) == 0.0);
  CHECK(co_occupation_estimate(completed(200.0, 0.1, 2.5, 0.05)) == doctest::Approx(2.0));
  CHECK(co_occupation_estimate(stark(0.1, 2.5)) == 0.0);
}

TEST_CASE("staircase geometry at delta = 200") {
  const ModelParams p = completed(200.0, 0.1, 0.0, 0.05);
  StaircaseOptions o;
  o.workers = 0;
  const StaircaseReport r = staircase_scan(p, GridSpec{1.8, 3.0, 0.002}, o);
  const double step = 0.002;

  REQUIRE(r.edges.size() >= 5);
  CHECK(std::abs(r.edges.front() - 2.1) <= 0.02);
  for (double w : r.widths) CHECK(std::abs(w - 0.2) <= 0.05 * 0.2);
  for (std::size_t i = 0; i < r.plateaus.size(); ++i) CHECK(std::abs(r.plateaus[i] - static_cast<double>(i)) <= 0.05);
  CHECK(std::is_sorted(r.edges.begin(), r.edges.end()));
  for (std::size_t i = 1; i < r.mean_photon.size(); ++i) CHECK(r.mean_photon[i] >= r.mean_photon[i - 1] - 1e-9);

  const CrossingLadder lad = crossing_ladder(p, static_cast<int>(r.edges.size()));
  for (std::size_t i = 0; i < r.edges.size(); ++i) CHECK(std::abs(r.edges[i] - lad.positions[i]) <= 2 * step);

  REQUIRE(r.u_values.size() == r.mean_photon.size());
  for (std::size_t i = 0; i < r.u_values.size(); ++i) {
    CHECK(r.renormalized[i] == r.mean_photon[i] / 200.0);
    CHECK(is_converged(r.classifications[i]));
  }
  // Five edges leave only four steps after the first one: too few to fit.
  CHECK(std::isnan(r.fitted_slope));
}

TEST_CASE("staircase slope at delta = 1000 with kappa = 2e-3") {
  const ModelParams p = completed(1000.0, 0.1, 0.0, 2e-3);
  StaircaseOptions o;
  o.workers = 0;
  const StaircaseReport r = staircase_scan(p, GridSpec{1.99, 2.07, 0.001}, o);
  REQUIRE(std::isfinite(r.fitted_slope));
  CHECK(std::abs(r.fitted_slope - 0.125) <= 0.05 * 0.125);
}

TEST_CASE("staircase rejects unresolvable grids and bad models") {
  const ModelParams p = completed(200.0, 0.1, 0.0, 0.05);
  CHECK_THROWS_AS((void)staircase_scan(p, GridSpec{1.8, 3.0, 0.1}), ResolutionError);
  CHECK_THROWS_AS((void)staircase_scan(p, GridSpec{1.8, 3.0, 0.35}), ResolutionError);
  CHECK_THROWS_AS((void)staircase_scan(completed(200.0, 0.1, 0.0, 0.0), GridSpec{1.8, 3.0, 0.002}), std::exception);
  CHECK_THROWS_AS((void)staircase_scan(completed(10.0, 0.1, 0.0, 0.05), GridSpec{1.8, 3.0, 0.002}), RegimeError);
}

TEST_CASE("first transition sharpens as delta grows") {
  // Steps are true crossings, so each jump is discontinuous; what narrows is
  // the onset past U = 2 and the extent of the one-photon plateau.
  double prev_onset = 1e9, prev_width = 1e9;
  for (double d : {50.0, 200.0, 1000.0}) {
    const double k = 1.0 / d;
    const double first = photon_level_position(d, k, 0.5, 2.0, 2.0 + 4.0 * k);
    const double second = photon_level_position(d, k, 1.5, 2.0 + 4.0 * k, 2.0 + 8.0 * k);
    const double onset = first - 2.0, width = second - first;
    CHECK(onset > 0.0);
    CHECK(onset < prev_onset);
    CHECK(width < prev_width);
    CHECK(std::abs(width - 4.0 * k) <= 0.05 * 4.0 * k);
    prev_onset = onset;
    prev_width = width;
  }
}

TEST_CASE("level crossing detection") {
  SUBCASE("first exact crossing of the Rabi spectrum") {
    // Lies on the n = 1 exceptional curve, here at g = sqrt(3)/4.
    ModelParams p;
    std::vector<double> gs;
    for (int i = 1; i <= 100; ++i) gs.push_back(0.01 * i);
    const auto cs = detect_level_crossings(p, SweepParam::G, gs, 4);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].lower == 2);
    CHECK(cs[0].upper == 3);
    CHECK(std::abs(cs[0].value - std::sqrt(3.0) / 4.0) <= 1e-9);
    CHECK(cs[0].gap < 1e-6);
    // The Rabi ground state never crosses.
    CHECK(detect_level_crossings(p, SweepParam::G, gs, 2).empty());
  }
  SUBCASE("strong photon interaction pushes the first ground crossing past U = 2") {
    const ModelParams p = completed(1.0, 0.2, 0.0, 0.1);
    std::vector<double> us;
    for (int i = 0; i <= 300; ++i) us.push_back(0.01 * i);
    const auto cs = detect_level_crossings(p, SweepParam::U, us, 2);
    REQUIRE_FALSE(cs.empty());
    CHECK(cs[0].value > 2.0);
  }
  SUBCASE("weak photon interaction keeps the pre-collapse ground crossing") {
    const ModelParams p = completed(1.0, 0.2, 0.0, 0.01);
    std::vector<double> us;
    for (int i = 0; i <= 300; ++i) us.push_back(0.01 * i);
    const auto cs = detect_level_crossings(p, SweepParam::U, us, 2);
    REQUIRE_FALSE(cs.empty());
    CHECK(cs[0].value == doctest::Approx(1.941).epsilon(1e-3));
  }
  SUBCASE("crossings pile up below the collapse point without photon interaction") {
    std::vector<double> us;
    for (int i = 0; i <= 40; ++i) us.push_back(1.8 + 0.005 * i);
    const auto cs = detect_level_crossings(stark(0.2, 0.0), SweepParam::U, us, 6);
    CHECK(cs.size() >= 3);
    for (const auto& c : cs) {
      CHECK(c.value > 1.9);
      CHECK(c.value < 2.0);
    }
  }
}
