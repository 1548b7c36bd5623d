// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "rabistark/analytic.hpp"
#include "rabistark/cli.hpp"
#include "rabistark/colimit.hpp"
#include "rabistark/eigen.hpp"
#include "rabistark/observables.hpp"
#include "rabistark/specialfn.hpp"

using namespace rabistark;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ModelParams model(double delta, double g, double u, double kappa = 0.0) {
  ModelParams p;
  p.delta = delta;
  p.g = g;
  p.u = u;
  p.kappa = kappa;
  p.variant = kappa > 0 ? Variant::CompletedRabiStark : Variant::RabiStark;
  return p;
}

// Collects sub-check outcomes and details for one criterion line.
struct Criterion {
  int id;
  std::string title;
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool cond, std::string note) {
    if (!cond) ok = false;
    notes.push_back((cond ? "" : "!") + std::move(note));
  }
};

bool report(Criterion& c, std::function<void(Criterion&)> body) {
  const auto t0 = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, fmt::format("exception: {}", e.what()));
  }
  std::string details;
  for (const auto& n : c.notes) details += (details.empty() ? "" : "; ") + n;
  std::cout << fmt::format("{} criterion {}: {} [{:.1f}s] ({})\n", c.ok ? "PASS" : "FAIL", c.id, c.title,
                           seconds_since(t0), details)
            << std::flush;
  return c.ok;
}

void collapse_trichotomy(Criterion& c) {
  const auto classify = [&](double u) {
    const auto t0 = Clock::now();
    auto res = converged_spectrum(model(1.0, 0.2, u), 10, 1e-8, std::size_t{1} << 19);
    const double t = seconds_since(t0);
    c.expect(t < 60.0, fmt::format("U={} took {:.1f}s", u, t));
    return res;
  };
  {
    const auto [s, r] = classify(1.9);
    c.expect(r.classification == Classification::Converged,
             fmt::format("U=1.9 {} at N={}", to_string(r.classification), r.final_cutoff));
  }
  {
    const auto [s, r] = classify(2.0);
    const double spread = s.energies.back() - s.energies.front();
    c.expect(is_converged(r.classification),
             fmt::format("U=2.0 {} at N={}", to_string(r.classification), r.final_cutoff));
    c.expect(spread <= 1e-2, fmt::format("ten-level spread {:.3e}", spread));
  }
  {
    const auto [s, r] = classify(2.2);
    c.expect(r.classification == Classification::UnboundedBelow,
             fmt::format("U=2.2 {} at N={}", to_string(r.classification), r.final_cutoff));
  }
}

void analytic_agreement(Criterion& c) {
  for (double g : {0.05, 0.1, 0.2, 0.3}) {
    const ModelParams p = model(1.0, g, 1.0);
    const double ea = analytic_ground_energy(p);
    const auto [s, r] = converged_spectrum(p, 1, 1e-10, std::size_t{1} << 14);
    const double d = std::abs(ea - s.energies[0]);
    c.expect(is_converged(r.classification) && d <= 2e-2, fmt::format("g={} dE={:.2e}", g, d));
  }
  std::vector<double> gs;
  for (int i = 1; i <= 10; ++i) gs.push_back(0.05 * i);
  const std::vector<double> us{1.0};
  const auto pts = error_map(model(1.0, 0.0, 0.0), gs, us);
  bool monotone = true;
  std::size_t compared = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!pts[i].delta_e || !pts[i - 1].delta_e) {
      monotone = false;
      continue;
    }
    if (pts[i].crossing || pts[i].region != pts[i - 1].region) continue;
    ++compared;
    if (!(*pts[i].delta_e > *pts[i - 1].delta_e)) monotone = false;
  }
  c.expect(monotone && compared > 0,
           fmt::format("dE increasing over g=0.05..0.5 ({} pairs, dE(0.5)={:.2e})", compared,
                       pts.back().delta_e.value_or(NAN)));
}

void completed_boundedness(Criterion& c) {
  std::vector<double> us;
  for (int i = 0; i <= 300; ++i) us.push_back(0.01 * i);
  for (double k : {0.01, 0.1}) {
    const ModelParams p = model(1.0, 0.2, 0.0, k);
    std::size_t bad = 0;
    for (double u : us) {
      const auto [s, r] = converged_spectrum(with_param(p, SweepParam::U, u), 2, 1e-8, std::size_t{1} << 16);
      if (!is_converged(r.classification)) ++bad;
    }
    c.expect(bad == 0, fmt::format("kappa={} converged at {}/{} U points", k, us.size() - bad, us.size()));
    const auto cs = detect_level_crossings(p, SweepParam::U, us, 2);
    c.expect(!cs.empty() && cs.front().value > 2.0,
             fmt::format("kappa={} first ground crossing at U={}", k,
                         cs.empty() ? std::string("none") : fmt::format("{:.6f}", cs.front().value)));
  }
}

void staircase_geometry(Criterion& c) {
  StaircaseOptions o;
  o.workers = 0;
  {
    const ModelParams p = model(200.0, 0.1, 0.0, 0.05);
    const StaircaseReport r = staircase_scan(p, GridSpec{1.8, 3.0, 0.002}, o);
    c.expect(!r.edges.empty() && std::abs(r.edges.front() - 2.1) <= 0.02,
             fmt::format("first edge {:.5f}", r.edges.empty() ? NAN : r.edges.front()));
    double mean_w = NAN;
    if (!r.widths.empty()) {
      mean_w = 0.0;
      for (double w : r.widths) mean_w += w;
      mean_w /= static_cast<double>(r.widths.size());
    }
    c.expect(std::abs(mean_w - 0.2) <= 0.05 * 0.2, fmt::format("mean width {:.5f} over {} steps", mean_w, r.widths.size()));
    double worst = 0.0;
    for (double v : r.plateaus) worst = std::max(worst, std::abs(v - std::round(v)));
    c.expect(!r.plateaus.empty() && worst <= 0.05, fmt::format("plateau offset {:.2e}", worst));
  }
  {
    const ModelParams p = model(1000.0, 0.1, 0.0, 1e-3);
    const auto t0 = Clock::now();
    const StaircaseReport r = staircase_scan(p, GridSpec{1.99, 2.04, 0.0005}, o);
    const double t = seconds_since(t0);
    c.expect(std::abs(r.fitted_slope - 0.25) <= 0.05 * 0.25,
             fmt::format("delta=1000 slope {:.4f} on [{:.4f}, {:.4f}]", r.fitted_slope, r.fit_window.first,
                         r.fit_window.second));
    c.expect(t <= 1800.0, fmt::format("delta=1000 scan {:.1f}s", t));
  }
}

void phase_boundary(Criterion& c) {
  const auto bare = [](double u) { return co_excitation_energy(model(200.0, 0.1, u)).without_c; };
  c.expect(bare(2.0) == 0.0 && bare(std::nextafter(2.0, 0.0)) > 0.0 && bare(std::nextafter(2.0, 3.0)) < 0.0,
           "bare excitation energy changes sign exactly at U=2");
  const double root =
      oracle::bisect([](double u) { return co_excitation_energy(model(200.0, 0.1, u)).with_c; }, 1.5, 2.5, 1e-14);
  c.expect(std::abs(root - 2.0) <= 1e-3, fmt::format("with C: sign change at U={:.12f}", root));
}

bool same_blocks(const AnalyticSpectrum& a, const AnalyticSpectrum& b) {
  if (a.ground_energy != b.ground_energy || a.branches.size() != b.branches.size()) return false;
  for (std::size_t i = 0; i < a.branches.size(); ++i) {
    const auto& x = a.branches[i];
    const auto& y = b.branches[i];
    if (x.lambda != y.lambda || x.block.h11 != y.block.h11 || x.block.h12 != y.block.h12 ||
        x.block.h21 != y.block.h21 || x.block.h22 != y.block.h22 || x.energies != y.energies)
      return false;
  }
  return true;
}

void reduction_chain(Criterion& c) {
  bool rabi_ok = true, completed_ok = true;
  for (double g : {0.05, 0.2, 0.4}) {
    ModelParams rabi = model(1.0, g, 1.7);
    rabi.variant = Variant::Rabi;  // masks U to zero
    rabi_ok = rabi_ok && same_blocks(analytic_spectrum(model(1.0, g, 0.0), 25), analytic_spectrum(rabi, 25));
    ModelParams comp = model(1.0, g, 1.3);
    comp.variant = Variant::CompletedRabiStark;
    completed_ok = completed_ok && same_blocks(analytic_spectrum(model(1.0, g, 1.3), 25), analytic_spectrum(comp, 25));
  }
  c.expect(rabi_ok, "U=0 Stark pipeline bit-identical to Rabi pipeline");
  c.expect(completed_ok, "kappa=0 completed blocks equal original blocks");
}

void oracle_suites(Criterion& c) {
  double lag = 0.0;
  for (int n = 0; n <= 60; ++n)
    for (double x : {0.0, 0.01, 0.1, 1.0, 4.0}) {
      lag = std::max(lag, std::abs(specialfn::laguerre(n, x) / oracle::laguerre_series(n, 0, x) - 1.0));
      lag = std::max(lag, std::abs(specialfn::assoc_laguerre1(n, x) / oracle::laguerre_series(n, 1, x) - 1.0));
    }
  c.expect(lag <= 1e-12, fmt::format("laguerre rel {:.1e}", lag));

  double eig = 0.0;
  for (std::uint64_t seed : {1u, 2u, 3u, 42u, 2024u}) {
    const auto m = oracle::random_symmetric(6, seed);
    const auto roots = oracle::charpoly_roots(m);
    const auto s = eigen_symmetric(HamiltonianMatrix::from_dense(m), 6, false);
    if (roots.size() != 6) {
      eig = INFINITY;
      continue;
    }
    for (std::size_t j = 0; j < 6; ++j) eig = std::max(eig, std::abs(s.energies[j] - roots[j]));
  }
  c.expect(eig <= 1e-9, fmt::format("6x6 eig {:.1e}", eig));

  double res = 0.0;
  std::size_t branches = 0;
  for (double g : {0.05, 0.2, 0.4})
    for (double u : {0.0, 1.0, 1.9})
      for (double k : {0.0, 0.1}) {
        const ModelParams p = model(1.0, g, u, k);
        for (const auto& br : analytic_spectrum(p, 30).branches) {
          res = std::max(res, std::abs(lambda_condition_residual(p, br.n, br.t_z, br.lambda)));
          ++branches;
        }
      }
  c.expect(res <= 1e-10, fmt::format("residual {:.1e} over {} branches", res, branches));

  double photon = 0.0;
  const Block2 b = jc_block(model(200.0, 0.1, 1.0), 2, -0.01);
  for (double e : b.eigenvalues()) {
    const auto v = b.eigenvector(e);
    photon = std::max(photon, std::abs(analytic_mean_photon(2, -0.01, v[0], v[1]) -
                                       oracle::explicit_mean_photon(2, -0.01, v[0], v[1], 200)));
  }
  c.expect(photon <= 1e-6, fmt::format("mean photon {:.1e}", photon));

  std::size_t histories = 0, violations = 0;
  for (double u : {0.0, 1.0, 1.9, 2.0, 2.2})
    for (double g : {0.1, 0.3}) {
      ConvergenceOptions o;
      o.max_cutoff = 8192;
      const auto [s, r] = converged_spectrum(model(1.0, g, u), 8, 1e-9, o);
      ++histories;
      for (std::size_t i = 1; i < r.history.size(); ++i)
        for (std::size_t j = 0; j < r.history[i].energies.size(); ++j)
          if (r.history[i].energies[j] > r.history[i - 1].energies[j] + 1e-12) ++violations;
    }
  c.expect(violations == 0, fmt::format("monotone in cutoff over {} histories", histories));
}

std::string run_cli(std::vector<std::string> args, const std::filesystem::path& out) {
  args.insert(args.begin(), "rabistark");
  args.insert(args.end(), {"--out", out.string()});
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream so, se;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), so, se);
  std::ifstream in(out, std::ios::binary);
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::filesystem::remove(out);
  return std::to_string(code) + "\n" + text;
}

void determinism(Criterion& c) {
  const std::vector<std::vector<std::string>> specs{
      {"spectrum", "--model", "stark", "--g", "0.2", "--scan", "u=0:2.2:0.05", "--levels", "10"},
      {"error-map", "--scan", "g=0.05:0.6:0.05", "--scan", "u=0:1.9:0.1", "--format", "json"},
      {"staircase", "--model", "completed", "--delta", "200", "--g", "0.1", "--kappa", "0.05", "--scan", "u=1.8:3.0:0.002"},
      {"scan-u", "--model", "completed", "--g", "0.2", "--kappa", "0.1", "--scan", "u=0:3:0.05", "--format", "json"},
  };
  const auto dir = std::filesystem::temp_directory_path();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const std::string a = run_cli(specs[i], dir / fmt::format("rabistark_acc_{}_a", i));
    const std::string b = run_cli(specs[i], dir / fmt::format("rabistark_acc_{}_b", i));
    c.expect(a == b && a.size() > 2 && a[0] == '0', fmt::format("{} ({} bytes)", specs[i][0], a.size()));
  }
}

}  // namespace

int main() {
  std::vector<Criterion> all{
      {1, "collapse trichotomy"},
      {2, "analytic/numeric ground-energy agreement"},
      {3, "completed-model boundedness and first crossing"},
      {4, "staircase geometry"},
      {5, "CO-limit phase boundary"},
      {6, "reduction chain"},
      {7, "oracle suites"},
      {8, "determinism"},
  };
  const std::vector<std::function<void(Criterion&)>> bodies{
      collapse_trichotomy, analytic_agreement, completed_boundedness, staircase_geometry,
      phase_boundary,      reduction_chain,    oracle_suites,         determinism,
  };
  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (!report(all[i], bodies[i])) ++failed;
  std::cout << fmt::format("{} of {} criteria passed\n", all.size() - failed, all.size());
  return failed == 0 ? 0 : 1;
}
