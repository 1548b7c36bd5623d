#include "rabistark/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "rabistark/analytic.hpp"
#include "rabistark/colimit.hpp"
#include "rabistark/eigen.hpp"
#include "rabistark/errors.hpp"
#include "rabistark/fockspace.hpp"
#include "rabistark/observables.hpp"

namespace rabistark::cli {
namespace {

using json = nlohmann::ordered_json;

constexpr std::string_view kSubcommands[] = {"spectrum",   "scan-g",    "scan-u",   "collapse-check",
                                             "error-map",  "staircase", "co-ladder"};

double parse_number(std::string_view text, std::string_view what) {
  const std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v))
    throw ValidationError(fmt::format("invalid {} '{}'", what, text));
  return v;
}

// ---------------------------------------------------------------------------
// Tabular output shared by the CSV and JSON writers
// ---------------------------------------------------------------------------

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
  json extra = json::object();
  bool complete = true;
  std::string reason;
  int exit_code = kExitOk;

  void fail(std::string why, int code) {
    complete = false;
    reason = std::move(why);
    exit_code = code;
  }
};

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
json optional_number(const std::optional<double>& v) { return v ? number_or_null(*v) : json(nullptr); }

std::string csv_quote(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_unsigned()) return fmt::format("{}", v.get<std::uint64_t>());
  if (v.is_number_integer()) return fmt::format("{}", v.get<std::int64_t>());
  if (v.is_number_float()) return fmt::format("{:.16e}", v.get<double>());
  return csv_quote(v.get<std::string>());
}

json echo(const SweepSpec& s) {
  json scans = json::array();
  for (const auto& sc : s.scans)
    scans.push_back({{"param", to_string(sc.param)},
                     {"start", sc.grid.start},
                     {"stop", sc.grid.stop},
                     {"step", sc.grid.step}});
  // Worker count is left out: it never changes the records.
  return {{"subcommand", to_string(s.subcommand)},
          {"model", to_string(s.params.variant)},
          {"omega", s.energy_scale},
          {"delta", s.params.delta},
          {"g", s.params.g},
          {"capital_u", s.params.u},
          {"kappa", s.params.kappa},
          {"scans", scans},
          {"levels", s.levels},
          {"tol", s.tol},
          {"cutoff", s.cutoff ? json(*s.cutoff) : json("auto")},
          {"max_cutoff", s.max_cutoff},
          {"format", s.format == OutputFormat::Csv ? "csv" : "json"}};
}

void write_table(const SweepSpec& spec, const Table& t, std::ostream& os) {
  if (spec.format == OutputFormat::Csv) {
    std::string line;
    for (std::size_t i = 0; i < t.columns.size(); ++i) line += (i ? "," : "") + csv_quote(t.columns[i]);
    os << line << '\n';
    for (const auto& row : t.rows) {
      line.clear();
      for (std::size_t i = 0; i < row.size(); ++i) line += (i ? "," : "") + csv_cell(row[i]);
      os << line << '\n';
    }
    if (!t.complete) os << "#incomplete," << csv_quote(t.reason) << '\n';
    return;
  }
  json doc = json::object();
  doc["spec"] = echo(spec);
  json records = json::array();
  for (const auto& row : t.rows) {
    json rec = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) rec[t.columns[i]] = row[i];
    records.push_back(std::move(rec));
  }
  doc["records"] = std::move(records);
  for (const auto& [key, value] : t.extra.items()) doc[key] = value;
  doc["complete"] = t.complete;
  if (!t.complete) doc["incomplete_reason"] = t.reason;
  os << doc.dump(2) << '\n';
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const DivergenceError*>(&e)) return kExitDivergence;
  if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const ResolutionError*>(&e) ||
      dynamic_cast<const std::invalid_argument*>(&e))
    return kExitValidation;
  return kExitSolver;
}

void mark_divergence(Table& t, std::size_t unbounded, std::size_t points) {
  if (t.exit_code == kExitOk && points > 0 && 2 * unbounded > points) t.exit_code = kExitDivergence;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

ConvergenceOptions convergence_options(const SweepSpec& s) {
  ConvergenceOptions o;
  if (s.cutoff) {
    o.max_cutoff = *s.cutoff;
    o.initial_cutoff = std::max<std::size_t>(1, *s.cutoff / 2);
  } else {
    o.max_cutoff = s.max_cutoff;
  }
  return o;
}

struct SpectrumPoint {
  Spectrum numeric;
  ConvergenceReport report;
  std::vector<AnalyticLevel> analytic;
  std::string error;
};

Table run_spectrum(const SweepSpec& s) {
  Table t;
  t.columns = {"sweep_value", "level_index", "energy", "source", "cutoff", "classification"};

  const ScanSpec* scan = s.scans.empty() ? nullptr : &s.scans.front();
  const std::vector<double> values = scan ? scan->grid.values() : std::vector<double>{0.0};
  const ConvergenceOptions conv = convergence_options(s);

  auto points = parallel_map(values.size(), s.workers, [&](std::size_t i) {
    SpectrumPoint pt;
    const ModelParams p = scan ? with_param(s.params, scan->param, values[i]) : s.params;
    try {
      std::tie(pt.numeric, pt.report) = converged_spectrum(p, s.levels, s.tol, conv);
    } catch (const std::exception& e) {
      pt.error = e.what();
      return pt;
    }
    // The analytic reduction is best effort; a failure only drops its rows.
    try {
      const auto levels = analytic_levels(analytic_spectrum(p, static_cast<int>(s.levels)));
      pt.analytic.assign(levels.begin(), levels.begin() + static_cast<std::ptrdiff_t>(
                                                              std::min(levels.size(), s.levels)));
    } catch (const std::exception&) {
      pt.analytic.clear();
    }
    return pt;
  });

  std::size_t unbounded = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& pt = points[i];
    const json x = scan ? json(values[i]) : json(nullptr);
    if (!pt.error.empty()) {
      t.fail(scan ? fmt::format("{}={}: {}", to_string(scan->param), values[i], pt.error) : pt.error,
             kExitSolver);
      break;
    }
    if (pt.report.classification == Classification::UnboundedBelow) ++unbounded;
    const std::string cls(to_string(pt.report.classification));
    for (std::size_t j = 0; j < pt.numeric.energies.size(); ++j)
      t.rows.push_back({x, j, pt.numeric.energies[j] * s.energy_scale, "numeric", pt.report.final_cutoff, cls});
    for (const auto& lv : pt.analytic)
      t.rows.push_back({x, lv.ladder, lv.energy * s.energy_scale,
                        lv.sign == BranchSign::Positive ? "analytic_pos" : "analytic_neg", nullptr,
                        "analytic"});
  }
  mark_divergence(t, unbounded, values.size());

  if (s.format == OutputFormat::Json && scan &&
      (s.subcommand == Subcommand::ScanG || s.subcommand == Subcommand::ScanU) && t.complete &&
      s.levels >= 2) {
    CrossingOptions co;
    co.tol = s.tol;
    co.max_cutoff = conv.max_cutoff;
    co.workers = s.workers;
    json crossings = json::array();
    try {
      for (const auto& c : detect_level_crossings(s.params, scan->param, values, s.levels, co))
        crossings.push_back({{"value", c.value},
                             {"lower", c.lower},
                             {"upper", c.upper},
                             {"gap", c.gap * s.energy_scale}});
      t.extra["crossings"] = std::move(crossings);
    } catch (const std::exception& e) {
      t.extra["crossings_error"] = e.what();
    }
  }
  return t;
}

Table run_collapse_check(const SweepSpec& s) {
  Table t;
  t.columns = {"cutoff", "level_index", "energy", "classification"};
  try {
    const auto [spec, report] = converged_spectrum(s.params, s.levels, s.tol, convergence_options(s));
    const std::string cls(to_string(report.classification));
    for (const auto& rec : report.history)
      for (std::size_t j = 0; j < rec.energies.size(); ++j)
        t.rows.push_back({rec.cutoff, j, rec.energies[j] * s.energy_scale, cls});
    const auto& last = report.history.back().energies;
    t.extra["report"] = {{"classification", cls},
                         {"final_cutoff", report.final_cutoff},
                         {"tolerance", report.tolerance},
                         {"drift_rate", report.drift_rate * s.energy_scale},
                         {"level_spread", (last.back() - last.front()) * s.energy_scale}};
    mark_divergence(t, report.classification == Classification::UnboundedBelow ? 1 : 0, 1);
  } catch (const std::exception& e) {
    t.fail(e.what(), exit_code_for(e));
  }
  return t;
}

Table run_error_map(const SweepSpec& s) {
  Table t;
  t.columns = {"g",      "u",             "e_analytic", "e_numeric", "delta_e",
               "region", "crossing_flag", "cutoff",     "classification"};
  const auto gs = s.find_scan(SweepParam::G)->grid.values();
  const auto us = s.find_scan(SweepParam::U)->grid.values();
  ErrorMapOptions o;
  o.tol = s.tol;
  o.max_cutoff = s.max_cutoff;
  o.workers = s.workers;
  const double k = s.energy_scale;
  auto scaled = [k](const std::optional<double>& v) {
    return v ? optional_number(*v * k) : json(nullptr);
  };
  std::size_t unbounded = 0;
  for (const auto& pt : error_map(s.params, gs, us, o)) {
    if (pt.classification == Classification::UnboundedBelow) ++unbounded;
    t.rows.push_back({pt.g, pt.u, scaled(pt.e_analytic), scaled(pt.e_numeric), scaled(pt.delta_e),
                      pt.region == Region::I ? "I" : "II", pt.crossing ? 1 : 0,
                      pt.cutoff, std::string(to_string(pt.classification))});
  }
  mark_divergence(t, unbounded, gs.size() * us.size());
  return t;
}

Table run_staircase(const SweepSpec& s) {
  Table t;
  t.columns = {"u", "mean_photon", "renorm_mean_photon", "cutoff", "classification"};
  StaircaseOptions o;
  o.tol = s.tol;
  o.workers = s.workers;
  o.photon.max_cutoff = s.max_cutoff;
  try {
    const StaircaseReport r = staircase_scan(s.params, s.find_scan(SweepParam::U)->grid, o);
    for (std::size_t i = 0; i < r.u_values.size(); ++i)
      t.rows.push_back({r.u_values[i], r.mean_photon[i], r.renormalized[i], r.cutoffs[i],
                        std::string(to_string(r.classifications[i]))});
    json plateaus = json::array();
    for (double v : r.plateaus) plateaus.push_back(v);
    t.extra["report"] = {{"edges", r.edges},
                         {"widths", r.widths},
                         {"plateaus", plateaus},
                         {"fitted_slope", number_or_null(r.fitted_slope)},
                         {"fit_window", {number_or_null(r.fit_window.first), number_or_null(r.fit_window.second)}},
                         {"predicted_slope", slope_prediction(s.params)},
                         {"predicted_first_edge", crossing_ladder(s.params, 0).positions.front()},
                         {"predicted_width", 4.0 * s.params.kappa}};
  } catch (const std::exception& e) {
    t.fail(e.what(), exit_code_for(e));
  }
  return t;
}

Table run_co_ladder(const SweepSpec& s) {
  Table t;
  t.columns = {"n", "u_crossing"};
  const CrossingLadder ladder = crossing_ladder(s.params, static_cast<int>(s.levels) - 1);
  for (std::size_t n = 0; n < ladder.positions.size(); ++n) t.rows.push_back({n, ladder.positions[n]});
  t.extra["kappa"] = ladder.kappa;
  return t;
}

}  // namespace

std::string_view to_string(Subcommand s) noexcept { return kSubcommands[static_cast<std::size_t>(s)]; }

Subcommand parse_subcommand(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kSubcommands); ++i)
    if (kSubcommands[i] == name) return static_cast<Subcommand>(i);
  throw ValidationError(fmt::format("unknown subcommand '{}'", name));
}

ScanSpec parse_scan(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos)
    throw ValidationError(fmt::format("scan '{}' must look like param=start:stop:step", text));
  ScanSpec out;
  out.param = parse_sweep_param(text.substr(0, eq));
  std::string_view rest = text.substr(eq + 1);
  double parts[3];
  for (int i = 0; i < 3; ++i) {
    const auto colon = rest.find(':');
    if ((i < 2) == (colon == std::string_view::npos))
      throw ValidationError(fmt::format("scan '{}' must look like param=start:stop:step", text));
    parts[i] = parse_number(rest.substr(0, colon), "scan bound");
    rest = i < 2 ? rest.substr(colon + 1) : std::string_view{};
  }
  out.grid = {parts[0], parts[1], parts[2]};
  out.grid.validate();
  return out;
}

const ScanSpec* SweepSpec::find_scan(SweepParam p) const {
  for (const auto& s : scans)
    if (s.param == p) return &s;
  return nullptr;
}

void SweepSpec::validate() const {
  params.validate();
  if (!(energy_scale > 0.0) || !std::isfinite(energy_scale))
    throw ValidationError("--omega must be a positive finite number");
  if (levels < 1) throw ValidationError("--levels must be >= 1");
  if (!(tol > 0.0) || !std::isfinite(tol)) throw ValidationError("--tol must be > 0");
  if (max_cutoff < 1 || 2 * (max_cutoff + 1) > kDefaultMaxDim)
    throw ValidationError(fmt::format("--max-cutoff must lie in [1, {}]", kDefaultMaxDim / 2 - 1));
  if (cutoff && (*cutoff < 1 || 2 * (*cutoff + 1) > kDefaultMaxDim))
    throw ValidationError(fmt::format("--cutoff must lie in [1, {}]", kDefaultMaxDim / 2 - 1));
  const std::size_t ceiling = cutoff ? *cutoff : max_cutoff;
  if (subcommand != Subcommand::CoLadder && 2 * (ceiling + 1) < levels)
    throw ValidationError(fmt::format("cutoff {} cannot hold {} levels", ceiling, levels));

  for (std::size_t i = 0; i < scans.size(); ++i) {
    scans[i].grid.validate();
    for (std::size_t j = 0; j < i; ++j)
      if (scans[j].param == scans[i].param)
        throw ValidationError(fmt::format("parameter {} scanned twice", to_string(scans[i].param)));
    with_param(params, scans[i].param, scans[i].grid.start).validate();
    with_param(params, scans[i].param, scans[i].grid.stop).validate();
  }

  auto require_scans = [&](std::initializer_list<SweepParam> want) {
    bool ok = scans.size() == want.size();
    for (SweepParam p : want) ok = ok && find_scan(p) != nullptr;
    if (!ok) {
      std::string names;
      for (SweepParam p : want) names += fmt::format("{}{}", names.empty() ? "" : " and ", to_string(p));
      throw ValidationError(fmt::format("{} needs exactly {} scan{}{}{}", to_string(subcommand), want.size(),
                                        want.size() == 1 ? "" : "s", want.size() ? " over " : "", names));
    }
  };
  auto no_fixed_cutoff = [&] {
    if (cutoff) throw ValidationError(fmt::format("{} picks its own cutoff; drop --cutoff", to_string(subcommand)));
  };
  auto completed_with_kappa = [&] {
    if (params.variant != Variant::CompletedRabiStark || !(params.kappa > 0.0))
      throw ValidationError(fmt::format("{} needs --model completed with --kappa > 0", to_string(subcommand)));
  };

  switch (subcommand) {
    case Subcommand::Spectrum:
      if (scans.size() > 1) throw ValidationError("spectrum takes at most one scan");
      break;
    case Subcommand::ScanG: require_scans({SweepParam::G}); break;
    case Subcommand::ScanU: require_scans({SweepParam::U}); break;
    case Subcommand::CollapseCheck: require_scans({}); break;
    case Subcommand::ErrorMap:
      require_scans({SweepParam::G, SweepParam::U});
      no_fixed_cutoff();
      break;
    case Subcommand::Staircase:
      require_scans({SweepParam::U});
      no_fixed_cutoff();
      completed_with_kappa();
      try {
        check_co_regime(params);
      } catch (const RegimeError& e) {
        throw ValidationError(e.what());
      }
      break;
    case Subcommand::CoLadder:
      require_scans({});
      no_fixed_cutoff();
      completed_with_kappa();
      break;
  }
}

ParseOutcome parse_command_line(const std::vector<std::string>& args) {
  CLI::App app{"Spectra of the Rabi, Rabi-Stark and completed Rabi-Stark models"};
  app.name("rabistark");

  std::string sub;
  std::string model = "stark";
  double omega = 1.0, delta = 1.0, g = 0.0, u = 0.0, kappa = 0.0;
  std::size_t cutoff = 0, levels = 10, max_cutoff = std::size_t{1} << 19;
  double tol = 1e-8;
  std::vector<std::string> scans;
  std::string out_path;
  std::string format = "csv";
  unsigned workers = 0;

  std::vector<std::string> names(std::begin(kSubcommands), std::end(kSubcommands));
  app.add_option("subcommand", sub, "What to compute")->required()->check(CLI::IsMember(names));
  app.add_option("--model", model, "Model variant")->check(CLI::IsMember({"rabi", "stark", "completed"}));
  app.add_option("--omega", omega, "Field frequency; energy columns are multiplied by it");
  app.add_option("--delta", delta, "Qubit splitting (units of omega)");
  app.add_option("--g", g, "Rabi coupling (units of omega)");
  app.add_option("--capital-u", u, "Stark coupling U (units of omega)");
  app.add_option("--kappa", kappa, "Photon-photon coupling (units of omega)");
  auto* fixed = app.add_option("--cutoff", cutoff, "Fixed Fock cutoff");
  auto* automatic = app.add_flag("--auto-cutoff", "Cutoff doubling until converged (default)");
  fixed->excludes(automatic);
  app.add_option("--max-cutoff", max_cutoff, "Largest cutoff of the doubling schedule");
  app.add_option("--levels", levels, "Number of lowest levels");
  app.add_option("--tol", tol, "Convergence tolerance (units of omega)");
  app.add_option("--scan", scans, "param=start:stop:step (repeatable)");
  app.add_option("--out", out_path, "Output file (default stdout)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--workers", workers, "Worker threads (0 = all cores)");

  ParseOutcome outcome;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    const int code = app.exit(e, out, err);
    outcome.exit_code = code == 0 ? kExitOk : kExitValidation;
    outcome.message = code == 0 ? out.str() : err.str();
    return outcome;
  }

  try {
    SweepSpec spec;
    spec.subcommand = parse_subcommand(sub);
    spec.params.variant = parse_variant(model);
    spec.params.omega = 1.0;
    spec.params.delta = delta;
    spec.params.g = g;
    spec.params.u = u;
    spec.params.kappa = kappa;
    spec.energy_scale = omega;
    for (const auto& s : scans) spec.scans.push_back(parse_scan(s));
    spec.levels = levels;
    spec.tol = tol;
    if (fixed->count() > 0) spec.cutoff = cutoff;
    spec.max_cutoff = max_cutoff;
    spec.out_path = out_path;
    spec.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    spec.workers = workers;
    spec.validate();
    outcome.spec = std::move(spec);
  } catch (const std::exception& e) {
    outcome.exit_code = kExitValidation;
    outcome.message = fmt::format("error: {}\n", e.what());
  }
  return outcome;
}

int run(const SweepSpec& spec, std::ostream& out, std::ostream& diag) {
  try {
    spec.validate();
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  // Open the destination before computing so a bad path fails fast.
  std::ofstream file;
  const bool to_file = !spec.out_path.empty() && spec.out_path != "-";
  if (to_file) {
    file.open(spec.out_path, std::ios::out | std::ios::trunc);
    if (!file) {
      diag << "error: cannot write " << spec.out_path << '\n';
      return kExitValidation;
    }
  }
  std::ostream& sink = to_file ? static_cast<std::ostream&>(file) : out;

  Table table;
  try {
    switch (spec.subcommand) {
      case Subcommand::Spectrum:
      case Subcommand::ScanG:
      case Subcommand::ScanU: table = run_spectrum(spec); break;
      case Subcommand::CollapseCheck: table = run_collapse_check(spec); break;
      case Subcommand::ErrorMap: table = run_error_map(spec); break;
      case Subcommand::Staircase: table = run_staircase(spec); break;
      case Subcommand::CoLadder: table = run_co_ladder(spec); break;
    }
  } catch (const std::exception& e) {
    table.fail(e.what(), exit_code_for(e));
  }

  write_table(spec, table, sink);
  sink.flush();
  if (!table.complete) diag << "error: " << table.reason << '\n';
  if (table.exit_code == kExitDivergence && table.complete)
    diag << "warning: more than half of the points are unbounded below\n";
  return table.exit_code;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& diag) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  const ParseOutcome parsed = parse_command_line(args);
  if (!parsed.spec) {
    (parsed.exit_code == kExitOk ? out : diag) << parsed.message;
    return parsed.exit_code;
  }
  return run(*parsed.spec, out, diag);
}

}  // namespace rabistark::cli
