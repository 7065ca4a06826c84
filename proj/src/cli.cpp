#include "fieldback/cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fieldback/backreaction.hpp"
#include "fieldback/cnot.hpp"
#include "fieldback/errors.hpp"
#include "fieldback/grover.hpp"
#include "fieldback/photon_budget.hpp"

namespace fieldback::cli {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Acceptance tolerances for the embedded overlap targets.
constexpr double kNormRelTol = 0.005;
constexpr double kOverlapAbsTol = 0.02;

// Quoted scenarios for the qubit ceilings: (label, N_ph, M, quoted K).
struct Ceiling {
  const char* label;
  double photons;
  double ensemble;
  int quoted;
};
constexpr Ceiling kQuotedCeilings[] = {
    {"ion-trap single computer", 1e12, 1.0, 70},
    {"nmr single spin system", 1e22, 1.0, 140},
    {"nmr ensemble", 1e22, 1e17, 25},
};

std::string fmt(double v) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;

  std::string csv() const {
    std::ostringstream out;
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out << ',';
        const Json& cell = row[c];
        if (cell.is_number_float()) {
          out << fmt(cell.get<double>());
        } else if (cell.is_number()) {
          out << cell.dump();
        } else if (cell.is_string()) {
          out << cell.get<std::string>();
        } else if (cell.is_boolean()) {
          out << (cell.get<bool>() ? "true" : "false");
        }
      }
      out << '\n';
    }
    return out.str();
  }

  Json json() const {
    Json rows_json = Json::array();
    for (const auto& row : rows) rows_json.push_back(Json(row));
    return Json{{"columns", columns}, {"rows", rows_json}};
  }
};

/// Flat option set shared by every subcommand.
struct Options {
  std::string out = ".";
  std::string format;
  int k = 3;
  std::uint64_t y = 0;
  int iterations = 0;
  int k_min = 2;
  int k_max = 10;
  int points = 0;
  double epsilon = 1e-3;
  double tol = 1e-8;
  double truncation = 200.0;
  double threshold = 1.0;
  double ensemble = 1.0;
  double photons = 0.0;
  double omega1 = 20.0;
  double omega2 = 21.0;
  double coupling = 0.4;
  double rabi = 0.01;
  double duration = 0.0;
  double center_frequency = 0.0;
  double x_min = -2.5;
  double x_max = 1.0;
  std::string preset;
  std::string presets_file;
};

class Context {
 public:
  Context(const Options& opts, const CLI::App& app, std::string default_format, std::ostream& out)
      : opts_(opts), app_(app), out_(out) {
    format_ = given("format") ? opts.format : std::move(default_format);
  }

  bool given(const std::string& name) const {
    const CLI::Option* opt = app_.get_option_no_throw("--" + name);
    return opt != nullptr && opt->count() > 0;
  }

  std::ostream& out() { return out_; }

  /// Writes the summary as <stem>.json. Tables go to <table>.csv, or under
  /// "tables" in the summary when the format is json.
  void emit(const std::string& stem, Json summary, const std::vector<Table>& tables) {
    const fs::path dir(opts_.out);
    if (format_ == "json") {
      if (!tables.empty()) {
        Json t = Json::object();
        for (const auto& table : tables) t[table.name] = table.json();
        summary["tables"] = std::move(t);
      }
    } else {
      for (const auto& table : tables) write(dir / (table.name + ".csv"), table.csv());
    }
    write(dir / (stem + ".json"), summary.dump(2) + "\n");
  }

  void write(const fs::path& path, const std::string& text) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    require(!ec && fs::is_directory(path.parent_path()),
            "--out: cannot create directory '" + path.parent_path().string() + "'");
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(file), "--out: cannot write '" + path.string() + "'");
    file << text;
    require(static_cast<bool>(file), "--out: failed writing '" + path.string() + "'");
    out_ << "wrote " << path.string() << '\n';
  }

 private:
  const Options& opts_;
  const CLI::App& app_;
  std::ostream& out_;
  std::string format_;
};

// ---------------------------------------------------------------------------

Json quadrature_json(const QuadratureInfo& q) {
  return Json{{"truncation", q.truncation},
              {"tolerance", q.tolerance},
              {"error_estimate", q.error_estimate},
              {"max_tail", q.max_tail},
              {"evaluations", q.evaluations}};
}

void run_integrals(const Options& o, Context& ctx) {
  const OverlapTable table = integral_table(o.truncation, o.tol);
  const OverlapTable reference = reference_overlap_table();

  Json norms = Json::object();
  Json overlaps = Json::object();
  Table rows{"integrals",
             {"name", "re", "im", "target_re", "target_im", "tolerance", "pass"},
             {}};
  bool all_pass = true;
  for (PhotonKind k : kAllKinds) {
    const double value = table.norm(k);
    const double target = reference.norm(k);
    const double rel = std::abs(value - target) / target;
    const bool pass = rel <= kNormRelTol;
    all_pass = all_pass && pass;
    norms[std::string(name_of(k))] = Json{{"value", value},
                                          {"target", target},
                                          {"relative_error", rel},
                                          {"tolerance_relative", kNormRelTol},
                                          {"pass", pass}};
    rows.rows.push_back({std::string("I_") + std::string(name_of(k)), value, 0.0, target, 0.0,
                         kNormRelTol, pass});
  }
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      const PhotonKind ka = kAllKinds[a];
      const PhotonKind kb = kAllKinds[b];
      const Complex value = table.overlap(ka, kb);
      const Complex target = reference.overlap(ka, kb);
      const bool pass = std::abs(value.real() - target.real()) <= kOverlapAbsTol &&
                        std::abs(value.imag() - target.imag()) <= kOverlapAbsTol;
      all_pass = all_pass && pass;
      const std::string key = std::string(name_of(ka)) + "," + std::string(name_of(kb));
      overlaps[key] = Json{{"value", complex_json(value)},
                           {"target", complex_json(target)},
                           {"tolerance_absolute", kOverlapAbsTol},
                           {"pass", pass}};
      rows.rows.push_back({"I_" + std::string(name_of(ka)) + "_" + std::string(name_of(kb)),
                           value.real(), value.imag(), target.real(), target.imag(),
                           kOverlapAbsTol, pass});
    }
  }

  for (const auto& row : rows.rows) {
    ctx.out() << row[0].get<std::string>() << " = " << fmt(row[1].get<double>()) << " + "
              << fmt(row[2].get<double>()) << "i  target " << fmt(row[3].get<double>()) << " + "
              << fmt(row[4].get<double>()) << "i  " << (row[6].get<bool>() ? "PASS" : "FAIL")
              << '\n';
  }

  Json summary{{"quadrature", quadrature_json(table.quadrature())},
               {"norms", norms},
               {"overlaps", overlaps},
               {"all_pass", all_pass}};
  ctx.emit("integrals", std::move(summary), {rows});
}

void run_envelopes(const Options& o, Context& ctx) {
  const int points = ctx.given("points") ? o.points : 1024;
  require(points >= 256, "--points must be >= 256");
  const OverlapTable table = integral_table(o.truncation, o.tol);
  const auto time = uniform_grid(-2.0 * std::numbers::pi, 6.0 * std::numbers::pi,
                                 static_cast<std::size_t>(points));

  std::vector<OnePhotonEnvelope> envs;
  for (PhotonKind k : kAllKinds) envs.push_back(envelope(k, time));
  const SampledEnvelope classical = classical_pulse_envelope(time);

  Table env_table{"envelopes", {"t"}, {}};
  for (const auto& e : envs) {
    const std::string n(name_of(e.kind));
    for (const char* part : {"_re", "_im", "_abs"}) env_table.columns.push_back(n + part);
  }
  for (const char* part : {"_re", "_im", "_abs"}) {
    env_table.columns.push_back(std::string("classical") + part);
  }
  for (std::size_t j = 0; j < time.size(); ++j) {
    std::vector<Json> row{time[j]};
    auto push = [&](Complex z) {
      row.push_back(z.real());
      row.push_back(z.imag());
      row.push_back(std::abs(z));
    };
    for (const auto& e : envs) push(e.amplitude[j]);
    push(classical.amplitude[j]);
    env_table.rows.push_back(std::move(row));
  }

  // g-functions on x ∈ [−10, 10] in steps of 0.01.
  Table g_table{"g_functions", {"x"}, {}};
  for (PhotonKind k : kAllKinds) {
    const std::string n(name_of(k));
    for (const char* part : {"_re", "_im", "_abs"}) g_table.columns.push_back(n + part);
  }
  for (int j = 0; j <= 2000; ++j) {
    const double x = -10.0 + 0.01 * j;
    std::vector<Json> row{x};
    for (PhotonKind k : kAllKinds) {
      const Complex g = g_value(k, x);
      row.push_back(g.real());
      row.push_back(g.imag());
      row.push_back(std::abs(g));
    }
    g_table.rows.push_back(std::move(row));
  }

  Json parseval = Json::object();
  for (const auto& e : envs) {
    const double energy = envelope_energy(e);
    const double expected = table.norm(e.kind) / (2.0 * std::numbers::pi);
    const double rel = std::abs(energy - expected) / expected;
    parseval[std::string(name_of(e.kind))] =
        Json{{"energy", energy}, {"expected", expected}, {"relative_error", rel}};
    ctx.out() << "parseval " << name_of(e.kind) << ": " << fmt(energy) << " vs I/2pi "
              << fmt(expected) << " (rel " << fmt(rel) << ")\n";
  }
  const SpectralGrid grid;
  Json summary{{"time_points", points},
               {"time_span", {time.front(), time.back()}},
               {"spectral_half_width", grid.half_width},
               {"spectral_points", grid.points},
               {"classical_energy", envelope_energy(classical)},
               {"parseval", parseval}};
  ctx.emit("envelopes", std::move(summary), {env_table, g_table});
}

Json report_json(const ScatterReport& r) {
  Json steps = Json::array();
  for (const auto& s : r.per_step) {
    steps.push_back(Json{{"iteration", s.iteration},
                         {"slot_b", s.slot_b},
                         {"slot_a", s.slot_a},
                         {"success_ideal", s.success_ideal}});
  }
  return Json{{"K", r.qubits},
              {"y", r.marked},
              {"epsilon", r.epsilon},
              {"N", r.iterations},
              {"total_scatter", r.total_scatter},
              {"success_ideal", r.success_ideal},
              {"success_decoherent",
               r.success_decoherent ? Json(*r.success_decoherent) : Json(nullptr)},
              {"per_step", steps},
              {"warnings", r.warnings}};
}

struct VariantTotals {
  double exact_sentence, exact_printed, indexed_sentence, indexed_printed;
  double asymptotic_sentence, asymptotic_printed;
};

VariantTotals closed_form_variants(const GroverConfig& cfg, const OverlapTable& table) {
  auto total = [&](ClosedFormMode m, Contraction c, StepAngle a) {
    return closed_form_scatter(cfg, table, {m, c, a}).total_scatter;
  };
  using M = ClosedFormMode;
  using C = Contraction;
  using A = StepAngle;
  return {total(M::PerStepExact, C::Sentence, A::Exact),
          total(M::PerStepExact, C::Printed, A::Exact),
          total(M::PerStepExact, C::Sentence, A::Indexed),
          total(M::PerStepExact, C::Printed, A::Indexed),
          total(M::Asymptotic, C::Sentence, A::Exact),
          total(M::Asymptotic, C::Printed, A::Exact)};
}

GroverConfig grover_config(const Options& o, const Context& ctx, int qubits) {
  GroverConfig cfg;
  cfg.qubits = qubits;
  cfg.marked = o.y;
  cfg.epsilon = o.epsilon;
  require(qubits >= 2, "--k must be >= 2");
  cfg.iterations = ctx.given("iterations") ? o.iterations : optimal_iterations(qubits);
  cfg.validate(kMaxIdealQubits);
  return cfg;
}

void run_grover(const Options& o, Context& ctx) {
  const GroverConfig cfg = grover_config(o, ctx, o.k);
  const OverlapTable table = integral_table(o.truncation, o.tol);
  const auto trajectory = ideal_run(cfg);

  ScatterReport report;
  std::optional<double> total_probability;
  if (cfg.epsilon == 0.0) {
    report = closed_form_scatter(cfg, table);
    report.success_decoherent = report.success_ideal;
  } else if (cfg.qubits <= kMaxDecoherentQubits) {
    DecoherentRun run = decoherent_run(cfg, table, BranchStorage::Summary);
    total_probability = run.state.total_probability();
    report = std::move(run.report);
  } else {
    report = closed_form_scatter(cfg, table);
    report.warnings.push_back("K > " + std::to_string(kMaxDecoherentQubits) +
                              ": branch simulation skipped, closed form reported");
  }

  Json traj = Json::array();
  Table traj_table{"grover_trajectory", {"iteration", "amplitude", "success"}, {}};
  for (const auto& p : trajectory) {
    traj.push_back(Json{{"iteration", p.iteration}, {"amplitude", p.amplitude},
                        {"success", p.success}});
    traj_table.rows.push_back({p.iteration, p.amplitude, p.success});
  }

  const VariantTotals v = closed_form_variants(cfg, table);
  Json closed{{"per_step_exact_sentence", v.exact_sentence},
              {"per_step_exact_printed", v.exact_printed},
              {"per_step_indexed_sentence", v.indexed_sentence},
              {"per_step_indexed_printed", v.indexed_printed},
              {"asymptotic_sentence", v.asymptotic_sentence},
              {"asymptotic_printed", v.asymptotic_printed}};
  Json asym = Json::object();
  for (auto [name, c] : {std::pair{"sentence", Contraction::Sentence},
                         std::pair{"printed", Contraction::Printed}}) {
    const auto coeff = asymptotic_coefficients(table, c);
    asym[name] = Json{{"per_qubit", coeff.per_qubit}, {"per_weight", coeff.per_weight}};
  }
  asym["quoted"] = Json{{"per_qubit", kQuotedAsymptotic.per_qubit},
                        {"per_weight", kQuotedAsymptotic.per_weight}};
  const ResidualProjection residual = residual_projection(table);

  Json summary = report_json(report);
  summary["total_probability"] = total_probability ? Json(*total_probability) : Json(nullptr);
  summary["trajectory"] = traj;
  summary["closed_form"] = closed;
  summary["asymptotic_coefficients"] = asym;
  summary["residual_projection"] = Json{{"recomputed", complex_json(residual.recomputed)},
                                        {"quoted", complex_json(residual.quoted)}};

  ctx.out() << "K=" << cfg.qubits << " y=" << cfg.marked << " N=" << cfg.iterations
            << " epsilon=" << fmt(cfg.epsilon) << '\n'
            << "success ideal " << fmt(report.success_ideal) << ", decoherent "
            << (report.success_decoherent ? fmt(*report.success_decoherent) : "n/a")
            << ", total scatter " << fmt(report.total_scatter) << '\n';
  for (const auto& w : report.warnings) ctx.out() << "warning: " << w << '\n';
  ctx.emit("grover", std::move(summary), {traj_table});
}

void run_grover_scaling(const Options& o, Context& ctx) {
  require(o.k_min >= 2, "--k-min must be >= 2");
  require(o.k_max >= o.k_min, "--k-max must be >= --k-min");
  require(o.k_max <= kMaxIdealQubits,
          "--k-max must be <= " + std::to_string(kMaxIdealQubits));
  const OverlapTable table = integral_table(o.truncation, o.tol);
  require(o.epsilon > 0.0, "--epsilon must be > 0 for a scaling sweep");

  Table t{"grover_scaling",
          {"K", "N", "branch_total", "exact_sentence", "exact_printed", "indexed_sentence",
           "indexed_printed", "asymptotic_sentence", "asymptotic_printed", "success_ideal",
           "success_decoherent"},
          {}};
  for (int k = o.k_min; k <= o.k_max; ++k) {
    Options ok = o;
    ok.y = o.y % (std::uint64_t{1} << k);
    const GroverConfig cfg = grover_config(ok, ctx, k);
    double branch = kNan;
    double success_dec = kNan;
    if (k <= kMaxDecoherentQubits) {
      const DecoherentRun run = decoherent_run(cfg, table, BranchStorage::Summary);
      branch = run.report.total_scatter;
      success_dec = *run.report.success_decoherent;
    }
    const VariantTotals v = closed_form_variants(cfg, table);
    const double success_ideal = ideal_run(cfg).back().success;
    t.rows.push_back({k, cfg.iterations, number(branch), v.exact_sentence, v.exact_printed,
                      v.indexed_sentence, v.indexed_printed, v.asymptotic_sentence,
                      v.asymptotic_printed, success_ideal, number(success_dec)});
    ctx.out() << "K=" << k << " branch " << fmt(branch) << " closed " << fmt(v.exact_sentence)
              << " asymptotic " << fmt(v.asymptotic_sentence) << '\n';
  }
  Json summary{{"k_min", o.k_min},
               {"k_max", o.k_max},
               {"y", o.y},
               {"epsilon", o.epsilon},
               {"note", "y is reduced modulo 2^K; branch columns are empty above K = " +
                            std::to_string(kMaxDecoherentQubits)}};
  ctx.emit("grover_scaling", std::move(summary), {t});
}

void run_cnot(const Options& o, Context& ctx) {
  cnot::TwoQubitParams p;
  p.omega1 = o.omega1;
  p.omega2 = o.omega2;
  p.coupling = o.coupling;
  p.rabi = o.rabi;
  p.validate();

  const cnot::Calibration cal = cnot::calibrate(p);
  p.center_frequency = ctx.given("center-frequency") ? o.center_frequency : cal.center_frequency;
  p.duration = ctx.given("duration") ? o.duration : cal.duration;
  p.validate();

  const int points = ctx.given("points") ? o.points : 3501;
  require(points >= 2, "--points must be >= 2");
  require(o.x_max > o.x_min, "--x-max must exceed --x-min");
  std::vector<double> offsets(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) offsets[j] = o.x_min + (o.x_max - o.x_min) * j / (points - 1);

  const cnot::DysonSpectrum spectrum = cnot::dyson_first_order(p, offsets);
  const cnot::Matrix4c u = cnot::classical_propagator(p, p.duration);
  const double defect = (u.adjoint() * u - cnot::Matrix4c::Identity()).cwiseAbs().maxCoeff();
  const double transfer = cnot::transfer_amplitude(p);

  Table t{"cnot_spectrum", {"x"}, {}};
  Json peaks = Json::object();
  std::vector<std::vector<Complex>> series;
  std::string largest;
  double largest_value = -1.0;
  for (const auto& [from, to] : cnot::kPlottedTransitions) {
    const std::string label = std::string(cnot::label_of(from)) + "_to_" + cnot::label_of(to);
    for (const char* part : {"_re", "_im", "_abs"}) t.columns.push_back(label + part);
    series.push_back(spectrum.element(from, to));
    std::size_t arg = 0;
    for (std::size_t j = 1; j < offsets.size(); ++j) {
      if (std::abs(series.back()[j]) > std::abs(series.back()[arg])) arg = j;
    }
    const double peak = std::abs(series.back()[arg]);
    peaks[label] = Json{{"x", offsets[arg]}, {"magnitude", peak}};
    if (peak > largest_value) {
      largest_value = peak;
      largest = label;
    }
  }
  for (std::size_t j = 0; j < offsets.size(); ++j) {
    std::vector<Json> row{offsets[j]};
    for (const auto& s : series) {
      row.push_back(s[j].real());
      row.push_back(s[j].imag());
      row.push_back(std::abs(s[j]));
    }
    t.rows.push_back(std::move(row));
  }

  const cnot::Eigensystem es = cnot::diagonalize(p);
  const auto exact = cnot::transition_frequencies(p);
  const auto approx = cnot::perturbative_transition_frequencies(p);
  Json summary{
      {"params", Json{{"omega1", p.omega1}, {"omega2", p.omega2}, {"J", p.coupling},
                      {"kappa_E", p.rabi}, {"omega_bar", p.center_frequency},
                      {"T", p.duration}}},
      {"calibration", Json{{"omega_bar", cal.center_frequency}, {"T", cal.duration},
                           {"transfer", cal.transfer},
                           {"pi_pulse_estimate", cal.estimated_duration},
                           {"log", cal.log}}},
      {"quoted", Json{{"T", cnot::kQuotedDuration}, {"transfer", cnot::kQuotedTransfer}}},
      {"transfer", transfer},
      {"unitarity_defect", defect},
      {"eigenvalues", std::vector<double>(es.values.data(), es.values.data() + 4)},
      {"transitions_exact", exact},
      {"transitions_perturbative", approx},
      {"peaks", peaks},
      {"largest", largest},
      {"mode_scale", spectrum.mode_scale},
      {"warnings", p.regime_warnings()}};

  ctx.out() << cal.log << '\n'
            << "transfer |<10|U_C(T)|11>| = " << fmt(transfer) << " at T = " << fmt(p.duration)
            << ", unitarity defect " << fmt(defect) << '\n'
            << "largest spectrum element: " << largest << '\n';
  ctx.emit("cnot", std::move(summary), {t});
}

void run_budget(const Options& o, Context& ctx) {
  require(std::isfinite(o.threshold) && o.threshold > 0.0, "--threshold must be > 0");
  std::vector<budget::PlatformPreset> pool = ctx.given("presets-file")
                                                 ? budget::load_presets(o.presets_file)
                                                 : budget::builtin_presets();
  std::vector<budget::PlatformPreset> chosen;
  if (ctx.given("preset")) {
    for (const auto& p : pool) {
      if (p.name == o.preset) chosen.push_back(p);
    }
    require(!chosen.empty(), "--preset: unknown preset '" + o.preset + "'");
  } else {
    chosen = pool;
  }
  if (ctx.given("ensemble")) {
    require(std::isfinite(o.ensemble) && o.ensemble >= 1.0, "--ensemble must be >= 1");
    for (auto& p : chosen) p.ensemble = o.ensemble;
  }

  struct Row {
    budget::BudgetReport report;
    std::optional<budget::PlatformPreset> preset;
  };
  std::vector<Row> rows;
  if (ctx.given("photons")) {
    require(std::isfinite(o.photons) && o.photons > 0.0, "--photons must be > 0");
    const double m = ctx.given("ensemble") ? o.ensemble : 1.0;
    rows.push_back({budget::report("custom", o.photons, m, o.threshold), std::nullopt});
  } else {
    for (const auto& p : chosen) rows.push_back({budget::report(p, o.threshold), p});
  }

  Table t{"budget",
          {"name", "power_w", "duration_s", "frequency_hz", "photons", "ensemble", "threshold",
           "max_qubits", "probability_at_max", "probability_at_k", "breakdown"},
          {}};
  Json reports = Json::array();
  for (const auto& row : rows) {
    const auto& r = row.report;
    const double at_k = ctx.given("k") ? budget::decoherence_probability(o.k, r.photons,
                                                                         r.ensemble)
                                       : kNan;
    const double power = row.preset ? row.preset->power_w : kNan;
    const double dur = row.preset ? row.preset->duration_s : kNan;
    const double freq = row.preset ? row.preset->frequency_hz() : kNan;
    t.rows.push_back({r.name, number(power), number(dur), number(freq), r.photons, r.ensemble,
                      r.threshold, r.max_qubits, r.probability_at_max, number(at_k),
                      at_k > 1.0});
    reports.push_back(Json{{"name", r.name},
                           {"photons", r.photons},
                           {"ensemble", r.ensemble},
                           {"threshold", r.threshold},
                           {"max_qubits", r.max_qubits},
                           {"probability_at_max", r.probability_at_max},
                           {"k", ctx.given("k") ? Json(o.k) : Json(nullptr)},
                           {"probability_at_k", number(at_k)},
                           {"breakdown", at_k > 1.0}});
  }

  Json ceilings = Json::array();
  for (const auto& c : kQuotedCeilings) {
    const int k = budget::max_qubits(c.photons, c.ensemble, o.threshold);
    ceilings.push_back(Json{{"scenario", c.label},
                            {"photons", c.photons},
                            {"ensemble", c.ensemble},
                            {"max_qubits", k},
                            {"quoted", c.quoted}});
  }

  std::ostringstream text;
  char line[160];
  std::snprintf(line, sizeof line, "%-24s %12s %10s %12s %10s\n", "preset", "photons",
                "ensemble", "max qubits", "P(K_max)");
  text << line;
  for (const auto& row : rows) {
    const auto& r = row.report;
    std::snprintf(line, sizeof line, "%-24s %12.4e %10.3e %12d %10.4f\n", r.name.c_str(),
                  r.photons, r.ensemble, r.max_qubits, r.probability_at_max);
    text << line;
  }
  text << "\nquoted ceilings at threshold " << fmt(o.threshold) << '\n';
  for (const auto& c : ceilings) {
    std::snprintf(line, sizeof line, "%-24s %12.4e %10.3e %12d %10d\n",
                  c["scenario"].get<std::string>().c_str(), c["photons"].get<double>(),
                  c["ensemble"].get<double>(), c["max_qubits"].get<int>(),
                  c["quoted"].get<int>());
    text << line;
  }
  ctx.out() << text.str();

  Json summary{{"threshold", o.threshold}, {"reports", reports}, {"quoted_ceilings", ceilings}};
  ctx.write(fs::path(o.out) / "budget.txt", text.str());
  ctx.emit("budget", std::move(summary), {t});
}

// Options each subcommand reads, beyond out/format/config.
const std::map<std::string, std::set<std::string>>& allowed_options() {
  static const std::map<std::string, std::set<std::string>> allowed = {
      {"integrals", {"tol", "truncation"}},
      {"envelopes", {"tol", "truncation", "points"}},
      {"grover", {"k", "y", "epsilon", "iterations", "tol", "truncation"}},
      {"grover-scaling", {"k-min", "k-max", "y", "epsilon", "iterations", "tol", "truncation"}},
      {"cnot",
       {"omega1", "omega2", "coupling", "rabi", "duration", "center-frequency", "x-min", "x-max",
        "points"}},
      {"budget", {"preset", "presets-file", "ensemble", "photons", "threshold", "k"}},
  };
  return allowed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Back-reaction of driving fields on qubit gates: reproducible artifacts", "fieldback"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key = value file; command-line flags win");
  app.allow_config_extras(CLI::config_extras_mode::error);

  app.add_option("--out", o.out, "Output directory")->capture_default_str();
  app.add_option("--format", o.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--k", o.k, "Number of qubits K");
  app.add_option("--y", o.y, "Marked state y (integer)");
  app.add_option("--epsilon", o.epsilon, "Scattering amplitude per driven gate");
  app.add_option("--iterations", o.iterations, "Grover iterations (default: optimal)");
  app.add_option("--k-min", o.k_min, "Smallest K of a sweep");
  app.add_option("--k-max", o.k_max, "Largest K of a sweep");
  app.add_option("--tol", o.tol, "Quadrature tolerance");
  app.add_option("--truncation", o.truncation, "Core quadrature interval half-width X");
  app.add_option("--points", o.points, "Sample count");
  app.add_option("--omega1", o.omega1, "Frequency of the S qubit");
  app.add_option("--omega2", o.omega2, "Frequency of the I qubit");
  app.add_option("--coupling", o.coupling, "J");
  app.add_option("--rabi", o.rabi, "kappa E");
  app.add_option("--duration", o.duration, "Pulse duration T (default: calibrated)");
  app.add_option("--center-frequency", o.center_frequency, "omega bar (default: calibrated)");
  app.add_option("--x-min", o.x_min, "Spectrum offset grid start");
  app.add_option("--x-max", o.x_max, "Spectrum offset grid end");
  app.add_option("--preset", o.preset, "Platform preset name");
  app.add_option("--presets-file", o.presets_file, "JSON file of platform presets");
  app.add_option("--ensemble", o.ensemble, "Ensemble size M");
  app.add_option("--photons", o.photons, "Photons per pulse (overrides presets)");
  app.add_option("--threshold", o.threshold, "Decoherence threshold for max K");

  const std::map<std::string, std::string> descriptions = {
      {"integrals", "Overlap integral table compared with the quoted values"},
      {"envelopes", "One-photon envelopes, classical pulse and g-function samples"},
      {"grover", "Ideal and decoherent Grover run"},
      {"grover-scaling", "Scatter totals over a K sweep: branch simulation vs closed forms"},
      {"cnot", "Selective-pulse calibration and first-order back-reaction spectrum"},
      {"budget", "Photons per pulse and qubit ceilings per platform"},
  };
  for (const auto& [name, text] : descriptions) app.add_subcommand(name, text)->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    const bool from_config = dynamic_cast<const CLI::ConfigError*>(&e) != nullptr;
    err << "error: " << (from_config ? "--config: unknown key or bad value: " : "") << e.what()
        << '\n';
    return kExitValidation;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  static const std::map<std::string, std::string> default_format = {
      {"integrals", "json"}, {"envelopes", "csv"}, {"grover", "json"},
      {"grover-scaling", "csv"}, {"cnot", "csv"}, {"budget", "json"}};

  try {
    const auto& allowed = allowed_options().at(name);
    for (const CLI::Option* opt : app.get_options()) {
      const std::string key = opt->get_lnames().empty() ? "" : opt->get_lnames().front();
      if (key.empty() || key == "out" || key == "format" || key == "config" || key == "help") {
        continue;
      }
      require(opt->count() == 0 || allowed.contains(key),
              "--" + key + " is not a parameter of '" + name + "'");
    }
    Context ctx(o, app, default_format.at(name), out);
    if (name == "integrals") run_integrals(o, ctx);
    if (name == "envelopes") run_envelopes(o, ctx);
    if (name == "grover") run_grover(o, ctx);
    if (name == "grover-scaling") run_grover_scaling(o, ctx);
    if (name == "cnot") run_cnot(o, ctx);
    if (name == "budget") run_budget(o, ctx);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConvergence;
  }
  return kExitOk;
}

}  // namespace fieldback::cli
