#include "gkdv/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gkdv/error.hpp"
#include "gkdv/norms.hpp"
#include "gkdv/snapshot.hpp"
#include "gkdv/vector_fields.hpp"
#include "json.hpp"

#ifndef GKDV_VERSION
#define GKDV_VERSION "0.0.0"
#endif

namespace gkdv {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kSurrogateNote =
    "norms are evaluated on the periodic box [-L/2, L/2) and are domain-truncated surrogates of "
    "whole-line quantities";

json number_or_string(double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); }

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw IntegrityError(p.string(), "missing file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw IntegrityError(p.string(), "cannot open for writing");
  out << text;
  if (!out) throw IntegrityError(p.string(), "write failed");
}

std::string slice_stem(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "slice_%06zu", i);
  return buf;
}

std::string csv_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

fs::path output_root() {
  if (const char* env = std::getenv("GKDVLAB_OUTPUT_ROOT"); env && *env) return fs::path(env);
  return fs::current_path();
}

fs::path resolve_output(const std::string& output) {
  const fs::path p(output);
  return p.is_absolute() ? p : output_root() / p;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

DerivedValues derived_values(const RunConfig& cfg) {
  const GridSpec grid = cfg.grid();
  const double alpha = cfg.model.alpha;
  double dt = cfg.dt.value_or(0.0);
  std::size_t steps = 0;
  std::size_t stride = cfg.store_stride.value_or(1);
  if (cfg.horizon > 0.0) {
    const double dt_max = cfg.dt ? *cfg.dt : stable_dt(make_initial_data(cfg), cfg.model, cfg.cfl_safety);
    const StepPlan plan = plan_steps(cfg.horizon, dt_max, cfg.store_stride.value_or(0));
    dt = plan.dt;
    steps = plan.steps;
    stride = plan.store_stride;
  }
  const MixedNormSpec s = s_norm_spec(alpha);
  const MixedNormSpec x = x_norm_spec(alpha);
  DerivedValues d;
  d.emplace_back("dx", format_double(grid.dx()));
  d.emplace_back("dt", format_double(dt));
  d.emplace_back("steps", std::to_string(steps));
  d.emplace_back("store_stride", std::to_string(stride));
  d.emplace_back("kappa_threshold", alpha > 1.0 ? format_double(kappa_threshold(alpha)) : "undefined");
  d.emplace_back("kappa_default", alpha > 1.0 ? format_double(kappa_default(alpha)) : "undefined");
  d.emplace_back("s_norm_p", format_double(s.p_outer_x));
  d.emplace_back("s_norm_q", format_double(s.q_inner_t));
  d.emplace_back("x_norm_s", format_double(x.s));
  d.emplace_back("x_norm_p", format_double(x.p_outer_x));
  d.emplace_back("x_norm_q", format_double(x.q_inner_t));
  return d;
}

SimulateResult run_simulate(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const fs::path dir = resolve_output(cfg.output);
  fs::create_directories(dir);
  const fs::path slice_dir = dir / "slices";
  fs::remove_all(slice_dir);
  fs::create_directories(slice_dir);

  const RealField u0 = make_initial_data(cfg);
  const Trajectory traj = evolve(u0, cfg.model, cfg.stepper(), cfg.horizon, cfg.store_stride.value_or(0));

  json slices = json::array();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const std::string stem = slice_stem(i);
    write_snapshot(slice_dir, stem, traj[i], cfg.model);
    slices.push_back({{"index", i}, {"t", format_double(traj[i].t)}, {"header", "slices/" + stem + ".json"}});
  }

  json derived = json::object();
  for (const auto& [k, v] : derived_values(cfg)) derived[k] = v;
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest = {{"format", "gkdvlab-run"},
                   {"tool_version", GKDV_VERSION},
                   {"config", json::parse(config_to_json(cfg))},
                   {"derived", derived},
                   {"slices", slices},
                   {"status", traj.blowup() ? "blowup" : "complete"},
                   {"blowup_reason", traj.blowup_reason()},
                   {"wall_clock_seconds", wall},
                   {"warnings", cfg.warnings},
                   {"note", kSurrogateNote}};
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  return {dir, traj.size(), traj.blowup(), traj.blowup_reason()};
}

LoadedRun load_run(const fs::path& dir) {
  const fs::path mpath = dir / "manifest.json";
  json m;
  try {
    m = json::parse(read_text(mpath));
  } catch (const json::exception& e) {
    throw IntegrityError(mpath.string(), std::string("corrupt manifest: ") + e.what());
  }
  RunConfig cfg;
  try {
    cfg = parse_config(m.at("config").dump());
  } catch (const json::exception& e) {
    throw IntegrityError(mpath.string(), std::string("manifest has no config: ") + e.what());
  } catch (const ConfigError& e) {
    throw IntegrityError(mpath.string(), std::string("stored config is invalid: ") + e.what());
  }
  const DerivedValues derived = derived_values(cfg);
  for (const auto& [k, v] : derived) {
    std::string stored;
    try {
      stored = m.at("derived").at(k).get<std::string>();
    } catch (const json::exception&) {
      throw IntegrityError(mpath.string(), "derived value '" + k + "' is missing");
    }
    if (stored != v) {
      throw IntegrityError(mpath.string(), "derived value '" + k + "' is " + stored + ", recomputed " + v);
    }
  }
  const double dt = std::stod(derived[1].second);
  const auto stride = static_cast<std::size_t>(std::stoull(derived[3].second));
  Trajectory traj(cfg.model, cfg.grid(), dt, stride, cfg.oversample);
  try {
    for (const json& s : m.at("slices")) {
      Snapshot snap = read_snapshot(dir / s.at("header").get<std::string>());
      if (!(snap.state.u.grid() == cfg.grid())) {
        throw IntegrityError((dir / s.at("header").get<std::string>()).string(), "grid differs from the manifest");
      }
      traj.push_back(std::move(snap.state));
    }
    if (m.at("status").get<std::string>() == "blowup") traj.mark_blowup(m.at("blowup_reason").get<std::string>());
  } catch (const json::exception& e) {
    throw IntegrityError(mpath.string(), std::string("malformed slice list: ") + e.what());
  } catch (const InvalidFieldError& e) {
    throw IntegrityError(mpath.string(), e.what());
  }
  if (traj.empty()) throw IntegrityError(mpath.string(), "run has no slices");
  return {std::move(cfg), std::move(traj)};
}

const std::vector<CsvColumn>& diagnostics_columns() {
  static const std::vector<CsvColumn> cols = {
      {"t", "stored time"},
      {"mass", "1/2 ||u||_{L^2}^2"},
      {"energy", "1/2 ||u_x||^2 + mu/(2 alpha + 2) ||u||_{2 alpha + 2}^{2 alpha + 2}"},
      {"l2", "||u||_{L^2}"},
      {"linf", "max |u| over the grid"},
      {"h1", "||u||_{H^1}"},
      {"fourier_lebesgue_alpha", "||u||_{hat L^alpha} = ||u_hat||_{L^{alpha'}}"},
      {"boundary_mass_fraction", "share of sum u^2 on |x| > 0.4 L"},
      {"ju_l2", "||J(t)u||_{L^2}, J = x - 3t d_x^2 (empty when vector fields are off)"},
      {"v_l2", "||v||_{L^2}, v = Ju + 3 mu t |u|^{2 alpha} u (empty when vector fields are off)"},
      {"pu_l2", "||Pu||_{L^2}, P = x d_x + 3t d_t (empty when vector fields are off)"},
      {"ks_ratio_inf", "Klainerman-Sobolev ratio at p = inf (empty at t = 0 or when vector fields are off)"},
      {"residual_puv", "||d_x v - Pu - u|| / ||Pu|| (empty when vector fields are off)"},
      {"residual_v_eq", "normalized residual of the v equation (empty at endpoints or when residuals are off)"},
      {"residual_ju_eq", "normalized residual of the Ju equation (empty at endpoints or when residuals are off)"},
      {"residual_pu_eq", "normalized residual of the Pu equation (empty at endpoints or when residuals are off)"},
  };
  return cols;
}

const std::vector<CsvColumn>& sweep_columns() {
  static const std::vector<CsvColumn> cols = {
      {"amplitude", "Gaussian amplitude A"},
      {"verdict_i", "decay and S-norm criterion (1 = holds on the horizon)"},
      {"verdict_ii", "bounded ||V(-t)u||_{H^{0,1}} criterion"},
      {"verdict_iii", "bounded <t>^kappa ||u||_{L^{2(2 alpha + 1)}} criterion"},
      {"blowup", "1 when the run stopped on blow-up"},
      {"flip", "1 when some verdict or the blow-up flag differs from the previous row"},
      {"sup_weighted", "max sqrt(||u||^2 + ||Ju||^2)"},
      {"sup_kappa_weighted", "max <t>^kappa ||u||_{L^{2(2 alpha + 1)}}"},
      {"s_norm_total", "||u||_{L_x^{5 alpha/2} L_t^{5 alpha}} over the horizon"},
      {"linf_decay_exponent", "fitted exponent of ||u(t)||_{L^inf}"},
      {"weighted_growth", "running-max growth of the weighted norm from T/2 to T"},
      {"kappa_growth", "running-max growth of the kappa-weighted norm from T/2 to T"},
      {"s_norm_growth", "S-norm over [0, T] divided by S-norm over [0, T/2]"},
  };
  return cols;
}

fs::path run_diagnose(const fs::path& dir) {
  const LoadedRun run = load_run(dir);
  const Trajectory& traj = run.trajectory;
  const ModelParams& p = traj.params();
  const bool vf = run.config.diagnostics.vector_fields;
  const bool res = run.config.diagnostics.residuals && traj.uniform();

  std::ostringstream csv;
  const auto& cols = diagnostics_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) csv << (c ? "," : "") << cols[c].name;
  csv << '\n';
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const SimState& s = traj[i];
    std::vector<std::optional<double>> row = {s.t,
                                              mass(s.u),
                                              energy(s.u, p),
                                              lebesgue(s.u, 2.0),
                                              lebesgue(s.u, kInf),
                                              sobolev_h1(s.u),
                                              fourier_lebesgue(s.u, p.alpha),
                                              s.boundary_mass_fraction};
    std::optional<double> ju, v, pu, ks, puv, rv, rju, rpu;
    if (vf) {
      const RealField J = apply_J_local(s.u, s.t);
      ju = lebesgue(J, 2.0);
      v = lebesgue(compute_v(s.u, s.t, p), 2.0);
      pu = lebesgue(compute_Pu(s.u, s.t, p, traj.oversample()), 2.0);
      if (s.t != 0.0) ks = klainerman_sobolev_ratio(s.u, J, s.t, kInf);
      puv = identity_residual_Puv(s.u, s.t, p, traj.oversample());
    }
    if (res && i > 0 && i + 1 < traj.size()) {
      rv = v_equation_residual(traj, i);
      rju = Ju_equation_residual(traj, i);
      rpu = Pu_equation_residual(traj, i);
    }
    row.insert(row.end(), {ju, v, pu, ks, puv, rv, rju, rpu});
    for (std::size_t c = 0; c < row.size(); ++c) csv << (c ? "," : "") << csv_cell(row[c]);
    csv << '\n';
  }
  const fs::path csv_path = dir / "diagnostics.csv";
  write_text(csv_path, csv.str());

  json schema = json::array();
  for (const CsvColumn& c : cols) schema.push_back({{"name", c.name}, {"description", c.description}});
  write_text(dir / "diagnostics_schema.json",
             json{{"file", "diagnostics.csv"}, {"number_format", "%.17g"}, {"columns", schema}}.dump(2) + "\n");

  const SimState& first = traj.front();
  const SimState& last = traj.back();
  const double m0 = mass(first.u);
  const double e0 = energy(first.u, p);
  json summary = {{"slices", traj.size()},
                  {"t_final", last.t},
                  {"mass_drift", number_or_string(m0 > 0 ? std::abs(mass(last.u) - m0) / m0 : 0.0)},
                  {"energy_drift", number_or_string(e0 != 0 ? std::abs(energy(last.u, p) - e0) / std::abs(e0) : 0.0)},
                  {"blowup", traj.blowup()},
                  {"note", kSurrogateNote}};
  double max_boundary = 0.0;
  for (const SimState& s : traj.slices()) max_boundary = std::max(max_boundary, s.boundary_mass_fraction);
  summary["max_boundary_mass_fraction"] = max_boundary;
  summary["boundary_advisory"] = max_boundary > kBoundaryMassAdvisory;
  try {
    summary["s_norm"] = number_or_string(s_norm(traj));
    summary["x_norm"] = number_or_string(x_norm(traj, p));
  } catch (const ResolutionError& e) {
    summary["s_norm"] = nullptr;
    summary["x_norm"] = nullptr;
    summary["mixed_norm_error"] = e.what();
  }
  NormSeries linf{traj.times(), {}, "linf"};
  for (const SimState& s : traj.slices()) linf.values.push_back(lebesgue(s.u, kInf));
  try {
    const DecayFit fit = decay_fit(linf, {run.config.fit_start, last.t});
    summary["linf_decay_fit"] = {{"exponent", fit.exponent}, {"intercept", fit.intercept}, {"r2", fit.r2},
                                 {"points", fit.points}, {"window", {run.config.fit_start, last.t}}};
  } catch (const Error& e) {
    summary["linf_decay_fit"] = nullptr;
    summary["linf_decay_fit_error"] = e.what();
  }
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  return csv_path;
}

fs::path run_criteria(const fs::path& dir, std::optional<double> kappa) {
  const LoadedRun run = load_run(dir);
  CriteriaOptions opts = run.config.criteria();
  if (kappa) opts.kappa = *kappa;
  const CriteriaReport r = evaluate_criteria(run.trajectory, opts);
  json report = {{"slices", r.slices},
                 {"t_final", r.t_final},
                 {"initial_weighted", number_or_string(r.initial_weighted)},
                 {"sup_weighted", number_or_string(r.sup_weighted)},
                 {"weighted_growth", number_or_string(r.weighted_growth)},
                 {"s_norm_total", number_or_string(r.s_norm_total)},
                 {"s_norm_growth", number_or_string(r.s_norm_growth)},
                 {"kappa_used", number_or_string(r.kappa_used)},
                 {"sup_kappa_weighted", number_or_string(r.sup_kappa_weighted)},
                 {"kappa_growth", number_or_string(r.kappa_growth)},
                 {"linf_decay_exponent", number_or_string(r.linf_decay_exponent)},
                 {"linf_decay_r2", number_or_string(r.linf_decay_r2)},
                 {"max_boundary_mass_fraction", r.max_boundary_mass},
                 {"boundary_advisory", r.boundary_advisory},
                 {"verdict_i", r.verdict_i},
                 {"verdict_ii", r.verdict_ii},
                 {"verdict_iii", r.verdict_iii},
                 {"blowup_flag", r.blowup_flag},
                 {"blowup_reason", r.blowup_reason},
                 {"thresholds",
                  {{"theta", opts.theta},
                   {"theta_decay", opts.theta_decay},
                   {"decay_tolerance", opts.decay_tolerance},
                   {"fit_start", opts.fit_start}}},
                 {"note", kSurrogateNote}};
  if (!r.blowup_flag) {
    const AsymptoticState a = extract_asymptotic_state(run.trajectory);
    report["asymptotic_convergence_factor"] = number_or_string(convergence_factor(a.convergence));
    report["asymptotic_state_h1"] = sobolev_h1(a.u_plus);
  }
  const fs::path out = dir / "report.json";
  write_text(out, report.dump(2) + "\n");
  return out;
}

fs::path run_sweep(const RunConfig& cfg, const std::vector<double>& amplitudes, unsigned workers) {
  if (cfg.initial.kind != InitialData::Kind::gaussian) {
    throw ConfigError("initial.kind", "amplitude sweeps need Gaussian initial data");
  }
  const GridSpec grid = cfg.grid();
  const InitialData d = cfg.initial;
  const DataFamily family = [grid, d](double a) { return make_gaussian(grid, a, d.center, d.width); };
  const std::vector<SweepRow> rows = amplitude_sweep(family, amplitudes, cfg.model, cfg.stepper(), cfg.horizon,
                                                     cfg.criteria(), cfg.store_stride.value_or(0), workers);
  const fs::path dir = resolve_output(cfg.output);
  fs::create_directories(dir);
  std::ostringstream csv;
  const auto& cols = sweep_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) csv << (c ? "," : "") << cols[c].name;
  csv << '\n';
  for (const SweepRow& row : rows) {
    const CriteriaReport& r = row.report;
    csv << format_double(row.amplitude) << ',' << r.verdict_i << ',' << r.verdict_ii << ',' << r.verdict_iii << ','
        << r.blowup_flag << ',' << row.flip << ',' << format_double(r.sup_weighted) << ','
        << format_double(r.sup_kappa_weighted) << ',' << format_double(r.s_norm_total) << ','
        << format_double(r.linf_decay_exponent) << ',' << format_double(r.weighted_growth) << ','
        << format_double(r.kappa_growth) << ',' << format_double(r.s_norm_growth) << '\n';
  }
  const fs::path out = dir / "sweep_summary.csv";
  write_text(out, csv.str());
  json schema = json::array();
  for (const CsvColumn& c : cols) schema.push_back({{"name", c.name}, {"description", c.description}});
  write_text(dir / "sweep_schema.json",
             json{{"file", "sweep_summary.csv"}, {"number_format", "%.17g"}, {"columns", schema}}.dump(2) + "\n");
  return out;
}

}  // namespace gkdv
