// kiristat: design, analysis, and parameter identification for pivot-actuated
// kirigami utensils. Data goes to standard output, diagnostics to standard
// error. Exit statuses: 0 success, 2 usage/parse error, 3 domain or
// infeasibility error.

#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "kiristat/config.hpp"
#include "kiristat/csv.hpp"
#include "kiristat/design.hpp"
#include "kiristat/fitting.hpp"
#include "kiristat/statics.hpp"

namespace {

using nlohmann::json;

int exit_code_for(kiri::ErrorKind kind) {
  switch (kind) {
    case kiri::ErrorKind::parse:
    case kiri::ErrorKind::usage:
      return 2;
    default:
      return 3;
  }
}

struct ConfigOptions {
  std::string preset;
  std::string config_path;
  bool no_band = false;
};

void add_config_options(CLI::App* cmd, ConfigOptions& options) {
  auto* preset =
      cmd->add_option("--preset", options.preset, "Built-in constant set (currently: table1)");
  auto* config = cmd->add_option("--config", options.config_path, "JSON configuration file")
                     ->check(CLI::ExistingFile);
  preset->excludes(config);
  config->excludes(preset);
  cmd->add_flag("--no-band", options.no_band,
                "Treat the band as removed, keeping its stiffness on record");
}

kiri::ToolConfig resolve_config(const ConfigOptions& options) {
  kiri::ToolConfig config;
  if (!options.config_path.empty()) {
    config = kiri::load_config_file(options.config_path);
  } else if (options.preset == "table1") {
    config = kiri::table1_preset();
  } else if (options.preset.empty()) {
    throw kiri::ModelError(kiri::ErrorKind::usage, "one of --preset or --config is required");
  } else {
    throw kiri::ModelError(kiri::ErrorKind::usage, "unknown preset '" + options.preset + "'");
  }
  if (options.no_band) config.band.present = false;
  config.validate();
  return config;
}

json fit_result_json(const kiri::FitResult& fit, const char* constant_key) {
  json out;
  out[constant_key] = fit.constant;
  out["r_squared"] = fit.r_squared;
  out["n_points"] = fit.n_points;
  out["max_abs_residual_n"] = fit.max_abs_residual_n;
  out["free_slope"] = fit.free_slope;
  out["free_intercept_n"] = fit.free_intercept_n;
  return out;
}

struct LoadedData {
  std::vector<kiri::MeasurementSeries> series;
  json provenance = json::array();
};

LoadedData load_measurement_files(const std::vector<std::string>& paths, bool allow_synthetic) {
  LoadedData data;
  for (const std::string& path : paths) {
    const kiri::MeasurementFile file = kiri::load_measurement_file(path);
    if (file.simulated && !allow_synthetic)
      throw kiri::ModelError(
          kiri::ErrorKind::metadata,
          path + " is marked '# source=simulated'; refusing to fit model-generated data "
                 "(pass --allow-synthetic to override)");
    std::size_t rows = 0;
    for (const kiri::MeasurementSeries& s : file.series) rows += s.samples.size();
    data.provenance.push_back({{"file", path},
                               {"rows", rows},
                               {"series", file.series.size()},
                               {"simulated", file.simulated}});
    data.series.insert(data.series.end(), file.series.begin(), file.series.end());
  }
  return data;
}

void print_json(const json& doc) { std::cout << doc.dump(2) << '\n'; }

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

void run_simulate(const kiri::ToolConfig& config, double from_mm, double to_mm, long steps,
                  const std::string& emit, int trial_id, double size_scale) {
  if (steps < 2)
    throw kiri::ModelError(kiri::ErrorKind::usage, "--steps must be at least 2");
  if (!(from_mm >= 0.0))
    throw kiri::ModelError(kiri::ErrorKind::usage, "--from must be >= 0");
  if (!(to_mm > from_mm))
    throw kiri::ModelError(kiri::ErrorKind::usage, "--to must be greater than --from");

  const kiri::OperatingRange range = kiri::operating_range(config.geometry);
  if (to_mm > range.delta_x_max_mm)
    throw kiri::ModelError(kiri::ErrorKind::domain,
                           "--to " + std::to_string(to_mm) +
                               " mm exceeds the operating range limit " +
                               std::to_string(range.delta_x_max_mm) + " mm");

  std::vector<kiri::ActuationState> states;
  states.reserve(static_cast<std::size_t>(steps));
  for (long i = 0; i < steps; ++i) {
    double dx = from_mm + (to_mm - from_mm) * static_cast<double>(i) /
                              static_cast<double>(steps - 1);
    if (i == 0) dx = from_mm;
    if (i == steps - 1) dx = to_mm;
    states.push_back(kiri::evaluate_state(config.geometry, config.spring, config.material,
                                          config.band, dx));
  }

  if (emit == "curve") {
    kiri::write_curve_csv(std::cout, states);
  } else if (emit == "measurement") {
    kiri::MeasurementFile file;
    file.simulated = true;
    kiri::MeasurementSeries series;
    series.trial_id = trial_id;
    series.material = config.material;
    series.size_scale = size_scale;
    for (const kiri::ActuationState& s : states)
      series.samples.push_back({s.delta_x_mm, s.kirigami_force_n});
    file.series.push_back(std::move(series));
    kiri::write_measurement_csv(std::cout, file);
  } else {
    throw kiri::ModelError(kiri::ErrorKind::usage, "--emit must be 'curve' or 'measurement'");
  }
}

void run_invert(const kiri::ToolConfig& config, double target_n) {
  try {
    const kiri::InversionResult result = kiri::invert_applied_force(
        config.geometry, config.spring, config.material, config.band, target_n);
    json out;
    out["delta_x_mm"] = result.delta_x_mm;
    out["iterations"] = result.iterations;
    out["residual_n"] = result.residual_n;
    print_json(out);
  } catch (const kiri::ModelError& err) {
    if (err.kind() == kiri::ErrorKind::out_of_range && err.limit_value) {
      json out;
      out["error"] = err.what();
      out[err.limit_name ? err.limit_name : "limit_f_a_n"] = *err.limit_value;
      print_json(out);
    }
    throw;
  }
}

void run_fit(const std::string& mode, const std::vector<std::string>& paths,
             bool allow_synthetic, double threshold) {
  LoadedData data = load_measurement_files(paths, allow_synthetic);

  json out;
  out["inputs"] = data.provenance;
  if (mode == "spring") {
    kiri::MeasurementSeries series;
    std::size_t trial_count = data.series.size();
    if (trial_count == 0)
      throw kiri::ModelError(kiri::ErrorKind::metadata, "no measurement series in the inputs");
    series = trial_count == 1 ? data.series.front() : kiri::average_trials(data.series);
    const kiri::FitResult fit = kiri::fit_spring_constant(series);
    out.update(fit_result_json(fit, "constant_n_per_mm"));
    out["mode"] = "spring";
    out["trials"] = trial_count;
  } else if (mode == "kk") {
    const kiri::FitResult fit = kiri::fit_kirigami_stiffness_factor(data.series);
    out.update(fit_result_json(fit, "constant_mm"));
    out["mode"] = "kirigami_stiffness_factor";
    out["trials"] = data.series.size();
  } else {  // scale-report
    const kiri::ScaleReport report = kiri::scale_invariance_report(data.series, threshold);
    out["mode"] = "scale_report";
    json groups = json::array();
    for (const kiri::ScaleGroup& g : report.groups) {
      json entry = fit_result_json(g.fit, "constant_mm");
      entry["size_scale"] = g.size_scale;
      groups.push_back(std::move(entry));
    }
    out["groups"] = std::move(groups);
    out["max_relative_spread"] = report.max_relative_spread;
    out["threshold"] = report.threshold;
    out["consistent"] = report.consistent;
  }
  print_json(out);
}

void run_design(const kiri::ToolConfig& config, const std::string& objective, double target_n,
                double at_mm) {
  json out;
  if (objective == "modulus") {
    kiri::DesignTarget target{target_n, at_mm, kiri::DesignObjective::solve_modulus};
    const kiri::MaterialSpec solved =
        kiri::solve_material_modulus(config.geometry, config.spring, config.band, target);
    const kiri::ActuationState check = kiri::evaluate_state(config.geometry, config.spring,
                                                            solved, config.band, at_mm);
    out["objective"] = "solve_modulus";
    out["youngs_modulus_mpa"] = solved.youngs_modulus_mpa;
    out["verified_f_a_n"] = check.applied_force_n;
  } else {  // band
    kiri::DesignTarget target{target_n, at_mm, kiri::DesignObjective::solve_band_stiffness};
    const kiri::BandSolution solved =
        kiri::solve_band_stiffness(config.geometry, config.spring, config.material, target);
    const kiri::ActuationState check = kiri::evaluate_state(config.geometry, config.spring,
                                                            config.material, solved.band, at_mm);
    out["objective"] = "solve_band_stiffness";
    out["band_stiffness_n_per_mm"] = solved.band.stiffness_n_per_mm;
    out["band_present"] = solved.band.present;
    out["band_unnecessary"] = solved.band_unnecessary;
    out["verified_f_a_n"] = check.applied_force_n;
  }
  out["target_f_a_n"] = target_n;
  out["at_delta_x_mm"] = at_mm;
  print_json(out);
}

void run_sweep(const kiri::ToolConfig& config, const kiri::SweepGrid& grid) {
  const std::vector<kiri::SweepRow> rows = kiri::parameter_sweep(
      config.geometry, config.spring, config.material, config.band, grid);
  std::cout << "e_mpa,k_b_n_per_mm,size_scale,delta_x_mm,f_a_n,torque_nmm,delta_x_max_mm,status\n";
  for (const kiri::SweepRow& row : rows) {
    std::cout << kiri::format_fixed9(row.youngs_modulus_mpa) << ','
              << kiri::format_fixed9(row.band_stiffness_n_per_mm) << ','
              << kiri::format_fixed9(row.size_scale) << ','
              << kiri::format_fixed9(row.delta_x_mm) << ','
              << kiri::format_fixed9(row.applied_force_n) << ','
              << kiri::format_fixed9(row.pivot_torque_nmm) << ','
              << kiri::format_fixed9(row.delta_x_max_mm) << ','
              << (row.status == kiri::SweepStatus::ok ? "ok" : "domain_error") << '\n';
  }
}

void run_torque_profile(const kiri::ToolConfig& config, const kiri::ClosureTrajectory& trajectory,
                        double gear_ratio, double safety_factor) {
  const kiri::TorqueProfile profile =
      kiri::torque_profile(config.geometry, config.spring, config.material, config.band,
                           trajectory, gear_ratio, safety_factor);
  std::cout << "# peak_torque_nmm=" << kiri::format_fixed9(profile.peak_torque_nmm) << '\n'
            << "# gear_ratio=" << kiri::format_fixed9(profile.gear_ratio) << '\n'
            << "# safety_factor=" << kiri::format_fixed9(profile.safety_factor) << '\n'
            << "# required_motor_torque_nmm="
            << kiri::format_fixed9(profile.required_motor_torque_nmm) << '\n'
            << "phase,delta_x_mm,torque_nmm\n";
  for (const kiri::TorqueSample& s : profile.samples) {
    std::cout << kiri::format_fixed9(s.phase) << ',' << kiri::format_fixed9(s.delta_x_mm) << ','
              << kiri::format_fixed9(s.torque_nmm) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-static force-displacement toolkit for pivot-actuated kirigami utensils"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Emit the force-displacement curve as CSV");
  ConfigOptions sim_config;
  add_config_options(simulate, sim_config);
  double sim_from = 0.0, sim_to = 0.0, sim_scale = 1.0;
  long sim_steps = 0;
  int sim_trial = 1;
  std::string sim_emit = "curve";
  simulate->add_option("--from", sim_from, "Start displacement, mm")->capture_default_str();
  simulate->add_option("--to", sim_to, "End displacement, mm")->required();
  simulate->add_option("--steps", sim_steps, "Number of rows")->required();
  simulate->add_option("--emit", sim_emit, "Output schema: curve | measurement")
      ->check(CLI::IsMember({"curve", "measurement"}))
      ->capture_default_str();
  simulate->add_option("--trial", sim_trial, "trial_id for --emit measurement")
      ->capture_default_str();
  simulate->add_option("--size-scale", sim_scale, "size_scale tag for --emit measurement")
      ->capture_default_str();

  // invert
  auto* invert = app.add_subcommand("invert", "Solve the displacement for an applied force");
  ConfigOptions inv_config;
  add_config_options(invert, inv_config);
  double inv_target = 0.0;
  invert->add_option("--target", inv_target, "Applied force to invert, N")->required();

  // fit-spring / fit-kk / scale-report
  auto* fit_spring = app.add_subcommand("fit-spring", "Fit a spring constant from pull-test CSVs");
  auto* fit_kk =
      app.add_subcommand("fit-kk", "Fit the kirigami stiffness factor from pull-test CSVs");
  auto* scale_report =
      app.add_subcommand("scale-report", "Per-size-scale stiffness fits and spread");
  std::vector<std::string> fit_files, kk_files, scale_files;
  bool fit_allow = false, kk_allow = false, scale_allow = false;
  double scale_threshold = 0.10;
  fit_spring->add_option("files", fit_files, "Measurement CSV files")
      ->required()
      ->check(CLI::ExistingFile);
  fit_spring->add_flag("--allow-synthetic", fit_allow, "Accept '# source=simulated' inputs");
  fit_kk->add_option("files", kk_files, "Measurement CSV files")
      ->required()
      ->check(CLI::ExistingFile);
  fit_kk->add_flag("--allow-synthetic", kk_allow, "Accept '# source=simulated' inputs");
  scale_report->add_option("files", scale_files, "Measurement CSV files")
      ->required()
      ->check(CLI::ExistingFile);
  scale_report->add_flag("--allow-synthetic", scale_allow, "Accept '# source=simulated' inputs");
  scale_report->add_option("--threshold", scale_threshold, "Relative spread threshold")
      ->capture_default_str();

  // design
  auto* design = app.add_subcommand("design", "Solve a material or band design target");
  ConfigOptions design_config;
  add_config_options(design, design_config);
  std::string design_objective;
  double design_target = 0.0, design_at = 0.0;
  design->add_option("--objective", design_objective, "modulus | band")
      ->required()
      ->check(CLI::IsMember({"modulus", "band"}));
  design->add_option("--target-force", design_target, "Applied force to hit, N")->required();
  design->add_option("--at", design_at, "Displacement where the target applies, mm")->required();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep as CSV");
  ConfigOptions sweep_config;
  add_config_options(sweep, sweep_config);
  kiri::SweepGrid grid;
  sweep->add_option("--e", grid.youngs_modulus_mpa, "Modulus values, MPa")->delimiter(',');
  sweep->add_option("--kb", grid.band_stiffness_n_per_mm, "Band stiffness values, N/mm")
      ->delimiter(',');
  sweep->add_option("--scale", grid.size_scale, "Geometry scale factors")->delimiter(',');
  sweep->add_option("--dx", grid.delta_x_mm, "Displacements, mm")->required()->delimiter(',');

  // torque-profile
  auto* torque = app.add_subcommand("torque-profile", "Pivot torque along a closure trajectory");
  ConfigOptions torque_config;
  add_config_options(torque, torque_config);
  double tp_from = 0.0, tp_to = 0.0, tp_gear = 1.0, tp_safety = 1.5;
  double tp_peg_radius = 0.0, tp_rest_deg = 0.0, tp_sweep_deg = 0.0;
  long tp_steps = 0;
  torque->add_option("--from", tp_from, "Ramp start displacement, mm")->capture_default_str();
  torque->add_option("--to", tp_to, "Ramp end displacement, mm")->capture_default_str();
  torque->add_option("--steps", tp_steps, "Number of samples")->required();
  torque->add_option("--gear-ratio", tp_gear, "Pivot gear ratio")->capture_default_str();
  torque->add_option("--safety-factor", tp_safety, "Motor sizing safety factor")
      ->capture_default_str();
  auto* peg_radius = torque->add_option("--peg-radius", tp_peg_radius,
                                        "Peg arc radius, mm (switches to the arc mapping)");
  torque->add_option("--rest-angle-deg", tp_rest_deg, "Peg rest angle, degrees")
      ->needs(peg_radius);
  torque->add_option("--sweep-angle-deg", tp_sweep_deg, "Pivot sweep angle, degrees")
      ->needs(peg_radius);

  try {
    app.parse(argc, argv);

    if (simulate->parsed()) {
      run_simulate(resolve_config(sim_config), sim_from, sim_to, sim_steps, sim_emit, sim_trial,
                   sim_scale);
    } else if (invert->parsed()) {
      run_invert(resolve_config(inv_config), inv_target);
    } else if (fit_spring->parsed()) {
      run_fit("spring", fit_files, fit_allow, 0.0);
    } else if (fit_kk->parsed()) {
      run_fit("kk", kk_files, kk_allow, 0.0);
    } else if (scale_report->parsed()) {
      run_fit("scale-report", scale_files, scale_allow, scale_threshold);
    } else if (design->parsed()) {
      run_design(resolve_config(design_config), design_objective, design_target, design_at);
    } else if (sweep->parsed()) {
      run_sweep(resolve_config(sweep_config), grid);
    } else if (torque->parsed()) {
      kiri::ClosureTrajectory trajectory;
      if (tp_steps < 1)
        throw kiri::ModelError(kiri::ErrorKind::usage, "--steps must be at least 1");
      if (*peg_radius) {
        constexpr double kDegToRad = std::numbers::pi / 180.0;
        trajectory = kiri::peg_arc_trajectory(tp_peg_radius, tp_rest_deg * kDegToRad,
                                              tp_sweep_deg * kDegToRad,
                                              static_cast<std::size_t>(tp_steps));
      } else {
        trajectory = kiri::linear_ramp(tp_from, tp_to, static_cast<std::size_t>(tp_steps));
      }
      run_torque_profile(resolve_config(torque_config), trajectory, tp_gear, tp_safety);
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "kiristat: " << e.what() << '\n';
    return 2;
  } catch (const kiri::ModelError& e) {
    std::cerr << "kiristat: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "kiristat: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
