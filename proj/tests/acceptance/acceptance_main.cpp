// Acceptance suite: one pass/fail line per criterion, exit 0 only if all
// pass. Criteria 2 and 10 drive the CLI binary given via --cli <path>.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "kiristat/config.hpp"
#include "kiristat/csv.hpp"
#include "kiristat/design.hpp"
#include "kiristat/fitting.hpp"
#include "kiristat/statics.hpp"
#include "oracle.hpp"
#include "run_cli.hpp"

using namespace kiri;
using namespace kiri::testing;
using nlohmann::json;

namespace {

std::string g_cli_path;
int g_failures = 0;

struct CheckFailure {
  std::string message;
};

void require(bool condition, const std::string& message) {
  if (!condition) throw CheckFailure{message};
}

void run_criterion(int number, const std::string& title, const std::function<void()>& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string failure;
  try {
    body();
  } catch (const CheckFailure& f) {
    failure = f.message;
  } catch (const std::exception& e) {
    failure = std::string("unexpected exception: ") + e.what();
  }
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  if (failure.empty()) {
    std::printf("PASS  criterion %2d: %s (%lld ms)\n", number, title.c_str(),
                static_cast<long long>(elapsed));
  } else {
    std::printf("FAIL  criterion %2d: %s (%lld ms)\n      %s\n", number, title.c_str(),
                static_cast<long long>(elapsed), failure.c_str());
    ++g_failures;
  }
  std::fflush(stdout);
}

UtensilGeometry random_geometry(std::mt19937& rng) {
  std::uniform_real_distribution<double> hyp(20.0, 120.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  UtensilGeometry g;
  g.kirigami_hypotenuse_mm = hyp(rng);
  g.kirigami_offset_mm = (0.05 + 0.75 * unit(rng)) * g.kirigami_hypotenuse_mm;
  g.band_hypotenuse_mm = (0.1 + 0.8 * unit(rng)) * g.kirigami_hypotenuse_mm;
  const double rest_travel = g.hypotenuse_ratio() * g.kirigami_offset_mm;
  g.band_offset_mm = unit(rng) * (rest_travel + 0.9 * g.band_hypotenuse_mm);
  g.applied_moment_arm_mm = 10.0 + 150.0 * unit(rng);
  return g;
}

// 1. The bundled preset deserializes to exactly the eight reference constants.
void criterion_preset_fidelity() {
  const ToolConfig config = table1_preset();
  require(config.geometry.applied_moment_arm_mm == 69.6, "L_A != 69.6");
  require(config.spring.stiffness_factor_mm == 4.55, "K_K != 4.55");
  require(config.material.youngs_modulus_mpa == 14.9, "E != 14.9");
  require(config.geometry.kirigami_hypotenuse_mm == 59.2, "H_K != 59.2");
  require(config.geometry.kirigami_offset_mm == 20.7, "b != 20.7");
  require(config.band.stiffness_n_per_mm == 2.18, "K_B != 2.18");
  require(config.geometry.band_hypotenuse_mm == 22.5, "H_B != 22.5");
  require(config.geometry.band_offset_mm == 7.8, "c != 7.8");
  require(config.band.present, "band must be present in the preset");
}

// 2. fit-kk recovers the stiffness factor from noiseless synthetic data on
//    the 5..50 mm grid, three trials, three moduli, within 0.1%.
void criterion_kk_recovery() {
  const auto dir = make_temp_dir("accept_kk");
  std::string paths;
  int trial = 1;
  for (double modulus : {10.0, 14.9, 20.0}) {
    for (int repeat = 0; repeat < 3; ++repeat) {
      std::ostringstream text;
      text << "delta_x_mm,force_n,trial_id,e_mpa,size_scale\n";
      for (int i = 1; i <= 10; ++i) {
        const double x = 5.0 * i;
        text << format_exact(x) << ',' << format_exact(4.55 * modulus * x) << ',' << trial
             << ',' << format_exact(modulus) << ",1\n";
      }
      const auto path = dir / ("trial" + std::to_string(trial) + ".csv");
      write_file(path, text.str());
      paths += " " + path.string();
      ++trial;
    }
  }
  const CliResult result = run_cli(g_cli_path, "fit-kk" + paths);
  std::filesystem::remove_all(dir);
  require(result.exit_code == 0, "fit-kk exited " + std::to_string(result.exit_code));
  const json doc = json::parse(result.out);
  const double kk = doc.at("constant_mm").get<double>();
  require(std::fabs(kk - 4.55) <= 0.001 * 4.55,
          "recovered K_K = " + std::to_string(kk) + ", expected 4.55 within 0.1%");
  require(doc.at("r_squared").get<double>() >= 0.9999, "r^2 below 0.9999");
}

// 3. Moment-balance residual over 10,000 random valid configurations.
void criterion_moment_balance() {
  std::mt19937 rng(3003);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> stiffness(0.5, 10.0);
  std::uniform_real_distribution<double> modulus(1.0, 50.0);
  for (int i = 0; i < 10000; ++i) {
    const UtensilGeometry geom = random_geometry(rng);
    const KirigamiSpringModel spring{stiffness(rng)};
    const MaterialSpec material{modulus(rng), ""};
    const BandSpec band{unit(rng) * 10.0, unit(rng) < 0.5};
    const double dx =
        unit(rng) * (geom.kirigami_hypotenuse_mm - geom.kirigami_offset_mm) * 0.999;
    const ActuationState s = evaluate_state(geom, spring, material, band, dx);
    const double lhs = s.applied_force_n * geom.applied_moment_arm_mm;
    const double rhs = s.kirigami_force_n * s.kirigami_arm_mm + s.band_force_n * s.band_arm_mm;
    require(std::fabs(lhs - rhs) <= 1e-9 * std::max(1.0, std::fabs(lhs)),
            "residual above 1e-9 at sample " + std::to_string(i));
  }
}

// 4. Inverse round trip for 1,000 random targets; above-peak targets return
//    out_of_range carrying the peak force.
void criterion_inverse_round_trip() {
  const ToolConfig config = table1_preset();
  const double dx_max = operating_range(config.geometry).delta_x_max_mm;
  std::mt19937 rng(4004);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (const bool with_band : {false, true}) {
    const BandSpec band{config.band.stiffness_n_per_mm, with_band};
    for (int i = 0; i < 500; ++i) {
      const double dx = unit(rng) * dx_max;
      const double target =
          evaluate_state(config.geometry, config.spring, config.material, band, dx)
              .applied_force_n;
      const InversionResult inv =
          invert_applied_force(config.geometry, config.spring, config.material, band, target);
      require(std::fabs(inv.delta_x_mm - dx) <= 1e-9,
              "round trip error " + std::to_string(std::fabs(inv.delta_x_mm - dx)) + " mm");
    }

    const double peak =
        evaluate_state(config.geometry, config.spring, config.material, band, dx_max)
            .applied_force_n;
    bool threw = false;
    try {
      invert_applied_force(config.geometry, config.spring, config.material, band, peak * 2.0);
    } catch (const ModelError& e) {
      threw = true;
      require(e.kind() == ErrorKind::out_of_range, "wrong error kind");
      require(e.limit_value.has_value(), "error does not carry the peak");
      require(std::fabs(*e.limit_value - peak) <= 1e-9 * peak, "carried peak is wrong");
    }
    require(threw, "above-peak target did not raise out_of_range");
  }
}

// 5. Analytic peak vs numeric argmax on a 1e-4 mm grid; the reference
//    geometry peaks at 26.654 +- 0.001 mm.
void criterion_analytic_peak() {
  std::mt19937 rng(5005);
  for (int i = 0; i < 100; ++i) {
    const UtensilGeometry geom = random_geometry(rng);
    const double analytic = operating_range(geom).delta_x_max_mm;
    const double numeric =
        numeric_moment_argmax(geom.kirigami_hypotenuse_mm, geom.kirigami_offset_mm, 1e-4);
    require(std::fabs(analytic - numeric) <= 1e-4,
            "analytic " + std::to_string(analytic) + " vs numeric " + std::to_string(numeric));
  }
  const double reference = operating_range(table1_preset().geometry).delta_x_max_mm;
  require(std::fabs(reference - 26.654) <= 0.001,
          "reference geometry peak " + std::to_string(reference) + " not 26.654 +- 0.001");
}

// 6. Rest consistency of the reference constants.
void criterion_rest_consistency() {
  const double rest = band_displacement(table1_preset().geometry, 0.0);
  require(std::fabs(rest - kRestBandDisplacementMm) <= 1e-12, "rest displacement drifted");
  require(std::fabs(rest) <= 0.1, "|delta_y(0)| above 0.1 mm");
}

// 7. Applied-force anchors at 10 mm against the independent long-double
//    oracle, within 0.01%.
void criterion_force_anchors() {
  const ToolConfig config = table1_preset();
  const OracleConstants constants;

  const double no_band =
      evaluate_state(config.geometry, config.spring, config.material, {0.0, false}, 10.0)
          .applied_force_n;
  const double with_band =
      evaluate_state(config.geometry, config.spring, config.material, config.band, 10.0)
          .applied_force_n;

  const double oracle_no_band =
      static_cast<double>(closed_form_applied_force(constants, false, 10.0L));
  const double oracle_with_band =
      static_cast<double>(closed_form_applied_force(constants, true, 10.0L));

  require(std::fabs(no_band - oracle_no_band) <= 1e-4 * oracle_no_band,
          "no-band force " + std::to_string(no_band) + " vs oracle " +
              std::to_string(oracle_no_band));
  require(std::fabs(with_band - oracle_with_band) <= 1e-4 * oracle_with_band,
          "banded force " + std::to_string(with_band) + " vs oracle " +
              std::to_string(oracle_with_band));

  // Frozen decimal anchors, pinned before the build.
  require(std::fabs(no_band - kAppliedForceAt10NoBandN) <= 1e-4 * kAppliedForceAt10NoBandN,
          "no-band force drifted from the frozen anchor");
  require(std::fabs(with_band - kAppliedForceAt10WithBandN) <=
              1e-4 * kAppliedForceAt10WithBandN,
          "banded force drifted from the frozen anchor");
}

// 8. Through-origin least squares vs exhaustive slope search on 50 random
//    datasets of at most 12 points, within 1e-5 relative.
void criterion_regression_oracle() {
  std::mt19937 rng(8008);
  std::uniform_real_distribution<double> x_dist(0.5, 10.0);
  std::uniform_real_distribution<double> k_dist(0.5, 5.0);
  std::uniform_real_distribution<double> noise(0.9, 1.1);

  for (int round = 0; round < 50; ++round) {
    const double k_true = k_dist(rng);
    MeasurementSeries series;
    std::vector<std::pair<double, double>> points;
    const int n = 4 + static_cast<int>(rng() % 9);
    for (int i = 0; i < n; ++i) {
      const double x = x_dist(rng);
      const double y = k_true * x * noise(rng);
      series.samples.push_back({x, y});
      points.emplace_back(x, y);
    }
    const double fitted = fit_spring_constant(series).constant;
    const double searched = brute_force_origin_slope(points, 1e-6);
    require(std::fabs(fitted - searched) <= 1e-5 * std::fabs(searched),
            "fit " + std::to_string(fitted) + " vs search " + std::to_string(searched));
  }
}

// 9. Scale invariance: noiseless datasets generated at 1x/1.25x/1.5x with a
//    fixed stiffness factor fit back with zero spread, and scale-report
//    flags them consistent.
void criterion_scale_invariance() {
  const ToolConfig config = table1_preset();
  std::vector<MeasurementSeries> datasets;
  const auto dir = make_temp_dir("accept_scale");
  std::string paths;
  int trial = 1;
  for (double scale : {1.0, 1.25, 1.5}) {
    const UtensilGeometry scaled = scale_geometry(config.geometry, scale);
    const double dx_max = operating_range(scaled).delta_x_max_mm;
    MeasurementSeries series;
    series.trial_id = trial;
    series.material = config.material;
    series.size_scale = scale;
    std::ostringstream text;
    text << "delta_x_mm,force_n,trial_id,e_mpa,size_scale\n";
    for (int i = 1; i <= 8; ++i) {
      const double dx = dx_max * i / 10.0;
      const double force = kirigami_force(config.spring, config.material, dx);
      series.samples.push_back({dx, force});
      text << format_exact(dx) << ',' << format_exact(force) << ',' << trial << ','
           << format_exact(config.material.youngs_modulus_mpa) << ',' << format_exact(scale)
           << '\n';
    }
    const auto path = dir / ("scale" + std::to_string(trial) + ".csv");
    write_file(path, text.str());
    paths += " " + path.string();
    datasets.push_back(std::move(series));
    ++trial;
  }

  const ScaleReport report = scale_invariance_report(datasets);
  require(report.max_relative_spread == 0.0,
          "spread " + std::to_string(report.max_relative_spread) + ", expected 0");
  require(report.consistent, "report not flagged consistent");
  for (const ScaleGroup& g : report.groups)
    require(std::fabs(g.fit.constant - 4.55) <= 1e-12 * 4.55, "per-group factor drifted");

  const CliResult cli = run_cli(g_cli_path, "scale-report" + paths);
  std::filesystem::remove_all(dir);
  require(cli.exit_code == 0, "scale-report exited " + std::to_string(cli.exit_code));
  const json doc = json::parse(cli.out);
  require(doc.at("consistent").get<bool>(), "CLI report not flagged consistent");
  require(doc.at("max_relative_spread").get<double>() == 0.0, "CLI spread nonzero");
}

// 10. CLI contract: exit statuses 0/2/3, byte-exact CSV formatting, and
//     cross-command numeric agreement.
void criterion_cli_contract() {
  // Exit statuses.
  require(run_cli(g_cli_path, "simulate --preset table1 --from 0 --to 10 --steps 3").exit_code ==
              0,
          "healthy simulate must exit 0");
  require(run_cli(g_cli_path, "simulate --preset table1 --to 10 --steps 1").exit_code == 2,
          "steps=1 must exit 2");
  require(run_cli(g_cli_path, "simulate --preset table1 --from 0 --to 30 --steps 3").exit_code ==
              3,
          "range violation must exit 3");
  require(run_cli(g_cli_path, "invert --preset table1 --target 99999").exit_code == 3,
          "above-peak invert must exit 3");

  // Byte-exact CSV formatting.
  const CliResult no_band =
      run_cli(g_cli_path, "simulate --preset table1 --no-band --from 0 --to 10 --steps 3");
  require(no_band.exit_code == 0, "no-band simulate failed");
  const auto lines = split_lines(no_band.out);
  require(lines.size() == 4, "expected header + 3 rows");
  require(lines[0] == std::string(kCurveCsvHeader), "curve header mismatch");
  require(split_csv_fields(lines[1])[4] == "0.000000000", "rest-row f_a_n not 0.000000000");
  const ToolConfig config = table1_preset();
  const ActuationState last =
      evaluate_state(config.geometry, config.spring, config.material, {0.0, false}, 10.0);
  require(split_csv_fields(lines[3])[4] == format_fixed9(last.applied_force_n),
          "final f_a_n not byte-identical to the library value");

  // Cross-command agreement at (table1, dx = 10).
  const CliResult banded =
      run_cli(g_cli_path, "simulate --preset table1 --from 0 --to 10 --steps 3");
  const auto banded_fields = split_csv_fields(split_lines(banded.out)[3]);
  const CliResult sweep = run_cli(g_cli_path, "sweep --preset table1 --dx 10");
  require(sweep.exit_code == 0, "sweep failed");
  const auto sweep_fields = split_csv_fields(split_lines(sweep.out)[1]);
  require(sweep_fields[4] == banded_fields[4], "sweep f_a_n disagrees with simulate");
  require(sweep_fields[5] == banded_fields[5], "sweep torque disagrees with simulate");

  const CliResult profile = run_cli(
      g_cli_path,
      "torque-profile --preset table1 --from 0 --to 10 --steps 3 --gear-ratio 1 "
      "--safety-factor 1");
  require(profile.exit_code == 0, "torque-profile failed");
  const auto profile_lines = split_lines(profile.out);
  require(split_csv_fields(profile_lines.back())[2] == banded_fields[5],
          "torque-profile endpoint disagrees with simulate");
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--cli") g_cli_path = argv[i + 1];
  }
  if (g_cli_path.empty()) {
    std::fprintf(stderr, "usage: acceptance_tests --cli <path-to-kiristat-binary>\n");
    return 2;
  }

  run_criterion(1, "reference preset deserializes to the eight constants",
                criterion_preset_fidelity);
  run_criterion(2, "fit-kk recovers 4.55 mm within 0.1% from synthetic data",
                criterion_kk_recovery);
  run_criterion(3, "moment balance residual <= 1e-9 over 10,000 random states",
                criterion_moment_balance);
  run_criterion(4, "1,000 inverse round trips within 1e-9 mm, peak carried on failure",
                criterion_inverse_round_trip);
  run_criterion(5, "analytic peak matches the numeric argmax (1e-4 mm grid)",
                criterion_analytic_peak);
  run_criterion(6, "rest band displacement is 0.0674 mm, within the 0.1 mm budget",
                criterion_rest_consistency);
  run_criterion(7, "force anchors at 10 mm match the independent oracle within 0.01%",
                criterion_force_anchors);
  run_criterion(8, "through-origin fits match brute-force slope search within 1e-5",
                criterion_regression_oracle);
  run_criterion(9, "scale-invariant synthetic data has zero spread and is flagged consistent",
                criterion_scale_invariance);
  run_criterion(10, "CLI exit statuses, byte-exact CSV, cross-command agreement",
                criterion_cli_contract);

  if (g_failures == 0) {
    std::printf("acceptance: all 10 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return 1;
}
