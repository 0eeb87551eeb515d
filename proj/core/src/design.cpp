#include "kiristat/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace kiri {

namespace {

// Relative tolerance for "target equals the no-band force" boundary checks.
constexpr double kMomentMatchTolerance = 1e-12;

double checked_target_displacement(const UtensilGeometry& geom, const DesignTarget& target) {
  const OperatingRange range = operating_range(geom);
  const double dx = target.at_displacement_mm;
  if (!(std::isfinite(dx) && dx >= 0.0 && dx <= range.delta_x_max_mm)) {
    std::ostringstream msg;
    msg << "target displacement " << dx << " mm outside the operating range [0, "
        << range.delta_x_max_mm << "] mm";
    throw ModelError(ErrorKind::domain, msg.str());
  }
  return dx;
}

}  // namespace

MaterialSpec solve_material_modulus(const UtensilGeometry& geom,
                                    const KirigamiSpringModel& spring, const BandSpec& band,
                                    const DesignTarget& target) {
  if (target.objective != DesignObjective::solve_modulus)
    throw ModelError(ErrorKind::domain, "target objective is not solve_modulus");
  const double dx = checked_target_displacement(geom, target);
  if (dx == 0.0)
    throw ModelError(ErrorKind::singular, "no kirigami leverage at rest: delta_x must be > 0");
  if (!std::isfinite(target.target_applied_force_n))
    throw ModelError(ErrorKind::domain, "target force must be finite");

  // Unit-modulus state: arms and band displacement do not depend on E, and
  // the mesh moment is proportional to it.
  const ActuationState unit = evaluate_state(geom, spring, MaterialSpec{1.0, ""}, band, dx);

  const double target_moment = target.target_applied_force_n * geom.applied_moment_arm_mm;
  const double band_moment = unit.band_force_n * unit.band_arm_mm;
  if (band_moment >= target_moment) {
    std::ostringstream msg;
    msg << "infeasible: band moment " << band_moment << " N*mm already meets or exceeds the "
        << "target moment " << target_moment << " N*mm, leaving no positive modulus";
    throw ModelError(ErrorKind::infeasible, msg.str());
  }

  MaterialSpec material;
  material.youngs_modulus_mpa =
      (target_moment - band_moment) / (unit.kirigami_force_n * unit.kirigami_arm_mm);
  return material;
}

BandSolution solve_band_stiffness(const UtensilGeometry& geom, const KirigamiSpringModel& spring,
                                  const MaterialSpec& material, const DesignTarget& target) {
  if (target.objective != DesignObjective::solve_band_stiffness)
    throw ModelError(ErrorKind::domain, "target objective is not solve_band_stiffness");
  const double dx = checked_target_displacement(geom, target);
  if (!std::isfinite(target.target_applied_force_n))
    throw ModelError(ErrorKind::domain, "target force must be finite");

  const ActuationState bandless =
      evaluate_state(geom, spring, material, BandSpec{0.0, false}, dx);
  const double delta_y = bandless.delta_y_mm;
  const double arm_b = bandless.band_arm_mm;

  const double target_moment = target.target_applied_force_n * geom.applied_moment_arm_mm;
  const double mesh_moment = bandless.pivot_torque_nmm;

  const double scale = std::max(1.0, std::fabs(target_moment));
  if (std::fabs(target_moment - mesh_moment) <= kMomentMatchTolerance * scale) {
    BandSolution solution;
    solution.band = BandSpec{0.0, false};
    solution.band_unnecessary = true;
    return solution;
  }
  if (mesh_moment > target_moment) {
    std::ostringstream msg;
    msg << "infeasible: mesh moment " << mesh_moment << " N*mm already exceeds the target moment "
        << target_moment << " N*mm; no positive band stiffness can lower it";
    throw ModelError(ErrorKind::infeasible, msg.str());
  }
  if (delta_y <= 0.0)
    throw ModelError(ErrorKind::singular,
                     "band slack at the target state (delta_y <= 0): stiffness has no effect");

  BandSolution solution;
  solution.band = BandSpec{(target_moment - mesh_moment) / (delta_y * arm_b), true};
  return solution;
}

UtensilGeometry scale_geometry(const UtensilGeometry& geom, double scale) {
  if (!(std::isfinite(scale) && scale > 0.0))
    throw ModelError(ErrorKind::domain, "scale factor must be finite and > 0");
  UtensilGeometry scaled = geom;
  scaled.applied_moment_arm_mm *= scale;
  scaled.kirigami_hypotenuse_mm *= scale;
  scaled.band_hypotenuse_mm *= scale;
  scaled.kirigami_offset_mm *= scale;
  scaled.band_offset_mm *= scale;
  return scaled;
}

std::vector<SweepRow> parameter_sweep(const UtensilGeometry& geom,
                                      const KirigamiSpringModel& spring,
                                      const MaterialSpec& material, const BandSpec& band,
                                      const SweepGrid& grid) {
  geom.validate();
  spring.validate();
  material.validate();
  band.validate();

  if (grid.delta_x_mm.empty())
    throw ModelError(ErrorKind::domain, "sweep grid has no delta_x values");

  auto sorted_or = [](std::vector<double> axis, double fallback) {
    if (axis.empty()) axis.push_back(fallback);
    std::sort(axis.begin(), axis.end());
    return axis;
  };
  const std::vector<double> moduli = sorted_or(grid.youngs_modulus_mpa, material.youngs_modulus_mpa);
  const std::vector<double> stiffnesses = sorted_or(
      grid.band_stiffness_n_per_mm, band.present ? band.stiffness_n_per_mm : 0.0);
  const std::vector<double> scales = sorted_or(grid.size_scale, 1.0);
  const std::vector<double> displacements = sorted_or(grid.delta_x_mm, 0.0);

  for (double e : moduli)
    if (!(std::isfinite(e) && e > 0.0))
      throw ModelError(ErrorKind::domain, "sweep modulus values must be finite and > 0");
  for (double kb : stiffnesses)
    if (!(std::isfinite(kb) && kb >= 0.0))
      throw ModelError(ErrorKind::domain, "sweep band stiffness values must be finite and >= 0");
  for (double s : scales)
    if (!(std::isfinite(s) && s > 0.0))
      throw ModelError(ErrorKind::domain, "sweep scale values must be finite and > 0");
  for (double dx : displacements)
    if (!std::isfinite(dx))
      throw ModelError(ErrorKind::domain, "sweep delta_x values must be finite");

  std::vector<SweepRow> rows;
  rows.reserve(moduli.size() * stiffnesses.size() * scales.size() * displacements.size());
  for (double e : moduli) {
    const MaterialSpec cell_material{e, material.shore_label};
    for (double kb : stiffnesses) {
      const BandSpec cell_band{kb, true};
      for (double s : scales) {
        const UtensilGeometry cell_geom = scale_geometry(geom, s);
        const OperatingRange range = operating_range(cell_geom);
        for (double dx : displacements) {
          SweepRow row;
          row.youngs_modulus_mpa = e;
          row.band_stiffness_n_per_mm = kb;
          row.size_scale = s;
          row.delta_x_mm = dx;
          row.delta_x_max_mm = range.delta_x_max_mm;
          try {
            const ActuationState state =
                evaluate_state(cell_geom, spring, cell_material, cell_band, dx);
            row.applied_force_n = state.applied_force_n;
            row.pivot_torque_nmm = state.pivot_torque_nmm;
          } catch (const ModelError&) {
            row.applied_force_n = std::numeric_limits<double>::quiet_NaN();
            row.pivot_torque_nmm = std::numeric_limits<double>::quiet_NaN();
            row.status = SweepStatus::domain_error;
          }
          rows.push_back(row);
        }
      }
    }
  }
  return rows;
}

ClosureTrajectory linear_ramp(double from_mm, double to_mm, std::size_t steps) {
  if (!std::isfinite(from_mm) || !std::isfinite(to_mm))
    throw ModelError(ErrorKind::domain, "ramp endpoints must be finite");
  if (steps == 0) throw ModelError(ErrorKind::domain, "ramp needs at least 1 step");
  if (steps == 1) {
    if (from_mm != to_mm)
      throw ModelError(ErrorKind::domain, "single-step ramp requires from == to");
    return {{0.0, from_mm}};
  }
  ClosureTrajectory trajectory;
  trajectory.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const double phase = static_cast<double>(i) / static_cast<double>(steps - 1);
    trajectory.push_back({phase, from_mm + phase * (to_mm - from_mm)});
  }
  trajectory.front() = {0.0, from_mm};
  trajectory.back() = {1.0, to_mm};
  return trajectory;
}

ClosureTrajectory peg_arc_trajectory(double peg_radius_mm, double rest_angle_rad,
                                     double sweep_angle_rad, std::size_t steps) {
  if (!(std::isfinite(peg_radius_mm) && peg_radius_mm > 0.0))
    throw ModelError(ErrorKind::domain, "peg radius must be finite and > 0");
  if (!std::isfinite(rest_angle_rad) || !std::isfinite(sweep_angle_rad))
    throw ModelError(ErrorKind::domain, "peg angles must be finite");
  if (steps < 2) throw ModelError(ErrorKind::domain, "peg arc needs at least 2 steps");

  const double rest_sin = std::sin(rest_angle_rad);
  ClosureTrajectory trajectory;
  trajectory.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const double phase = static_cast<double>(i) / static_cast<double>(steps - 1);
    const double theta = phase * sweep_angle_rad;
    trajectory.push_back({phase, peg_radius_mm * (std::sin(rest_angle_rad + theta) - rest_sin)});
  }
  trajectory.front().phase = 0.0;
  trajectory.back().phase = 1.0;
  return trajectory;
}

TorqueProfile torque_profile(const UtensilGeometry& geom, const KirigamiSpringModel& spring,
                             const MaterialSpec& material, const BandSpec& band,
                             const ClosureTrajectory& trajectory, double gear_ratio,
                             double safety_factor) {
  if (!(std::isfinite(gear_ratio) && gear_ratio > 0.0))
    throw ModelError(ErrorKind::domain, "gear ratio must be finite and > 0");
  if (!(std::isfinite(safety_factor) && safety_factor >= 1.0))
    throw ModelError(ErrorKind::domain, "safety factor must be finite and >= 1");
  if (trajectory.empty()) throw ModelError(ErrorKind::domain, "trajectory is empty");

  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const TrajectorySample& sample = trajectory[i];
    if (!(std::isfinite(sample.phase) && sample.phase >= 0.0 && sample.phase <= 1.0))
      throw ModelError(ErrorKind::domain, "trajectory phases must lie in [0, 1]");
    if (i > 0 && !(trajectory[i - 1].phase < sample.phase))
      throw ModelError(ErrorKind::domain, "trajectory phases must be strictly increasing");
  }

  const OperatingRange range = operating_range(geom);
  TorqueProfile profile;
  profile.gear_ratio = gear_ratio;
  profile.safety_factor = safety_factor;
  profile.samples.reserve(trajectory.size());

  double peak = -std::numeric_limits<double>::infinity();
  for (const TrajectorySample& sample : trajectory) {
    if (!(sample.delta_x_mm >= 0.0 && sample.delta_x_mm <= range.delta_x_max_mm)) {
      std::ostringstream msg;
      msg << "trajectory leaves the operating range at phase " << sample.phase << " (delta_x "
          << sample.delta_x_mm << " mm, range [0, " << range.delta_x_max_mm << "] mm)";
      ModelError err(ErrorKind::domain, msg.str());
      err.phase = sample.phase;
      throw err;
    }
    const double torque = pivot_torque(geom, spring, material, band, sample.delta_x_mm);
    profile.samples.push_back({sample.phase, sample.delta_x_mm, torque});
    peak = std::max(peak, torque);
  }
  profile.peak_torque_nmm = peak;
  profile.required_motor_torque_nmm = peak * safety_factor / gear_ratio;
  return profile;
}

}  // namespace kiri
