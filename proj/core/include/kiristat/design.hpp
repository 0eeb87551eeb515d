#pragma once

#include <cstddef>
#include <vector>

#include "kiristat/statics.hpp"

// Inverse design (material, band, scale) and quasi-static actuation planning
// for the servo-driven pivot.

namespace kiri {

enum class DesignObjective { solve_modulus, solve_band_stiffness };

struct DesignTarget {
  double target_applied_force_n = 0.0;
  double at_displacement_mm = 0.0;  // must lie within the operating range
  DesignObjective objective = DesignObjective::solve_modulus;
};

// Closed-form modulus E so that the applied force at the target displacement
// equals the target, with the given band fixed:
// E = (F_A*L_A - K_B*dy*L_B) / (K_K*dx*L_K).
MaterialSpec solve_material_modulus(const UtensilGeometry& geom,
                                    const KirigamiSpringModel& spring, const BandSpec& band,
                                    const DesignTarget& target);

struct BandSolution {
  BandSpec band;
  // Set when the mesh alone already meets the target; band.present is false.
  bool band_unnecessary = false;
};

// Closed-form band stiffness K_B = (F_A*L_A - K_K*E*dx*L_K) / (dy*L_B) with
// the given material fixed.
BandSolution solve_band_stiffness(const UtensilGeometry& geom, const KirigamiSpringModel& spring,
                                  const MaterialSpec& material, const DesignTarget& target);

// Every length field multiplied by s. The stiffness factor K_K is a material
// property and is not scaled; band stiffness belongs to a particular printed
// band and must be re-measured after scaling, so it is not touched either.
UtensilGeometry scale_geometry(const UtensilGeometry& geom, double scale);

struct SweepGrid {
  std::vector<double> youngs_modulus_mpa;     // empty: take the configured material
  std::vector<double> band_stiffness_n_per_mm;  // empty: configured band (0 when absent)
  std::vector<double> size_scale;             // empty: {1.0}
  std::vector<double> delta_x_mm;             // required
};

enum class SweepStatus { ok, domain_error };

struct SweepRow {
  double youngs_modulus_mpa = 0.0;
  double band_stiffness_n_per_mm = 0.0;
  double size_scale = 1.0;
  double delta_x_mm = 0.0;
  double applied_force_n = 0.0;   // NaN when status != ok
  double pivot_torque_nmm = 0.0;  // NaN when status != ok
  double delta_x_max_mm = 0.0;    // operating range of the scaled geometry
  SweepStatus status = SweepStatus::ok;
};

// Cartesian-product evaluation over (E, K_B, s, delta_x), rows emitted in
// lexicographic order of the sorted axes. Displacements outside the model
// domain produce a row with a domain_error status instead of being dropped.
std::vector<SweepRow> parameter_sweep(const UtensilGeometry& geom,
                                      const KirigamiSpringModel& spring,
                                      const MaterialSpec& material, const BandSpec& band,
                                      const SweepGrid& grid);

struct TrajectorySample {
  double phase = 0.0;       // dimensionless progress in [0, 1]
  double delta_x_mm = 0.0;  // must stay within the operating range
};

using ClosureTrajectory = std::vector<TrajectorySample>;

// Evenly spaced phases over [from, to]. steps == 1 requires from == to.
ClosureTrajectory linear_ramp(double from_mm, double to_mm, std::size_t steps);

// Idealized pivot-angle mapping for a peg riding a circular arc of radius R
// from rest angle phi0: delta_x(theta) = R * (sin(phi0 + theta) - sin(phi0)).
// A convenience only; supply measured trajectories when available.
ClosureTrajectory peg_arc_trajectory(double peg_radius_mm, double rest_angle_rad,
                                     double sweep_angle_rad, std::size_t steps);

struct TorqueSample {
  double phase = 0.0;
  double delta_x_mm = 0.0;
  double torque_nmm = 0.0;
};

struct TorqueProfile {
  std::vector<TorqueSample> samples;
  double peak_torque_nmm = 0.0;  // pointwise maximum over the samples
  double gear_ratio = 1.0;
  double safety_factor = 1.5;
  double required_motor_torque_nmm = 0.0;  // peak * safety_factor / gear_ratio
};

// Quasi-static pivot torque along a closure trajectory plus the motor
// requirement derived from it. No inertia, friction, or backlash.
TorqueProfile torque_profile(const UtensilGeometry& geom, const KirigamiSpringModel& spring,
                             const MaterialSpec& material, const BandSpec& band,
                             const ClosureTrajectory& trajectory, double gear_ratio,
                             double safety_factor);

}  // namespace kiri
