#pragma once

#include <string>

#include "kiristat/error.hpp"

// Quasi-static moment balance of one pivot handle loaded by a kirigami mesh
// spring and an optional elastic band. Units are fixed project-wide:
// lengths mm, forces N, moduli MPa (N/mm^2), torques N*mm. All quantities
// are per single handle; the assembly is symmetric about the pivot axis.

namespace kiri {

// Pivot-frame lengths defining the displacement-dependent moment arms.
struct UtensilGeometry {
  double applied_moment_arm_mm = 0.0;   // L_A, squeeze-force arm
  double kirigami_hypotenuse_mm = 0.0;  // H_K, peg-to-pivot hypotenuse of the mesh triangle
  double band_hypotenuse_mm = 0.0;      // H_B, post-to-pivot hypotenuse of the band triangle
  double kirigami_offset_mm = 0.0;      // b, mesh attachment offset from the neutral axis at rest
  double band_offset_mm = 0.0;          // c, band attachment offset from the neutral axis at rest

  // H_B/H_K, the similar-triangles ratio coupling band travel to mesh travel.
  double hypotenuse_ratio() const noexcept {
    return band_hypotenuse_mm / kirigami_hypotenuse_mm;
  }

  void validate() const;  // throws ModelError on any violated invariant
};

// Printed mesh material.
struct MaterialSpec {
  double youngs_modulus_mpa = 0.0;  // E
  std::string shore_label;          // durometer tag, e.g. "95A"; empty when unknown

  void validate() const;
};

// Mesh spring abstraction: mesh force = stiffness_factor * E * delta_x.
// The factor has units of mm so that K_K * E is N/mm.
struct KirigamiSpringModel {
  double stiffness_factor_mm = 0.0;  // K_K

  void validate() const;
};

// Elastic band spanning the handles. An absent band is present = false,
// never stiffness 0, so reports stay explicit about the hardware.
struct BandSpec {
  double stiffness_n_per_mm = 0.0;  // K_B
  bool present = false;

  void validate() const;
};

// One quasi-static configuration of a single handle about the pivot.
struct ActuationState {
  double delta_x_mm = 0.0;        // mesh horizontal displacement
  double delta_y_mm = 0.0;        // band horizontal displacement, (H_B/H_K)(dx+b) - c
  double kirigami_force_n = 0.0;  // F_K
  double band_force_n = 0.0;      // F_B, 0 when the band is absent
  double applied_force_n = 0.0;   // F_A at the handle
  double kirigami_arm_mm = 0.0;   // L_K
  double band_arm_mm = 0.0;       // L_B
  double pivot_torque_nmm = 0.0;  // F_K*L_K + F_B*L_B
  // Set when F_A < 0: band pre-tension dominating near rest. The value is
  // reported as-is rather than clamped.
  bool negative_force_warning = false;
};

enum class RangeLimit {
  peak,    // capped at the analytic maximum of the kirigami moment
  domain,  // capped where the mesh triangle collapses (dx + b = H_K)
};

struct OperatingRange {
  double delta_x_max_mm = 0.0;
  RangeLimit limited_by = RangeLimit::peak;
};

struct InversionResult {
  double delta_x_mm = 0.0;
  int iterations = 0;
  double residual_n = 0.0;  // F_A(delta_x) - target at the returned point
};

// Mesh spring force K_K * E * delta_x. Compression (delta_x < 0) is outside
// the model and rejected.
double kirigami_force(const KirigamiSpringModel& spring, const MaterialSpec& material,
                      double delta_x_mm);

// Band horizontal displacement (H_B/H_K)(delta_x + b) - c. May be slightly
// negative near rest when the geometry constants are inconsistent; the value
// is reported as-is.
double band_displacement(const UtensilGeometry& geom, double delta_x_mm);

// Full quasi-static state at a displacement. The moment balance
// F_A * L_A = F_K * L_K + F_B * L_B holds by construction.
ActuationState evaluate_state(const UtensilGeometry& geom, const KirigamiSpringModel& spring,
                              const MaterialSpec& material, const BandSpec& band,
                              double delta_x_mm);

// Upper end of the monotonic operating window:
// min( (-3b + sqrt(b^2 + 8 H_K^2))/4 , H_K - b ). Beyond the first bound the
// force-displacement map stops being injective; beyond the second the mesh
// triangle is collapsed.
OperatingRange operating_range(const UtensilGeometry& geom);

// Unique delta_x in [0, operating_range] with F_A(delta_x) = target, found by
// bisection to 1e-9 mm with a 200-iteration cap. Targets outside
// [F_A(0), F_A(max)] raise out_of_range carrying the attainable bound.
InversionResult invert_applied_force(const UtensilGeometry& geom,
                                     const KirigamiSpringModel& spring,
                                     const MaterialSpec& material, const BandSpec& band,
                                     double target_force_n);

// Torque about the pivot, F_K*L_K + F_B*L_B, equal to F_A*L_A of the
// matching state. This is what a servo on the pivot must supply.
double pivot_torque(const UtensilGeometry& geom, const KirigamiSpringModel& spring,
                    const MaterialSpec& material, const BandSpec& band, double delta_x_mm);

}  // namespace kiri
