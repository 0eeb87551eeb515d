#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "kiristat/statics.hpp"

// Ingestion and regression of force-displacement pull tests. The mesh is
// treated as a linear spring with no pre-load, so every fit is constrained
// through the origin; an unconstrained fit is carried along as a diagnostic.

namespace kiri {

struct Sample {
  double displacement_mm = 0.0;
  double force_n = 0.0;
};

// trial_id assigned to the output of average_trials.
inline constexpr int kAveragedTrialId = -1;

// Samples of one pull test. Displacements are strictly increasing within a
// trial; grids from repeated trials must agree to 1e-6 mm to be averaged.
struct MeasurementSeries {
  std::vector<Sample> samples;
  int trial_id = 0;
  std::optional<MaterialSpec> material;  // required for stiffness-factor fits
  double size_scale = 1.0;               // geometric print scale, e.g. 1.0 / 1.25 / 1.5
  std::string label;

  void validate() const;
};

// Through-origin least-squares result. r_squared uses SS_tot about the mean
// of the observed forces; negative values are reported, never clamped.
struct FitResult {
  double constant = 0.0;  // slope: N/mm for a spring fit, mm for a stiffness-factor fit
  double r_squared = 0.0;
  std::size_t n_points = 0;
  double max_abs_residual_n = 0.0;
  // Unconstrained diagnostic fit, reported alongside but never used for `constant`.
  double free_slope = 0.0;
  double free_intercept_n = 0.0;
};

// Pointwise mean force across repeated trials sharing one displacement grid,
// material, and size scale. The result carries kAveragedTrialId. Mismatched
// grids or metadata raise an alignment error naming the first mismatch.
MeasurementSeries average_trials(const std::vector<MeasurementSeries>& trials);

// Slope k of F = k * x by through-origin least squares, k = sum(Fx)/sum(x^2).
FitResult fit_spring_constant(const MeasurementSeries& series);

// Pools every sample as a point (E * x, F) across all series and fits the
// through-origin slope; the slope is the stiffness factor in mm. Every
// series must carry a material with a known modulus.
FitResult fit_kirigami_stiffness_factor(const std::vector<MeasurementSeries>& datasets);

struct ScaleGroup {
  double size_scale = 1.0;
  FitResult fit;
};

struct ScaleReport {
  std::vector<ScaleGroup> groups;    // ascending size_scale
  double max_relative_spread = 0.0;  // (max slope - min slope) / min slope
  double threshold = 0.10;
  bool consistent = false;           // spread <= threshold
};

// Per-size-scale stiffness-factor fits plus the relative spread between the
// group slopes. Needs at least two scale groups.
ScaleReport scale_invariance_report(const std::vector<MeasurementSeries>& datasets,
                                    double spread_threshold = 0.10);

}  // namespace kiri
