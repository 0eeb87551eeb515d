#include "kiristat/statics.hpp"

#include <cmath>
#include <string>

namespace kiri {

namespace {

bool finite_positive(double v) noexcept { return std::isfinite(v) && v > 0.0; }

[[noreturn]] void throw_domain(const std::string& message) {
  throw ModelError(ErrorKind::domain, message);
}

// sqrt(h^2 - a^2) in factored form: exact zero at the boundary instead of a
// rounded negative under the root.
double leg_length(double hypotenuse, double attachment) noexcept {
  const double head = hypotenuse - attachment;
  return std::sqrt((head > 0.0 ? head : 0.0) * (hypotenuse + attachment));
}

}  // namespace

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::degenerate_geometry: return "degenerate_geometry";
    case ErrorKind::out_of_range: return "out_of_range";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::alignment: return "alignment";
    case ErrorKind::metadata: return "metadata";
    case ErrorKind::singular_fit: return "singular_fit";
    case ErrorKind::grouping: return "grouping";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::singular: return "singular";
    case ErrorKind::parse: return "parse";
    case ErrorKind::usage: return "usage";
  }
  return "unknown";
}

void UtensilGeometry::validate() const {
  if (!finite_positive(applied_moment_arm_mm))
    throw_domain("applied_moment_arm_mm must be finite and > 0");
  if (!finite_positive(kirigami_hypotenuse_mm))
    throw_domain("kirigami_hypotenuse_mm must be finite and > 0");
  if (!finite_positive(band_hypotenuse_mm))
    throw_domain("band_hypotenuse_mm must be finite and > 0");
  if (!finite_positive(kirigami_offset_mm))
    throw_domain("kirigami_offset_mm must be finite and > 0");
  if (!(std::isfinite(band_offset_mm) && band_offset_mm >= 0.0))
    throw_domain("band_offset_mm must be finite and >= 0");
  if (kirigami_offset_mm >= kirigami_hypotenuse_mm)
    throw ModelError(ErrorKind::degenerate_geometry,
                     "kirigami triangle degenerate at rest: offset >= hypotenuse");
  // Band travel at rest must lie inside the band's own range.
  if (hypotenuse_ratio() * kirigami_offset_mm - band_offset_mm < -band_hypotenuse_mm)
    throw_domain("band offset places the rest state outside the band's travel");
}

void MaterialSpec::validate() const {
  if (!finite_positive(youngs_modulus_mpa))
    throw_domain("youngs_modulus_mpa must be finite and > 0");
}

void KirigamiSpringModel::validate() const {
  if (!finite_positive(stiffness_factor_mm))
    throw_domain("stiffness_factor_mm must be finite and > 0");
}

void BandSpec::validate() const {
  if (!(std::isfinite(stiffness_n_per_mm) && stiffness_n_per_mm >= 0.0))
    throw_domain("band stiffness_n_per_mm must be finite and >= 0");
}

double kirigami_force(const KirigamiSpringModel& spring, const MaterialSpec& material,
                      double delta_x_mm) {
  spring.validate();
  material.validate();
  if (!(std::isfinite(delta_x_mm) && delta_x_mm >= 0.0))
    throw_domain("delta_x_mm must be >= 0: compression is outside the model");
  return spring.stiffness_factor_mm * material.youngs_modulus_mpa * delta_x_mm;
}

double band_displacement(const UtensilGeometry& geom, double delta_x_mm) {
  if (!std::isfinite(delta_x_mm)) throw_domain("delta_x_mm must be finite");
  const double travel = delta_x_mm + geom.kirigami_offset_mm;
  if (travel < 0.0) throw_domain("delta_x_mm + kirigami_offset_mm must be >= 0");
  if (travel > geom.kirigami_hypotenuse_mm)
    throw_domain("kirigami triangle collapsed: delta_x + offset exceeds the hypotenuse");
  return geom.hypotenuse_ratio() * travel - geom.band_offset_mm;
}

ActuationState evaluate_state(const UtensilGeometry& geom, const KirigamiSpringModel& spring,
                              const MaterialSpec& material, const BandSpec& band,
                              double delta_x_mm) {
  geom.validate();
  band.validate();

  const double mesh_travel = delta_x_mm + geom.kirigami_offset_mm;  // dx + b
  const double band_travel = geom.hypotenuse_ratio() * mesh_travel;  // dy + c

  ActuationState state;
  state.delta_x_mm = delta_x_mm;
  state.kirigami_force_n = kirigami_force(spring, material, delta_x_mm);
  if (mesh_travel > geom.kirigami_hypotenuse_mm)
    throw_domain("kirigami triangle collapsed: delta_x + offset exceeds the hypotenuse");

  state.delta_y_mm = band_travel - geom.band_offset_mm;
  state.kirigami_arm_mm = leg_length(geom.kirigami_hypotenuse_mm, mesh_travel);
  state.band_arm_mm = leg_length(geom.band_hypotenuse_mm, band_travel);
  state.band_force_n = band.present ? band.stiffness_n_per_mm * state.delta_y_mm : 0.0;
  state.pivot_torque_nmm =
      state.kirigami_force_n * state.kirigami_arm_mm + state.band_force_n * state.band_arm_mm;
  state.applied_force_n = state.pivot_torque_nmm / geom.applied_moment_arm_mm;
  state.negative_force_warning = state.applied_force_n < 0.0;
  return state;
}

OperatingRange operating_range(const UtensilGeometry& geom) {
  const double h_k = geom.kirigami_hypotenuse_mm;
  const double b = geom.kirigami_offset_mm;
  if (!finite_positive(h_k)) throw_domain("kirigami_hypotenuse_mm must be finite and > 0");
  if (!(std::isfinite(b) && b >= 0.0)) throw_domain("kirigami_offset_mm must be finite and >= 0");
  if (b >= h_k)
    throw ModelError(ErrorKind::degenerate_geometry,
                     "kirigami triangle degenerate: offset >= hypotenuse");

  // Argmax of x * sqrt(H_K^2 - (x+b)^2), where the kirigami moment peaks.
  const double x_peak = (-3.0 * b + std::sqrt(b * b + 8.0 * h_k * h_k)) / 4.0;
  const double x_domain = h_k - b;

  OperatingRange range;
  if (x_peak <= x_domain) {
    range.delta_x_max_mm = x_peak;
    range.limited_by = RangeLimit::peak;
  } else {
    range.delta_x_max_mm = x_domain;
    range.limited_by = RangeLimit::domain;
  }
  return range;
}

InversionResult invert_applied_force(const UtensilGeometry& geom,
                                     const KirigamiSpringModel& spring,
                                     const MaterialSpec& material, const BandSpec& band,
                                     double target_force_n) {
  if (!std::isfinite(target_force_n)) throw_domain("target force must be finite");

  const OperatingRange range = operating_range(geom);
  const auto applied_force = [&](double delta_x) {
    return evaluate_state(geom, spring, material, band, delta_x).applied_force_n;
  };

  const double force_rest = applied_force(0.0);
  const double force_peak = applied_force(range.delta_x_max_mm);

  if (target_force_n < force_rest) {
    ModelError err(ErrorKind::out_of_range,
                   "target force below the rest-state force " + std::to_string(force_rest) + " N");
    err.limit_value = force_rest;
    err.limit_name = "rest_f_a_n";
    throw err;
  }
  if (target_force_n > force_peak) {
    ModelError err(ErrorKind::out_of_range,
                   "target force above the peak " + std::to_string(force_peak) +
                       " N attainable on the operating range");
    err.limit_value = force_peak;
    err.limit_name = "peak_f_a_n";
    throw err;
  }
  if (target_force_n == force_rest) return {0.0, 0, 0.0};
  if (target_force_n == force_peak) return {range.delta_x_max_mm, 0, 0.0};

  constexpr int kMaxIterations = 200;
  constexpr double kToleranceMm = 1e-9;

  double lo = 0.0;
  double hi = range.delta_x_max_mm;
  int iterations = 0;
  while (hi - lo > 1e-12 && iterations < kMaxIterations) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval at floating-point resolution
    if (applied_force(mid) < target_force_n) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++iterations;
  }
  if (hi - lo > kToleranceMm)
    throw ModelError(ErrorKind::convergence, "bisection failed to reach 1e-9 mm in 200 iterations");

  const double delta_x = 0.5 * (lo + hi);
  return {delta_x, iterations, applied_force(delta_x) - target_force_n};
}

double pivot_torque(const UtensilGeometry& geom, const KirigamiSpringModel& spring,
                    const MaterialSpec& material, const BandSpec& band, double delta_x_mm) {
  return evaluate_state(geom, spring, material, band, delta_x_mm).pivot_torque_nmm;
}

}  // namespace kiri
