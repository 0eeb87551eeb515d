#include "kiristat/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace kiri {

namespace {

std::string series_name(const MeasurementSeries& s, std::size_t index) {
  std::ostringstream out;
  if (!s.label.empty()) {
    out << "'" << s.label << "'";
  } else {
    out << "series " << index;
  }
  out << " (trial " << s.trial_id << ")";
  return out.str();
}

// Through-origin least squares over (x, y) points. Points are sorted before
// accumulation so the result does not depend on input order.
FitResult fit_through_origin(std::vector<Sample> points) {
  if (points.size() < 2)
    throw ModelError(ErrorKind::singular_fit, "need at least 2 samples to fit");
  for (const Sample& p : points) {
    if (!std::isfinite(p.displacement_mm) || !std::isfinite(p.force_n))
      throw ModelError(ErrorKind::domain, "samples must be finite");
  }
  std::sort(points.begin(), points.end(), [](const Sample& a, const Sample& b) {
    return a.displacement_mm != b.displacement_mm ? a.displacement_mm < b.displacement_mm
                                                  : a.force_n < b.force_n;
  });

  double sum_xx = 0.0;
  double sum_xy = 0.0;
  double sum_y = 0.0;
  double sum_x = 0.0;
  for (const Sample& p : points) {
    sum_xx += p.displacement_mm * p.displacement_mm;
    sum_xy += p.displacement_mm * p.force_n;
    sum_y += p.force_n;
    sum_x += p.displacement_mm;
  }
  if (sum_xx == 0.0)
    throw ModelError(ErrorKind::singular_fit, "all displacements are zero: slope is undefined");

  FitResult fit;
  fit.constant = sum_xy / sum_xx;
  fit.n_points = points.size();

  const double n = static_cast<double>(points.size());
  const double mean_y = sum_y / n;
  double ss_res = 0.0;
  double ss_tot = 0.0;
  double max_abs = 0.0;
  for (const Sample& p : points) {
    const double r = p.force_n - fit.constant * p.displacement_mm;
    ss_res += r * r;
    const double d = p.force_n - mean_y;
    ss_tot += d * d;
    max_abs = std::max(max_abs, std::fabs(r));
  }
  fit.max_abs_residual_n = max_abs;
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);

  // Diagnostic unconstrained fit.
  const double sxx = sum_xx - sum_x * sum_x / n;
  if (sxx > 0.0) {
    fit.free_slope = (sum_xy - sum_x * sum_y / n) / sxx;
    fit.free_intercept_n = mean_y - fit.free_slope * sum_x / n;
  } else {
    fit.free_slope = 0.0;
    fit.free_intercept_n = mean_y;
  }
  return fit;
}

}  // namespace

void MeasurementSeries::validate() const {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Sample& s = samples[i];
    if (!std::isfinite(s.displacement_mm) || s.displacement_mm < 0.0)
      throw ModelError(ErrorKind::domain, "displacements must be finite and >= 0");
    if (!std::isfinite(s.force_n))
      throw ModelError(ErrorKind::domain, "forces must be finite");
    if (i > 0 && !(samples[i - 1].displacement_mm < s.displacement_mm))
      throw ModelError(ErrorKind::domain,
                       "displacements must be strictly increasing within a trial");
  }
  if (material) material->validate();
  if (!(std::isfinite(size_scale) && size_scale > 0.0))
    throw ModelError(ErrorKind::domain, "size_scale must be finite and > 0");
}

MeasurementSeries average_trials(const std::vector<MeasurementSeries>& trials) {
  if (trials.empty())
    throw ModelError(ErrorKind::alignment, "no trials to average");
  const MeasurementSeries& ref = trials.front();
  ref.validate();

  constexpr double kGridToleranceMm = 1e-6;
  for (std::size_t t = 1; t < trials.size(); ++t) {
    const MeasurementSeries& s = trials[t];
    s.validate();
    if (s.samples.size() != ref.samples.size()) {
      std::ostringstream msg;
      msg << series_name(s, t) << " has " << s.samples.size() << " samples, expected "
          << ref.samples.size();
      throw ModelError(ErrorKind::alignment, msg.str());
    }
    for (std::size_t i = 0; i < ref.samples.size(); ++i) {
      if (std::fabs(s.samples[i].displacement_mm - ref.samples[i].displacement_mm) >
          kGridToleranceMm) {
        std::ostringstream msg;
        msg << series_name(s, t) << ": displacement[" << i << "] = "
            << s.samples[i].displacement_mm << " mm does not match "
            << ref.samples[i].displacement_mm << " mm";
        throw ModelError(ErrorKind::alignment, msg.str());
      }
    }
    if (s.material.has_value() != ref.material.has_value() ||
        (s.material && (s.material->youngs_modulus_mpa != ref.material->youngs_modulus_mpa ||
                        s.material->shore_label != ref.material->shore_label))) {
      throw ModelError(ErrorKind::alignment,
                       series_name(s, t) + ": material does not match the first trial");
    }
    if (s.size_scale != ref.size_scale) {
      std::ostringstream msg;
      msg << series_name(s, t) << ": size_scale " << s.size_scale << " does not match "
          << ref.size_scale;
      throw ModelError(ErrorKind::alignment, msg.str());
    }
  }

  MeasurementSeries mean = ref;
  mean.trial_id = kAveragedTrialId;
  const double n = static_cast<double>(trials.size());
  for (std::size_t i = 0; i < mean.samples.size(); ++i) {
    double sum = 0.0;
    for (const MeasurementSeries& s : trials) sum += s.samples[i].force_n;
    mean.samples[i].force_n = sum / n;
  }
  return mean;
}

FitResult fit_spring_constant(const MeasurementSeries& series) {
  return fit_through_origin(series.samples);
}

FitResult fit_kirigami_stiffness_factor(const std::vector<MeasurementSeries>& datasets) {
  if (datasets.empty())
    throw ModelError(ErrorKind::metadata, "no measurement series given");

  std::vector<Sample> pooled;
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    const MeasurementSeries& s = datasets[i];
    if (!s.material) {
      throw ModelError(ErrorKind::metadata,
                       series_name(s, i) + " has no material modulus; cannot pool E*dx points");
    }
    s.material->validate();
    const double modulus = s.material->youngs_modulus_mpa;
    for (const Sample& p : s.samples)
      pooled.push_back({modulus * p.displacement_mm, p.force_n});
  }
  return fit_through_origin(std::move(pooled));
}

ScaleReport scale_invariance_report(const std::vector<MeasurementSeries>& datasets,
                                    double spread_threshold) {
  if (!(std::isfinite(spread_threshold) && spread_threshold > 0.0))
    throw ModelError(ErrorKind::domain, "spread threshold must be finite and > 0");

  std::map<double, std::vector<MeasurementSeries>> by_scale;
  for (const MeasurementSeries& s : datasets) by_scale[s.size_scale].push_back(s);
  if (by_scale.size() < 2)
    throw ModelError(ErrorKind::grouping,
                     "need at least 2 size-scale groups, got " + std::to_string(by_scale.size()));

  ScaleReport report;
  report.threshold = spread_threshold;
  double min_slope = std::numeric_limits<double>::infinity();
  double max_slope = -std::numeric_limits<double>::infinity();
  for (const auto& [scale, group] : by_scale) {
    ScaleGroup g;
    g.size_scale = scale;
    g.fit = fit_kirigami_stiffness_factor(group);
    min_slope = std::min(min_slope, g.fit.constant);
    max_slope = std::max(max_slope, g.fit.constant);
    report.groups.push_back(std::move(g));
  }
  report.max_relative_spread =
      min_slope > 0.0 ? (max_slope - min_slope) / min_slope
                      : std::numeric_limits<double>::infinity();
  report.consistent = report.max_relative_spread <= spread_threshold;
  return report;
}

}  // namespace kiri
