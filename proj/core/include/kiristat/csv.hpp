#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kiristat/fitting.hpp"
#include "kiristat/statics.hpp"

// Bit-exact data formats. Curve tables print every value with a fixed nine
// fractional digits so outputs can be diffed byte-for-byte while resolving
// below the 1e-9 solver tolerance; measurement files print shortest
// round-trip decimals so read-back reproduces the doubles exactly. Parsing
// and printing always use '.' as the decimal separator, independent of the
// process locale.

namespace kiri {

inline constexpr char kCurveCsvHeader[] = "delta_x_mm,delta_y_mm,f_k_n,f_b_n,f_a_n,torque_nmm";

// Fixed nine fractional digits, e.g. 0 -> "0.000000000".
std::string format_fixed9(double value);

// Shortest decimal that parses back to the same double, e.g. 10 -> "10".
std::string format_exact(double value);

// Curve CSV: header then one row per state, in the order given.
void write_curve_csv(std::ostream& out, const std::vector<ActuationState>& states);

// Measurement CSV schema: `delta_x_mm,force_n,trial_id[,e_mpa,size_scale]`
// after optional `#` comment lines. Recognized comments:
//   # source=simulated   marks machine-generated data (sticky for the file)
//   # series             starts a new series at the next data row
//   # label=<text>       label for the next series
//   # shore=<text>       durometer tag for the next series (5-column files)
// A new series also starts whenever trial_id changes between rows.
struct MeasurementFile {
  std::vector<MeasurementSeries> series;
  bool simulated = false;
};

MeasurementFile read_measurement_csv(std::istream& in, const std::string& source_name);
MeasurementFile load_measurement_file(const std::string& path);

// Writes the 5-column schema when series carry a material, 3-column
// otherwise; mixing the two in one file is rejected. Reading the output
// back yields identical samples and metadata.
void write_measurement_csv(std::ostream& out, const MeasurementFile& file);

}  // namespace kiri
