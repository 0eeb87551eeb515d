#include "kiristat/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <system_error>

namespace kiri {

namespace {

[[noreturn]] void throw_parse(const std::string& source, long line, const std::string& message) {
  ModelError err(ErrorKind::parse, source + ":" + std::to_string(line) + ": " + message);
  err.line = line;
  throw err;
}

double parse_double(std::string_view field, const std::string& source, long line,
                    const char* what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw_parse(source, line, std::string("cannot parse ") + what + " from '" +
                                  std::string(field) + "'");
  return value;
}

int parse_int(std::string_view field, const std::string& source, long line, const char* what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw_parse(source, line, std::string("cannot parse ") + what + " from '" +
                                  std::string(field) + "'");
  return value;
}

std::vector<std::string_view> split_fields(std::string_view row) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = row.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(row.substr(start));
      break;
    }
    fields.push_back(row.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

std::string format_fixed9(double value) {
  if (value == 0.0) value = 0.0;  // normalize -0
  char buffer[64];
  const auto [ptr, ec] =
      std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::fixed, 9);
  if (ec != std::errc()) return "nan";
  return std::string(buffer, ptr);
}

std::string format_exact(double value) {
  if (value == 0.0) value = 0.0;
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) return "nan";
  return std::string(buffer, ptr);
}

void write_curve_csv(std::ostream& out, const std::vector<ActuationState>& states) {
  out << kCurveCsvHeader << '\n';
  for (const ActuationState& s : states) {
    out << format_fixed9(s.delta_x_mm) << ',' << format_fixed9(s.delta_y_mm) << ','
        << format_fixed9(s.kirigami_force_n) << ',' << format_fixed9(s.band_force_n) << ','
        << format_fixed9(s.applied_force_n) << ',' << format_fixed9(s.pivot_torque_nmm) << '\n';
  }
}

MeasurementFile read_measurement_csv(std::istream& in, const std::string& source_name) {
  MeasurementFile file;

  bool header_seen = false;
  bool has_material_columns = false;

  // Metadata pending for the next series.
  bool boundary_pending = false;
  std::string pending_label;
  std::string pending_shore;
  bool have_pending_label = false;
  bool have_pending_shore = false;

  MeasurementSeries current;
  bool in_series = false;
  double previous_displacement = 0.0;

  auto flush_series = [&]() {
    if (in_series) {
      file.series.push_back(std::move(current));
      current = MeasurementSeries{};
      in_series = false;
    }
  };

  std::string raw;
  long line_number = 0;
  long data_rows = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    std::string_view line = strip_cr(raw);
    if (line_number == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.remove_prefix(3);
    if (line.empty()) continue;

    if (line.front() == '#') {
      std::string_view comment = line.substr(1);
      while (!comment.empty() && comment.front() == ' ') comment.remove_prefix(1);
      if (comment == "source=simulated") {
        file.simulated = true;
      } else if (comment == "series") {
        boundary_pending = true;
      } else if (comment.rfind("label=", 0) == 0) {
        pending_label = std::string(comment.substr(6));
        have_pending_label = true;
        boundary_pending = true;
      } else if (comment.rfind("shore=", 0) == 0) {
        pending_shore = std::string(comment.substr(6));
        have_pending_shore = true;
        boundary_pending = true;
      }
      // Other comments are ignored.
      continue;
    }

    if (!header_seen) {
      if (line == "delta_x_mm,force_n,trial_id") {
        has_material_columns = false;
      } else if (line == "delta_x_mm,force_n,trial_id,e_mpa,size_scale") {
        has_material_columns = true;
      } else {
        throw_parse(source_name, line_number,
                    "expected header 'delta_x_mm,force_n,trial_id[,e_mpa,size_scale]', got '" +
                        std::string(line) + "'");
      }
      header_seen = true;
      continue;
    }

    const std::vector<std::string_view> fields = split_fields(line);
    const std::size_t expected = has_material_columns ? 5u : 3u;
    if (fields.size() != expected)
      throw_parse(source_name, line_number,
                  "expected " + std::to_string(expected) + " fields, got " +
                      std::to_string(fields.size()));

    const double displacement = parse_double(fields[0], source_name, line_number, "delta_x_mm");
    const double force = parse_double(fields[1], source_name, line_number, "force_n");
    const int trial_id = parse_int(fields[2], source_name, line_number, "trial_id");
    double modulus = 0.0;
    double size_scale = 1.0;
    if (has_material_columns) {
      modulus = parse_double(fields[3], source_name, line_number, "e_mpa");
      size_scale = parse_double(fields[4], source_name, line_number, "size_scale");
    }

    if (!std::isfinite(displacement) || displacement < 0.0)
      throw_parse(source_name, line_number, "delta_x_mm must be finite and >= 0");
    if (!std::isfinite(force))
      throw_parse(source_name, line_number, "force_n must be finite");
    if (has_material_columns) {
      if (!std::isfinite(modulus) || modulus <= 0.0)
        throw_parse(source_name, line_number, "e_mpa must be finite and > 0");
      if (!std::isfinite(size_scale) || size_scale <= 0.0)
        throw_parse(source_name, line_number, "size_scale must be finite and > 0");
    }

    const bool new_series = !in_series || boundary_pending || trial_id != current.trial_id;
    if (new_series) {
      flush_series();
      current.trial_id = trial_id;
      current.size_scale = size_scale;
      current.label = have_pending_label ? pending_label : "";
      if (has_material_columns) {
        MaterialSpec material;
        material.youngs_modulus_mpa = modulus;
        material.shore_label = have_pending_shore ? pending_shore : "";
        current.material = material;
      } else if (have_pending_shore) {
        throw_parse(source_name, line_number,
                    "shore metadata requires the e_mpa/size_scale columns");
      }
      in_series = true;
      boundary_pending = false;
      have_pending_label = false;
      have_pending_shore = false;
    } else {
      if (has_material_columns && modulus != current.material->youngs_modulus_mpa)
        throw_parse(source_name, line_number, "e_mpa changed within a trial");
      if (has_material_columns && size_scale != current.size_scale)
        throw_parse(source_name, line_number, "size_scale changed within a trial");
      if (!(displacement > previous_displacement))
        throw_parse(source_name, line_number,
                    "displacements must be strictly increasing within a trial");
    }
    current.samples.push_back({displacement, force});
    previous_displacement = displacement;
    ++data_rows;
  }

  flush_series();
  if (!header_seen) throw_parse(source_name, line_number > 0 ? line_number : 1, "missing header");
  if (data_rows == 0) throw_parse(source_name, line_number, "no data rows");

  for (const MeasurementSeries& s : file.series) s.validate();
  return file;
}

MeasurementFile load_measurement_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError(ErrorKind::usage, "cannot open measurement file: " + path);
  return read_measurement_csv(in, path);
}

void write_measurement_csv(std::ostream& out, const MeasurementFile& file) {
  if (file.series.empty())
    throw ModelError(ErrorKind::usage, "nothing to write: no measurement series");

  const bool with_material = file.series.front().material.has_value();
  for (const MeasurementSeries& s : file.series) {
    s.validate();
    if (s.material.has_value() != with_material)
      throw ModelError(ErrorKind::usage,
                       "cannot mix series with and without material in one file");
  }

  if (file.simulated) out << "# source=simulated\n";
  out << (with_material ? "delta_x_mm,force_n,trial_id,e_mpa,size_scale"
                        : "delta_x_mm,force_n,trial_id")
      << '\n';
  for (const MeasurementSeries& s : file.series) {
    out << "# series\n";
    if (!s.label.empty()) out << "# label=" << s.label << '\n';
    if (with_material && !s.material->shore_label.empty())
      out << "# shore=" << s.material->shore_label << '\n';
    for (const Sample& sample : s.samples) {
      out << format_exact(sample.displacement_mm) << ',' << format_exact(sample.force_n) << ','
          << s.trial_id;
      if (with_material)
        out << ',' << format_exact(s.material->youngs_modulus_mpa) << ','
            << format_exact(s.size_scale);
      out << '\n';
    }
  }
}

}  // namespace kiri
