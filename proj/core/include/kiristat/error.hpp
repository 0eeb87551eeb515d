#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace kiri {

// Failure taxonomy shared by every module. The CLI maps parse/usage to
// exit status 2 and everything else to exit status 3.
enum class ErrorKind {
  domain,               // input outside the model's validity window
  degenerate_geometry,  // triangle collapsed at rest (offset >= hypotenuse)
  out_of_range,         // requested force not attainable on the operating range
  convergence,          // iterative solve failed to reach tolerance
  alignment,            // trial grids/metadata do not match
  metadata,             // required series metadata missing or refused
  singular_fit,         // regression has no information (e.g. all x = 0)
  grouping,             // too few groups for a grouped report
  infeasible,           // design target cannot be met with a positive parameter
  singular,             // design system has no leverage at the target state
  parse,                // malformed file content
  usage,                // bad command invocation
};

const char* to_string(ErrorKind kind) noexcept;

class ModelError : public std::runtime_error {
 public:
  ModelError(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Optional payloads attached by specific throw sites.
  std::optional<double> limit_value;       // attainable bound (out_of_range)
  const char* limit_name = nullptr;        // report key for limit_value, e.g. "peak_f_a_n"
  std::optional<double> phase;             // trajectory phase at fault
  std::optional<long> line;                // 1-based line number (parse)

 private:
  ErrorKind kind_;
};

}  // namespace kiri
