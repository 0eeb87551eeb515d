#pragma once

#include <string>

#include "kiristat/statics.hpp"

namespace kiri {

// One complete model configuration. Deserialization validates every
// invariant before any computation is allowed to run.
struct ToolConfig {
  UtensilGeometry geometry;
  KirigamiSpringModel spring;
  MaterialSpec material;
  BandSpec band;

  void validate() const;
};

// Reference constant set bundled with the toolkit:
//   L_A = 69.6, K_K = 4.55, E = 14.9, H_K = 59.2, b = 20.7,
//   K_B = 2.18, H_B = 22.5, c = 7.8  (band present)
ToolConfig table1_preset();

// Parses a configuration document. The document must carry an explicit
// units block equal to {"length":"mm","force":"N","modulus":"MPa"}; any
// other unit declaration is rejected rather than converted. Unknown keys
// are rejected too.
ToolConfig parse_config_json(const std::string& text);

ToolConfig load_config_file(const std::string& path);

}  // namespace kiri
