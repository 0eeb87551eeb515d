#include "kiristat/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace kiri {

namespace {

using nlohmann::json;

[[noreturn]] void throw_parse(const std::string& message) {
  throw ModelError(ErrorKind::parse, message);
}

const json& get_object(const json& parent, const char* key) {
  if (!parent.contains(key)) throw_parse(std::string("config: missing \"") + key + "\" block");
  const json& value = parent.at(key);
  if (!value.is_object()) throw_parse(std::string("config: \"") + key + "\" must be an object");
  return value;
}

double get_number(const json& obj, const char* block, const char* key) {
  if (!obj.contains(key))
    throw_parse(std::string("config: ") + block + " is missing \"" + key + "\"");
  const json& value = obj.at(key);
  if (!value.is_number())
    throw_parse(std::string("config: ") + block + "." + key + " must be a number");
  return value.get<double>();
}

void reject_unknown_keys(const json& obj, const char* block,
                         std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) known = true;
    if (!known)
      throw_parse(std::string("config: unknown key \"") + item.key() + "\" in " + block);
  }
}

void check_units(const json& root) {
  if (!root.contains("units"))
    throw_parse("config: missing \"units\" block; units are fixed to mm/N/MPa");
  const json& units = root.at("units");
  if (!units.is_object()) throw_parse("config: \"units\" must be an object");
  reject_unknown_keys(units, "units", {"length", "force", "modulus"});
  const json expected = {{"length", "mm"}, {"force", "N"}, {"modulus", "MPa"}};
  for (const auto& item : expected.items()) {
    if (!units.contains(item.key()) || units.at(item.key()) != item.value())
      throw_parse("config: unit declarations other than mm/N/MPa are rejected, not converted");
  }
}

}  // namespace

void ToolConfig::validate() const {
  geometry.validate();
  spring.validate();
  material.validate();
  band.validate();
}

ToolConfig table1_preset() {
  ToolConfig config;
  config.geometry.applied_moment_arm_mm = 69.6;
  config.geometry.kirigami_hypotenuse_mm = 59.2;
  config.geometry.band_hypotenuse_mm = 22.5;
  config.geometry.kirigami_offset_mm = 20.7;
  config.geometry.band_offset_mm = 7.8;
  config.spring.stiffness_factor_mm = 4.55;
  config.material.youngs_modulus_mpa = 14.9;
  config.material.shore_label = "";  // the durometer grade behind E = 14.9 MPa is not recorded
  config.band.stiffness_n_per_mm = 2.18;
  config.band.present = true;
  return config;
}

ToolConfig parse_config_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw_parse(std::string("config: ") + e.what());
  }
  if (!root.is_object()) throw_parse("config: document must be a JSON object");

  reject_unknown_keys(root, "config", {"units", "geometry", "spring", "material", "band"});
  check_units(root);

  ToolConfig config;

  const json& geometry = get_object(root, "geometry");
  reject_unknown_keys(geometry, "geometry",
                      {"applied_moment_arm_mm", "kirigami_hypotenuse_mm", "band_hypotenuse_mm",
                       "kirigami_offset_mm", "band_offset_mm"});
  config.geometry.applied_moment_arm_mm = get_number(geometry, "geometry", "applied_moment_arm_mm");
  config.geometry.kirigami_hypotenuse_mm =
      get_number(geometry, "geometry", "kirigami_hypotenuse_mm");
  config.geometry.band_hypotenuse_mm = get_number(geometry, "geometry", "band_hypotenuse_mm");
  config.geometry.kirigami_offset_mm = get_number(geometry, "geometry", "kirigami_offset_mm");
  config.geometry.band_offset_mm = get_number(geometry, "geometry", "band_offset_mm");

  const json& spring = get_object(root, "spring");
  reject_unknown_keys(spring, "spring", {"stiffness_factor_mm"});
  config.spring.stiffness_factor_mm = get_number(spring, "spring", "stiffness_factor_mm");

  const json& material = get_object(root, "material");
  reject_unknown_keys(material, "material", {"youngs_modulus_mpa", "shore"});
  config.material.youngs_modulus_mpa = get_number(material, "material", "youngs_modulus_mpa");
  if (material.contains("shore")) {
    if (!material.at("shore").is_string())
      throw_parse("config: material.shore must be a string");
    config.material.shore_label = material.at("shore").get<std::string>();
  }

  const json& band = get_object(root, "band");
  reject_unknown_keys(band, "band", {"stiffness_n_per_mm", "present"});
  config.band.stiffness_n_per_mm = get_number(band, "band", "stiffness_n_per_mm");
  if (!band.contains("present") || !band.at("present").is_boolean())
    throw_parse("config: band.present must be a boolean");
  config.band.present = band.at("present").get<bool>();

  config.validate();
  return config;
}

ToolConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError(ErrorKind::usage, "cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_json(buffer.str());
}

}  // namespace kiri
