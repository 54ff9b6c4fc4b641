#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "varapps/harness.hpp"

namespace testutil {

inline std::filesystem::path source_dir() { return VARAPPS_SOURCE_DIR; }
inline std::filesystem::path data_dir() { return source_dir() / "data"; }
inline std::filesystem::path golden_dir() { return source_dir() / "tests" / "golden"; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + p.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline varapps::AppConfigSet default_config() {
  return varapps::load_config(slurp(data_dir() / "default_config.yaml"));
}

inline varapps::VariationCatalog catalog() {
  return varapps::load_catalog(slurp(data_dir() / "variations.yaml"), [](const std::string& rel) {
    return slurp(data_dir() / rel);
  });
}

inline varapps::TaskCatalog tasks() {
  return varapps::load_tasks(slurp(data_dir() / "tasks.yaml"));
}

inline varapps::RunContext context() {
  return {default_config(), catalog(), tasks()};
}

inline const std::vector<std::string>& shipped_variations() {
  static const std::vector<std::string> v = {
      "default",          "black_and_white",     "challenging_font",
      "dark_theme",       "german",              "long_descriptions",
      "misleading_descriptions", "adversarial_descriptions"};
  return v;
}

}  // namespace testutil
