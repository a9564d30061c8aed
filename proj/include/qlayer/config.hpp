#pragma once
#include <memory>
#include <string>

#include "json.hpp"
#include "qlayer/certificate.hpp"
#include "qlayer/solver.hpp"

namespace qlayer {

struct SurfaceConfig {
  std::string type = "bump";  // bump | plane
  double amplitude = 12.0;
  double width = 10.0;
};

struct OutputConfig {
  std::string json;  // report path, empty disables
  std::string csv;   // certificate sweep table path, empty disables
};

struct RunConfig {
  SurfaceConfig surface;
  double half_thickness = 0.4;
  CertificateConfig certificate;
  SolveConfig solver;
  OutputConfig output;
};

void validate(const RunConfig& c);
std::unique_ptr<RadialSurface> make_surface(const SurfaceConfig& c);

// ADL hooks; reports embed the fully resolved configuration through these
void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

// strict INI: [section] headers, key = value, '#' or ';' comments. Unknown
// sections or keys and malformed values raise ParseError with their line.
// A .json path (or content starting with '{') must be a report written by
// this tool; the embedded configuration is recovered exactly as it ran.
RunConfig load_config(const std::string& path);

}  // namespace qlayer
