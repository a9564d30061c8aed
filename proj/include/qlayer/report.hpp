#pragma once
#include <string>

#include "json.hpp"
#include "qlayer/certificate.hpp"
#include "qlayer/config.hpp"
#include "qlayer/solver.hpp"

namespace qlayer {

inline constexpr const char* kReportSchema = "qlayer-report/1";

// report root with the fully resolved configuration embedded; a report file
// is itself a valid --config input and reruns identically
nlohmann::json report_skeleton(const RunConfig& cfg);
nlohmann::json certificate_json(const CertificateResult& r);
nlohmann::json solve_json(const SolveResult& r);

void write_json(const nlohmann::json& j, const std::string& path);
void write_certificate_csv(const CertificateResult& r,
                           const std::string& path);

}  // namespace qlayer
