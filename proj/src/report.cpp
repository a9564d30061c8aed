#include "qlayer/report.hpp"

#include <cmath>
#include <fstream>

#include "qlayer/errors.hpp"

namespace qlayer {

namespace {
// json has no infinity; the plane's curvature radius needs a stand-in
nlohmann::json finite_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}
}  // namespace

nlohmann::json report_skeleton(const RunConfig& cfg) {
  return nlohmann::json{{"schema", kReportSchema},
                        {"generated_by", "qlayer"},
                        {"config", cfg}};
}

nlohmann::json certificate_json(const CertificateResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const SigmaRow& row : r.sweep)
    rows.push_back({{"k", row.k},
                    {"sigma", row.sigma},
                    {"x0", row.x0},
                    {"t0", row.t0},
                    {"t_min", row.t_min},
                    {"certified", row.certified}});
  nlohmann::json j{{"certified", r.certified},
                   {"certified_index", r.certified_index},
                   {"kappa1_sq", r.kappa1_sq},
                   {"total_curvature", r.tot},
                   {"B", r.B},
                   {"C", r.C},
                   {"eps_star", r.eps_star},
                   {"quad_err", r.quad_err},
                   {"cross_check", r.cross_check},
                   {"t_direct_rel_err", r.t_direct_rel_err},
                   {"rayleigh_fallback", r.rayleigh_fallback},
                   {"sweep", rows}};
  if (r.certified) {
    j["e_upper"] = r.e_upper;
    j["trial_norm_sq"] = r.trial_norm_sq;
  }
  j["validity"] = {{"half_thickness", r.validity.a},
                   {"sup_curvature", r.validity.sup_curv},
                   {"rho_m", finite_or_null(r.validity.rho_m)},
                   {"valid", r.validity.valid},
                   {"c_minus", r.validity.c_minus},
                   {"c_plus", r.validity.c_plus}};
  return j;
}

nlohmann::json solve_json(const SolveResult& r) {
  return nlohmann::json{
      {"lambda", r.lambda},
      {"residuals", r.resid},
      {"khat1_sq", r.khat1_sq},
      {"kappa1_sq", r.kappa1_sq},
      {"tau", r.tau},
      {"bound_state", !r.lambda.empty() && r.lambda[0] < r.khat1_sq},
      {"N", r.N},
      {"hl", r.hl},
      {"hu", r.hu},
      {"lateral_bc", r.bc == LateralBc::dirichlet ? "dirichlet" : "neumann"},
      {"grid_check",
       {{"hl", r.check.hl},
        {"hu", r.check.hu},
        {"rho_m", finite_or_null(r.check.rho_m)},
        {"threshold", finite_or_null(r.check.threshold)},
        {"ok", r.check.ok}}},
      {"op_applies", r.op_applies},
      {"cg_iters_total", r.cg_iters_total},
      {"restarts", r.restarts},
      {"seconds", r.seconds}};
}

void write_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

void write_certificate_csv(const CertificateResult& r,
                           const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << "k,sigma,x0,t0,t_min,certified\n";
  out.precision(17);
  for (const SigmaRow& row : r.sweep)
    out << row.k << ',' << row.sigma << ',' << row.x0 << ',' << row.t0 << ','
        << row.t_min << ',' << (row.certified ? 1 : 0) << "\n";
}

}  // namespace qlayer
