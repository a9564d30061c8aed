#include "qlayer/config.hpp"

#include <fstream>
#include <sstream>

#include "qlayer/errors.hpp"

namespace qlayer {

namespace {

std::string trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, int ln) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + v + "'", ln);
  }
}

long long parse_int(const std::string& v, int ln) {
  try {
    size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ParseError("expected an integer, got '" + v + "'", ln);
  }
}

uint64_t parse_uint(const std::string& v, int ln) {
  try {
    size_t pos = 0;
    const unsigned long long i = std::stoull(v, &pos);
    if (pos != v.size() || (!v.empty() && v[0] == '-'))
      throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ParseError("expected a nonnegative integer, got '" + v + "'", ln);
  }
}

bool parse_bool(const std::string& v, int ln) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ParseError("expected true or false, got '" + v + "'", ln);
}

LateralBc parse_bc(const std::string& v, int ln) {
  if (v == "dirichlet") return LateralBc::dirichlet;
  if (v == "neumann") return LateralBc::neumann;
  throw ParseError("lateral_bc must be dirichlet or neumann, got '" + v + "'",
                   ln);
}

void apply_key(RunConfig& c, const std::string& section,
               const std::string& key, const std::string& val, int ln) {
  if (section == "surface") {
    if (key == "type")
      c.surface.type = val;
    else if (key == "amplitude")
      c.surface.amplitude = parse_double(val, ln);
    else if (key == "width")
      c.surface.width = parse_double(val, ln);
    else
      throw ParseError("unknown key '" + key + "' in [surface]", ln);
  } else if (section == "layer") {
    if (key == "half_thickness")
      c.half_thickness = parse_double(val, ln);
    else
      throw ParseError("unknown key '" + key + "' in [layer]", ln);
  } else if (section == "certificate") {
    CertificateConfig& cc = c.certificate;
    if (key == "r0")
      cc.r0 = parse_double(val, ln);
    else if (key == "sigma_k_min")
      cc.sigma_k_min = static_cast<int>(parse_int(val, ln));
    else if (key == "sigma_k_max")
      cc.sigma_k_max = static_cast<int>(parse_int(val, ln));
    else if (key == "order")
      cc.order = static_cast<int>(parse_int(val, ln));
    else if (key == "panels_r")
      cc.panels_r = static_cast<int>(parse_int(val, ln));
    else if (key == "panels_u")
      cc.panels_u = static_cast<int>(parse_int(val, ln));
    else if (key == "delta_min")
      cc.delta_min = parse_double(val, ln);
    else if (key == "localizer.r_frac")
      cc.localizer_r_frac = parse_double(val, ln);
    else if (key == "localizer.plat_r")
      cc.localizer_plat_r = parse_double(val, ln);
    else if (key == "localizer.a_frac")
      cc.localizer_a_frac = parse_double(val, ln);
    else if (key == "localizer.plat_u")
      cc.localizer_plat_u = parse_double(val, ln);
    else
      throw ParseError("unknown key '" + key + "' in [certificate]", ln);
  } else if (section == "solver") {
    SolveConfig& sc = c.solver;
    if (key == "R")
      sc.grid.R = parse_double(val, ln);
    else if (key == "n")
      sc.grid.n = static_cast<int>(parse_int(val, ln));
    else if (key == "nu")
      sc.grid.nu = static_cast<int>(parse_int(val, ln));
    else if (key == "lateral_bc")
      sc.bc = parse_bc(val, ln);
    else if (key == "k")
      sc.k = static_cast<int>(parse_int(val, ln));
    else if (key == "shift_frac")
      sc.shift_frac = parse_double(val, ln);
    else if (key == "tol")
      sc.tol = parse_double(val, ln);
    else if (key == "cg_rtol")
      sc.cg_rtol = parse_double(val, ln);
    else if (key == "max_restarts")
      sc.max_restarts = static_cast<int>(parse_int(val, ln));
    else if (key == "seed")
      sc.seed = parse_uint(val, ln);
    else if (key == "force_grid")
      sc.force_grid = parse_bool(val, ln);
    else if (key == "dump_matrix")
      sc.dump_matrix = val;
    else
      throw ParseError("unknown key '" + key + "' in [solver]", ln);
  } else if (section == "output") {
    if (key == "json")
      c.output.json = val;
    else if (key == "csv")
      c.output.csv = val;
    else
      throw ParseError("unknown key '" + key + "' in [output]", ln);
  } else {
    throw ParseError("key outside of any section", ln);
  }
}

RunConfig parse_ini(std::istream& in) {
  RunConfig c;
  std::string raw, section;
  int ln = 0;
  while (std::getline(in, raw)) {
    ++ln;
    const size_t cpos = raw.find_first_of("#;");
    std::string s = trim(cpos == std::string::npos ? raw : raw.substr(0, cpos));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw ParseError("unterminated section header", ln);
      section = trim(s.substr(1, s.size() - 2));
      if (section != "surface" && section != "layer" &&
          section != "certificate" && section != "solver" &&
          section != "output")
        throw ParseError("unknown section [" + section + "]", ln);
      continue;
    }
    const size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected key = value", ln);
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", ln);
    apply_key(c, section, key, val, ln);
  }
  return c;
}

}  // namespace

void validate(const RunConfig& c) {
  if (c.surface.type != "bump" && c.surface.type != "plane")
    throw InvalidParams("surface type must be bump or plane, got '" +
                        c.surface.type + "'");
  if (c.surface.type == "bump" && !(c.surface.width > 0.0))
    throw InvalidParams("bump width must be positive");
  if (!(c.half_thickness > 0.0))
    throw InvalidParams("half_thickness must be positive");
  const CertificateConfig& cc = c.certificate;
  if (!(cc.r0 > 0.0)) throw InvalidParams("certificate r0 must be positive");
  if (cc.sigma_k_min > cc.sigma_k_max)
    throw InvalidParams("sigma_k_min must not exceed sigma_k_max");
  if (cc.order < 2 || cc.panels_r < 1 || cc.panels_u < 1)
    throw InvalidParams("quadrature order/panels too small");
  if (!(cc.localizer_r_frac > 0.0))
    throw InvalidParams("localizer r_frac must be positive");
  if (!(cc.localizer_plat_r > 0.0 && cc.localizer_plat_r < 1.0) ||
      !(cc.localizer_plat_u > 0.0 && cc.localizer_plat_u < 1.0))
    throw InvalidParams("localizer plateau fractions must lie in (0, 1)");
  if (!(cc.localizer_a_frac > 0.0 && cc.localizer_a_frac < 1.0))
    throw InvalidParams("localizer a_frac must lie in (0, 1)");
  if (!(cc.delta_min >= 0.0))
    throw InvalidParams("delta_min must be nonnegative");
  const SolveConfig& sc = c.solver;
  if (!(sc.grid.R > 0.0) || sc.grid.n < 1 || sc.grid.nu < 1)
    throw InvalidParams("solver grid needs R > 0, n >= 1, nu >= 1");
  if (sc.k < 1) throw InvalidParams("solver k must be at least 1");
  if (!(sc.shift_frac > 0.0 && sc.shift_frac < 1.0))
    throw InvalidParams("shift_frac must lie in (0, 1)");
  if (!(sc.tol > 0.0) || !(sc.cg_rtol > 0.0))
    throw InvalidParams("solver tolerances must be positive");
  if (sc.max_restarts < 1)
    throw InvalidParams("max_restarts must be at least 1");
}

std::unique_ptr<RadialSurface> make_surface(const SurfaceConfig& c) {
  if (c.type == "plane") return std::make_unique<Plane>();
  if (c.type == "bump")
    return std::make_unique<CompactBump>(c.amplitude, c.width);
  throw InvalidParams("surface type must be bump or plane, got '" + c.type +
                      "'");
}

void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json{
      {"surface",
       {{"type", c.surface.type},
        {"amplitude", c.surface.amplitude},
        {"width", c.surface.width}}},
      {"layer", {{"half_thickness", c.half_thickness}}},
      {"certificate",
       {{"r0", c.certificate.r0},
        {"sigma_k_min", c.certificate.sigma_k_min},
        {"sigma_k_max", c.certificate.sigma_k_max},
        {"order", c.certificate.order},
        {"panels_r", c.certificate.panels_r},
        {"panels_u", c.certificate.panels_u},
        {"delta_min", c.certificate.delta_min},
        {"localizer",
         {{"r_frac", c.certificate.localizer_r_frac},
          {"plat_r", c.certificate.localizer_plat_r},
          {"a_frac", c.certificate.localizer_a_frac},
          {"plat_u", c.certificate.localizer_plat_u}}}}},
      {"solver",
       {{"R", c.solver.grid.R},
        {"n", c.solver.grid.n},
        {"nu", c.solver.grid.nu},
        {"lateral_bc",
         c.solver.bc == LateralBc::dirichlet ? "dirichlet" : "neumann"},
        {"k", c.solver.k},
        {"shift_frac", c.solver.shift_frac},
        {"tol", c.solver.tol},
        {"cg_rtol", c.solver.cg_rtol},
        {"max_restarts", c.solver.max_restarts},
        {"seed", c.solver.seed},
        {"force_grid", c.solver.force_grid},
        {"dump_matrix", c.solver.dump_matrix}}},
      {"output", {{"json", c.output.json}, {"csv", c.output.csv}}}};
}

void from_json(const nlohmann::json& j, RunConfig& c) {
  const auto& s = j.at("surface");
  s.at("type").get_to(c.surface.type);
  s.at("amplitude").get_to(c.surface.amplitude);
  s.at("width").get_to(c.surface.width);
  j.at("layer").at("half_thickness").get_to(c.half_thickness);
  const auto& ce = j.at("certificate");
  ce.at("r0").get_to(c.certificate.r0);
  ce.at("sigma_k_min").get_to(c.certificate.sigma_k_min);
  ce.at("sigma_k_max").get_to(c.certificate.sigma_k_max);
  ce.at("order").get_to(c.certificate.order);
  ce.at("panels_r").get_to(c.certificate.panels_r);
  ce.at("panels_u").get_to(c.certificate.panels_u);
  ce.at("delta_min").get_to(c.certificate.delta_min);
  const auto& lz = ce.at("localizer");
  lz.at("r_frac").get_to(c.certificate.localizer_r_frac);
  lz.at("plat_r").get_to(c.certificate.localizer_plat_r);
  lz.at("a_frac").get_to(c.certificate.localizer_a_frac);
  lz.at("plat_u").get_to(c.certificate.localizer_plat_u);
  const auto& so = j.at("solver");
  so.at("R").get_to(c.solver.grid.R);
  so.at("n").get_to(c.solver.grid.n);
  so.at("nu").get_to(c.solver.grid.nu);
  c.solver.bc = so.at("lateral_bc").get<std::string>() == "neumann"
                    ? LateralBc::neumann
                    : LateralBc::dirichlet;
  so.at("k").get_to(c.solver.k);
  so.at("shift_frac").get_to(c.solver.shift_frac);
  so.at("tol").get_to(c.solver.tol);
  so.at("cg_rtol").get_to(c.solver.cg_rtol);
  so.at("max_restarts").get_to(c.solver.max_restarts);
  so.at("seed").get_to(c.solver.seed);
  so.at("force_grid").get_to(c.solver.force_grid);
  so.at("dump_matrix").get_to(c.solver.dump_matrix);
  const auto& o = j.at("output");
  o.at("json").get_to(c.output.json);
  o.at("csv").get_to(c.output.csv);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const size_t first = text.find_first_not_of(" \t\r\n");
  const bool json_like =
      (path.size() > 5 && path.substr(path.size() - 5) == ".json") ||
      (first != std::string::npos && text[first] == '{');
  RunConfig c;
  if (json_like) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad json: ") + e.what());
    }
    try {
      if (j.at("schema").get<std::string>() != "qlayer-report/1")
        throw ParseError("unrecognized report schema");
      c = j.at("config").get<RunConfig>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("not a qlayer report: ") + e.what());
    }
  } else {
    std::istringstream is(text);
    c = parse_ini(is);
  }
  validate(c);
  return c;
}

}  // namespace qlayer
