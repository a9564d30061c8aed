#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "qlayer/config.hpp"
#include "qlayer/errors.hpp"
#include "qlayer/report.hpp"

using namespace qlayer;

namespace {

struct TempFile {
  std::string path;
  TempFile(const std::string& name, const std::string& content) : path(name) {
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("ini parsing covers every section and dotted keys") {
  TempFile f("cfg_full_test.ini", R"(# layer over a compact bump
[surface]
type = bump
amplitude = 7.5     ; inline comment
width = 4

[layer]
half_thickness = 0.25

[certificate]
r0 = 4.0
sigma_k_min = 3
sigma_k_max = 9
order = 24
panels_r = 32
panels_u = 12
delta_min = 1e-6
localizer.r_frac = 0.9
localizer.plat_r = 0.4
localizer.a_frac = 0.95
localizer.plat_u = 0.5

[solver]
R = 8
n = 79
nu = 9
lateral_bc = neumann
k = 2
shift_frac = 0.85
tol = 1e-8
cg_rtol = 1e-11
max_restarts = 150
seed = 99
force_grid = true
dump_matrix = op.mtx

[output]
json = out.json
csv = sweep.csv
)");
  RunConfig c = load_config(f.path);
  CHECK(c.surface.type == "bump");
  CHECK(c.surface.amplitude == 7.5);
  CHECK(c.surface.width == 4.0);
  CHECK(c.half_thickness == 0.25);
  CHECK(c.certificate.r0 == 4.0);
  CHECK(c.certificate.sigma_k_min == 3);
  CHECK(c.certificate.sigma_k_max == 9);
  CHECK(c.certificate.order == 24);
  CHECK(c.certificate.panels_r == 32);
  CHECK(c.certificate.panels_u == 12);
  CHECK(c.certificate.delta_min == 1e-6);
  CHECK(c.certificate.localizer_r_frac == 0.9);
  CHECK(c.certificate.localizer_plat_r == 0.4);
  CHECK(c.certificate.localizer_a_frac == 0.95);
  CHECK(c.certificate.localizer_plat_u == 0.5);
  CHECK(c.solver.grid.R == 8.0);
  CHECK(c.solver.grid.n == 79);
  CHECK(c.solver.grid.nu == 9);
  CHECK(c.solver.bc == LateralBc::neumann);
  CHECK(c.solver.k == 2);
  CHECK(c.solver.shift_frac == 0.85);
  CHECK(c.solver.tol == 1e-8);
  CHECK(c.solver.cg_rtol == 1e-11);
  CHECK(c.solver.max_restarts == 150);
  CHECK(c.solver.seed == 99);
  CHECK(c.solver.force_grid);
  CHECK(c.solver.dump_matrix == "op.mtx");
  CHECK(c.output.json == "out.json");
  CHECK(c.output.csv == "sweep.csv");
}

TEST_CASE("defaults survive a minimal config") {
  TempFile f("cfg_minimal_test.ini", "[surface]\ntype = plane\n");
  RunConfig c = load_config(f.path);
  CHECK(c.surface.type == "plane");
  CHECK(c.half_thickness == 0.4);
  CHECK(c.certificate.r0 == 10.0);
  CHECK(c.solver.grid.n == 99);
  CHECK(c.solver.bc == LateralBc::dirichlet);
}

TEST_CASE("parse errors carry line numbers") {
  auto expect_line = [](const std::string& body, int line) {
    TempFile f("cfg_err_test.ini", body);
    try {
      load_config(f.path);
      FAIL("expected a ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line == line);
      CHECK(std::string(e.what()).find("line " + std::to_string(line)) !=
            std::string::npos);
    }
  };
  expect_line("[surface]\nunknown_key = 3\n", 2);
  expect_line("[nope]\n", 1);
  expect_line("stray = 1\n", 1);                    // key outside any section
  expect_line("[solver]\nn = twelve\n", 2);         // malformed integer
  expect_line("[solver]\nn = 12 13\n", 2);          // trailing garbage
  expect_line("[layer]\nhalf_thickness\n", 2);      // missing '='
  expect_line("[solver]\nlateral_bc = robin\n", 2); // unknown closure
  expect_line("[solver]\nforce_grid = maybe\n", 2); // malformed bool
}

TEST_CASE("validation rejects inconsistent values") {
  RunConfig c;
  c.surface.type = "torus";
  CHECK_THROWS_AS(validate(c), InvalidParams);
  c = RunConfig{};
  c.surface.width = -2.0;
  CHECK_THROWS_AS(validate(c), InvalidParams);
  c = RunConfig{};
  c.half_thickness = 0.0;
  CHECK_THROWS_AS(validate(c), InvalidParams);
  c = RunConfig{};
  c.certificate.sigma_k_min = 9;
  c.certificate.sigma_k_max = 2;
  CHECK_THROWS_AS(validate(c), InvalidParams);
  c = RunConfig{};
  c.certificate.localizer_plat_u = 1.5;
  CHECK_THROWS_AS(validate(c), InvalidParams);
  c = RunConfig{};
  c.solver.shift_frac = 1.0;
  CHECK_THROWS_AS(validate(c), InvalidParams);
  c = RunConfig{};
  c.solver.grid.nu = 0;
  CHECK_THROWS_AS(validate(c), InvalidParams);
  c = RunConfig{};
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("surface factory") {
  SurfaceConfig sc;
  sc.type = "plane";
  auto p = make_surface(sc);
  CHECK(p->name() == "plane");
  CHECK(p->support_radius() == 0.0);
  sc.type = "bump";
  sc.amplitude = 3.0;
  sc.width = 2.0;
  auto b = make_surface(sc);
  CHECK(b->name() == "bump");
  CHECK(b->support_radius() == 2.0);
}

TEST_CASE("config json round-trip is exact") {
  RunConfig c;
  c.surface.type = "bump";
  c.surface.amplitude = 12.0;
  c.surface.width = 10.0;
  c.half_thickness = 0.4;
  c.certificate.sigma_k_max = 11;
  c.certificate.localizer_a_frac = 0.93;
  c.solver.grid = {12.0, 160, 15};
  c.solver.bc = LateralBc::neumann;
  c.solver.seed = 424242;
  c.solver.force_grid = true;
  c.output.csv = "table.csv";

  nlohmann::json j = c;
  RunConfig back = j.get<RunConfig>();
  CHECK(back.surface.type == c.surface.type);
  CHECK(back.surface.amplitude == c.surface.amplitude);
  CHECK(back.half_thickness == c.half_thickness);
  CHECK(back.certificate.sigma_k_max == c.certificate.sigma_k_max);
  CHECK(back.certificate.localizer_a_frac == c.certificate.localizer_a_frac);
  CHECK(back.solver.grid.R == c.solver.grid.R);
  CHECK(back.solver.grid.n == c.solver.grid.n);
  CHECK(back.solver.grid.nu == c.solver.grid.nu);
  CHECK(back.solver.bc == c.solver.bc);
  CHECK(back.solver.seed == c.solver.seed);
  CHECK(back.solver.force_grid == c.solver.force_grid);
  CHECK(back.output.csv == c.output.csv);
  // serializing again is bit-identical
  nlohmann::json j2 = back;
  CHECK(j == j2);
}

TEST_CASE("a written report is itself a loadable config") {
  RunConfig c;
  c.surface.amplitude = 5.5;
  c.solver.grid.n = 31;
  nlohmann::json rep = report_skeleton(c);
  CHECK(rep["schema"] == kReportSchema);
  const std::string path = "report_roundtrip_test.json";
  write_json(rep, path);
  RunConfig back = load_config(path);
  CHECK(back.surface.amplitude == 5.5);
  CHECK(back.solver.grid.n == 31);
  std::remove(path.c_str());
}

TEST_CASE("foreign json is rejected") {
  TempFile f("cfg_foreign_test.json", R"({"surface": {"type": "bump"}})");
  CHECK_THROWS_AS(load_config(f.path), ParseError);
  TempFile g("cfg_missing_test.ini", "");
  CHECK_NOTHROW(load_config(g.path));  // empty ini: all defaults
  CHECK_THROWS_AS(load_config("no_such_file_anywhere.ini"), Error);
}
