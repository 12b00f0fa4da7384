#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "nematicflow/error.hpp"
#include "nematicflow/io.hpp"
#include "nematicflow/scenarios.hpp"

using namespace testing;
namespace fs = std::filesystem;

namespace {

State busy_state() {
  ScenarioOptions o;
  o.cells = 12;
  Scenario sc = scenario_shear_stretch(o);
  Integrator I(sc.grid, sc.params, sc.controls);
  return I.step(sc.state).state;
}

fs::path scratch_dir(const char* name) {
  const fs::path p = fs::temp_directory_path() / ("nematicflow_test_" + std::string(name));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("checkpoint round trip is bitwise") {
  const State s = busy_state();
  std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
  save_checkpoint(s, buf);
  const std::string bytes = buf.str();
  CHECK(bytes.substr(0, 4) == "NEMF");
  const std::size_t n = s.theta.size();
  CHECK(bytes.size() == 4 + 4 + 4 + 3 * (4 + 8 + 4) + 8 + (2 + 3 + 1 + 1) * n * 8);
  const State r = load_checkpoint(buf);
  CHECK(r == s);
  std::stringstream again(std::ios::in | std::ios::out | std::ios::binary);
  save_checkpoint(r, again);
  CHECK(again.str() == bytes);
}

TEST_CASE("checkpoint header layout") {
  const State s = make_state(grid2(8, 4, Boundary::slip_wall));
  std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
  save_checkpoint(s, buf);
  const std::string b = buf.str();
  const auto u32 = [&](std::size_t off) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + i])) << (8 * i);
    return v;
  };
  CHECK(u32(4) == kCheckpointVersion);
  CHECK(u32(8) == 2);   // ndim
  CHECK(u32(12) == 8);  // x cells
  CHECK(u32(24) == 0);  // x periodic
  CHECK(u32(28) == 4);  // y cells
  CHECK(u32(40) == 1);  // y wall
}

TEST_CASE("corrupt checkpoints raise IoError") {
  const State s = busy_state();
  std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
  save_checkpoint(s, buf);
  const std::string bytes = buf.str();
  const auto expect_io = [](const std::string& data) {
    std::stringstream in(data, std::ios::in | std::ios::binary);
    try {
      load_checkpoint(in);
      FAIL("expected IoError");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::IoError);
    }
  };
  expect_io(bytes.substr(0, bytes.size() - 3));
  expect_io("XEMF" + bytes.substr(4));
  std::string v = bytes;
  v[4] = 9;
  expect_io(v);
  expect_io("");
  try {
    load_checkpoint(fs::path("/nonexistent/dir/x.nemf"));
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IoError);
    CHECK(std::string(e.what()).find("/nonexistent/dir/x.nemf") != std::string::npos);
  }
}

TEST_CASE("snapshot round trip is byte-identical") {
  const State s = busy_state();
  std::ostringstream first;
  write_snapshot(s, first);
  std::istringstream in(first.str());
  const Snapshot snap = read_snapshot(in);
  CHECK(snap == make_snapshot(s));
  std::ostringstream second;
  write_snapshot(snap, second);
  CHECK(second.str() == first.str());

  const fs::path dir = scratch_dir("snap");
  write_snapshot(s, dir / "a.vtk");
  CHECK(read_snapshot(dir / "a.vtk") == snap);
  fs::remove_all(dir);
}

TEST_CASE("equilibrium snapshot has constant theta and cell-centred points") {
  const Grid g = grid2(8, 8, Boundary::slip_wall);
  const State s = make_state(g, 1.5);
  const Snapshot snap = make_snapshot(s);
  CHECK(snap.dims == std::array<int, 3>{8, 8, 1});
  CHECK(snap.origin[0] == doctest::Approx(g.spacing[0] / 2));
  for (double v : snap.theta) CHECK(v == 1.5);
  std::ostringstream out;
  write_snapshot(s, out);
  const std::string text = out.str();
  CHECK(text.rfind("# vtk DataFile Version 3.0\n", 0) == 0);
  CHECK(text.find("DATASET STRUCTURED_POINTS") != std::string::npos);
  CHECK(text.find("POINT_DATA 64") != std::string::npos);
  CHECK(text.find("SCALARS theta double 1") != std::string::npos);
}

TEST_CASE("snapshot averages face velocity to cells") {
  const Grid g = grid2(8, 8, Boundary::slip_wall);
  State s = make_state(g);
  for (std::size_t c = 0; c < g.size(); ++c) s.u[0][c] = static_cast<double>(g.coords(c)[0]);
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (g.coords(c)[1] > 0) s.u[1][c] = 1.0;
  }
  const Snapshot snap = make_snapshot(s);
  CHECK(snap.u[3 * g.index(2, 3, 0)] == 2.5);
  CHECK(snap.u[3 * g.index(7, 3, 0)] == 3.5);  // wraps to face 0 on the periodic axis
  CHECK(snap.u[3 * g.index(2, 0, 0) + 1] == 0.5);  // lower wall
  CHECK(snap.u[3 * g.index(2, 7, 0) + 1] == 0.5);  // upper wall
  CHECK(snap.u[3 * g.index(2, 3, 0) + 1] == 1.0);
}

TEST_CASE("audit csv layout") {
  const auto& cols = audit_csv_columns();
  CHECK(cols.size() == 22);
  CHECK(cols.front() == "t");
  CHECK(cols.back() == "max_div_u");
  std::ostringstream out;
  write_audit_header(out);
  AuditReport r;
  r.t = 0.5;
  r.entropy_residual = {1, 2, 3};
  write_audit_row(r, out);
  write_audit_row(r, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# nematicflow audit v1", 0) == 0);
  std::getline(in, line);
  const auto count = [](const std::string& s) { return std::count(s.begin(), s.end(), ',') + 1; };
  CHECK(count(line) == 22);
  int rows = 0;
  while (std::getline(in, line)) {
    CHECK(count(line) == 22);
    CHECK(line.rfind("0.5,", 0) == 0);
    ++rows;
  }
  CHECK(rows == 2);
}
