#include "nematicflow/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "nematicflow/error.hpp"

namespace nematicflow {

namespace {

constexpr char kMagic[4] = {'N', 'E', 'M', 'F'};
constexpr std::size_t kMaxPoints = std::size_t{1} << 30;

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& out, double x) {
  const auto v = std::bit_cast<std::uint64_t>(x);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

void put_array(std::ostream& out, const Array& a) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(a.data()), static_cast<std::streamsize>(a.size() * sizeof(double)));
  } else {
    for (double x : a) put_f64(out, x);
  }
}

void read_exact(std::istream& in, void* dst, std::size_t n) {
  in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) throw Error(ErrorKind::IoError, "truncated checkpoint");
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  read_exact(in, b, 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  read_exact(in, b, 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

void get_array(std::istream& in, Array& a) {
  if constexpr (std::endian::native == std::endian::little) {
    read_exact(in, a.data(), a.size() * sizeof(double));
  } else {
    for (double& x : a) x = get_f64(in);
  }
}

[[noreturn]] void rethrow_with_path(const Error& e, const std::filesystem::path& path) {
  throw Error(ErrorKind::IoError, path.string() + ": " + e.what());
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode) {
  std::ifstream in(path, mode);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return in;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void save_checkpoint(const State& s, std::ostream& out) {
  const Grid& g = s.theta.grid();
  out.write(kMagic, 4);
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(g.ndim));
  for (int a = 0; a < 3; ++a) {
    put_u32(out, static_cast<std::uint32_t>(g.cells[a]));
    put_f64(out, g.spacing[a]);
    put_u32(out, g.bc[a] == Boundary::slip_wall ? 1u : 0u);
  }
  put_f64(out, s.t);
  for (int c = 0; c < s.u.components(); ++c) put_array(out, s.u[c]);
  for (int c = 0; c < 3; ++c) put_array(out, s.d[c]);
  put_array(out, s.theta.values());
  put_array(out, s.p.values());
  if (!out) throw Error(ErrorKind::IoError, "checkpoint write failed");
}

void save_checkpoint(const State& s, const std::filesystem::path& path) {
  auto out = open_out(path, std::ios::binary | std::ios::trunc);
  try {
    save_checkpoint(s, out);
  } catch (const Error& e) {
    rethrow_with_path(e, path);
  }
  finish_write(out, path);
}

State load_checkpoint(std::istream& in) {
  char magic[4];
  read_exact(in, magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw Error(ErrorKind::IoError, "not a checkpoint (bad magic)");
  const std::uint32_t version = get_u32(in);
  if (version != kCheckpointVersion) {
    throw Error(ErrorKind::IoError, "unsupported checkpoint version " + std::to_string(version));
  }
  Grid g;
  const std::uint32_t ndim = get_u32(in);
  if (ndim != 2 && ndim != 3) throw Error(ErrorKind::IoError, "bad ndim " + std::to_string(ndim));
  g.ndim = static_cast<int>(ndim);
  std::size_t points = 1;
  for (int a = 0; a < 3; ++a) {
    const std::uint32_t n = get_u32(in);
    const double h = get_f64(in);
    const std::uint32_t bc = get_u32(in);
    if (n == 0 || n > kMaxPoints || !(h > 0.0) || !std::isfinite(h) || bc > 1) {
      throw Error(ErrorKind::IoError, "bad grid header on axis " + std::to_string(a));
    }
    if (a >= g.ndim && (n != 1 || bc != 0)) throw Error(ErrorKind::IoError, "inert axis must be one periodic cell");
    points *= n;
    if (points > kMaxPoints) throw Error(ErrorKind::IoError, "grid too large");
    g.cells[a] = static_cast<int>(n);
    g.spacing[a] = h;
    g.bc[a] = bc ? Boundary::slip_wall : Boundary::periodic;
  }
  State s;
  s.t = get_f64(in);
  s.u = VectorField::face(g);
  s.d = VectorField::cell(g, 3);
  s.theta = ScalarField(g);
  s.p = ScalarField(g);
  for (int c = 0; c < s.u.components(); ++c) get_array(in, s.u[c]);
  for (int c = 0; c < 3; ++c) get_array(in, s.d[c]);
  get_array(in, s.theta.values());
  get_array(in, s.p.values());
  return s;
}

State load_checkpoint(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::binary);
  try {
    return load_checkpoint(in);
  } catch (const Error& e) {
    rethrow_with_path(e, path);
  }
}

Snapshot make_snapshot(const State& s) {
  const Grid& g = s.theta.grid();
  Snapshot snap;
  for (int a = 0; a < 3; ++a) {
    snap.dims[a] = g.cells[a];
    snap.spacing[a] = g.spacing[a];
    snap.origin[a] = a < g.ndim ? 0.5 * g.spacing[a] : 0.0;
  }
  snap.t = s.t;
  const std::size_t n = g.size();
  snap.u.assign(3 * n, 0.0);
  snap.d.resize(3 * n);
  for (std::size_t c = 0; c < n; ++c) {
    const auto q = g.coords(c);
    for (int a = 0; a < g.ndim; ++a) {
      // The upper face of the last cell wraps to face 0, which on a wall axis
      // is the pinned zero entry.
      auto up = q;
      up[a] = (q[a] + 1) % g.cells[a];
      snap.u[3 * c + a] = 0.5 * (s.u[a][c] + s.u[a][g.index(up[0], up[1], up[2])]);
    }
    for (int a = 0; a < 3; ++a) snap.d[3 * c + a] = s.d[a][c];
  }
  snap.theta = s.theta.values();
  snap.p = s.p.values();
  return snap;
}

void write_snapshot(const Snapshot& snap, std::ostream& out) {
  const std::size_t n = snap.theta.size();
  out << "# vtk DataFile Version 3.0\n";
  out << "nematicflow t=" << fmt(snap.t) << "\n";
  out << "ASCII\nDATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << snap.dims[0] << ' ' << snap.dims[1] << ' ' << snap.dims[2] << "\n";
  out << "ORIGIN " << fmt(snap.origin[0]) << ' ' << fmt(snap.origin[1]) << ' ' << fmt(snap.origin[2]) << "\n";
  out << "SPACING " << fmt(snap.spacing[0]) << ' ' << fmt(snap.spacing[1]) << ' ' << fmt(snap.spacing[2]) << "\n";
  out << "POINT_DATA " << n << "\n";
  const auto vectors = [&](const char* name, const std::vector<double>& v) {
    out << "VECTORS " << name << " double\n";
    for (std::size_t i = 0; i < n; ++i) {
      out << fmt(v[3 * i]) << ' ' << fmt(v[3 * i + 1]) << ' ' << fmt(v[3 * i + 2]) << "\n";
    }
  };
  const auto scalars = [&](const char* name, const std::vector<double>& v) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double x : v) out << fmt(x) << "\n";
  };
  vectors("u", snap.u);
  vectors("d", snap.d);
  scalars("theta", snap.theta);
  scalars("p", snap.p);
}

void write_snapshot(const State& s, std::ostream& out) { write_snapshot(make_snapshot(s), out); }

void write_snapshot(const State& s, const std::filesystem::path& path) {
  auto out = open_out(path, std::ios::trunc);
  write_snapshot(s, out);
  finish_write(out, path);
}

namespace {

std::string next_token(std::istream& in) {
  std::string tok;
  if (!(in >> tok)) throw Error(ErrorKind::IoError, "truncated snapshot");
  return tok;
}

void expect(std::istream& in, const char* word) {
  const std::string tok = next_token(in);
  if (tok != word) throw Error(ErrorKind::IoError, std::string("expected '") + word + "', got '" + tok + "'");
}

double parse_real(const std::string& tok) {
  char* end = nullptr;
  const double x = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') throw Error(ErrorKind::IoError, "bad number '" + tok + "'");
  return x;
}

long parse_count(const std::string& tok) {
  char* end = nullptr;
  const long v = std::strtol(tok.c_str(), &end, 10);
  if (end == tok.c_str() || *end != '\0' || v < 1) throw Error(ErrorKind::IoError, "bad count '" + tok + "'");
  return v;
}

}  // namespace

Snapshot read_snapshot(std::istream& in) {
  Snapshot snap;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# vtk DataFile", 0) != 0) {
    throw Error(ErrorKind::IoError, "not a legacy VTK file");
  }
  if (!std::getline(in, line)) throw Error(ErrorKind::IoError, "truncated snapshot");
  const std::string prefix = "nematicflow t=";
  if (line.rfind(prefix, 0) == 0) snap.t = parse_real(line.substr(prefix.size()));
  expect(in, "ASCII");
  expect(in, "DATASET");
  expect(in, "STRUCTURED_POINTS");
  expect(in, "DIMENSIONS");
  std::size_t n = 1;
  for (int a = 0; a < 3; ++a) {
    const long v = parse_count(next_token(in));
    if (v > static_cast<long>(kMaxPoints)) throw Error(ErrorKind::IoError, "snapshot too large");
    snap.dims[a] = static_cast<int>(v);
    n *= static_cast<std::size_t>(v);
    if (n > kMaxPoints) throw Error(ErrorKind::IoError, "snapshot too large");
  }
  expect(in, "ORIGIN");
  for (double& x : snap.origin) x = parse_real(next_token(in));
  expect(in, "SPACING");
  for (double& x : snap.spacing) x = parse_real(next_token(in));
  expect(in, "POINT_DATA");
  if (static_cast<std::size_t>(parse_count(next_token(in))) != n) {
    throw Error(ErrorKind::IoError, "POINT_DATA does not match DIMENSIONS");
  }
  const auto read_values = [&](std::vector<double>& v, std::size_t count) {
    v.resize(count);
    for (double& x : v) x = parse_real(next_token(in));
  };
  expect(in, "VECTORS");
  expect(in, "u");
  expect(in, "double");
  read_values(snap.u, 3 * n);
  expect(in, "VECTORS");
  expect(in, "d");
  expect(in, "double");
  read_values(snap.d, 3 * n);
  for (auto* field : {&snap.theta, &snap.p}) {
    expect(in, "SCALARS");
    expect(in, field == &snap.theta ? "theta" : "p");
    expect(in, "double");
    expect(in, "1");
    expect(in, "LOOKUP_TABLE");
    expect(in, "default");
    read_values(*field, n);
  }
  return snap;
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::in);
  try {
    return read_snapshot(in);
  } catch (const Error& e) {
    rethrow_with_path(e, path);
  }
}

const std::vector<std::string>& audit_csv_columns() {
  static const std::vector<std::string> cols = {
      "t",          "energy_total",   "energy_drift",   "kinetic",        "thermal",
      "elastic_gradient", "elastic_potential", "entropy_total", "entropy_production",
      "res_H_identity", "res_H_log",  "res_H_power",    "u_L2",           "theta_L1",
      "d_H1",       "F_L1",           "grad_u_L2_cum",  "rotdiss_L2_cum", "wall_stress_residual",
      "min_theta",  "max_abs_d",      "max_div_u"};
  return cols;
}

void write_audit_header(std::ostream& out) {
  out << "# nematicflow audit v" << kAuditCsvVersion << "\n";
  const auto& cols = audit_csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
}

void write_audit_row(const AuditReport& r, std::ostream& out) {
  const double values[] = {r.t,
                           r.energy_total,
                           r.energy_drift,
                           r.kinetic,
                           r.thermal,
                           r.elastic_gradient,
                           r.elastic_potential,
                           r.entropy_total,
                           r.entropy_production,
                           r.entropy_residual[0],
                           r.entropy_residual[1],
                           r.entropy_residual[2],
                           r.apriori.u_L2,
                           r.apriori.theta_L1,
                           r.apriori.d_H1,
                           r.apriori.F_L1,
                           r.apriori.grad_u_L2_cum,
                           r.apriori.rotdiss_L2_cum,
                           r.wall_stress_residual,
                           r.min_theta,
                           r.max_abs_d,
                           r.max_div_u};
  static_assert(std::size(values) == 22);
  std::string line;
  for (std::size_t i = 0; i < std::size(values); ++i) {
    if (i) line += ',';
    line += fmt(values[i]);
  }
  line += '\n';
  out << line;
}

}  // namespace nematicflow
