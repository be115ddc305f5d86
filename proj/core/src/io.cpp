#include "lagflow/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "lagflow/error.hpp"

namespace lagflow {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'L', 'G', 'F', 'D'};

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in, const std::filesystem::path& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T)))
    fail(ErrorKind::Io, "truncated snapshot " + path.string());
  return v;
}

std::size_t node_count(int dim, int n) { return dim == 1 ? n : static_cast<std::size_t>(n) * n; }

}  // namespace

Snapshot make_snapshot(double t, const ScalarField& rho, const VectorField& u) {
  require_same_grid(rho.grid(), u.grid(), "make_snapshot");
  Snapshot s;
  s.dim = rho.grid().dim();
  s.n = rho.grid().n();
  s.t = t;
  s.names.push_back("rho");
  s.values.emplace_back(rho.values().begin(), rho.values().end());
  for (int c = 0; c < u.dim(); ++c) {
    s.names.push_back("u" + std::to_string(c + 1));
    s.values.emplace_back(u[c].values().begin(), u[c].values().end());
  }
  return s;
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  require(snap.names.size() == snap.values.size(), "snapshot names and values differ in count");
  const std::size_t count = node_count(snap.dim, snap.n);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(snap.dim));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(snap.n));
  put<double>(out, snap.t);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(snap.names.size()));
  for (const auto& name : snap.names) {
    require(name.size() < kSnapshotNameBytes, "snapshot field name too long: " + name);
    char buf[kSnapshotNameBytes] = {};
    std::memcpy(buf, name.data(), name.size());
    out.write(buf, kSnapshotNameBytes);
  }
  for (const auto& v : snap.values) {
    require(v.size() == count, "snapshot field has the wrong number of values");
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  }
  if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    fail(ErrorKind::Io, path.string() + " is not a snapshot file");
  const auto version = get<std::uint32_t>(in, path);
  if (version != kSnapshotVersion)
    fail(ErrorKind::Io, "unsupported snapshot version " + std::to_string(version));
  Snapshot s;
  s.dim = static_cast<int>(get<std::uint32_t>(in, path));
  s.n = static_cast<int>(get<std::uint32_t>(in, path));
  s.t = get<double>(in, path);
  const auto fields = get<std::uint32_t>(in, path);
  if (s.dim < 1 || s.dim > 2 || s.n < 1 || fields > 64)
    fail(ErrorKind::Io, "corrupt snapshot header in " + path.string());
  for (std::uint32_t f = 0; f < fields; ++f) {
    char buf[kSnapshotNameBytes + 1] = {};
    if (!in.read(buf, kSnapshotNameBytes)) fail(ErrorKind::Io, "truncated snapshot " + path.string());
    s.names.emplace_back(buf);
  }
  const std::size_t count = node_count(s.dim, s.n);
  for (std::uint32_t f = 0; f < fields; ++f) {
    std::vector<double> v(count);
    if (!in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(count * sizeof(double))))
      fail(ErrorKind::Io, "truncated snapshot " + path.string());
    s.values.push_back(std::move(v));
  }
  return s;
}

void write_snapshot_csv(const std::filesystem::path& path, const Snapshot& snap) {
  require(snap.dim == 1, "CSV snapshots are written for d = 1 only");
  std::vector<std::string> header{"x"};
  header.insert(header.end(), snap.names.begin(), snap.names.end());
  CsvWriter csv(path, header);
  const auto grid = TorusGrid::make(snap.dim, snap.n);
  std::vector<double> row(header.size());
  for (int i = 0; i < snap.n; ++i) {
    row[0] = grid.node(static_cast<std::size_t>(i))[0];
    for (std::size_t f = 0; f < snap.values.size(); ++f) row[f + 1] = snap.values[f][i];
    csv.row(row);
  }
}

ScalarField snapshot_field(const Snapshot& snap, const std::string& name) {
  for (std::size_t f = 0; f < snap.names.size(); ++f)
    if (snap.names[f] == name) return ScalarField(TorusGrid::make(snap.dim, snap.n), snap.values[f]);
  fail(ErrorKind::Io, "snapshot has no field '" + name + "'");
}

VectorField snapshot_velocity(const Snapshot& snap) {
  std::vector<ScalarField> comps;
  for (int c = 0; c < snap.dim; ++c) comps.push_back(snapshot_field(snap, "u" + std::to_string(c + 1)));
  return VectorField(std::move(comps));
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : file_(std::fopen(path.c_str(), "w")), columns_(header.size()) {
  if (!file_) fail(ErrorKind::Io, "cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i)
    std::fprintf(file_, "%s%s", i ? "," : "", header[i].c_str());
  std::fprintf(file_, "\n");
}

void CsvWriter::row(const std::vector<double>& values) {
  require(values.size() == columns_, "CSV row width does not match the header");
  for (std::size_t i = 0; i < values.size(); ++i)
    std::fprintf(file_, "%s%.17g", i ? "," : "", values[i]);
  std::fprintf(file_, "\n");
  std::fflush(file_);
}

CsvWriter::~CsvWriter() {
  if (file_) std::fclose(file_);
}

}  // namespace lagflow
