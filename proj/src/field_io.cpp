#include "cbody/field_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "cbody/error.hpp"

namespace cbody {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path);
  return out;
}

void write_csv(const std::string& path, const Grid& grid, const Eigen::MatrixXd& values, const std::string& prefix) {
  auto out = open_out(path);
  out << "node,x,y,z";
  for (int i = 0; i < values.rows(); ++i) out << ',' << prefix << (i + 1);
  out << '\n';
  for (int n = 0; n < values.cols(); ++n) {
    const Vec3 x = grid.node_position(n);
    out << n << ',' << fmt(x(0)) << ',' << fmt(x(1)) << ',' << fmt(x(2));
    for (int i = 0; i < values.rows(); ++i) out << ',' << fmt(values(i, n));
    out << '\n';
  }
}

Eigen::MatrixXd read_csv(const std::string& path, int rows, int nodes) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read " + path);
  std::string line;
  std::getline(in, line);
  Eigen::MatrixXd out(rows, nodes);
  int count = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    if (static_cast<int>(vals.size()) != 4 + rows) throw Error(ErrorCode::SizeMismatch, path + ": wrong column count");
    const int n = static_cast<int>(vals[0]);
    if (n < 0 || n >= nodes) throw Error(ErrorCode::SizeMismatch, path + ": node index out of range");
    for (int i = 0; i < rows; ++i) out(i, n) = vals[static_cast<std::size_t>(4 + i)];
    ++count;
  }
  if (count != nodes) throw Error(ErrorCode::SizeMismatch, path + ": node count mismatch");
  return out;
}

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw Error(ErrorCode::SizeMismatch, "truncated binary dump");
  return v;
}

constexpr char kMagic[4] = {'C', 'B', 'F', 'D'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void write_u_csv(const std::string& path, const FieldState& state, const Grid& grid) {
  write_csv(path, grid, state.u, "u");
}

void write_nu_csv(const std::string& path, const FieldState& state, const Grid& grid) {
  write_csv(path, grid, state.nu, "nu");
}

void read_u_csv(const std::string& path, FieldState& state) {
  state.u = read_csv(path, 3, state.num_nodes());
}

void read_nu_csv(const std::string& path, FieldState& state) {
  state.nu = read_csv(path, static_cast<int>(state.nu.rows()), state.num_nodes());
}

void write_binary(const std::string& path, const FieldState& state, const Grid& grid) {
  auto out = open_out(path, true);
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.dim()));
  for (int a = 0; a < 3; ++a) put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.nodes(a)));
  for (int a = 0; a < 3; ++a) put<double>(out, grid.lower()(a));
  for (int a = 0; a < 3; ++a) put<double>(out, grid.upper()(a));
  const std::string name = state.manifold->name();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
  out.write(name.data(), static_cast<std::streamsize>(name.size()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(state.nu.rows()));
  for (int n = 0; n < state.num_nodes(); ++n)
    for (int i = 0; i < 3; ++i) put<double>(out, state.u(i, n));
  for (int n = 0; n < state.num_nodes(); ++n)
    for (int i = 0; i < state.nu.rows(); ++i) put<double>(out, state.nu(i, n));
  out.write(reinterpret_cast<const char*>(state.pinned_u.data()), static_cast<std::streamsize>(state.pinned_u.size()));
  out.write(reinterpret_cast<const char*>(state.pinned_nu.data()), static_cast<std::streamsize>(state.pinned_nu.size()));
  const auto& mask = grid.active_mask();
  out.write(reinterpret_cast<const char*>(mask.data()), static_cast<std::streamsize>(mask.size()));
}

std::pair<Grid, FieldState> read_binary(const std::string& path, ManifoldSpec manifold) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw Error(ErrorCode::ConfigError, path + ": not a field dump");
  if (get<std::uint32_t>(in) != kVersion) throw Error(ErrorCode::ConfigError, path + ": unsupported version");
  const int dim = static_cast<int>(get<std::uint32_t>(in));
  std::array<int, 3> nodes{};
  for (auto& v : nodes) v = static_cast<int>(get<std::uint32_t>(in));
  Vec3 lo, hi;
  for (int a = 0; a < 3; ++a) lo(a) = get<double>(in);
  for (int a = 0; a < 3; ++a) hi(a) = get<double>(in);
  std::string name(get<std::uint32_t>(in), '\0');
  in.read(name.data(), static_cast<std::streamsize>(name.size()));
  const int m = static_cast<int>(get<std::uint32_t>(in));
  if (!manifold || manifold->name() != name || manifold->embed_dim() != m) {
    throw Error(ErrorCode::WrongManifold, path + ": dump holds manifold " + name);
  }
  Grid grid(dim, lo, hi, nodes);
  FieldState s = FieldState::identity(grid, manifold, manifold->project(VecM::Ones(m)));
  for (int n = 0; n < s.num_nodes(); ++n)
    for (int i = 0; i < 3; ++i) s.u(i, n) = get<double>(in);
  for (int n = 0; n < s.num_nodes(); ++n)
    for (int i = 0; i < m; ++i) s.nu(i, n) = get<double>(in);
  in.read(reinterpret_cast<char*>(s.pinned_u.data()), static_cast<std::streamsize>(s.pinned_u.size()));
  in.read(reinterpret_cast<char*>(s.pinned_nu.data()), static_cast<std::streamsize>(s.pinned_nu.size()));
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(grid.num_cells()));
  in.read(reinterpret_cast<char*>(mask.data()), static_cast<std::streamsize>(mask.size()));
  if (!in) throw Error(ErrorCode::SizeMismatch, "truncated binary dump");
  grid.set_active(std::move(mask));
  return {std::move(grid), std::move(s)};
}

}  // namespace cbody
