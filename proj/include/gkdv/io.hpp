#pragma once

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gkdv/error.hpp"
#include "gkdv/grid.hpp"

namespace gkdv::io {

inline constexpr const char* snapshot_format = "gkdv-snapshot-v1";

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  while (e > b && (e[-1] == ' ' || e[-1] == '\t' || e[-1] == '\r')) --e;
  if (b < e && *b == '+') ++b;
  auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e) throw ConfigError("malformed number for " + what + ": '" + s + "'");
  return v;
}

namespace detail {

inline std::filesystem::path stem_path(const std::filesystem::path& p) {
  auto ext = p.extension();
  if (ext == ".bin" || ext == ".meta") return p.parent_path() / p.stem();
  return p;
}

inline void write_le(std::ostream& os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
}

inline double read_le(std::istream& is) {
  std::uint64_t bits = 0;
  is.read(reinterpret_cast<char*>(&bits), sizeof bits);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

}  // namespace detail

/// Writes <base>.bin (little-endian float64, frame-major) and <base>.meta
/// (key = value text: format, n, L, frames, t, dt). A single field is a
/// trajectory with one frame.
inline void write_trajectory(const std::filesystem::path& base_in, const Trajectory& traj) {
  const auto base = detail::stem_path(base_in);
  if (base.has_parent_path()) std::filesystem::create_directories(base.parent_path());
  {
    std::ofstream bin(base.string() + ".bin", std::ios::binary);
    if (!bin) throw Error("cannot write '" + base.string() + ".bin'");
    for (const auto& f : traj.frames)
      for (double v : f.values) detail::write_le(bin, v);
  }
  std::ofstream meta(base.string() + ".meta");
  if (!meta) throw Error("cannot write '" + base.string() + ".meta'");
  meta << "format = " << snapshot_format << '\n'
       << "n = " << traj.grid.n() << '\n'
       << "L = " << format_double(traj.grid.L()) << '\n'
       << "frames = " << traj.size() << '\n'
       << "t = " << format_double(traj.t0) << '\n'
       << "dt = " << format_double(traj.dt) << '\n';
}

inline void write_field(const std::filesystem::path& base, const PhysicalField& f, double t = 0.0) {
  Trajectory tr(f.grid, t, 0.0);
  tr.push_back(f);
  write_trajectory(base, tr);
}

inline Trajectory read_trajectory(const std::filesystem::path& base_in) {
  const auto base = detail::stem_path(base_in);
  std::ifstream meta(base.string() + ".meta");
  if (!meta) throw Error("cannot open '" + base.string() + ".meta'");
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(meta, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("malformed metadata line: " + line);
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  for (const char* k : {"format", "n", "L", "frames", "t", "dt"})
    if (!kv.count(k)) throw Error(std::string("snapshot metadata lacks '") + k + "'");
  if (kv["format"] != snapshot_format) throw Error("unsupported snapshot format '" + kv["format"] + "'");
  const double nd = parse_double(kv["n"], "n"), fd = parse_double(kv["frames"], "frames");
  if (!(nd >= 4 && fd >= 1) || nd != std::floor(nd) || fd != std::floor(fd)) throw Error("malformed n or frames");
  const Grid g(parse_double(kv["L"], "L"), static_cast<std::size_t>(nd));
  const auto frames = static_cast<std::size_t>(fd);
  Trajectory traj(g, parse_double(kv["t"], "t"), parse_double(kv["dt"], "dt"));
  std::ifstream bin(base.string() + ".bin", std::ios::binary);
  if (!bin) throw Error("cannot open '" + base.string() + ".bin'");
  bin.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::size_t>(bin.tellg());
  if (bytes != frames * g.n() * sizeof(double))
    throw Error("snapshot size " + std::to_string(bytes) + " does not match metadata");
  bin.seekg(0);
  for (std::size_t m = 0; m < frames; ++m) {
    PhysicalField f(g);
    for (auto& v : f.values) v = detail::read_le(bin);
    traj.push_back(std::move(f));
  }
  return traj;
}

inline PhysicalField read_field(const std::filesystem::path& base) {
  auto tr = read_trajectory(base);
  if (tr.size() != 1) throw Error("expected a single field, found " + std::to_string(tr.size()) + " frames");
  return tr[0];
}

}  // namespace gkdv::io
