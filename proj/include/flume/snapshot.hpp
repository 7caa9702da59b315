/**
 * @file snapshot.hpp
 * @brief Flat binary state snapshots with a sidecar text manifest.
 *
 * Record layout, per snapshot: realization_id (u32), step (u32), then the
 * density and momentum fields as 64-bit floats, n_cells each. All values
 * little-endian; the manifest names the grid size, the recorded times,
 * and the config hash so a store is self-describing.
 */
#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

static_assert(std::endian::native == std::endian::little,
              "snapshot records are written as raw little-endian bytes");

namespace flume {

struct SnapshotRecord {
  std::uint32_t realization_id = 0;
  std::uint32_t step = 0;  ///< half-step index, so time = step * tau
  std::vector<double> rho;
  std::vector<double> q;
};

struct SnapshotStore {
  int n_cells = 0;
  std::vector<SnapshotRecord> records;
};

struct SnapshotManifest {
  int n_cells = 0;
  std::uint64_t config_hash = 0;
  std::vector<double> times;  ///< distinct recorded times, ascending
};

inline void write_snapshots(const std::string& path, const SnapshotStore& store) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("snapshot: cannot open " + path);
  for (const SnapshotRecord& rec : store.records) {
    if (int(rec.rho.size()) != store.n_cells || int(rec.q.size()) != store.n_cells)
      throw std::invalid_argument("snapshot: record size does not match store");
    out.write(reinterpret_cast<const char*>(&rec.realization_id), 4);
    out.write(reinterpret_cast<const char*>(&rec.step), 4);
    out.write(reinterpret_cast<const char*>(rec.rho.data()),
              std::streamsize(rec.rho.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(rec.q.data()),
              std::streamsize(rec.q.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("snapshot: short write to " + path);
}

inline SnapshotStore read_snapshots(const std::string& path, int n_cells) {
  if (n_cells <= 0) throw std::invalid_argument("snapshot: n_cells must be positive");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("snapshot: cannot open " + path);
  SnapshotStore store;
  store.n_cells = n_cells;
  const std::streamsize field_bytes = std::streamsize(n_cells) * sizeof(double);
  while (true) {
    SnapshotRecord rec;
    in.read(reinterpret_cast<char*>(&rec.realization_id), 4);
    if (in.gcount() == 0 && in.eof()) break;
    in.read(reinterpret_cast<char*>(&rec.step), 4);
    rec.rho.resize(std::size_t(n_cells));
    rec.q.resize(std::size_t(n_cells));
    in.read(reinterpret_cast<char*>(rec.rho.data()), field_bytes);
    in.read(reinterpret_cast<char*>(rec.q.data()), field_bytes);
    if (!in) throw std::runtime_error("snapshot: truncated record in " + path);
    store.records.push_back(std::move(rec));
  }
  return store;
}

inline void write_manifest(const std::string& path, const SnapshotManifest& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("snapshot: cannot open " + path);
  out << "cells " << m.n_cells << "\n";
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(m.config_hash));
  out << "config_hash " << hex << "\n";
  out << "times";
  out.precision(17);
  for (double t : m.times) out << " " << t;
  out << "\n";
  if (!out) throw std::runtime_error("snapshot: short write to " + path);
}

inline SnapshotManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("snapshot: cannot open " + path);
  SnapshotManifest m;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string key;
    row >> key;
    if (key == "cells") {
      row >> m.n_cells;
    } else if (key == "config_hash") {
      std::string hex;
      row >> hex;
      m.config_hash = std::stoull(hex, nullptr, 16);
    } else if (key == "times") {
      double t;
      while (row >> t) m.times.push_back(t);
    } else if (!key.empty()) {
      throw std::runtime_error("snapshot: unknown manifest key '" + key + "'");
    }
  }
  if (m.n_cells <= 0) throw std::runtime_error("snapshot: manifest lacks a grid size");
  return m;
}

}  // namespace flume
