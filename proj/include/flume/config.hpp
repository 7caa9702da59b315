/**
 * @file config.hpp
 * @brief Flat dotted-key run configuration: parsing, canonical
 *        serialization, presets, and builders for the simulation objects.
 *
 * Grammar: one `key = value` pair per line; `#` starts a comment; blank
 * lines are ignored. Keys are dotted paths (scheme.epsilon, noise.kind).
 * Unknown keys are errors; a repeated key keeps its last value. The
 * canonical serialization lists every key in a fixed order, so parse and
 * serialize round-trip losslessly and hash stably.
 */
#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flume/dynamics.hpp"
#include "flume/ensemble.hpp"
#include "flume/gas_law.hpp"
#include "flume/grid.hpp"
#include "flume/noise.hpp"
#include "flume/state.hpp"

namespace flume {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full run description. Initial data is a piecewise-constant velocity
/// over a flat density: u = u_first_half on x < 1/2, u_second_half after,
/// which covers every preset and constant custom states.
struct RunConfig {
  std::string preset = "custom";

  std::string gas_mode = "shallow_water";  ///< or "normalized"
  double gamma = 2.0;                      ///< normalized mode only
  double gravity = 2.0;                    ///< shallow-water mode only

  int cells = 256;

  double epsilon = 1e-3;
  double tau = 1e-3;
  double cfl = 0.45;
  double rho_floor = 1e-12;
  double vacuum_snap_rel = 1e-6;
  std::optional<double> kappa_bound;
  double wave_speed_ceiling = 1e3;
  int sto_substeps = 4;

  std::string noise_kind = "shallow_water_topography";
  std::vector<double> sigma = {1.0, 1.0, 1.0, 1.0, 1.0};
  double amplitude = 1.0;   ///< generic / additive kinds
  int noise_modes = 4;      ///< generic / additive kinds
  std::optional<double> noise_kappa;  ///< localization radius
  double noise_margin = 0.25;

  double h0 = 1.0;
  double u_first_half = 0.0;
  double u_second_half = 0.0;

  int realizations = 256;
  std::uint64_t seed = 2024;
  double horizon = 10.0;
  long output_stride = 10;
  long snapshot_stride = 10;
  int threads = 0;

  std::string output_dir = "out";
  bool emit_snapshots = false;

  bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad number for '" + key + "': " + value);
  }
}

inline long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer for '" + key + "': " + value);
  }
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    std::uint64_t v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad unsigned integer for '" + key + "': " + value);
  }
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError("config: bad boolean for '" + key + "': " + value);
}

inline std::optional<double> parse_opt(const std::string& key, const std::string& value) {
  if (value == "none") return std::nullopt;
  return parse_double(key, value);
}

inline std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt_double(*v) : std::string("none");
}

inline std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  if (value == "none") return out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ','))
    out.push_back(parse_double(key, item));
  return out;
}

inline std::string fmt_list(const std::vector<double>& v) {
  if (v.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt_double(v[i]);
  }
  return out;
}

inline std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

/// Syntactic pass: key/value pairs in file order, comments stripped.
inline std::vector<std::pair<std::string, std::string>> parse_items(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> items;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::string t = detail::trim(line);
    if (t.empty()) continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(line_no) + " is not 'key = value'");
    std::string key = detail::trim(std::string_view(t).substr(0, eq));
    std::string value = detail::trim(std::string_view(t).substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config: line " + std::to_string(line_no) + " has an empty key or value");
    items.emplace_back(std::move(key), std::move(value));
  }
  return items;
}

inline void apply_item(RunConfig& cfg, const std::string& key, const std::string& value) {
  using namespace detail;
  if (key == "preset") cfg.preset = value;
  else if (key == "gas.mode") cfg.gas_mode = value;
  else if (key == "gas.gamma") cfg.gamma = parse_double(key, value);
  else if (key == "gas.gravity") cfg.gravity = parse_double(key, value);
  else if (key == "grid.cells") cfg.cells = int(parse_long(key, value));
  else if (key == "scheme.epsilon") cfg.epsilon = parse_double(key, value);
  else if (key == "scheme.tau") cfg.tau = parse_double(key, value);
  else if (key == "scheme.cfl") cfg.cfl = parse_double(key, value);
  else if (key == "scheme.rho_floor") cfg.rho_floor = parse_double(key, value);
  else if (key == "scheme.vacuum_snap_rel") cfg.vacuum_snap_rel = parse_double(key, value);
  else if (key == "scheme.kappa_bound") cfg.kappa_bound = parse_opt(key, value);
  else if (key == "scheme.wave_speed_ceiling") cfg.wave_speed_ceiling = parse_double(key, value);
  else if (key == "scheme.sto_substeps") cfg.sto_substeps = int(parse_long(key, value));
  else if (key == "noise.kind") cfg.noise_kind = value;
  else if (key == "noise.sigma") cfg.sigma = parse_list(key, value);
  else if (key == "noise.amplitude") cfg.amplitude = parse_double(key, value);
  else if (key == "noise.modes") cfg.noise_modes = int(parse_long(key, value));
  else if (key == "noise.kappa") cfg.noise_kappa = parse_opt(key, value);
  else if (key == "noise.margin") cfg.noise_margin = parse_double(key, value);
  else if (key == "init.h0") cfg.h0 = parse_double(key, value);
  else if (key == "init.u_first_half") cfg.u_first_half = parse_double(key, value);
  else if (key == "init.u_second_half") cfg.u_second_half = parse_double(key, value);
  else if (key == "ensemble.realizations") cfg.realizations = int(parse_long(key, value));
  else if (key == "ensemble.seed") cfg.seed = parse_u64(key, value);
  else if (key == "ensemble.horizon") cfg.horizon = parse_double(key, value);
  else if (key == "ensemble.output_stride") cfg.output_stride = parse_long(key, value);
  else if (key == "ensemble.snapshot_stride") cfg.snapshot_stride = parse_long(key, value);
  else if (key == "ensemble.threads") cfg.threads = int(parse_long(key, value));
  else if (key == "output.dir") cfg.output_dir = value;
  else if (key == "output.snapshots") cfg.emit_snapshots = parse_bool(key, value);
  else throw ConfigError("config: unknown key '" + key + "'");
}

/// Presets share the reference setup (shallow water, g = 2, five unit
/// forcing modes, flat unit depth, T = 10) and differ in the initial
/// velocity split.
inline RunConfig load_preset(const std::string& id) {
  RunConfig cfg;
  cfg.preset = id;
  if (id == "custom") return cfg;
  if (id == "test1") {
    cfg.u_first_half = 1.0;
    cfg.u_second_half = 0.0;
  } else if (id == "test2") {
    cfg.u_first_half = 0.5;
    cfg.u_second_half = 0.5;
  } else if (id == "test3") {
    cfg.u_first_half = 0.0;
    cfg.u_second_half = 0.0;
  } else if (id == "test4") {
    cfg.u_first_half = -0.5;
    cfg.u_second_half = 0.5;
  } else {
    throw ConfigError("config: unknown preset '" + id + "'");
  }
  return cfg;
}

/// Parses a whole config text. The preset (last `preset =` line, if any)
/// provides the base; explicit keys then override it in file order.
inline RunConfig parse_config(const std::string& text) {
  auto items = parse_items(text);
  std::string preset = "custom";
  for (const auto& [k, v] : items)
    if (k == "preset") preset = v;
  RunConfig cfg = load_preset(preset);
  for (const auto& [k, v] : items)
    if (k != "preset") apply_item(cfg, k, v);
  return cfg;
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

/// Canonical form: every key, fixed order, normalized number formatting.
inline std::string serialize_config(const RunConfig& cfg) {
  using namespace detail;
  std::ostringstream out;
  out << "preset = " << cfg.preset << "\n";
  out << "gas.mode = " << cfg.gas_mode << "\n";
  out << "gas.gamma = " << fmt_double(cfg.gamma) << "\n";
  out << "gas.gravity = " << fmt_double(cfg.gravity) << "\n";
  out << "grid.cells = " << cfg.cells << "\n";
  out << "scheme.epsilon = " << fmt_double(cfg.epsilon) << "\n";
  out << "scheme.tau = " << fmt_double(cfg.tau) << "\n";
  out << "scheme.cfl = " << fmt_double(cfg.cfl) << "\n";
  out << "scheme.rho_floor = " << fmt_double(cfg.rho_floor) << "\n";
  out << "scheme.vacuum_snap_rel = " << fmt_double(cfg.vacuum_snap_rel) << "\n";
  out << "scheme.kappa_bound = " << fmt_opt(cfg.kappa_bound) << "\n";
  out << "scheme.wave_speed_ceiling = " << fmt_double(cfg.wave_speed_ceiling) << "\n";
  out << "scheme.sto_substeps = " << cfg.sto_substeps << "\n";
  out << "noise.kind = " << cfg.noise_kind << "\n";
  out << "noise.sigma = " << fmt_list(cfg.sigma) << "\n";
  out << "noise.amplitude = " << fmt_double(cfg.amplitude) << "\n";
  out << "noise.modes = " << cfg.noise_modes << "\n";
  out << "noise.kappa = " << fmt_opt(cfg.noise_kappa) << "\n";
  out << "noise.margin = " << fmt_double(cfg.noise_margin) << "\n";
  out << "init.h0 = " << fmt_double(cfg.h0) << "\n";
  out << "init.u_first_half = " << fmt_double(cfg.u_first_half) << "\n";
  out << "init.u_second_half = " << fmt_double(cfg.u_second_half) << "\n";
  out << "ensemble.realizations = " << cfg.realizations << "\n";
  out << "ensemble.seed = " << cfg.seed << "\n";
  out << "ensemble.horizon = " << fmt_double(cfg.horizon) << "\n";
  out << "ensemble.output_stride = " << cfg.output_stride << "\n";
  out << "ensemble.snapshot_stride = " << cfg.snapshot_stride << "\n";
  out << "ensemble.threads = " << cfg.threads << "\n";
  out << "output.dir = " << cfg.output_dir << "\n";
  out << "output.snapshots = " << (cfg.emit_snapshots ? "true" : "false") << "\n";
  return out.str();
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::uint64_t config_hash(const RunConfig& cfg) {
  return fnv1a(serialize_config(cfg));
}

inline void validate_config(const RunConfig& cfg) {
  if (cfg.gas_mode != "shallow_water" && cfg.gas_mode != "normalized")
    throw ConfigError("config: gas.mode must be shallow_water or normalized");
  if (cfg.gas_mode == "normalized" && !(cfg.gamma > 1.0))
    throw ConfigError("config: gas.gamma must exceed 1");
  if (cfg.gas_mode == "shallow_water" && !(cfg.gravity > 0.0))
    throw ConfigError("config: gas.gravity must be positive");
  if (cfg.cells < 4) throw ConfigError("config: grid.cells must be at least 4");
  if (cfg.noise_kind != "zero" && cfg.noise_kind != "shallow_water_topography" &&
      cfg.noise_kind != "generic_multiplicative" && cfg.noise_kind != "additive")
    throw ConfigError("config: unknown noise.kind '" + cfg.noise_kind + "'");
  if (cfg.noise_kind == "shallow_water_topography") {
    if (cfg.gas_mode != "shallow_water")
      throw ConfigError("config: topographic noise requires shallow_water mode");
    if (cfg.sigma.empty())
      throw ConfigError("config: topographic noise needs a nonempty noise.sigma");
  }
  if (cfg.noise_modes < 0) throw ConfigError("config: noise.modes must be >= 0");
  if (cfg.noise_kappa && (!(*cfg.noise_kappa > 0.0) || !(cfg.noise_margin > 0.0) ||
                          !(cfg.noise_margin < 1.0)))
    throw ConfigError("config: noise.kappa needs kappa > 0 and margin in (0,1)");
  if (!(cfg.h0 >= 0.0)) throw ConfigError("config: init.h0 must be nonnegative");
  if (cfg.realizations < 1) throw ConfigError("config: ensemble.realizations must be >= 1");
  if (cfg.output_stride < 1) throw ConfigError("config: ensemble.output_stride must be >= 1");
  if (cfg.snapshot_stride < 1)
    throw ConfigError("config: ensemble.snapshot_stride must be >= 1");
  if (cfg.threads < 0) throw ConfigError("config: ensemble.threads must be >= 0");
  SchemeConfig scheme;
  scheme.epsilon = cfg.epsilon;
  scheme.tau = cfg.tau;
  scheme.cfl = cfg.cfl;
  scheme.rho_floor = cfg.rho_floor;
  scheme.vacuum_snap_rel = cfg.vacuum_snap_rel;
  scheme.kappa_bound = cfg.kappa_bound;
  scheme.wave_speed_ceiling = cfg.wave_speed_ceiling;
  scheme.sto_substeps = cfg.sto_substeps;
  try {
    validate(scheme);
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  double period = 2.0 * cfg.tau;
  double ratio = cfg.horizon / period;
  long n_periods = std::llround(ratio);
  if (n_periods < 1 || std::abs(double(n_periods) - ratio) > 1e-9 * std::max(1.0, ratio))
    throw ConfigError(
        "config: ensemble.horizon must be a whole positive number of splitting periods");
}

inline GasLaw make_gas_law(const RunConfig& cfg) {
  return cfg.gas_mode == "normalized" ? GasLaw::normalized(cfg.gamma)
                                      : GasLaw::shallow_water(cfg.gravity);
}

inline NoiseModel make_noise(const RunConfig& cfg) {
  NoiseModel m = NoiseModel::zero();
  if (cfg.noise_kind == "shallow_water_topography")
    m = NoiseModel::shallow_water_topography(cfg.gravity, cfg.sigma);
  else if (cfg.noise_kind == "generic_multiplicative")
    m = NoiseModel::generic_multiplicative(cfg.amplitude, cfg.noise_modes);
  else if (cfg.noise_kind == "additive")
    m = NoiseModel::additive(cfg.amplitude, cfg.noise_modes);
  if (cfg.noise_kappa) m = m.localized(*cfg.noise_kappa, cfg.noise_margin);
  return m;
}

inline SchemeConfig make_scheme(const RunConfig& cfg) {
  SchemeConfig s;
  s.epsilon = cfg.epsilon;
  s.tau = cfg.tau;
  s.cfl = cfg.cfl;
  s.rho_floor = cfg.rho_floor;
  s.vacuum_snap_rel = cfg.vacuum_snap_rel;
  s.kappa_bound = cfg.kappa_bound;
  s.wave_speed_ceiling = cfg.wave_speed_ceiling;
  s.sto_substeps = cfg.sto_substeps;
  return s;
}

inline EnsembleConfig make_ensemble(const RunConfig& cfg) {
  EnsembleConfig e;
  e.n_realizations = cfg.realizations;
  e.master_seed = cfg.seed;
  e.horizon = cfg.horizon;
  e.output_stride = cfg.output_stride;
  e.snapshot_stride = cfg.emit_snapshots ? cfg.snapshot_stride : 0;
  e.n_threads = cfg.threads;
  e.scheme = make_scheme(cfg);
  return e;
}

/// Cell-centered sampling puts the velocity jump exactly between cells
/// n/2 - 1 and n/2 for even n.
inline ConservedField make_initial(const RunConfig& cfg, const Grid& grid) {
  std::vector<double> rho(std::size_t(grid.n_cells), cfg.h0);
  std::vector<double> q(std::size_t(grid.n_cells));
  for (int i = 0; i < grid.n_cells; ++i) {
    double u = grid.x(i) < 0.5 ? cfg.u_first_half : cfg.u_second_half;
    q[std::size_t(i)] = cfg.h0 * u;
  }
  return make_field(std::move(rho), std::move(q));
}

}  // namespace flume
