#pragma once

// Run configuration shared by the command-line tool and the check suites.
//
// File format: one `key = value` per line, `#` starts a comment, blank lines
// ignored. Unknown keys are errors. Values given on the command line override
// file values.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dq/errors.hpp"
#include "dq/field_modes.hpp"
#include "dq/fock_space.hpp"
#include "dq/quasiprob.hpp"

namespace dq {

namespace detail {

inline std::string format_double(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

struct RunConfig {
  std::size_t modes = 1;
  /// Occupation cutoff per mode; empty means the default policy for `amplitude`.
  std::vector<int> cutoff;
  double closed_form_tol = 1e-8;
  double quantization_tol = 1e-6;
  double tail_fraction = 1e-8;
  Complex grid_center{0, 0};
  double grid_half_width = 3.0;
  int grid_resolution = 61;
  std::size_t lattice_sites = 16;
  double lattice_spacing = 1.0;
  double mass = 1.0;
  /// "all", "half", or a comma-separated list of frequency indices.
  std::string k_selection = "all";
  std::string format = "csv";
  std::uint64_t seed = 20240607;
  /// Random cases per property in the check suites.
  int cases = 20;
  /// Coherent probe amplitude |α| used by the fock and quasiprob suites.
  double amplitude = 1.0;
  unsigned threads = 0;

  /// Cutoffs to use for probes reaching amplitude `reach`.
  FockTruncation truncation(double reach) const {
    if (!cutoff.empty()) {
      if (cutoff.size() == 1 && modes > 1)
        return FockTruncation::uniform(modes, cutoff[0]);
      if (cutoff.size() != modes)
        throw DimensionError("cutoff lists " + std::to_string(cutoff.size()) +
                             " value(s) for " + std::to_string(modes) + " mode(s)");
      return FockTruncation(cutoff);
    }
    return FockTruncation::uniform(modes, default_cutoff(reach));
  }

  FockOptions fock_options() const {
    FockOptions o;
    o.closed_form_tol = closed_form_tol;
    o.quantization_tol = quantization_tol;
    o.tail_fraction = tail_fraction;
    return o;
  }

  QuasiOptions quasi_options() const {
    QuasiOptions o;
    o.fock = fock_options();
    o.threads = threads;
    return o;
  }

  GridSpec grid() const { return {grid_center, grid_half_width, grid_resolution}; }

  ModeLattice lattice() const {
    if (k_selection == "all")
      return ModeLattice::periodic(lattice_sites, lattice_spacing, mass, KSelection::all);
    if (k_selection == "half")
      return ModeLattice::periodic(lattice_sites, lattice_spacing, mass, KSelection::half);
    std::vector<long> js;
    for (const auto& raw_part : detail::split_commas(k_selection)) {
      const std::string part = detail::trim(raw_part);
      std::size_t used = 0;
      long j = 0;
      try {
        j = std::stol(part, &used);
      } catch (...) {
        used = std::string::npos;
      }
      if (used != part.size() || part.empty())
        throw ParseError("k_selection entry '" + part + "' is not an integer", 0,
                         {"all", "half", "j1,j2,..."});
      js.push_back(j);
    }
    return ModeLattice::from_indices(lattice_sites, lattice_spacing, mass, js);
  }

  /// Effective configuration as sorted key/value pairs.
  std::map<std::string, std::string> canonical() const;

  /// FNV-1a 64-bit hash of the canonical key=value listing, as 16 hex digits.
  std::string digest() const {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& [k, v] : canonical())
      for (char c : k + "=" + v + "\n") {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
      }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
  }

  /// Applies one setting; throws ParseError (offset = `line`) on bad values.
  void set(const std::string& key, const std::string& value, std::size_t line = 0);
};

inline std::map<std::string, std::string> RunConfig::canonical() const {
  std::string cut = "auto";
  if (!cutoff.empty()) {
    cut.clear();
    for (std::size_t j = 0; j < cutoff.size(); ++j)
      cut += (j ? "," : "") + std::to_string(cutoff[j]);
  }
  using detail::format_double;
  return {{"amplitude", format_double(amplitude)},
          {"cases", std::to_string(cases)},
          {"closed_form_tol", format_double(closed_form_tol)},
          {"cutoff", cut},
          {"format", format},
          {"grid_center", format_double(grid_center.real()) + "," +
                              format_double(grid_center.imag())},
          {"grid_half_width", format_double(grid_half_width)},
          {"grid_resolution", std::to_string(grid_resolution)},
          {"k_selection", k_selection},
          {"lattice_sites", std::to_string(lattice_sites)},
          {"lattice_spacing", format_double(lattice_spacing)},
          {"mass", format_double(mass)},
          {"modes", std::to_string(modes)},
          {"quantization_tol", format_double(quantization_tol)},
          {"seed", std::to_string(seed)},
          {"tail_fraction", format_double(tail_fraction)}};
}

inline void RunConfig::set(const std::string& key, const std::string& raw, std::size_t line) {
  const std::string value = detail::trim(raw);
  const auto bad = [&](const std::string& what) {
    throw ParseError("config '" + key + "': " + what + " (got '" + value + "')", line);
  };
  const auto as_double = [&]() {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(value, &used);
    } catch (...) {
      bad("expected a number");
    }
    if (used != value.size() || !std::isfinite(v)) bad("expected a number");
    return v;
  };
  const auto as_count = [&](long long lo, long long hi) {
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
      bad("expected a non-negative integer");
    long long v = 0;
    try {
      v = std::stoll(value);
    } catch (...) {
      bad("integer out of range");
    }
    if (v < lo || v > hi) bad("out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
  };
  const auto positive = [&]() {
    const double v = as_double();
    if (!(v > 0)) bad("must be positive");
    return v;
  };

  if (key == "modes") {
    modes = static_cast<std::size_t>(as_count(1, 8));
  } else if (key == "cutoff") {
    cutoff.clear();
    if (value == "auto") return;
    for (const auto& raw_part : detail::split_commas(value)) {
      const std::string part = detail::trim(raw_part);
      if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos || part.size() > 5)
        bad("expected 'auto' or comma-separated non-negative integers");
      cutoff.push_back(std::stoi(part));
    }
  } else if (key == "closed_form_tol") {
    closed_form_tol = positive();
  } else if (key == "quantization_tol") {
    quantization_tol = positive();
  } else if (key == "tail_fraction") {
    tail_fraction = positive();
  } else if (key == "grid_center") {
    auto parts = detail::split_commas(value);
    for (auto& p : parts) p = detail::trim(p);
    if (parts.size() == 1) {
      grid_center = detail::parse_complex(value, 0);
    } else if (parts.size() == 2) {
      std::size_t u0 = 0, u1 = 0;
      try {
        grid_center = {std::stod(parts[0], &u0), std::stod(parts[1], &u1)};
      } catch (...) {
        bad("expected 're,im'");
      }
      if (u0 != parts[0].size() || u1 != parts[1].size()) bad("expected 're,im'");
    } else {
      bad("expected 're,im'");
    }
  } else if (key == "grid_half_width") {
    grid_half_width = positive();
  } else if (key == "grid_resolution") {
    grid_resolution = static_cast<int>(as_count(2, 2001));
  } else if (key == "lattice_sites") {
    lattice_sites = static_cast<std::size_t>(as_count(1, 4096));
  } else if (key == "lattice_spacing") {
    lattice_spacing = positive();
  } else if (key == "mass") {
    mass = as_double();
    if (mass < 0) bad("must be non-negative");
  } else if (key == "k_selection") {
    if (value.empty()) bad("expected 'all', 'half' or a list of indices");
    k_selection = value;
  } else if (key == "format") {
    if (value != "csv" && value != "json") bad("expected 'csv' or 'json'");
    format = value;
  } else if (key == "seed") {
    seed = static_cast<std::uint64_t>(as_count(0, std::numeric_limits<long long>::max()));
  } else if (key == "cases") {
    cases = static_cast<int>(as_count(1, 100000));
  } else if (key == "amplitude") {
    amplitude = as_double();
    if (amplitude < 0) bad("must be non-negative");
  } else if (key == "threads") {
    threads = static_cast<unsigned>(as_count(0, 1024));
  } else {
    throw ParseError("unknown config key '" + key + "'", line,
                     {"modes", "cutoff", "closed_form_tol", "quantization_tol", "tail_fraction",
                      "grid_center", "grid_half_width", "grid_resolution", "lattice_sites",
                      "lattice_spacing", "mass", "k_selection", "format", "seed", "cases",
                      "amplitude", "threads"});
  }
}

/// Reads `key = value` lines into `cfg`. ParseError offsets are line numbers.
inline void load_config(std::istream& in, RunConfig& cfg) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value'", lineno,
                       {"key = value"});
    cfg.set(detail::trim(line.substr(0, eq)), line.substr(eq + 1), lineno);
  }
}

inline void load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'", 0);
  load_config(in, cfg);
}

}  // namespace dq
