#pragma once

// Lattice scalar field at t = 0 and its mode decomposition.
//
// Sites x_s = s·Δx, s = 0..L-1, periodic. Each mode k is a lattice Fourier
// frequency 2πj/(LΔx) with ω(k) = √(k² + m²). With V = LΔx:
//
//   a_k = (1/√(2ω V)) Σ_x Δx e^{-ikx} (ω φ(x) + i ϖ(x))
//   φ(x) = Σ_k (1/√(2ω V)) (a_k e^{ikx} + a*_k e^{-ikx})
//   ϖ(x) = Σ_k i √(ω/(2V)) (a*_k e^{-ikx} - a_k e^{ikx})
//   Q_k = (a_k + a*_k)/√(2ω),  P_k = i √(ω/2) (a*_k - a_k)
//
// so {Q_j, P_l} = δ_jl with respect to the lattice bracket
// Σ_x (∂/∂φ_x ∂/∂ϖ_x - ∂/∂ϖ_x ∂/∂φ_x)/Δx. field_from_amplitudes inverts
// amplitudes_from_field exactly when the lattice carries all L frequencies.

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dq/errors.hpp"
#include "dq/quasiprob.hpp"

namespace dq {

/// Which lattice frequencies become modes.
enum class KSelection {
  /// All L frequencies j = -⌈L/2⌉+1 .. ⌊L/2⌋; the map to (φ, ϖ) is invertible.
  all,
  /// j = 0 .. ⌊L/2⌋ only, one mode per standing-wave pair.
  half,
};

struct ModeLattice {
  double mass = 1.0;
  std::vector<double> k_values;
  std::size_t x_count = 0;
  double spacing = 1.0;

  std::size_t mode_count() const noexcept { return k_values.size(); }
  double length() const noexcept { return static_cast<double>(x_count) * spacing; }
  double x(std::size_t s) const noexcept { return static_cast<double>(s) * spacing; }
  double omega(std::size_t j) const { return std::hypot(k_values.at(j), mass); }

  /// Periodic lattice with frequencies chosen by `sel`.
  static ModeLattice periodic(std::size_t sites, double spacing, double mass,
                              KSelection sel = KSelection::all) {
    if (sites == 0) throw DimensionError("lattice needs at least one site");
    const auto l = static_cast<long>(sites);
    const long lo = sel == KSelection::all ? -((l + 1) / 2) + 1 : 0;
    std::vector<long> js;
    for (long j = lo; j <= l / 2; ++j) js.push_back(j);
    return from_indices(sites, spacing, mass, js);
  }

  /// Lattice with an explicit list of frequency indices j (k = 2πj/(LΔx)).
  static ModeLattice from_indices(std::size_t sites, double spacing, double mass,
                                  const std::vector<long>& js) {
    ModeLattice lat;
    lat.mass = mass;
    lat.x_count = sites;
    lat.spacing = spacing;
    for (long j : js)
      lat.k_values.push_back(2.0 * std::numbers::pi * static_cast<double>(j) / lat.length());
    lat.validate();
    return lat;
  }

  /// Throws DimensionError for incompatible frequencies and ContractError for ω = 0.
  void validate() const {
    if (x_count == 0) throw DimensionError("lattice needs at least one site");
    if (!(spacing > 0) || !std::isfinite(spacing))
      throw DimensionError("lattice spacing must be positive");
    if (!(mass >= 0) || !std::isfinite(mass)) throw ContractError("mass must be non-negative");
    if (k_values.empty()) throw DimensionError("lattice has no modes");
    const auto l = static_cast<long>(x_count);
    std::vector<long> seen;
    for (double k : k_values) {
      const double j = k * length() / (2.0 * std::numbers::pi);
      if (!std::isfinite(j) || std::abs(j - std::round(j)) > 1e-9)
        throw DimensionError("momentum " + std::to_string(k) +
                             " is not a lattice frequency 2*pi*j/(L*dx)");
      const long r = ((static_cast<long>(std::llround(j)) % l) + l) % l;
      if (std::find(seen.begin(), seen.end(), r) != seen.end())
        throw DimensionError("momentum " + std::to_string(k) +
                             " aliases another mode on this lattice");
      seen.push_back(r);
      if (std::abs(k) < 1e-300 && mass == 0)
        throw ContractError(
            "mass 0 with a k = 0 mode gives omega = 0; the canonical variables "
            "divide by omega, so use m > 0 or drop the k = 0 mode");
    }
  }
};

struct FieldConfig {
  std::vector<double> phi;
  std::vector<double> varpi;
};

/// Complex-valued field samples, for amplitudes that are not conjugate pairs.
struct ComplexField {
  std::vector<Complex> phi;
  std::vector<Complex> varpi;
};

struct CanonicalModes {
  std::vector<double> Q;
  std::vector<double> P;
};

namespace detail {

inline void require_field(const FieldConfig& cfg, const ModeLattice& lat) {
  if (cfg.phi.size() != lat.x_count || cfg.varpi.size() != lat.x_count)
    throw DimensionError("field has " + std::to_string(cfg.phi.size()) + "/" +
                         std::to_string(cfg.varpi.size()) + " samples, lattice has " +
                         std::to_string(lat.x_count) + " sites");
  for (std::size_t s = 0; s < lat.x_count; ++s)
    if (!std::isfinite(cfg.phi[s]) || !std::isfinite(cfg.varpi[s]))
      throw ContractError("field sample " + std::to_string(s) + " is not finite");
}

inline void require_amplitudes(std::size_t n, const ModeLattice& lat) {
  if (n != lat.mode_count())
    throw DimensionError("expected " + std::to_string(lat.mode_count()) +
                         " amplitude(s), got " + std::to_string(n));
}

}  // namespace detail

inline CoherentAmplitudes amplitudes_from_field(const FieldConfig& cfg, const ModeLattice& lat) {
  lat.validate();
  detail::require_field(cfg, lat);
  CoherentAmplitudes a;
  a.alpha.resize(lat.mode_count());
  for (std::size_t j = 0; j < lat.mode_count(); ++j) {
    const double k = lat.k_values[j], w = lat.omega(j);
    Complex sum{0, 0};
    for (std::size_t s = 0; s < lat.x_count; ++s)
      sum += std::polar(lat.spacing, -k * lat.x(s)) * Complex(w * cfg.phi[s], cfg.varpi[s]);
    a.alpha[j] = sum / std::sqrt(2.0 * w * lat.length());
  }
  return a;
}

/// Fields from independent a and a* values. Real whenever a_star = conj(a).
inline ComplexField field_from_holomorphic(const std::vector<Complex>& a,
                                           const std::vector<Complex>& a_star,
                                           const ModeLattice& lat) {
  lat.validate();
  detail::require_amplitudes(a.size(), lat);
  detail::require_amplitudes(a_star.size(), lat);
  ComplexField f{std::vector<Complex>(lat.x_count), std::vector<Complex>(lat.x_count)};
  const Complex i{0, 1};
  for (std::size_t j = 0; j < lat.mode_count(); ++j) {
    const double k = lat.k_values[j], w = lat.omega(j);
    const double cphi = 1.0 / std::sqrt(2.0 * w * lat.length());
    const double cpi = std::sqrt(w / (2.0 * lat.length()));
    for (std::size_t s = 0; s < lat.x_count; ++s) {
      const Complex e = std::polar(1.0, k * lat.x(s));
      f.phi[s] += cphi * (a[j] * e + a_star[j] * std::conj(e));
      f.varpi[s] += cpi * i * (a_star[j] * std::conj(e) - a[j] * e);
    }
  }
  return f;
}

inline FieldConfig field_from_amplitudes(const CoherentAmplitudes& a, const ModeLattice& lat) {
  std::vector<Complex> conj(a.alpha.size());
  std::transform(a.alpha.begin(), a.alpha.end(), conj.begin(),
                 [](Complex z) { return std::conj(z); });
  const ComplexField c = field_from_holomorphic(a.alpha, conj, lat);
  FieldConfig f{std::vector<double>(lat.x_count), std::vector<double>(lat.x_count)};
  for (std::size_t s = 0; s < lat.x_count; ++s) {
    f.phi[s] = c.phi[s].real();
    f.varpi[s] = c.varpi[s].real();
  }
  return f;
}

/// Q_j = (a_j + a*_j)/√(2ω_j), P_j = i√(ω_j/2)(a*_j - a_j).
inline CanonicalModes qp_from_amplitudes(const CoherentAmplitudes& a, const ModeLattice& lat) {
  detail::require_amplitudes(a.mode_count(), lat);
  CanonicalModes m{std::vector<double>(a.mode_count()), std::vector<double>(a.mode_count())};
  for (std::size_t j = 0; j < a.mode_count(); ++j) {
    const double w = lat.omega(j);
    m.Q[j] = 2.0 * a.alpha[j].real() / std::sqrt(2.0 * w);
    m.P[j] = 2.0 * a.alpha[j].imag() * std::sqrt(w / 2.0);
  }
  return m;
}

inline CoherentAmplitudes amplitudes_from_qp(const CanonicalModes& m, const ModeLattice& lat) {
  detail::require_amplitudes(m.Q.size(), lat);
  detail::require_amplitudes(m.P.size(), lat);
  CoherentAmplitudes a;
  for (std::size_t j = 0; j < m.Q.size(); ++j) {
    const double w = lat.omega(j);
    a.alpha.emplace_back(m.Q[j] * std::sqrt(w / 2.0), m.P[j] / std::sqrt(2.0 * w));
  }
  return a;
}

/// Quadrature form:
///   Q_k = (1/(ω√V)) Σ_x Δx (ϖ sin kx + ω φ cos kx)
///   P_k = (1/√V) Σ_x Δx (ϖ cos kx - ω φ sin kx)
inline CanonicalModes qp_from_field(const FieldConfig& cfg, const ModeLattice& lat) {
  lat.validate();
  detail::require_field(cfg, lat);
  const double root_v = std::sqrt(lat.length());
  CanonicalModes m{std::vector<double>(lat.mode_count()), std::vector<double>(lat.mode_count())};
  for (std::size_t j = 0; j < lat.mode_count(); ++j) {
    const double k = lat.k_values[j], w = lat.omega(j);
    double q = 0, p = 0;
    for (std::size_t s = 0; s < lat.x_count; ++s) {
      const double c = std::cos(k * lat.x(s)), sn = std::sin(k * lat.x(s));
      q += lat.spacing * (cfg.varpi[s] * sn + w * cfg.phi[s] * c);
      p += lat.spacing * (cfg.varpi[s] * c - w * cfg.phi[s] * sn);
    }
    m.Q[j] = q / (w * root_v);
    m.P[j] = p / root_v;
  }
  return m;
}

/// Standard symplectic form J = [[0, I], [-I, 0]] of size 2n.
inline Eigen::MatrixXd symplectic_form(Eigen::Index n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  return j;
}

/// For a linear map M from canonical inputs (u, v) of dimension 2L to
/// outputs of dimension 2n, returns ‖M J_{2L} Mᵀ - J_{2n}‖_max: the largest
/// error in the Poisson brackets of the outputs. For square M this vanishes
/// exactly when M is symplectic.
inline double symplectic_deviation(const Eigen::MatrixXd& m) {
  if (m.rows() % 2 != 0 || m.cols() % 2 != 0)
    throw DimensionError("symplectic_deviation needs even row and column counts");
  const Eigen::MatrixXd b = m * symplectic_form(m.cols() / 2) * m.transpose();
  return (b - symplectic_form(m.rows() / 2)).cwiseAbs().maxCoeff();
}

/// Jacobian of (φ, ϖ) → (Q, P) in canonical site coordinates u_x = √Δx φ(x),
/// v_x = √Δx ϖ(x). Rows: Q_0..Q_{M-1}, P_0..P_{M-1}.
inline Eigen::MatrixXd qp_jacobian(const ModeLattice& lat) {
  lat.validate();
  const auto n = static_cast<Eigen::Index>(lat.mode_count());
  const auto l = static_cast<Eigen::Index>(lat.x_count);
  const double root_l = std::sqrt(static_cast<double>(lat.x_count));
  Eigen::MatrixXd m(2 * n, 2 * l);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double k = lat.k_values[static_cast<std::size_t>(j)];
    const double w = lat.omega(static_cast<std::size_t>(j));
    for (Eigen::Index s = 0; s < l; ++s) {
      const double c = std::cos(k * lat.x(static_cast<std::size_t>(s))) / root_l;
      const double sn = std::sin(k * lat.x(static_cast<std::size_t>(s))) / root_l;
      m(j, s) = c;
      m(j, l + s) = sn / w;
      m(n + j, s) = -w * sn;
      m(n + j, l + s) = c;
    }
  }
  return m;
}

/// Bracket deviation of the lattice's canonical variables; ≤ 1e-10 certifies
/// {Q_j, P_l} = δ_jl and {Q_j, Q_l} = {P_j, P_l} = 0.
inline double symplectic_check(const ModeLattice& lat) {
  return symplectic_deviation(qp_jacobian(lat));
}

/// Wigner functional of the coherent field state |α⟩ at a field
/// configuration: Π_j e^{-2|z_j - α_j|²} with z = amplitudes_from_field(cfg).
inline double wigner_functional_coherent(const CoherentAmplitudes& alpha, const FieldConfig& cfg,
                                         const ModeLattice& lat) {
  detail::require_amplitudes(alpha.mode_count(), lat);
  return wigner_coherent_closed_form(alpha, amplitudes_from_field(cfg, lat));
}

// FieldConfig CSV: header `x,phi,varpi`, one row per site in order.

inline std::string field_to_csv(const FieldConfig& cfg, const ModeLattice& lat) {
  detail::require_field(cfg, lat);
  std::ostringstream out;
  out << std::setprecision(17) << "x,phi,varpi\n";
  for (std::size_t s = 0; s < lat.x_count; ++s)
    out << lat.x(s) << ',' << cfg.phi[s] << ',' << cfg.varpi[s] << '\n';
  return out.str();
}

/// Parses `x,phi,varpi` CSV. Errors carry 1-based line numbers in the
/// message and the byte offset of the offending line.
inline FieldConfig field_from_csv(std::istream& in) {
  FieldConfig cfg;
  std::string line;
  std::size_t lineno = 0, offset = 0;
  bool header = false;
  const auto fail = [&](const std::string& what) {
    throw ParseError("line " + std::to_string(lineno) + ": " + what, offset,
                     {"x,phi,varpi"});
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t line_offset = offset;
    offset += line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    offset = line_offset;
    if (!header) {
      if (line != "x,phi,varpi") fail("expected header 'x,phi,varpi'");
      header = true;
      offset = line_offset + line.size() + 1;
      continue;
    }
    double v[3];
    std::size_t pos = 0;
    for (int f = 0; f < 3; ++f) {
      const std::size_t end = f < 2 ? line.find(',', pos) : line.size();
      if (end == std::string::npos) fail("expected 3 comma-separated fields");
      const std::string cell = line.substr(pos, end - pos);
      std::size_t used = 0;
      try {
        v[f] = std::stod(cell, &used);
      } catch (...) {
        used = std::string::npos;
      }
      if (used != cell.size() || cell.empty() || !std::isfinite(v[f]))
        fail("malformed number '" + cell + "'");
      pos = end + 1;
    }
    if (pos <= line.size()) fail("expected 3 comma-separated fields");
    cfg.phi.push_back(v[1]);
    cfg.varpi.push_back(v[2]);
    offset = line_offset + line.size() + 1;
  }
  if (!header) {
    lineno = std::max<std::size_t>(lineno, 1);
    fail("missing header 'x,phi,varpi'");
  }
  return cfg;
}

inline FieldConfig field_from_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open field file '" + path + "'", 0);
  return field_from_csv(in);
}

}  // namespace dq
