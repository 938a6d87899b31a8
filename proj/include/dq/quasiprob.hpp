#pragma once

// Quasiprobability values from density operators.
//
// Normalization: W(ξ) = tr{Π̂ D̂†(ξ) ρ̂ D̂(ξ)} with no prefactor, so a coherent
// state peaks at 1 and |W| ≤ 1. The conventional density integrating to one
// over d²ξ is (2/π)^M · W. The s-ordered values returned by s_distribution()
// use the matching scale tr{ρ̂ D̂(ξ) t^N̂ D̂†(ξ)}, t = (1+s)/(s-1), which
// interpolates between W at s = 0 and the Husimi value ⟨ξ|ρ̂|ξ⟩ at s = -1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dq/fock_space.hpp"
#include "dq/parallel.hpp"

namespace dq {

struct StateSpec;

namespace state {
struct Coherent {
  CoherentAmplitudes amplitudes;
};
struct Fock {
  std::vector<int> occupations;
};
struct Superposition {
  std::vector<Complex> weights;
  std::vector<StateSpec> states;
};
struct Density {
  FockOp rho;
};
}  // namespace state

/// Which state to build; lowered to a density matrix by density_matrix().
struct StateSpec {
  std::variant<state::Coherent, state::Fock, state::Superposition, state::Density> kind;
};

struct QuasiOptions {
  FockOptions fock;
  /// Allowed |tr ρ - 1| and negative-eigenvalue floor for density inputs.
  double density_tol = 1e-9;
  /// Allowed max |ρ - ρ†| entry.
  double hermitian_tol = 1e-10;
  /// Worker threads for grids (0 = hardware concurrency).
  unsigned threads = 0;
};

/// Checks the density-matrix contract; throws ContractError.
inline void validate_density(const FockOp& rho, double tol = 1e-9,
                             double hermitian_tol = 1e-10) {
  const double asym = (rho.matrix - rho.matrix.adjoint()).cwiseAbs().maxCoeff();
  if (asym > hermitian_tol)
    throw ContractError("density matrix is not Hermitian (max |ρ-ρ†| = " +
                        std::to_string(asym) + ")");
  const Complex tr = rho.matrix.trace();
  if (std::abs(tr - Complex{1, 0}) > tol)
    throw ContractError("density matrix trace is " + std::to_string(tr.real()) +
                        ", expected 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol)
    throw ContractError("density matrix is not positive semidefinite");
}

namespace detail {

inline Eigen::VectorXcd pure_state(const StateSpec& spec, const FockTruncation& t) {
  return std::visit(
      [&](const auto& s) -> Eigen::VectorXcd {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, state::Coherent>) {
          return coherent_state(t, s.amplitudes).vector;
        } else if constexpr (std::is_same_v<T, state::Fock>) {
          return fock_vector(t, s.occupations);
        } else if constexpr (std::is_same_v<T, state::Superposition>) {
          if (s.weights.size() != s.states.size() || s.states.empty())
            throw ContractError("superposition needs one weight per state");
          Eigen::VectorXcd v = Eigen::VectorXcd::Zero(t.dimension());
          for (std::size_t k = 0; k < s.states.size(); ++k) {
            Eigen::VectorXcd c = pure_state(s.states[k], t);
            v += s.weights[k] * (c / c.norm());
          }
          return v;
        } else {
          throw ContractError("a density operator cannot appear inside a superposition");
        }
      },
      spec.kind);
}

inline TraceEstimate alternating_sum(const FockTruncation& t, const Eigen::VectorXcd& diag,
                                     const QuasiOptions& opts) {
  TraceEstimate est;
  for (Eigen::Index n = 0; n < diag.size(); ++n) {
    int total = 0;
    for (int o : t.occupations(n)) total += o;
    est.value += (total % 2 == 0) ? diag(n) : -diag(n);
  }
  est.tail_fraction = top_block_fraction(t, diag);
  est.converged = true;
  est.tail_warning = est.tail_fraction > opts.fock.tail_fraction;
  return est;
}

}  // namespace detail

/// Density matrix of a state on the given truncation. Pure states are
/// renormalized after truncation so the result has unit trace.
inline FockOp density_matrix(const StateSpec& spec, const FockTruncation& t,
                             double tol = 1e-9) {
  if (const auto* d = std::get_if<state::Density>(&spec.kind)) {
    if (!(d->rho.truncation == t))
      throw DimensionError("density operator lives on a different truncation");
    validate_density(d->rho, tol);
    return d->rho;
  }
  Eigen::VectorXcd v = detail::pure_state(spec, t);
  const double n = v.norm();
  if (!(n > 0)) throw ContractError("state vector vanishes on this truncation");
  v /= n;
  return {t, v * v.adjoint()};
}

/// Rough phase-space reach of a state: max |α| of coherent parts, √n for Fock states.
inline double max_amplitude(const StateSpec& spec) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, state::Coherent>) {
          double m = 0;
          for (const auto& a : s.amplitudes.alpha) m = std::max(m, std::abs(a));
          return m;
        } else if constexpr (std::is_same_v<T, state::Fock>) {
          int m = 0;
          for (int n : s.occupations) m = std::max(m, n);
          return std::sqrt(static_cast<double>(m));
        } else if constexpr (std::is_same_v<T, state::Superposition>) {
          double m = 0;
          for (const auto& c : s.states) m = std::max(m, max_amplitude(c));
          return m;
        } else {
          return 0.0;
        }
      },
      spec.kind);
}

/// Displaced-parity series Σ_n ⟨n|Π̂ D̂†(ξ) ρ̂ D̂(ξ)|n⟩: conjugate by D first,
/// then take the alternating diagonal sum. The estimate carries the
/// top-block mass fraction; `tail_warning` is set when it exceeds the
/// configured fraction.
inline TraceEstimate wigner_series_estimate(const FockOp& rho, const CoherentAmplitudes& xi,
                                            const QuasiOptions& opts = {}) {
  const double asym = (rho.matrix - rho.matrix.adjoint()).cwiseAbs().maxCoeff();
  if (asym > opts.hermitian_tol)
    throw ContractError("wigner_series needs a Hermitian operator");
  return detail::alternating_sum(rho.truncation, detail::displaced_diagonal(rho, xi), opts);
}

inline double wigner_series(const FockOp& rho, const CoherentAmplitudes& xi,
                            const QuasiOptions& opts = {}) {
  return wigner_series_estimate(rho, xi, opts).value.real();
}

/// Σ_n (-1)^N |⟨n|α-ξ⟩|² in closed form: Π_j e^{-2|α_j - ξ_j|²}.
inline double wigner_coherent_closed_form(const CoherentAmplitudes& alpha,
                                          const CoherentAmplitudes& xi) {
  return std::exp(-2.0 * (alpha - xi).norm2());
}

/// Uniform raster around a center point, single mode.
struct GridSpec {
  Complex center{0, 0};
  double half_width = 3.0;
  int resolution = 61;
};

/// Distribution values on a raster; values(i, j) sits at (re_axis[i], im_axis[j]).
struct PhaseGrid {
  std::size_t mode = 0;
  std::vector<double> re_axis;
  std::vector<double> im_axis;
  Eigen::MatrixXcd values;
  std::vector<std::string> diagnostics;

  Complex point(Eigen::Index i, Eigen::Index j) const {
    return {re_axis[static_cast<std::size_t>(i)], im_axis[static_cast<std::size_t>(j)]};
  }
};

namespace detail {

inline std::vector<double> axis(double center, double half_width, int resolution) {
  if (resolution < 2) throw ContractError("grid resolution must be at least 2");
  if (!(half_width > 0)) throw ContractError("grid half-width must be positive");
  std::vector<double> v(static_cast<std::size_t>(resolution));
  for (int k = 0; k < resolution; ++k)
    v[static_cast<std::size_t>(k)] =
        center - half_width + 2.0 * half_width * k / (resolution - 1);
  return v;
}

inline PhaseGrid empty_grid(const FockOp& rho, const GridSpec& g) {
  if (rho.truncation.mode_count() != 1)
    throw DimensionError("phase-space grids are single-mode only");
  PhaseGrid grid;
  grid.re_axis = axis(g.center.real(), g.half_width, g.resolution);
  grid.im_axis = axis(g.center.imag(), g.half_width, g.resolution);
  grid.values = Eigen::MatrixXcd::Zero(g.resolution, g.resolution);
  return grid;
}

}  // namespace detail

/// Husimi values Q(z) = ⟨z|ρ̂|z⟩ on a single-mode raster. A coverage
/// diagnostic is recorded when the raster misses the disc of radius 5 around
/// ⟨â⟩ or the quadrature (Δ²z/π) Σ Q falls below 0.98.
inline PhaseGrid husimi_grid(const FockOp& rho, const GridSpec& g,
                             const QuasiOptions& opts = {}) {
  PhaseGrid grid = detail::empty_grid(rho, g);
  const auto n = static_cast<Eigen::Index>(g.resolution);
  parallel_for(
      static_cast<std::size_t>(n * n),
      [&](std::size_t k) {
        const auto i = static_cast<Eigen::Index>(k) / n, j = static_cast<Eigen::Index>(k) % n;
        grid.values(i, j) = husimi_symbol(rho, CoherentAmplitudes{{grid.point(i, j)}});
      },
      opts.threads);

  const Complex center = (rho.matrix * annihilation(rho.truncation, 0).matrix).trace();
  const double lo_re = grid.re_axis.front(), hi_re = grid.re_axis.back();
  const double lo_im = grid.im_axis.front(), hi_im = grid.im_axis.back();
  if (center.real() - 5 < lo_re || center.real() + 5 > hi_re || center.imag() - 5 < lo_im ||
      center.imag() + 5 > hi_im)
    grid.diagnostics.push_back("coverage: grid does not contain the radius-5 disc around <a>");
  const double cell = (grid.re_axis[1] - grid.re_axis[0]) * (grid.im_axis[1] - grid.im_axis[0]);
  const double mass = grid.values.real().sum() * cell / std::numbers::pi;
  if (mass < 0.98)
    grid.diagnostics.push_back("coverage: quadrature mass " + std::to_string(mass) +
                               " < 0.98");
  return grid;
}

namespace detail {

/// ρ = W W† with W's columns √λ_k v_k for the eigenvalues λ_k > 0 of ρ.
/// The displaced diagonal is then the row norms of D†(ξ) W, which costs
/// O(N² r) per point instead of O(N³).
inline Eigen::MatrixXcd density_factor(const FockOp& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix);
  const Eigen::VectorXd& lambda = es.eigenvalues();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < lambda.size(); ++k)
    if (lambda(k) > 1e-15) keep.push_back(k);
  Eigen::MatrixXcd w(rho.matrix.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    w.col(static_cast<Eigen::Index>(c)) = std::sqrt(lambda(keep[c])) * es.eigenvectors().col(keep[c]);
  return w;
}

}  // namespace detail

/// s-ordered values (s ≤ 0, see s_distribution) on a single-mode raster.
inline PhaseGrid s_grid(const FockOp& rho, const GridSpec& g, double s,
                        const QuasiOptions& opts = {}) {
  if (s > 0)
    throw UnsupportedOrderError("s > 0 is not supported at distribution level");
  validate_density(rho, opts.density_tol, opts.hermitian_tol);
  PhaseGrid grid = detail::empty_grid(rho, g);
  const Eigen::MatrixXcd w = detail::density_factor(rho);
  const int cutoff = rho.truncation.cutoff(0);
  const double t = (1 + s) / (s - 1);
  Eigen::VectorXd weight(cutoff + 1);
  for (int n = 0; n <= cutoff; ++n) weight(n) = std::pow(t, n);
  const auto n = static_cast<Eigen::Index>(g.resolution);
  std::vector<char> warned(static_cast<std::size_t>(n * n), 0);
  parallel_for(
      static_cast<std::size_t>(n * n),
      [&](std::size_t k) {
        const auto i = static_cast<Eigen::Index>(k) / n, j = static_cast<Eigen::Index>(k) % n;
        const Eigen::MatrixXcd dw =
            detail::single_mode_displacement(cutoff, grid.point(i, j)).adjoint() * w;
        const Eigen::VectorXd diag = dw.rowwise().squaredNorm();
        grid.values(i, j) = weight.dot(diag);
        const double frac = detail::top_block_fraction(rho.truncation, diag.cast<Complex>());
        warned[k] = frac > opts.fock.tail_fraction ? 1 : 0;
      },
      opts.threads);
  const auto count = std::count(warned.begin(), warned.end(), 1);
  if (count > 0)
    grid.diagnostics.push_back("tail-dominance: " + std::to_string(count) +
                               " grid point(s) exceed the truncation tail fraction");
  return grid;
}

/// Wigner values on a single-mode raster.
inline PhaseGrid wigner_grid(const FockOp& rho, const GridSpec& g,
                             const QuasiOptions& opts = {}) {
  return s_grid(rho, g, 0.0, opts);
}

/// s-ordered value for s ≤ 0 on the W scale: s = 0 is wigner_series, s = -1
/// the Husimi value, and in between Σ_n t^{N} ⟨n|D̂†ρ̂D̂|n⟩ with
/// t = (1+s)/(s-1), which equals (1-s) times the Gaussian smoothing of W with
/// variance -s/2 per complex coordinate.
inline double s_distribution(const FockOp& rho, const CoherentAmplitudes& xi, double s,
                             const QuasiOptions& opts = {}) {
  if (s > 0)
    throw UnsupportedOrderError(
        "s > 0 is not supported at distribution level: the anti-normal (P) "
        "quasiprobability of the supported states is singular; use s_transform "
        "on symbols instead");
  if (s == 0) return wigner_series(rho, xi, opts);
  if (s == -1) return husimi_symbol(rho, xi).real();
  const double asym = (rho.matrix - rho.matrix.adjoint()).cwiseAbs().maxCoeff();
  if (asym > opts.hermitian_tol) throw ContractError("s_distribution needs a Hermitian operator");
  const double t = (1 + s) / (s - 1);
  const Eigen::VectorXcd diag = detail::displaced_diagonal(rho, xi);
  double sum = 0;
  for (Eigen::Index n = 0; n < diag.size(); ++n) {
    int total = 0;
    for (int o : rho.truncation.occupations(n)) total += o;
    sum += std::pow(t, total) * diag(n).real();
  }
  return sum;
}

inline double s_distribution(const FockOp& rho, const CoherentAmplitudes& xi, const SOrder& s,
                             const QuasiOptions& opts = {}) {
  return s_distribution(rho, xi, to_double(s.s), opts);
}

/// CSV with header `re,im,value`, one row per point (re outer, im inner),
/// 17 significant digits. `value` is the real part.
inline std::string to_csv(const PhaseGrid& grid) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "re,im,value\n";
  for (std::size_t i = 0; i < grid.re_axis.size(); ++i)
    for (std::size_t j = 0; j < grid.im_axis.size(); ++j)
      out << grid.re_axis[i] << ',' << grid.im_axis[j] << ','
          << grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)).real()
          << '\n';
  return out.str();
}

inline nlohmann::json to_json(const PhaseGrid& grid, nlohmann::json metadata = nlohmann::json::object()) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < grid.values.rows(); ++i) {
    std::vector<double> r, m;
    for (Eigen::Index j = 0; j < grid.values.cols(); ++j) {
      r.push_back(grid.values(i, j).real());
      m.push_back(grid.values(i, j).imag());
    }
    re.push_back(r);
    im.push_back(m);
  }
  metadata["normalization"] =
      "W = tr{Pi D^dag(xi) rho D(xi)}; conventional density is (2/pi)^M * W";
  return {{"mode", grid.mode},           {"re_axis", grid.re_axis},
          {"im_axis", grid.im_axis},     {"values", re},
          {"values_imag", im},           {"diagnostics", grid.diagnostics},
          {"metadata", std::move(metadata)}};
}

/// Grid extrema: (min value, min point, max value, max point), real parts.
struct GridExtrema {
  double min_value, max_value;
  Complex min_at, max_at;
};

inline GridExtrema extrema(const PhaseGrid& grid) {
  GridExtrema e{std::numeric_limits<double>::infinity(),
                -std::numeric_limits<double>::infinity(), {}, {}};
  for (Eigen::Index i = 0; i < grid.values.rows(); ++i)
    for (Eigen::Index j = 0; j < grid.values.cols(); ++j) {
      const double v = grid.values(i, j).real();
      if (v < e.min_value) { e.min_value = v; e.min_at = grid.point(i, j); }
      if (v > e.max_value) { e.max_value = v; e.max_at = grid.point(i, j); }
    }
  return e;
}

// ---------------------------------------------------------------------------
// State mini-language:
//   vacuum | fock:n[,n...] | coherent:c[,c...] | sup:(w)state+(w)state...
// where c and w are complex literals such as 1, -0.5, 2i, 1+0i, 0.3-1.2i.
// Superpositions do not nest.

namespace detail {

inline Complex parse_complex(const std::string& text, std::size_t offset) {
  const auto fail = [&] {
    throw ParseError("malformed complex number '" + text + "'", offset,
                     {"re", "re+imi", "imi"});
  };
  if (text.empty()) fail();
  auto to_d = [&](const std::string& s) -> double {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (...) {
      fail();
    }
    if (used != s.size() || !std::isfinite(v)) fail();
    return v;
  };
  if (text.back() != 'i') return {to_d(text), 0.0};
  const std::string body = text.substr(0, text.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;)
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  if (split == std::string::npos) return {0.0, to_d(body)};
  return {to_d(body.substr(0, split)), to_d(body.substr(split))};
}

inline std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t c = s.find(',', start);
    out.push_back(s.substr(start, c - start));
    if (c == std::string::npos) return out;
    start = c + 1;
  }
}

inline StateSpec parse_simple_state(const std::string& text, std::size_t offset,
                                    std::size_t mode_count) {
  if (text == "vacuum") return {state::Fock{std::vector<int>(mode_count, 0)}};
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ParseError("unknown state '" + text + "'", offset,
                     {"vacuum", "fock:", "coherent:", "sup:"});
  const std::string head = text.substr(0, colon);
  const auto parts = split_commas(text.substr(colon + 1));
  if (parts.size() != mode_count)
    throw DimensionError("state '" + text + "' lists " + std::to_string(parts.size()) +
                         " mode(s), expected " + std::to_string(mode_count));
  if (head == "fock") {
    std::vector<int> occ;
    for (const auto& p : parts) {
      if (p.empty() || p.size() > 6 || p.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("malformed occupation '" + p + "'", offset + colon + 1,
                         {"non-negative integer"});
      occ.push_back(std::stoi(p));
    }
    return {state::Fock{std::move(occ)}};
  }
  if (head == "coherent") {
    CoherentAmplitudes amp;
    for (const auto& p : parts) amp.alpha.push_back(parse_complex(p, offset + colon + 1));
    return {state::Coherent{std::move(amp)}};
  }
  throw ParseError("unknown state kind '" + head + "'", offset,
                   {"vacuum", "fock", "coherent", "sup"});
}

}  // namespace detail

inline StateSpec parse_state(const std::string& text, std::size_t mode_count) {
  if (text.rfind("sup:", 0) != 0) return detail::parse_simple_state(text, 0, mode_count);
  state::Superposition sup;
  std::size_t pos = 4;
  while (true) {
    if (pos >= text.size() || text[pos] != '(')
      throw ParseError("expected '(' before a superposition weight", pos, {"("});
    const std::size_t close = text.find(')', pos);
    if (close == std::string::npos) throw ParseError("unbalanced '('", pos, {")"});
    sup.weights.push_back(detail::parse_complex(text.substr(pos + 1, close - pos - 1), pos + 1));
    const std::size_t start = close + 1;
    std::size_t next = text.find("+(", start);
    const std::string body = text.substr(start, next == std::string::npos ? std::string::npos
                                                                          : next - start);
    if (body.rfind("sup:", 0) == 0)
      throw ParseError("nested superpositions are not supported", start);
    if (body.empty()) throw ParseError("missing state after weight", start, {"state"});
    sup.states.push_back(detail::parse_simple_state(body, start, mode_count));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return {std::move(sup)};
}

}  // namespace dq
