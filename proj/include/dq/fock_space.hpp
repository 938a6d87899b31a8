#pragma once

// Truncated multimode Fock space: ladder operators, displacement, parity,
// quantization of polynomial symbols, coherent states, and the displaced
// parity trace that recovers Weyl symbols from operators.
//
// Basis ordering is row-major over modes: mode 0 is the most significant
// digit of the flat index. Identities that hold in the full Fock space hold
// here up to tails controlled by how much amplitude reaches the cutoff.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "dq/errors.hpp"
#include "dq/poly_symbol.hpp"
#include "dq/symbol_algebra.hpp"

namespace dq {

using Complex = std::complex<double>;

/// Default cap on the total Fock dimension Π_j (N_j + 1).
inline constexpr std::size_t kDefaultMaxDimension = 4096;

class FockTruncation {
 public:
  /// `cutoffs[j]` is the largest occupation kept for mode j.
  explicit FockTruncation(std::vector<int> cutoffs,
                          std::size_t max_dimension = kDefaultMaxDimension)
      : cutoffs_(std::move(cutoffs)) {
    if (cutoffs_.empty()) throw DimensionError("truncation needs at least one mode");
    dim_ = 1;
    for (int n : cutoffs_) {
      if (n < 0) throw DimensionError("cutoff must be non-negative");
      dim_ *= static_cast<std::size_t>(n) + 1;
      if (dim_ > max_dimension)
        throw DimensionError("Fock dimension exceeds the configured cap of " +
                             std::to_string(max_dimension));
    }
  }

  static FockTruncation uniform(std::size_t modes, int cutoff,
                                std::size_t max_dimension = kDefaultMaxDimension) {
    return FockTruncation(std::vector<int>(modes, cutoff), max_dimension);
  }

  std::size_t mode_count() const noexcept { return cutoffs_.size(); }
  int cutoff(std::size_t j) const { return cutoffs_.at(j); }
  const std::vector<int>& cutoffs() const noexcept { return cutoffs_; }
  Eigen::Index dimension() const noexcept { return static_cast<Eigen::Index>(dim_); }

  /// Flat index of an occupation vector.
  Eigen::Index index(const std::vector<int>& occ) const {
    if (occ.size() != cutoffs_.size()) throw DimensionError("occupation vector length");
    Eigen::Index idx = 0;
    for (std::size_t j = 0; j < occ.size(); ++j) {
      if (occ[j] < 0 || occ[j] > cutoffs_[j])
        throw DimensionError("occupation outside the truncation");
      idx = idx * (cutoffs_[j] + 1) + occ[j];
    }
    return idx;
  }

  std::vector<int> occupations(Eigen::Index idx) const {
    std::vector<int> occ(cutoffs_.size());
    for (std::size_t j = cutoffs_.size(); j-- > 0;) {
      occ[j] = static_cast<int>(idx % (cutoffs_[j] + 1));
      idx /= cutoffs_[j] + 1;
    }
    return occ;
  }

  friend bool operator==(const FockTruncation& x, const FockTruncation& y) {
    return x.cutoffs_ == y.cutoffs_;
  }

 private:
  std::vector<int> cutoffs_;
  std::size_t dim_ = 1;
};

/// Dense operator on a truncated Fock space.
struct FockOp {
  FockTruncation truncation;
  Eigen::MatrixXcd matrix;

  FockOp(FockTruncation t, Eigen::MatrixXcd m)
      : truncation(std::move(t)), matrix(std::move(m)) {
    if (matrix.rows() != truncation.dimension() || matrix.cols() != truncation.dimension())
      throw DimensionError("operator matrix does not match the truncation dimension");
  }

  FockOp adjoint() const { return {truncation, matrix.adjoint()}; }

  friend FockOp operator*(const FockOp& x, const FockOp& y) {
    x.require_same(y);
    return {x.truncation, x.matrix * y.matrix};
  }
  friend FockOp operator+(const FockOp& x, const FockOp& y) {
    x.require_same(y);
    return {x.truncation, x.matrix + y.matrix};
  }
  friend FockOp operator-(const FockOp& x, const FockOp& y) {
    x.require_same(y);
    return {x.truncation, x.matrix - y.matrix};
  }
  friend FockOp operator*(Complex s, const FockOp& x) {
    return {x.truncation, s * x.matrix};
  }

  void require_same(const FockOp& o) const {
    if (!(truncation == o.truncation))
      throw DimensionError("operators live on different truncations");
  }
};

/// One complex amplitude per mode (α(k) or ξ(k) restricted to finitely many modes).
struct CoherentAmplitudes {
  std::vector<Complex> alpha;

  std::size_t mode_count() const noexcept { return alpha.size(); }

  double norm2() const {
    double s = 0;
    for (const auto& a : alpha) s += std::norm(a);
    return s;
  }

  friend CoherentAmplitudes operator+(const CoherentAmplitudes& x,
                                      const CoherentAmplitudes& y) {
    require_same(x, y);
    CoherentAmplitudes r = x;
    for (std::size_t j = 0; j < r.alpha.size(); ++j) r.alpha[j] += y.alpha[j];
    return r;
  }
  friend CoherentAmplitudes operator-(const CoherentAmplitudes& x,
                                      const CoherentAmplitudes& y) {
    require_same(x, y);
    CoherentAmplitudes r = x;
    for (std::size_t j = 0; j < r.alpha.size(); ++j) r.alpha[j] -= y.alpha[j];
    return r;
  }

  static void require_same(const CoherentAmplitudes& x, const CoherentAmplitudes& y) {
    if (x.alpha.size() != y.alpha.size())
      throw DimensionError("amplitude vectors have different mode counts");
  }
};

/// ⟨β, α⟩ = Σ_j conj(β_j) α_j.
inline Complex inner(const CoherentAmplitudes& beta, const CoherentAmplitudes& alpha) {
  CoherentAmplitudes::require_same(beta, alpha);
  Complex s{0, 0};
  for (std::size_t j = 0; j < alpha.alpha.size(); ++j)
    s += std::conj(beta.alpha[j]) * alpha.alpha[j];
  return s;
}

/// Smallest cutoff N ≥ ⌈8·max|amplitude|² + 30⌉, which leaves Poisson tails
/// far below 1e-10.
inline int default_cutoff(double max_abs_amplitude) {
  return static_cast<int>(std::ceil(8.0 * max_abs_amplitude * max_abs_amplitude + 30.0));
}

/// Tolerances and thresholds for the numeric oracle.
struct FockOptions {
  double closed_form_tol = 1e-8;
  double quantization_tol = 1e-6;
  /// Trace mass allowed in the top-occupation block before warning.
  double tail_fraction = 1e-8;
  /// Convergence threshold for the Euler-summed parity trace, relative to
  /// the largest diagonal entry used.
  double series_tol = 1e-13;
};

namespace detail {

inline void require_modes(const FockTruncation& t, std::size_t modes) {
  if (t.mode_count() != modes)
    throw DimensionError("expected " + std::to_string(t.mode_count()) +
                         " mode(s), got " + std::to_string(modes));
}

inline Eigen::MatrixXcd single_mode_annihilation(int cutoff) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
  Eigen::MatrixXcd out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return out;
}

/// Single-mode block ⟨m|D(ξ)|n⟩, m, n ≤ cutoff, of the exact displacement
/// operator. Along each diagonal m - n = k the entries are
/// √(n!/m!) ξ^k e^{-|ξ|²/2} L_n^{(k)}(|ξ|²), generated by the normalized
/// three-term Laguerre recurrence (forward-stable); entries above the
/// diagonal follow from ⟨m|D(ξ)|n⟩ = conj⟨n|D(-ξ)|m⟩.
inline Eigen::MatrixXcd single_mode_displacement(int cutoff, Complex xi) {
  const int n_max = cutoff;
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Identity(n_max + 1, n_max + 1);
  const double r = std::abs(xi);
  if (r == 0) return d;
  const double x = r * r;
  const Complex ph = xi / r;
  Complex phk{1, 0};
  for (int k = 0; k <= n_max; ++k, phk *= ph) {
    const double log_f0 = k * std::log(r) - 0.5 * std::lgamma(k + 1.0) - 0.5 * x;
    double prev = 0, f = std::exp(log_f0);
    const Complex up = phk;
    const Complex down = (k % 2 == 0 ? 1.0 : -1.0) * std::conj(phk);
    for (int n = 0; n + k <= n_max; ++n) {
      d(n + k, n) = f * up;
      if (k > 0) d(n, n + k) = f * down;
      const double next = ((2.0 * n + 1 + k - x) * f - std::sqrt(double(n) * (n + k)) * prev) /
                          std::sqrt((n + 1.0) * (n + 1 + k));
      prev = f;
      f = next;
    }
  }
  return d;
}

/// Coherent-state Fock amplitudes e^{-|α|²/2} α^n / √n! for n ≤ cutoff.
inline Eigen::VectorXcd single_mode_coherent(int cutoff, Complex alpha) {
  Eigen::VectorXcd v(cutoff + 1);
  Complex c = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n <= cutoff; ++n) {
    v(n) = c;
    c *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  return v;
}

}  // namespace detail

inline FockOp identity(const FockTruncation& t) {
  return {t, Eigen::MatrixXcd::Identity(t.dimension(), t.dimension())};
}

/// â_mode tensored with identities: ⟨n-1|â|n⟩ = √n.
inline FockOp annihilation(const FockTruncation& t, std::size_t mode) {
  if (mode >= t.mode_count())
    throw DimensionError("mode index " + std::to_string(mode) + " out of range");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(t.dimension(), t.dimension());
  for (Eigen::Index idx = 0; idx < t.dimension(); ++idx) {
    auto occ = t.occupations(idx);
    if (occ[mode] == 0) continue;
    const double amp = std::sqrt(static_cast<double>(occ[mode]));
    --occ[mode];
    m(t.index(occ), idx) = amp;
  }
  return {t, std::move(m)};
}

inline FockOp creation(const FockTruncation& t, std::size_t mode) {
  return annihilation(t, mode).adjoint();
}

/// N̂ = Σ_j â†_j â_j (integer spectrum).
inline FockOp number(const FockTruncation& t) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(t.dimension(), t.dimension());
  for (Eigen::Index idx = 0; idx < t.dimension(); ++idx) {
    int total = 0;
    for (int n : t.occupations(idx)) total += n;
    m(idx, idx) = static_cast<double>(total);
  }
  return {t, std::move(m)};
}

/// Π̂ = (-1)^N̂.
inline FockOp parity(const FockTruncation& t) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(t.dimension(), t.dimension());
  for (Eigen::Index idx = 0; idx < t.dimension(); ++idx) {
    int total = 0;
    for (int n : t.occupations(idx)) total += n;
    m(idx, idx) = (total % 2 == 0) ? 1.0 : -1.0;
  }
  return {t, std::move(m)};
}

/// Truncated block of D̂(ξ) = exp{Σ_j (ξ_j â†_j - ξ*_j â_j)}: the exact
/// matrix elements ⟨m|D̂(ξ)|n⟩ for occupations within the cutoffs, tensored
/// over modes. The block is unitary only up to the amplitude D̂(ξ) moves past
/// the cutoff. D(0) is the identity exactly.
inline FockOp displacement(const FockTruncation& t, const CoherentAmplitudes& xi) {
  detail::require_modes(t, xi.mode_count());
  Eigen::MatrixXcd d = detail::single_mode_displacement(t.cutoff(0), xi.alpha[0]);
  for (std::size_t j = 1; j < t.mode_count(); ++j)
    d = detail::kron(d, detail::single_mode_displacement(t.cutoff(j), xi.alpha[j]));
  return {t, std::move(d)};
}

struct CoherentState {
  Eigen::VectorXcd vector;
  /// Probability lost to truncation: 1 - Π_j Σ_{n ≤ N_j} |⟨n|α_j⟩|².
  double tail = 0;
};

/// |α⟩ from the analytic expansion Π_j e^{-|α_j|²/2} α_j^{n_j} / √(n_j!).
/// The vector is not renormalized; its squared norm is 1 - tail.
inline CoherentState coherent_state(const FockTruncation& t, const CoherentAmplitudes& alpha) {
  detail::require_modes(t, alpha.mode_count());
  for (const auto& a : alpha.alpha)
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw ContractError("coherent amplitude is not finite");
  Eigen::VectorXcd v = detail::single_mode_coherent(t.cutoff(0), alpha.alpha[0]);
  double kept = v.squaredNorm();
  for (std::size_t j = 1; j < t.mode_count(); ++j) {
    Eigen::VectorXcd w = detail::single_mode_coherent(t.cutoff(j), alpha.alpha[j]);
    kept *= w.squaredNorm();
    Eigen::VectorXcd out(v.size() * w.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out.segment(i * w.size(), w.size()) = v(i) * w;
    v = std::move(out);
  }
  return {std::move(v), std::max(0.0, 1.0 - kept)};
}

/// Basis vector |n_1, n_2, ...⟩.
inline Eigen::VectorXcd fock_vector(const FockTruncation& t, const std::vector<int>& occ) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(t.dimension());
  v(t.index(occ)) = 1.0;
  return v;
}

/// Builds Σ c Π_j â†_j^{m_j} â_j^{n_j} from the normal symbol Σ c Π_j a*_j^{m_j} a_j^{n_j}.
inline FockOp normal_quantize(const PolySymbol& f, const FockTruncation& t) {
  detail::require_modes(t, f.mode_count());
  const std::size_t modes = t.mode_count();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(t.dimension(), t.dimension());
  std::vector<int> occ;
  for (const auto& [e, c] : f.terms()) {
    const Complex coef = c.to_complex();
    for (Eigen::Index col = 0; col < t.dimension(); ++col) {
      occ = t.occupations(col);
      double amp = 1.0;
      bool alive = true;
      for (std::size_t j = 0; j < modes && alive; ++j) {
        const int down = static_cast<int>(e[2 * j]);
        const int up = static_cast<int>(e[2 * j + 1]);
        if (occ[j] < down) { alive = false; break; }
        for (int k = 0; k < down; ++k) amp *= std::sqrt(static_cast<double>(occ[j] - k));
        occ[j] -= down;
        if (occ[j] + up > t.cutoff(j)) { alive = false; break; }
        for (int k = 1; k <= up; ++k) amp *= std::sqrt(static_cast<double>(occ[j] + k));
        occ[j] += up;
      }
      if (alive) m(t.index(occ), col) += coef * amp;
    }
  }
  return {t, std::move(m)};
}

/// Weyl quantization: convert the Weyl symbol to its normal symbol, then build.
inline FockOp weyl_quantize(const PolySymbol& f, const FockTruncation& t) {
  return normal_quantize(s_transform(f, SOrder::weyl(), SOrder::normal()), t);
}

/// Result of a displaced-parity trace with its truncation diagnostics.
struct TraceEstimate {
  Complex value{0, 0};
  /// Share of Σ|⟨n|D†·op·D|n⟩| carried by the top-occupation block.
  double tail_fraction = 0;
  /// Euler shells summed before the series settled.
  int shells_used = 0;
  bool converged = false;
  /// Set when the result depends on truncation-affected entries.
  bool tail_warning = false;
};

namespace detail {

/// Diagonal ⟨n|D†(z)·op·D(z)|n⟩ over the whole truncated basis.
inline Eigen::VectorXcd displaced_diagonal(const FockOp& op, const CoherentAmplitudes& z) {
  detail::require_modes(op.truncation, z.mode_count());
  const FockOp d = displacement(op.truncation, z);
  const Eigen::MatrixXcd ad = op.matrix * d.matrix;
  Eigen::VectorXcd diag(op.truncation.dimension());
  for (Eigen::Index n = 0; n < diag.size(); ++n) diag(n) = d.matrix.col(n).dot(ad.col(n));
  return diag;
}

/// Width of the top-occupation block of mode j.
inline int top_block_width(int cutoff) { return std::max(1, (cutoff + 1) / 10); }

inline double top_block_fraction(const FockTruncation& t, const Eigen::VectorXcd& diag) {
  double top = 0, total = 0;
  for (Eigen::Index n = 0; n < diag.size(); ++n) {
    const auto occ = t.occupations(n);
    bool in_top = false;
    for (std::size_t j = 0; j < occ.size(); ++j)
      in_top |= occ[j] > t.cutoff(j) - top_block_width(t.cutoff(j));
    const double m = std::abs(diag(n));
    total += m;
    if (in_top) top += m;
  }
  return total > 0 ? top / total : 0.0;
}

}  // namespace detail

/// Σ_n (-1)^{Σ n_j} ⟨n|D†(z)·op·D(z)|n⟩ for the displaced diagonal `diag`.
///
/// When the top-occupation block carries no more than `tail_fraction` of
/// the diagonal mass the plain alternating sum is returned. Otherwise the
/// series is summed with Euler's transformation mode by mode: polynomial
/// operators have displaced diagonals that grow polynomially in n, so the
/// plain sum oscillates without limit, while the Euler transform terminates
/// after deg/2 + 1 shells at the Abel value and only touches low-occupation
/// entries that the truncation reproduces faithfully. Shells are added until
/// two consecutive ones fall below `series_tol` relative to the largest entry
/// involved; a warning is raised if that needs the top block.
inline TraceEstimate alternating_trace(const FockTruncation& t, const Eigen::VectorXcd& diag,
                                       const FockOptions& opts = {}) {
  const std::size_t modes = t.mode_count();
  TraceEstimate est;
  est.tail_fraction = detail::top_block_fraction(t, diag);
  if (est.tail_fraction <= opts.tail_fraction) {
    for (Eigen::Index n = 0; n < diag.size(); ++n) {
      int total = 0;
      for (int o : t.occupations(n)) total += o;
      est.value += (total % 2 == 0) ? diag(n) : -diag(n);
    }
    est.converged = true;
    return est;
  }

  // Euler weights w(k, j) = C(k, j) / 2^{k+1}, per mode.
  std::vector<Eigen::MatrixXd> weights(modes);
  for (std::size_t m = 0; m < modes; ++m) {
    const int n = t.cutoff(m);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n + 1, n + 1);
    w(0, 0) = 0.5;
    for (int k = 1; k <= n; ++k)
      for (int j = 0; j <= k; ++j)
        w(k, j) = 0.5 * ((j > 0 ? w(k - 1, j - 1) : 0.0) + (j < k ? w(k - 1, j) : 0.0));
    weights[m] = std::move(w);
  }

  // Transform axis by axis: T[k] = Σ_j w(k, j) (-1)^j d[j] along each mode.
  Eigen::VectorXcd terms = diag;
  std::size_t stride = static_cast<std::size_t>(t.dimension());
  for (std::size_t m = 0; m < modes; ++m) {
    const int len = t.cutoff(m) + 1;
    stride /= static_cast<std::size_t>(len);
    Eigen::VectorXcd next(terms.size());
    const std::size_t block = stride * static_cast<std::size_t>(len);
    for (std::size_t base = 0; base < static_cast<std::size_t>(terms.size()); base += block)
      for (std::size_t inner = 0; inner < stride; ++inner)
        for (int k = 0; k < len; ++k) {
          Complex s{0, 0};
          for (int j = 0; j <= k; ++j) {
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            s += weights[m](k, j) * sign *
                 terms(static_cast<Eigen::Index>(base + inner + j * stride));
          }
          next(static_cast<Eigen::Index>(base + inner + k * stride)) = s;
        }
    terms = std::move(next);
  }

  int max_shell = 0;
  int top_start = t.cutoff(0);
  for (std::size_t m = 0; m < modes; ++m) {
    max_shell = std::max(max_shell, t.cutoff(m));
    top_start = std::min(top_start, t.cutoff(m) + 1 - detail::top_block_width(t.cutoff(m)));
  }
  std::vector<Complex> shell(max_shell + 1, Complex{0, 0});
  std::vector<double> scale(max_shell + 1, 0.0);
  for (Eigen::Index n = 0; n < terms.size(); ++n) {
    int s = 0;
    for (int o : t.occupations(n)) s = std::max(s, o);
    shell[s] += terms(n);
    scale[s] = std::max(scale[s], std::abs(diag(n)));
  }

  if (diag.cwiseAbs().maxCoeff() == 0.0) {
    est.converged = true;
    return est;
  }
  // Leading zeros (e.g. a†^k a^k at the origin) say nothing about
  // convergence, so quiet shells only count once a nonzero entry appeared.
  double running_scale = 0;
  int quiet = 0;
  for (int s = 0; s <= max_shell; ++s) {
    est.value += shell[s];
    est.shells_used = s + 1;
    running_scale = std::max(running_scale, scale[s]);
    if (running_scale == 0.0) continue;
    if (std::abs(shell[s]) <= opts.series_tol * std::max(1.0, running_scale)) {
      if (++quiet == 2) {
        est.converged = true;
        break;
      }
    } else {
      quiet = 0;
    }
  }
  est.tail_warning = !est.converged || est.shells_used > top_start;
  return est;
}

/// tr{Π̂ D̂†(z)·op·D̂(z)} evaluated by alternating_trace().
inline TraceEstimate displaced_parity_trace(const FockOp& op, const CoherentAmplitudes& z,
                                            const FockOptions& opts = {}) {
  return alternating_trace(op.truncation, detail::displaced_diagonal(op, z), opts);
}

/// Weyl symbol of an operator at the phase point z:
/// F(z) = 2^M tr{Π̂ D̂†(z) F̂ D̂(z)}. For op = weyl_quantize(F) this is F(z, z*).
inline TraceEstimate weyl_symbol_estimate(const FockOp& op, const CoherentAmplitudes& z,
                                          const FockOptions& opts = {}) {
  TraceEstimate est = displaced_parity_trace(op, z, opts);
  est.value *= std::ldexp(1.0, static_cast<int>(op.truncation.mode_count()));
  return est;
}

inline Complex weyl_symbol(const FockOp& op, const CoherentAmplitudes& z,
                           const FockOptions& opts = {}) {
  return weyl_symbol_estimate(op, z, opts).value;
}

/// Husimi (normal) symbol ⟨z|F̂|z⟩.
inline Complex husimi_symbol(const FockOp& op, const CoherentAmplitudes& z) {
  const CoherentState cs = coherent_state(op.truncation, z);
  return cs.vector.dot(op.matrix * cs.vector);
}

/// Single-mode resolution of identity (1/π)∫|α⟩⟨α| d²α over |α| ≤ radius,
/// restricted to the n ≤ block_max block. Polar grid: midpoint rule with
/// `radial` nodes in r and `angular` equispaced nodes in θ.
inline Eigen::MatrixXcd completeness_quadrature(int block_max = 10, double radius = 6.0,
                                                int radial = 200, int angular = 200) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(block_max + 1, block_max + 1);
  const double dr = radius / radial;
  const double dth = 2.0 * std::numbers::pi / angular;
  for (int ir = 0; ir < radial; ++ir) {
    const double r = (ir + 0.5) * dr;
    for (int it = 0; it < angular; ++it) {
      const double th = it * dth;
      const Eigen::VectorXcd v = detail::single_mode_coherent(block_max, std::polar(r, th));
      acc.noalias() += (r * dr * dth / std::numbers::pi) * (v * v.adjoint());
    }
  }
  return acc;
}

/// Debug export: {"dimension", "cutoffs", "re": [...], "im": [...]} row-major.
inline nlohmann::json to_json(const FockOp& op) {
  std::vector<double> re, im;
  for (Eigen::Index i = 0; i < op.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < op.matrix.cols(); ++j) {
      re.push_back(op.matrix(i, j).real());
      im.push_back(op.matrix(i, j).imag());
    }
  return {{"dimension", op.matrix.rows()}, {"cutoffs", op.truncation.cutoffs()},
          {"re", re}, {"im", im}};
}

inline nlohmann::json to_json(const Eigen::VectorXcd& v) {
  std::vector<double> re, im;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return {{"dimension", v.size()}, {"re", re}, {"im", im}};
}

}  // namespace dq
