#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dq/errors.hpp"
#include "dq/rational.hpp"

namespace dq {

/// Exact polynomial phase-space symbol F[a, a*] over finitely many modes.
///
/// Exponent vectors are laid out per mode as (e_a0, e_ad0, e_a1, e_ad1, ...),
/// so index 2j holds the power of a_j and 2j+1 the power of a*_j. Terms are
/// kept in canonical form: no zero coefficient is ever stored. The term map
/// is ordered graded-lexicographically (higher total degree first, then the
/// lexicographically larger exponent vector first), which is also the print
/// order used by format().
class PolySymbol {
 public:
  using Exponents = std::vector<std::uint32_t>;

  struct GradedOrder {
    bool operator()(const Exponents& x, const Exponents& y) const {
      const auto dx = std::accumulate(x.begin(), x.end(), std::uint64_t{0});
      const auto dy = std::accumulate(y.begin(), y.end(), std::uint64_t{0});
      if (dx != dy) return dx > dy;
      return x > y;
    }
  };

  using TermMap = std::map<Exponents, CRational, GradedOrder>;

  explicit PolySymbol(std::size_t mode_count) : modes_(mode_count) {
    if (mode_count == 0) throw DimensionError("mode_count must be positive");
  }

  static PolySymbol constant(std::size_t mode_count, const CRational& c) {
    PolySymbol p(mode_count);
    p.add_term(Exponents(2 * mode_count, 0), c);
    return p;
  }

  /// The holomorphic variable a_j.
  static PolySymbol a(std::size_t mode_count, std::size_t j) {
    return variable(mode_count, 2 * j);
  }

  /// The antiholomorphic variable a*_j.
  static PolySymbol a_star(std::size_t mode_count, std::size_t j) {
    return variable(mode_count, 2 * j + 1);
  }

  std::size_t mode_count() const noexcept { return modes_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Total degree of the highest term; 0 for constants and for zero.
  std::uint32_t degree() const {
    std::uint32_t d = 0;
    for (const auto& [e, c] : terms_)
      d = std::max(d, std::accumulate(e.begin(), e.end(), std::uint32_t{0}));
    return d;
  }

  /// Adds c·monomial(e), dropping the entry if it cancels to zero.
  void add_term(const Exponents& e, const CRational& c) {
    if (e.size() != 2 * modes_)
      throw DimensionError("exponent vector has length " +
                           std::to_string(e.size()) + ", expected " +
                           std::to_string(2 * modes_));
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  CRational coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? CRational{} : it->second;
  }

  PolySymbol& operator+=(const PolySymbol& o) {
    require_same_modes(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  PolySymbol& operator-=(const PolySymbol& o) {
    require_same_modes(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  PolySymbol& operator*=(const CRational& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend PolySymbol operator+(PolySymbol x, const PolySymbol& y) {
    return x += y;
  }
  friend PolySymbol operator-(PolySymbol x, const PolySymbol& y) {
    return x -= y;
  }
  friend PolySymbol operator-(PolySymbol x) { return x *= CRational(-1); }
  friend PolySymbol operator*(PolySymbol x, const CRational& s) {
    return x *= s;
  }
  friend PolySymbol operator*(const CRational& s, PolySymbol x) {
    return x *= s;
  }

  /// Pointwise (commutative) product of functions.
  friend PolySymbol operator*(const PolySymbol& x, const PolySymbol& y) {
    x.require_same_modes(y);
    PolySymbol out(x.modes_);
    Exponents e(2 * x.modes_);
    for (const auto& [ex, cx] : x.terms_)
      for (const auto& [ey, cy] : y.terms_) {
        for (std::size_t k = 0; k < e.size(); ++k) e[k] = ex[k] + ey[k];
        out.add_term(e, cx * cy);
      }
    return out;
  }

  friend bool operator==(const PolySymbol& x, const PolySymbol& y) {
    return x.modes_ == y.modes_ && x.terms_ == y.terms_;
  }

  /// ∂/∂a_j when `star` is false, ∂/∂a*_j when it is true.
  PolySymbol derivative(std::size_t j, bool star) const {
    if (j >= modes_) throw DimensionError("mode index out of range");
    const std::size_t slot = 2 * j + (star ? 1 : 0);
    PolySymbol out(modes_);
    for (const auto& [e, c] : terms_) {
      if (e[slot] == 0) continue;
      Exponents d = e;
      --d[slot];
      out.add_term(d, c * CRational(Rational(e[slot])));
    }
    return out;
  }

  /// Complex conjugate of the function: swaps a_j ↔ a*_j and conjugates
  /// coefficients. Real-valued symbols are fixed points.
  PolySymbol conjugate() const {
    PolySymbol out(modes_);
    for (const auto& [e, c] : terms_) {
      Exponents s = e;
      for (std::size_t j = 0; j < modes_; ++j) std::swap(s[2 * j], s[2 * j + 1]);
      out.add_term(s, c.conj());
    }
    return out;
  }

  /// Evaluates with independent values for a_j and a*_j.
  std::complex<double> evaluate(std::span<const std::complex<double>> a,
                                std::span<const std::complex<double>> a_star) const {
    if (a.size() != modes_ || a_star.size() != modes_)
      throw DimensionError("evaluation point has the wrong number of modes");
    std::complex<double> sum{0.0, 0.0};
    for (const auto& [e, c] : terms_) {
      std::complex<double> t = c.to_complex();
      for (std::size_t j = 0; j < modes_; ++j) {
        for (std::uint32_t p = 0; p < e[2 * j]; ++p) t *= a[j];
        for (std::uint32_t p = 0; p < e[2 * j + 1]; ++p) t *= a_star[j];
      }
      sum += t;
    }
    return sum;
  }

  /// Evaluates at the phase point a_j = z_j, a*_j = conj(z_j).
  std::complex<double> evaluate(std::span<const std::complex<double>> z) const {
    std::vector<std::complex<double>> zc(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) zc[j] = std::conj(z[j]);
    return evaluate(z, zc);
  }

 private:
  static PolySymbol variable(std::size_t mode_count, std::size_t slot) {
    if (slot >= 2 * mode_count) throw DimensionError("mode index out of range");
    PolySymbol p(mode_count);
    Exponents e(2 * mode_count, 0);
    e[slot] = 1;
    p.add_term(e, CRational(1));
    return p;
  }

  void require_same_modes(const PolySymbol& o) const {
    if (o.modes_ != modes_)
      throw DimensionError("mode-count mismatch: " + std::to_string(modes_) +
                           " vs " + std::to_string(o.modes_));
  }

  std::size_t modes_;
  TermMap terms_;
};

// Canonical JSON: {"modes": n, "terms": [{"exp": [...], "re": "p/q", "im": "p/q"}]}

inline nlohmann::json to_json(const PolySymbol& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : f.terms())
    terms.push_back({{"exp", e}, {"re", to_string(c.re)}, {"im", to_string(c.im)}});
  return {{"modes", f.mode_count()}, {"terms", std::move(terms)}};
}

inline PolySymbol symbol_from_json(const nlohmann::json& j) {
  try {
    const auto modes = j.at("modes").get<std::size_t>();
    PolySymbol f(modes);
    for (const auto& t : j.at("terms")) {
      auto e = t.at("exp").get<PolySymbol::Exponents>();
      if (e.size() != 2 * modes)
        throw DimensionError("term exponent vector has the wrong length");
      f.add_term(e, CRational(parse_rational(t.at("re").get<std::string>()),
                              parse_rational(t.at("im").get<std::string>())));
    }
    return f;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("malformed symbol JSON: ") + ex.what(), 0);
  }
}

}  // namespace dq
