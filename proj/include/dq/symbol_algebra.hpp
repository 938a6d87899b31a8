#pragma once

// Star products and ordering transforms on exact polynomial symbols.
//
// All operators here are exponentials of constant-coefficient bidifferential
// (or differential) operators. On polynomials their series terminate, and
// since they factor over modes, every monomial pair is expanded one mode at a
// time and the per-mode pieces are multiplied out.

#include <cstdint>
#include <vector>

#include "dq/poly_symbol.hpp"

namespace dq {

/// Ordering parameter s: 0 is Weyl-symmetric, -1 normal (Husimi), +1
/// anti-normal (Glauber-Sudarshan). Any rational value is accepted.
struct SOrder {
  Rational s{0};

  static SOrder weyl() { return {Rational(0)}; }
  static SOrder normal() { return {Rational(-1)}; }
  static SOrder antinormal() { return {Rational(1)}; }

  friend bool operator==(const SOrder&, const SOrder&) = default;
};

namespace detail {

inline void require_same_modes(const PolySymbol& f, const PolySymbol& g) {
  if (f.mode_count() != g.mode_count())
    throw DimensionError("mode-count mismatch: " +
                         std::to_string(f.mode_count()) + " vs " +
                         std::to_string(g.mode_count()));
}

/// n (n-1) ... (n-k+1)
inline Rational falling(std::uint32_t n, std::uint32_t k) {
  Rational r(1);
  for (std::uint32_t i = 0; i < k; ++i) r *= Rational(n - i);
  return r;
}

inline Rational factorial(std::uint32_t k) { return falling(k, k); }

inline Rational power(const Rational& x, std::uint32_t k) {
  Rational r(1);
  for (std::uint32_t i = 0; i < k; ++i) r *= x;
  return r;
}

/// One mode's contribution: coefficient times a^ea (a*)^ead.
struct ModePiece {
  Rational coeff;
  std::uint32_t ea;
  std::uint32_t ead;
};

/// Multiplies out per-mode piece lists into `out`, scaled by `base`.
inline void expand_pieces(const std::vector<std::vector<ModePiece>>& per_mode,
                          const CRational& base, PolySymbol& out) {
  const std::size_t modes = per_mode.size();
  std::vector<std::size_t> pick(modes, 0);
  PolySymbol::Exponents e(2 * modes);
  for (const auto& list : per_mode)
    if (list.empty()) return;
  while (true) {
    Rational c(1);
    for (std::size_t j = 0; j < modes; ++j) {
      const ModePiece& p = per_mode[j][pick[j]];
      c *= p.coeff;
      e[2 * j] = p.ea;
      e[2 * j + 1] = p.ead;
    }
    out.add_term(e, base * CRational(c));
    std::size_t j = 0;
    for (; j < modes; ++j) {
      if (++pick[j] < per_mode[j].size()) break;
      pick[j] = 0;
    }
    if (j == modes) return;
  }
}

/// F exp{Σ_j (c_fwd ←∂a_j →∂a*_j + c_bwd ←∂a*_j →∂a_j)} G.
inline PolySymbol bidifferential_product(const PolySymbol& f,
                                         const PolySymbol& g,
                                         const Rational& c_fwd,
                                         const Rational& c_bwd) {
  require_same_modes(f, g);
  const std::size_t modes = f.mode_count();
  PolySymbol out(modes);
  std::vector<std::vector<ModePiece>> per_mode(modes);
  for (const auto& [ef, cf] : f.terms())
    for (const auto& [eg, cg] : g.terms()) {
      for (std::size_t j = 0; j < modes; ++j) {
        const std::uint32_t fa = ef[2 * j], fad = ef[2 * j + 1];
        const std::uint32_t ga = eg[2 * j], gad = eg[2 * j + 1];
        auto& list = per_mode[j];
        list.clear();
        // p contractions of ∂a on F with ∂a* on G, q of ∂a* on F with ∂a on G.
        const std::uint32_t pmax = c_fwd == 0 ? 0 : std::min(fa, gad);
        const std::uint32_t qmax = c_bwd == 0 ? 0 : std::min(fad, ga);
        for (std::uint32_t p = 0; p <= pmax; ++p)
          for (std::uint32_t q = 0; q <= qmax; ++q) {
            Rational c = power(c_fwd, p) * power(c_bwd, q) /
                         (factorial(p) * factorial(q));
            c *= falling(fa, p) * falling(gad, p) * falling(fad, q) *
                 falling(ga, q);
            list.push_back({c, fa - p + ga - q, fad - q + gad - p});
          }
      }
      expand_pieces(per_mode, cf * cg, out);
    }
  return out;
}

}  // namespace detail

/// {F, G} = -i Σ_j (∂F/∂a_j ∂G/∂a*_j - ∂F/∂a*_j ∂G/∂a_j), so {a_j, a*_l} = -i δ_jl.
inline PolySymbol poisson_bracket(const PolySymbol& f, const PolySymbol& g) {
  detail::require_same_modes(f, g);
  PolySymbol out(f.mode_count());
  for (std::size_t j = 0; j < f.mode_count(); ++j) {
    out += f.derivative(j, false) * g.derivative(j, true);
    out -= f.derivative(j, true) * g.derivative(j, false);
  }
  return out * CRational(Rational(0), Rational(-1));
}

/// Moyal product in holomorphic variables:
/// F exp{(1/2) Σ_j (←∂a_j →∂a*_j - ←∂a*_j →∂a_j)} G.
inline PolySymbol moyal_star(const PolySymbol& f, const PolySymbol& g) {
  return detail::bidifferential_product(f, g, Rational(1, 2), Rational(-1, 2));
}

/// Normal (Berezin) product: F exp{Σ_j ←∂a_j →∂a*_j} G.
inline PolySymbol normal_star(const PolySymbol& f, const PolySymbol& g) {
  return detail::bidifferential_product(f, g, Rational(1), Rational(0));
}

/// F⋆G - G⋆F.
inline PolySymbol star_commutator(const PolySymbol& f, const PolySymbol& g) {
  return moyal_star(f, g) - moyal_star(g, f);
}

/// Re-expresses an s-ordered symbol in s'-ordering:
/// F_{s'} = exp{((s - s')/2) Σ_j ∂a_j ∂a*_j} F_s.
inline PolySymbol s_transform(const PolySymbol& f, const SOrder& from,
                              const SOrder& to) {
  if (from == to) return f;
  const Rational t = (from.s - to.s) / 2;
  const std::size_t modes = f.mode_count();
  PolySymbol out(modes);
  std::vector<std::vector<detail::ModePiece>> per_mode(modes);
  for (const auto& [e, c] : f.terms()) {
    for (std::size_t j = 0; j < modes; ++j) {
      const std::uint32_t ea = e[2 * j], ead = e[2 * j + 1];
      auto& list = per_mode[j];
      list.clear();
      for (std::uint32_t k = 0; k <= std::min(ea, ead); ++k) {
        Rational w = detail::power(t, k) / detail::factorial(k) *
                     detail::falling(ea, k) * detail::falling(ead, k);
        list.push_back({w, ea - k, ead - k});
      }
    }
    detail::expand_pieces(per_mode, c, out);
  }
  return out;
}

/// Weyl symbol from the normal (s = -1) symbol: exp{-(1/2) Σ_j ∂a_j ∂a*_j}.
inline PolySymbol weyl_from_normal(const PolySymbol& f) {
  return s_transform(f, SOrder::normal(), SOrder::weyl());
}

}  // namespace dq
