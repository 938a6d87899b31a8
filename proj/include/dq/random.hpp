#pragma once

// Seeded generators for property checks. Only std::mt19937_64 output is used
// directly (integer draws are reduced by hand) so sequences are identical
// across standard libraries.

#include <cstdint>
#include <random>
#include <vector>

#include "dq/fock_space.hpp"
#include "dq/poly_symbol.hpp"

namespace dq {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  long long uniform_int(long long lo, long long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long long>(engine_() % span);
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform point in the disc |z| ≤ radius.
  Complex disc(double radius) {
    while (true) {
      const double x = uniform(-1, 1), y = uniform(-1, 1);
      if (x * x + y * y <= 1) return {radius * x, radius * y};
    }
  }

  /// Random phase at fixed modulus.
  Complex on_circle(double radius) {
    return std::polar(radius, uniform(0, 6.283185307179586));
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Small complex-rational coefficient p/q + i r/q with |p|, |r| ≤ 5, q ≤ 4.
inline CRational random_coefficient(Rng& rng, bool allow_complex = true) {
  while (true) {
    const long long q = rng.uniform_int(1, 4);
    const Rational re(rng.uniform_int(-5, 5), q);
    const Rational im = allow_complex ? Rational(rng.uniform_int(-5, 5), q) : Rational(0);
    CRational c(re, im);
    if (!c.is_zero()) return c;
  }
}

/// Random symbol with up to `max_terms` terms of total degree ≤ `max_degree`.
inline PolySymbol random_symbol(Rng& rng, std::size_t modes, std::uint32_t max_degree,
                                int max_terms = 4, bool allow_complex = true) {
  PolySymbol f(modes);
  const int terms = static_cast<int>(rng.uniform_int(1, max_terms));
  for (int t = 0; t < terms; ++t) {
    PolySymbol::Exponents e(2 * modes, 0);
    const auto degree = static_cast<std::uint32_t>(rng.uniform_int(0, max_degree));
    for (std::uint32_t d = 0; d < degree; ++d)
      ++e[static_cast<std::size_t>(rng.uniform_int(0, static_cast<long long>(2 * modes) - 1))];
    f.add_term(e, random_coefficient(rng, allow_complex));
  }
  return f;
}

}  // namespace dq
