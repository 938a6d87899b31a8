#pragma once

// Verification suites run by `dqtool check`. Each case reports the measured
// deviation against its tolerance; a suite passes when every case does.
// Randomized cases draw from an Rng seeded by the config seed and a fixed
// per-suite offset, so a suite gives the same numbers alone or inside "all".

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dq/field_modes.hpp"
#include "dq/fock_space.hpp"
#include "dq/quasiprob.hpp"
#include "dq/random.hpp"
#include "dq/run_config.hpp"
#include "dq/symbol_algebra.hpp"
#include "dq/symbol_parser.hpp"

namespace dq {

struct CheckCase {
  std::string name;
  bool passed = false;
  double measured = 0;
  double tolerance = 0;
  std::vector<std::string> diagnostics;
};

struct CheckReport {
  std::string suite;
  std::vector<CheckCase> cases;

  bool passed() const {
    return std::all_of(cases.begin(), cases.end(), [](const CheckCase& c) { return c.passed; });
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"algebra", "fock", "quasiprob", "modes"};
  return names;
}

namespace detail {

/// Case that passes when measured ≤ tolerance (NaN fails).
inline CheckCase bounded(std::string name, double measured, double tolerance,
                         std::vector<std::string> diagnostics = {}) {
  CheckCase c{std::move(name), measured <= tolerance, measured, tolerance, std::move(diagnostics)};
  if (!std::isfinite(measured)) c.passed = false;
  return c;
}

inline std::size_t algebra_modes(const RunConfig& cfg) { return std::min<std::size_t>(cfg.modes, 3); }

inline std::vector<CheckCase> algebra_suite(const RunConfig& cfg) {
  Rng rng(cfg.seed ^ 0xa1ull);
  const std::size_t modes = algebra_modes(cfg);
  std::vector<CheckCase> out;

  int moyal_bad = 0, normal_bad = 0, cequiv_bad = 0, bracket_bad = 0, parse_bad = 0;
  for (int n = 0; n < cfg.cases; ++n) {
    const PolySymbol f = random_symbol(rng, modes, 4, 3);
    const PolySymbol g = random_symbol(rng, modes, 4, 3);
    const PolySymbol h = random_symbol(rng, modes, 4, 3);
    if (!(moyal_star(moyal_star(f, g), h) == moyal_star(f, moyal_star(g, h)))) ++moyal_bad;
    if (!(normal_star(normal_star(f, g), h) == normal_star(f, normal_star(g, h)))) ++normal_bad;

    const PolySymbol fn = s_transform(f, SOrder::weyl(), SOrder::normal());
    const PolySymbol gn = s_transform(g, SOrder::weyl(), SOrder::normal());
    if (!(weyl_from_normal(normal_star(fn, gn)) == moyal_star(f, g))) ++cequiv_bad;

    // Degree ≤ 2 symbols: the commutator is exactly i times the bracket.
    const PolySymbol p = random_symbol(rng, modes, 2, 3);
    const PolySymbol q = random_symbol(rng, modes, 2, 3);
    if (!(star_commutator(p, q) == poisson_bracket(p, q) * CRational::i_unit())) ++bracket_bad;

    if (!(parse(format(h), modes) == h)) ++parse_bad;
  }
  out.push_back(bounded("algebra.moyal_associativity", moyal_bad, 0));
  out.push_back(bounded("algebra.normal_associativity", normal_bad, 0));
  out.push_back(bounded("algebra.c_equivalence", cequiv_bad, 0));
  out.push_back(bounded("algebra.commutator_bracket_quadratic", bracket_bad, 0));
  out.push_back(bounded("algebra.format_parse_round_trip", parse_bad, 0));

  int ccr_bad = 0;
  for (std::size_t j = 0; j < modes; ++j)
    for (std::size_t l = 0; l < modes; ++l) {
      const PolySymbol c =
          star_commutator(PolySymbol::a(modes, j), PolySymbol::a_star(modes, l));
      const PolySymbol want = PolySymbol::constant(modes, CRational(j == l ? 1 : 0));
      if (!(c == want)) ++ccr_bad;
    }
  out.push_back(bounded("algebra.canonical_commutator", ccr_bad, 0));

  int transform_bad = 0;
  for (int n = 0; n < cfg.cases; ++n) {
    const PolySymbol f = random_symbol(rng, modes, 4, 3);
    const SOrder s1{Rational(rng.uniform_int(-4, 4), 2)};
    const SOrder s2{Rational(rng.uniform_int(-4, 4), 2)};
    if (!(s_transform(s_transform(f, s1, s2), s2, s1) == f)) ++transform_bad;
  }
  out.push_back(bounded("algebra.s_transform_inverse", transform_bad, 0));
  return out;
}

inline std::string tail_message(const std::string& what, double tail, double limit) {
  return "tail-dominance: " + what + " leaves " + format_double(tail) +
         " of its weight at the truncation edge (limit " + format_double(limit) +
         "); raise the cutoff";
}

inline std::vector<CheckCase> fock_suite(const RunConfig& cfg) {
  Rng rng(cfg.seed ^ 0xf0ull);
  const FockOptions opts = cfg.fock_options();
  std::vector<CheckCase> out;

  {
    const FockTruncation t = cfg.truncation(cfg.amplitude);
    const FockOp a = annihilation(t, 0);
    const Eigen::MatrixXcd c = (a * a.adjoint() - a.adjoint() * a).matrix;
    double worst = 0;
    for (Eigen::Index i = 0; i < c.rows(); ++i)
      for (Eigen::Index j = 0; j < c.cols(); ++j) {
        if (t.occupations(i)[0] == t.cutoff(0) || t.occupations(j)[0] == t.cutoff(0)) continue;
        worst = std::max(worst, std::abs(c(i, j) - (i == j ? 1.0 : 0.0)));
      }
    out.push_back(bounded("fock.ladder_commutator_below_cutoff", worst, 1e-12));
  }

  {
    CoherentAmplitudes alpha;
    for (std::size_t j = 0; j < cfg.modes; ++j) alpha.alpha.push_back(rng.on_circle(cfg.amplitude));
    const FockTruncation t = cfg.truncation(cfg.amplitude);
    const CoherentState cs = coherent_state(t, alpha);
    std::vector<std::string> diag;
    if (cs.tail > opts.closed_form_tol)
      diag.push_back(tail_message("coherent probe |alpha| = " + format_double(cfg.amplitude),
                                  cs.tail, opts.closed_form_tol));
    out.push_back(bounded("fock.coherent_tail", cs.tail, opts.closed_form_tol, diag));

    const Eigen::VectorXcd vac = fock_vector(t, std::vector<int>(cfg.modes, 0));
    const Complex overlap = vac.dot(displacement(t, alpha).matrix * vac);
    const double err = std::abs(overlap - std::exp(-0.5 * alpha.norm2()));
    out.push_back(bounded("fock.vacuum_overlap_closed_form", err, opts.closed_form_tol,
                          err > opts.closed_form_tol ? diag : std::vector<std::string>{}));
  }

  {
    const FockTruncation t = FockTruncation::uniform(1, cfg.cutoff.empty() ? 40 : cfg.cutoff[0]);
    const Eigen::VectorXcd vac = fock_vector(t, {0});
    double worst = 0;
    for (int n = 0; n < cfg.cases; ++n) {
      const CoherentAmplitudes a{{rng.disc(1.5)}}, b{{rng.disc(1.5)}};
      const Eigen::VectorXcd lhs = displacement(t, a).matrix * (displacement(t, b).matrix * vac);
      const Complex phase = std::exp(Complex(0, std::imag(a.alpha[0] * std::conj(b.alpha[0]))));
      const Eigen::VectorXcd rhs = phase * (displacement(t, a + b).matrix * vac);
      worst = std::max(worst, (lhs - rhs).norm());
    }
    out.push_back(bounded("fock.displacement_composition", worst, opts.closed_form_tol));
  }

  {
    const FockTruncation t = FockTruncation::uniform(1, cfg.cutoff.empty() ? 40 : cfg.cutoff[0]);
    double worst_star = 0, worst_husimi = 0;
    std::vector<std::string> diag;
    for (int n = 0; n < cfg.cases; ++n) {
      const PolySymbol f = random_symbol(rng, 1, 3, 3);
      const PolySymbol g = random_symbol(rng, 1, 3, 3);
      const FockOp prod = weyl_quantize(f, t) * weyl_quantize(g, t);
      const PolySymbol fg = moyal_star(f, g);
      const FockOp nf = normal_quantize(f, t);
      for (int p = 0; p < 4; ++p) {
        const CoherentAmplitudes z{{rng.disc(2.0)}};
        const TraceEstimate e = weyl_symbol_estimate(prod, z, opts);
        if (e.tail_warning && diag.empty())
          diag.push_back(tail_message("displaced parity trace", e.tail_fraction, opts.tail_fraction));
        worst_star = std::max(worst_star, std::abs(e.value - fg.evaluate(z.alpha)));
        worst_husimi =
            std::max(worst_husimi, std::abs(husimi_symbol(nf, z) - f.evaluate(z.alpha)));
      }
    }
    out.push_back(bounded("fock.quantization_oracle", worst_star, opts.quantization_tol, diag));
    out.push_back(bounded("fock.husimi_identity", worst_husimi, opts.closed_form_tol));
  }
  return out;
}

inline std::vector<CheckCase> quasiprob_suite(const RunConfig& cfg) {
  Rng rng(cfg.seed ^ 0x9bull);
  QuasiOptions q = cfg.quasi_options();
  q.threads = 1;
  std::vector<CheckCase> out;

  {
    const FockTruncation t = cfg.truncation(cfg.amplitude + 2.0);
    double worst = 0, worst_s = 0;
    std::vector<std::string> diag;
    CoherentAmplitudes alpha;
    for (std::size_t j = 0; j < cfg.modes; ++j) alpha.alpha.push_back(rng.on_circle(cfg.amplitude));
    const FockOp rho = density_matrix(StateSpec{state::Coherent{alpha}}, t);
    const double tail = coherent_state(t, alpha).tail;
    if (tail > q.fock.closed_form_tol)
      diag.push_back(tail_message("coherent state |alpha| = " + format_double(cfg.amplitude), tail,
                                  q.fock.closed_form_tol));
    for (int n = 0; n < cfg.cases; ++n) {
      CoherentAmplitudes xi = alpha;
      const double r = rng.uniform(0, 2.0 / std::sqrt(static_cast<double>(cfg.modes)));
      for (auto& x : xi.alpha) x += rng.on_circle(r);
      const TraceEstimate e = wigner_series_estimate(rho, xi, q);
      if (e.tail_warning && diag.size() < 2)
        diag.push_back(tail_message("Wigner series", e.tail_fraction, q.fock.tail_fraction));
      worst = std::max(worst, std::abs(e.value.real() - wigner_coherent_closed_form(alpha, xi)));
      const double s = -0.5;
      const double closed = std::exp(-2.0 * (xi - alpha).norm2() / (1.0 - s));
      worst_s = std::max(worst_s, std::abs(s_distribution(rho, xi, s, q) - closed));
    }
    const bool tail_bad = !diag.empty();
    CheckCase c = bounded("quasiprob.wigner_series_vs_closed_form", worst, q.fock.closed_form_tol, diag);
    if (tail_bad) c.passed = false;
    out.push_back(std::move(c));
    out.push_back(bounded("quasiprob.s_ordered_coherent_closed_form", worst_s, q.fock.closed_form_tol));
  }

  {
    const FockTruncation t = cfg.truncation(0.0);
    std::vector<int> one(cfg.modes, 0);
    one[0] = 1;
    const FockOp rho = density_matrix(StateSpec{state::Fock{one}}, t);
    const double w = wigner_series(rho, CoherentAmplitudes{std::vector<Complex>(cfg.modes)}, q);
    out.push_back(bounded("quasiprob.fock1_negativity_at_origin", std::abs(w + 1.0), 1e-10));
  }

  {
    const FockTruncation t = FockTruncation::uniform(1, cfg.cutoff.empty() ? 40 : cfg.cutoff[0]);
    double worst_bound = 0, worst_cov = 0, min_husimi = 0;
    for (int n = 0; n < std::max(1, cfg.cases / 4); ++n) {
      state::Superposition sup;
      sup.weights = {rng.disc(1.0) + Complex(0.1, 0), rng.disc(1.0)};
      sup.states = {StateSpec{state::Coherent{{{rng.disc(1.0)}}}},
                    StateSpec{state::Fock{{static_cast<int>(rng.uniform_int(0, 3))}}}};
      const FockOp rho = density_matrix(StateSpec{sup}, t);
      const CoherentAmplitudes beta{{rng.disc(0.5)}};
      const FockOp d = displacement(t, beta);
      const FockOp moved{t, d.matrix * rho.matrix * d.matrix.adjoint()};
      for (int p = 0; p < 4; ++p) {
        const CoherentAmplitudes xi{{rng.disc(1.5)}};
        const double w = wigner_series(rho, xi, q);
        worst_bound = std::max(worst_bound, std::abs(w) - 1.0);
        worst_cov = std::max(worst_cov, std::abs(wigner_series(moved, xi, q) -
                                                 wigner_series(rho, xi - beta, q)));
        min_husimi = std::min(min_husimi, husimi_symbol(rho, xi).real());
      }
    }
    out.push_back(bounded("quasiprob.wigner_bounded_by_one", std::max(0.0, worst_bound), 1e-12));
    out.push_back(bounded("quasiprob.displacement_covariance", worst_cov, q.fock.quantization_tol));
    out.push_back(bounded("quasiprob.husimi_nonnegative", std::max(0.0, -min_husimi), 1e-12));
  }
  return out;
}

inline std::vector<CheckCase> modes_suite(const RunConfig& cfg) {
  Rng rng(cfg.seed ^ 0x3dull);
  std::vector<CheckCase> out;

  double worst_symp = 0;
  for (std::size_t sites : {8u, 16u, 32u, 64u})
    for (double m : {0.1, 1.0, 10.0})
      worst_symp = std::max(worst_symp, symplectic_check(ModeLattice::periodic(sites, 1.0, m)));
  out.push_back(bounded("modes.symplectic_deviation", worst_symp, 1e-10));

  const ModeLattice lat = cfg.lattice();
  out.push_back(bounded("modes.symplectic_deviation_config_lattice", symplectic_check(lat), 1e-10));

  const bool invertible = lat.mode_count() == lat.x_count;
  double worst_trip = 0, worst_qp = 0, worst_real = 0, worst_energy = 0, worst_amp_trip = 0;
  for (int n = 0; n < cfg.cases; ++n) {
    FieldConfig f{std::vector<double>(lat.x_count), std::vector<double>(lat.x_count)};
    for (std::size_t s = 0; s < lat.x_count; ++s) {
      f.phi[s] = rng.uniform(-1, 1);
      f.varpi[s] = rng.uniform(-1, 1);
    }
    const CoherentAmplitudes a = amplitudes_from_field(f, lat);
    if (invertible) {
      const FieldConfig back = field_from_amplitudes(a, lat);
      for (std::size_t s = 0; s < lat.x_count; ++s)
        worst_trip = std::max({worst_trip, std::abs(back.phi[s] - f.phi[s]),
                               std::abs(back.varpi[s] - f.varpi[s])});
    }
    const CanonicalModes direct = qp_from_field(f, lat);
    const CanonicalModes composed = qp_from_amplitudes(a, lat);
    for (std::size_t j = 0; j < lat.mode_count(); ++j)
      worst_qp = std::max({worst_qp, std::abs(direct.Q[j] - composed.Q[j]),
                           std::abs(direct.P[j] - composed.P[j])});
    const CoherentAmplitudes a2 = amplitudes_from_qp(composed, lat);
    for (std::size_t j = 0; j < lat.mode_count(); ++j)
      worst_amp_trip = std::max(worst_amp_trip, std::abs(a2.alpha[j] - a.alpha[j]));

    CoherentAmplitudes r;
    for (std::size_t j = 0; j < lat.mode_count(); ++j) r.alpha.push_back(rng.disc(1.0));
    std::vector<Complex> conj(r.alpha.size());
    for (std::size_t j = 0; j < conj.size(); ++j) conj[j] = std::conj(r.alpha[j]);
    const ComplexField cf = field_from_holomorphic(r.alpha, conj, lat);
    for (std::size_t s = 0; s < lat.x_count; ++s)
      worst_real = std::max({worst_real, std::abs(cf.phi[s].imag()), std::abs(cf.varpi[s].imag())});

    const std::size_t j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<long long>(lat.mode_count()) - 1));
    CoherentAmplitudes single{std::vector<Complex>(lat.mode_count())};
    single.alpha[j] = rng.disc(1.0);
    const CanonicalModes qp = qp_from_field(field_from_amplitudes(single, lat), lat);
    const double w = lat.omega(j);
    const double energy = 0.5 * (qp.P[j] * qp.P[j] + w * w * qp.Q[j] * qp.Q[j]);
    worst_energy = std::max(worst_energy, std::abs(energy - w * std::norm(single.alpha[j])));
  }
  if (invertible) out.push_back(bounded("modes.field_amplitude_round_trip", worst_trip, 1e-10));
  out.push_back(bounded("modes.qp_consistency", worst_qp, 1e-10));
  out.push_back(bounded("modes.amplitude_qp_round_trip", worst_amp_trip, 1e-12));
  out.push_back(bounded("modes.reality_residue", worst_real, 1e-12));
  out.push_back(bounded("modes.single_mode_energy", worst_energy, 1e-10));
  return out;
}

}  // namespace detail

/// Runs one suite ("algebra", "fock", "quasiprob", "modes") or "all".
/// Throws ParseError for an unknown suite name.
inline CheckReport run_checks(const std::string& suite, const RunConfig& cfg) {
  CheckReport report{suite, {}};
  const auto add = [&](std::vector<CheckCase> cases) {
    for (auto& c : cases) report.cases.push_back(std::move(c));
  };
  const bool all = suite == "all";
  if (!all && std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
    throw ParseError("unknown suite '" + suite + "'", 0,
                     {"algebra", "fock", "quasiprob", "modes", "all"});
  if (all || suite == "algebra") add(detail::algebra_suite(cfg));
  if (all || suite == "fock") add(detail::fock_suite(cfg));
  if (all || suite == "quasiprob") add(detail::quasiprob_suite(cfg));
  if (all || suite == "modes") add(detail::modes_suite(cfg));
  return report;
}

/// {suite, cases: [{name, status, measured, tolerance, diagnostics}], seed, config_digest}
inline nlohmann::json to_json(const CheckReport& r, const RunConfig& cfg) {
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : r.cases)
    cases.push_back({{"name", c.name},
                     {"status", c.passed ? "pass" : "fail"},
                     {"measured", c.measured},
                     {"tolerance", c.tolerance},
                     {"diagnostics", c.diagnostics}});
  return {{"suite", r.suite},
          {"cases", std::move(cases)},
          {"seed", cfg.seed},
          {"config_digest", cfg.digest()}};
}

}  // namespace dq
