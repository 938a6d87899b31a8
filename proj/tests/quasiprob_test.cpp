#include "dq/quasiprob.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "dq/random.hpp"

namespace dq {
namespace {

CoherentAmplitudes amp(Complex z) { return {{z}}; }

FockOp coherent_rho(const FockTruncation& t, Complex a) {
  return density_matrix({state::Coherent{amp(a)}}, t);
}

FockOp fock_rho(const FockTruncation& t, int n) {
  return density_matrix({state::Fock{{n}}}, t);
}

// Raw Wigner values used as independent references.
double w_vacuum(Complex u) { return std::exp(-2 * std::norm(u)); }
double w_one(Complex u) { return (4 * std::norm(u) - 1) * std::exp(-2 * std::norm(u)); }

// (1 - s) ∫ W(u) G(ξ - u) d²u with G a normalized Gaussian of variance -s/2,
// by a midpoint rule on [-7, 7]².
template <class W>
double smoothed(W w, Complex xi, double s) {
  const double var = -s / 2;
  const int n = 400;
  const double h = 14.0 / n;
  double acc = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Complex u(-7 + (i + 0.5) * h, -7 + (j + 0.5) * h);
      acc += w(u) * std::exp(-std::norm(xi - u) / var);
    }
  return (1 - s) * acc * h * h / (std::numbers::pi * var);
}

TEST(WignerSeries, VacuumAtOrigin) {
  EXPECT_DOUBLE_EQ(wigner_series(fock_rho(FockTruncation({10}), 0), amp(0)), 1.0);
}

TEST(WignerSeries, OnePhotonNegativeAtOrigin) {
  EXPECT_DOUBLE_EQ(wigner_series(fock_rho(FockTruncation({10}), 1), amp(0)), -1.0);
}

TEST(WignerSeries, CoherentAtOrigin) {
  const FockOp rho = coherent_rho(FockTruncation({40}), 1.0);
  EXPECT_NEAR(wigner_series(rho, amp(0)), std::exp(-2.0), 1e-8);
}

TEST(WignerSeries, RejectsNonHermitian) {
  const FockTruncation t({4});
  const FockOp a = annihilation(t, 0);
  EXPECT_THROW(wigner_series(a, amp(0)), ContractError);
}

TEST(WignerSeries, TailWarningOnCoarseCutoff) {
  const FockOp rho = coherent_rho(FockTruncation({3}), 2.0);
  const TraceEstimate est = wigner_series_estimate(rho, amp(0));
  EXPECT_TRUE(est.tail_warning);
  const TraceEstimate fine = wigner_series_estimate(coherent_rho(FockTruncation({62}), 2.0), amp(0));
  EXPECT_FALSE(fine.tail_warning);
}

TEST(WignerSeries, MatchesClosedFormForCoherentStates) {
  Rng rng(1);
  for (int n = 0; n < 20; ++n) {
    const Complex a = rng.disc(2.0);
    const Complex xi = a + rng.disc(2.0);
    const FockTruncation t({default_cutoff(std::abs(a) + std::abs(xi))});
    EXPECT_NEAR(wigner_series(coherent_rho(t, a), amp(xi)),
                wigner_coherent_closed_form(amp(a), amp(xi)), 1e-8);
  }
}

TEST(WignerSeries, DisplacementCovariance) {
  Rng rng(2);
  const FockTruncation t({50});
  const FockOp base =
      density_matrix(parse_state("sup:(1)fock:1+(0.5i)coherent:0.3-0.2i", 1), t);
  for (int n = 0; n < 10; ++n) {
    const Complex beta = rng.disc(1.0), xi = rng.disc(1.5);
    const FockOp d = displacement(t, amp(beta));
    const FockOp moved{t, d.matrix * base.matrix * d.matrix.adjoint()};
    EXPECT_NEAR(wigner_series(moved, amp(xi)), wigner_series(base, amp(xi - beta)), 1e-6);
  }
}

TEST(WignerSeries, LinearInDensity) {
  const FockTruncation t({40});
  const FockOp r1 = coherent_rho(t, {0.4, 0.1}), r2 = fock_rho(t, 2);
  const double lambda = 0.3;
  const FockOp mix{t, lambda * r1.matrix + (1 - lambda) * r2.matrix};
  const CoherentAmplitudes xi = amp({0.2, -0.6});
  EXPECT_NEAR(wigner_series(mix, xi),
              lambda * wigner_series(r1, xi) + (1 - lambda) * wigner_series(r2, xi), 1e-14);
}

TEST(WignerSeries, Bounded) {
  Rng rng(3);
  const FockTruncation t({30});
  for (int n = 0; n < 30; ++n) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(t.dimension());
    for (int k = 0; k < 8; ++k) v(k) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    v.normalize();
    const FockOp rho{t, v * v.adjoint()};
    EXPECT_LE(std::abs(wigner_series(rho, amp(rng.disc(2.0)))), 1.0 + 1e-12);
  }
}

TEST(WignerClosedForm, Examples) {
  EXPECT_DOUBLE_EQ(wigner_coherent_closed_form(amp({0.3, 1}), amp({0.3, 1})), 1.0);
  EXPECT_NEAR(wigner_coherent_closed_form(amp(0), amp(1)), 0.1353352832366127, 1e-15);
  EXPECT_NEAR(wigner_coherent_closed_form({{1.0, 0.0}}, {{0.0, 0.0}}), std::exp(-2.0), 1e-15);
  EXPECT_THROW(wigner_coherent_closed_form({{1.0, 0.0}}, amp(0)), DimensionError);
}

TEST(WignerSeries, TwoModeCoherentFactorizes) {
  const FockTruncation t({24, 24});
  const CoherentAmplitudes a{{Complex(1, 0), Complex(0, 0)}};
  const FockOp rho = density_matrix({state::Coherent{a}}, t);
  EXPECT_NEAR(wigner_series(rho, {{0.0, 0.0}}), std::exp(-2.0), 1e-8);
}

TEST(HusimiGrid, Vacuum) {
  const PhaseGrid g = husimi_grid(fock_rho(FockTruncation({40}), 0), {{0, 0}, 6.0, 41});
  for (Eigen::Index i = 0; i < 41; ++i)
    for (Eigen::Index j = 0; j < 41; ++j)
      EXPECT_NEAR(g.values(i, j).real(), std::exp(-std::norm(g.point(i, j))), 1e-12);
  EXPECT_TRUE(g.diagnostics.empty());
}

TEST(HusimiGrid, OnePhoton) {
  const PhaseGrid g = husimi_grid(fock_rho(FockTruncation({40}), 1), {{0, 0}, 6.0, 31});
  for (Eigen::Index i = 0; i < 31; ++i)
    for (Eigen::Index j = 0; j < 31; ++j) {
      const double r2 = std::norm(g.point(i, j));
      EXPECT_NEAR(g.values(i, j).real(), r2 * std::exp(-r2), 1e-12);
    }
}

TEST(HusimiGrid, CoherentPeakAndMass) {
  const Complex a(1.0, -0.5);
  const PhaseGrid g = husimi_grid(coherent_rho(FockTruncation({60}), a), {a, 6.0, 121});
  EXPECT_NEAR(g.values(60, 60).real(), 1.0, 1e-12);
  const double cell = std::pow(g.re_axis[1] - g.re_axis[0], 2);
  EXPECT_NEAR(g.values.real().sum() * cell / std::numbers::pi, 1.0, 2e-2);
  EXPECT_TRUE(g.diagnostics.empty());
  EXPECT_GE(g.values.real().minCoeff(), -1e-12);
}

TEST(HusimiGrid, CoverageWarning) {
  const PhaseGrid g = husimi_grid(fock_rho(FockTruncation({40}), 0), {{0, 0}, 1.0, 11});
  ASSERT_FALSE(g.diagnostics.empty());
  EXPECT_NE(g.diagnostics[0].find("coverage"), std::string::npos);
}

TEST(HusimiGrid, MultimodeRejected) {
  const FockTruncation t({3, 3});
  const FockOp rho = density_matrix({state::Fock{{0, 0}}}, t);
  EXPECT_THROW(husimi_grid(rho, {}), DimensionError);
  EXPECT_THROW(wigner_grid(rho, {}), DimensionError);
}

TEST(WignerGrid, CoherentClosedForm) {
  const FockTruncation t({default_cutoff(1.0 + 3.0 * std::sqrt(2.0))});
  const PhaseGrid g = wigner_grid(coherent_rho(t, 1.0), {{0, 0}, 3.0, 31});
  for (Eigen::Index i = 0; i < 31; ++i)
    for (Eigen::Index j = 0; j < 31; ++j)
      EXPECT_NEAR(g.values(i, j).real(), std::exp(-2 * std::norm(g.point(i, j) - 1.0)), 1e-6);
  EXPECT_TRUE(g.diagnostics.empty());
}

TEST(WignerGrid, OnePhotonMinimumAtOrigin) {
  const FockTruncation t({default_cutoff(1.0 + 3.0 * std::sqrt(2.0))});
  const PhaseGrid g = wigner_grid(fock_rho(t, 1), {{0, 0}, 3.0, 61});
  EXPECT_TRUE(g.diagnostics.empty());
  const GridExtrema e = extrema(g);
  EXPECT_NEAR(e.min_value, -1.0, 1e-12);
  EXPECT_NEAR(std::abs(e.min_at), 0.0, 1e-12);
  for (Eigen::Index i = 0; i < 61; i += 7)
    for (Eigen::Index j = 0; j < 61; j += 5)
      EXPECT_NEAR(g.values(i, j).real(), w_one(g.point(i, j)), 1e-9);
}

TEST(WignerGrid, VacuumMaximumAtOrigin) {
  const GridExtrema e = extrema(wigner_grid(fock_rho(FockTruncation({40}), 0), {}));
  EXPECT_NEAR(e.max_value, 1.0, 1e-12);
  EXPECT_NEAR(std::abs(e.max_at), 0.0, 1e-12);
}

TEST(WignerGrid, AgreesWithSeriesAndIsReal) {
  const FockTruncation t({40});
  const FockOp rho = density_matrix(parse_state("sup:(1)fock:2+(1-1i)coherent:0.5", 1), t);
  const PhaseGrid g = wigner_grid(rho, {{0.2, 0.1}, 2.0, 9});
  for (Eigen::Index i = 0; i < 9; ++i)
    for (Eigen::Index j = 0; j < 9; ++j) {
      EXPECT_NEAR(g.values(i, j).real(), wigner_series(rho, amp(g.point(i, j))), 1e-10);
      EXPECT_LE(std::abs(g.values(i, j).imag()), 1e-9);
    }
}

TEST(WignerGrid, TailDiagnosticOnCoarseCutoff) {
  const PhaseGrid g = wigner_grid(coherent_rho(FockTruncation({4}), 1.0), {{0, 0}, 3.0, 5});
  ASSERT_FALSE(g.diagnostics.empty());
  EXPECT_NE(g.diagnostics[0].find("tail-dominance"), std::string::npos);
}

TEST(WignerGrid, ThreadCountDoesNotChangeOutput) {
  const FockOp rho = fock_rho(FockTruncation({40}), 3);
  QuasiOptions one, four;
  one.threads = 1;
  four.threads = 4;
  const GridSpec spec{{0.1, -0.2}, 2.5, 25};
  EXPECT_EQ(to_csv(wigner_grid(rho, spec, one)), to_csv(wigner_grid(rho, spec, four)));
  EXPECT_EQ(to_csv(husimi_grid(rho, spec, one)), to_csv(husimi_grid(rho, spec, four)));
}

TEST(WignerGrid, RejectsBadDensity) {
  const FockTruncation t({3});
  FockOp rho = fock_rho(t, 1);
  rho.matrix *= 2.0;
  EXPECT_THROW(wigner_grid(rho, {}), ContractError);
  EXPECT_THROW(wigner_grid(fock_rho(t, 0), {{0, 0}, 3.0, 1}), ContractError);
}

TEST(SDistribution, EndpointsMatchWignerAndHusimi) {
  const FockTruncation t({40});
  const FockOp rho = coherent_rho(t, {0.5, 0.5});
  const CoherentAmplitudes xi = amp({-0.3, 0.9});
  EXPECT_DOUBLE_EQ(s_distribution(rho, xi, 0.0), wigner_series(rho, xi));
  EXPECT_NEAR(s_distribution(rho, xi, -1.0), std::exp(-std::norm(xi.alpha[0] - Complex(0.5, 0.5))),
              1e-3);
  EXPECT_NEAR(s_distribution(rho, xi, SOrder::normal()), husimi_symbol(rho, xi).real(), 1e-15);
}

TEST(SDistribution, ContinuousNearEndpoints) {
  const FockTruncation t({40});
  const FockOp rho = fock_rho(t, 1);
  const CoherentAmplitudes xi = amp({0.4, 0.2});
  EXPECT_NEAR(s_distribution(rho, xi, -1e-7), s_distribution(rho, xi, 0.0), 1e-5);
  EXPECT_NEAR(s_distribution(rho, xi, -1 + 1e-7), s_distribution(rho, xi, -1.0), 1e-5);
}

TEST(SDistribution, VacuumPeakAgainstQuadrature) {
  const FockOp rho = fock_rho(FockTruncation({40}), 0);
  for (double s : {-0.25, -0.5, -0.75}) {
    EXPECT_NEAR(s_distribution(rho, amp(0), s), smoothed(w_vacuum, 0, s), 1e-6) << s;
    EXPECT_NEAR(s_distribution(rho, amp({0.6, -0.4}), s), smoothed(w_vacuum, {0.6, -0.4}, s),
                1e-6)
        << s;
  }
}

TEST(SDistribution, VacuumHalfOrderValues) {
  // The plain convolution of e^{-2|u|²} with variance 1/4 peaks at 2/3.
  const FockOp rho = fock_rho(FockTruncation({40}), 0);
  EXPECT_NEAR(s_distribution(rho, amp(0), -0.5) / 1.5, 2.0 / 3.0, 1e-12);
}

TEST(SDistribution, OnePhotonAgainstQuadrature) {
  const FockOp rho = fock_rho(FockTruncation({40}), 1);
  for (double s : {-0.3, -0.6})
    for (Complex xi : {Complex(0, 0), Complex(0.7, 0.1)})
      EXPECT_NEAR(s_distribution(rho, amp(xi), s), smoothed(w_one, xi, s), 1e-6) << s << xi;
}

TEST(SDistribution, CoherentGaussianForEveryOrder) {
  const FockTruncation t({50});
  const Complex a(0.8, -0.3);
  const FockOp rho = coherent_rho(t, a);
  for (double s : {-0.1, -0.5, -0.9}) {
    const Complex xi(0.1, 0.4);
    EXPECT_NEAR(s_distribution(rho, amp(xi), s), std::exp(-2 * std::norm(xi - a) / (1 - s)),
                1e-10);
  }
}

TEST(SDistribution, PositiveOrderRejected) {
  const FockOp rho = fock_rho(FockTruncation({5}), 0);
  try {
    s_distribution(rho, amp(0), 0.5);
    FAIL();
  } catch (const UnsupportedOrderError& e) {
    EXPECT_NE(std::string(e.what()).find("singular"), std::string::npos);
  }
  EXPECT_THROW(s_distribution(rho, amp(0), SOrder::antinormal()), UnsupportedOrderError);
  EXPECT_THROW(s_grid(rho, {}, 1.0), UnsupportedOrderError);
}

TEST(SGrid, MatchesPointwiseValues) {
  const FockTruncation t({40});
  const FockOp rho = density_matrix(parse_state("sup:(1)vacuum+(1)fock:1", 1), t);
  const PhaseGrid g = s_grid(rho, {{0, 0}, 2.0, 7}, -0.4);
  for (Eigen::Index i = 0; i < 7; ++i)
    for (Eigen::Index j = 0; j < 7; ++j)
      EXPECT_NEAR(g.values(i, j).real(), s_distribution(rho, amp(g.point(i, j)), -0.4), 1e-12);
  const PhaseGrid q = s_grid(rho, {{0, 0}, 2.0, 7}, -1.0);
  const PhaseGrid h = husimi_grid(rho, {{0, 0}, 2.0, 7});
  EXPECT_LT((q.values - h.values).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Export, CsvLayout) {
  const PhaseGrid g = wigner_grid(fock_rho(FockTruncation({30}), 0), {{0, 0}, 1.0, 3});
  std::istringstream in(to_csv(g));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "re,im,value");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 6), "-1,-1,");
  EXPECT_NEAR(std::stod(line.substr(6)), std::exp(-4.0), 1e-14);
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 5), "-1,0,");
  int rows = 2;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 9);
}

TEST(Export, JsonCarriesMetadata) {
  const PhaseGrid g = wigner_grid(fock_rho(FockTruncation({10}), 0), {{0, 0}, 1.0, 3});
  const nlohmann::json j = to_json(g, {{"state", "vacuum"}, {"cutoff", 10}});
  EXPECT_EQ(j.at("re_axis").size(), 3u);
  EXPECT_EQ(j.at("values").size(), 3u);
  EXPECT_EQ(j.at("metadata").at("state"), "vacuum");
  EXPECT_TRUE(j.at("metadata").contains("normalization"));
  EXPECT_DOUBLE_EQ(j.at("values")[1][1].get<double>(), 1.0);
}

TEST(States, Parsing) {
  const StateSpec v = parse_state("vacuum", 2);
  ASSERT_TRUE(std::holds_alternative<state::Fock>(v.kind));
  EXPECT_EQ(std::get<state::Fock>(v.kind).occupations, (std::vector<int>{0, 0}));

  const StateSpec c = parse_state("coherent:1+0i", 1);
  EXPECT_EQ(std::get<state::Coherent>(c.kind).amplitudes.alpha[0], Complex(1, 0));
  EXPECT_EQ(std::get<state::Coherent>(parse_state("coherent:-0.5-2i", 1).kind).amplitudes.alpha[0],
            Complex(-0.5, -2));
  EXPECT_EQ(std::get<state::Coherent>(parse_state("coherent:i", 1).kind).amplitudes.alpha[0],
            Complex(0, 1));

  const StateSpec s = parse_state("sup:(1)fock:0+(0.5i)fock:2", 1);
  const auto& sup = std::get<state::Superposition>(s.kind);
  ASSERT_EQ(sup.states.size(), 2u);
  EXPECT_EQ(sup.weights[1], Complex(0, 0.5));
}

TEST(States, ParseErrors) {
  EXPECT_THROW(parse_state("squeezed:1", 1), ParseError);
  EXPECT_THROW(parse_state("fock:x", 1), ParseError);
  EXPECT_THROW(parse_state("fock:-1", 1), ParseError);
  EXPECT_THROW(parse_state("coherent:1+", 1), ParseError);
  EXPECT_THROW(parse_state("sup:(1)sup:(1)vacuum", 1), ParseError);
  EXPECT_THROW(parse_state("sup:1", 1), ParseError);
  EXPECT_THROW(parse_state("sup:(1", 1), ParseError);
  EXPECT_THROW(parse_state("fock:1,2", 1), DimensionError);
}

TEST(States, SuperpositionIsNormalized) {
  const FockTruncation t({6});
  const FockOp rho = density_matrix(parse_state("sup:(1)fock:0+(1)fock:1", 1), t);
  EXPECT_NEAR(rho.matrix.trace().real(), 1.0, 1e-14);
  EXPECT_NEAR(rho.matrix(0, 1).real(), 0.5, 1e-14);
  // Equal weights of |0⟩ and |1⟩ give W(0) = 1/2 - 1/2 = 0.
  EXPECT_NEAR(wigner_series(rho, amp(0)), 0.0, 1e-14);
}

TEST(States, DensityValidation) {
  const FockTruncation t({3});
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(0, 0) = 0.5;
  m(1, 1) = 0.5;
  EXPECT_NO_THROW(validate_density({t, m}));
  m(0, 1) = 0.2;
  EXPECT_THROW(validate_density({t, m}), ContractError);
  m(1, 0) = 0.2;
  EXPECT_NO_THROW(validate_density({t, m}));
  m(0, 1) = m(1, 0) = 0.8;
  EXPECT_THROW(validate_density({t, m}), ContractError);
  Eigen::MatrixXcd half = 0.5 * Eigen::MatrixXcd::Identity(4, 4);
  EXPECT_THROW(validate_density({t, half}), ContractError);

  EXPECT_THROW(density_matrix({state::Density{{FockTruncation({2}), Eigen::MatrixXcd::Identity(3, 3) / 3.0}}}, t),
               DimensionError);
}

}  // namespace
}  // namespace dq
