// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dq/dq.hpp"

namespace {

using namespace dq;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Outcome associativity() {
  Rng rng(1001);
  int bad_moyal = 0, bad_normal = 0;
  for (int n = 0; n < 200; ++n) {
    const std::size_t modes = static_cast<std::size_t>(rng.uniform_int(1, 3));
    const PolySymbol f = random_symbol(rng, modes, 4);
    const PolySymbol g = random_symbol(rng, modes, 4);
    const PolySymbol h = random_symbol(rng, modes, 4);
    if (!(moyal_star(moyal_star(f, g), h) == moyal_star(f, moyal_star(g, h)))) ++bad_moyal;
    if (!(normal_star(normal_star(f, g), h) == normal_star(f, normal_star(g, h)))) ++bad_normal;
  }
  return {bad_moyal + bad_normal == 0, "mismatches moyal=" + std::to_string(bad_moyal) +
                                           " normal=" + std::to_string(bad_normal)};
}

Outcome c_equivalence() {
  Rng rng(1002);
  int bad = 0;
  for (int n = 0; n < 200; ++n) {
    const std::size_t modes = static_cast<std::size_t>(rng.uniform_int(1, 3));
    const PolySymbol f = random_symbol(rng, modes, 4);
    const PolySymbol g = random_symbol(rng, modes, 4);
    const PolySymbol fn = s_transform(f, SOrder::weyl(), SOrder::normal());
    const PolySymbol gn = s_transform(g, SOrder::weyl(), SOrder::normal());
    if (!(weyl_from_normal(normal_star(fn, gn)) == moyal_star(f, g))) ++bad;
  }
  return {bad == 0, "mismatches=" + std::to_string(bad)};
}

Outcome quantization_oracle() {
  Rng rng(1003);
  const FockTruncation t = FockTruncation::uniform(1, 40);
  double worst = 0;
  for (int n = 0; n < 50; ++n) {
    const PolySymbol f = random_symbol(rng, 1, 3);
    const PolySymbol g = random_symbol(rng, 1, 3);
    const FockOp prod = weyl_quantize(f, t) * weyl_quantize(g, t);
    const PolySymbol fg = moyal_star(f, g);
    for (int p = 0; p < 20; ++p) {
      const CoherentAmplitudes z{{rng.disc(2.0)}};
      worst = std::max(worst, std::abs(weyl_symbol(prod, z) - fg.evaluate(z.alpha)));
    }
  }
  return {worst <= 1e-6, "max deviation " + num(worst)};
}

Outcome husimi_identity() {
  Rng rng(1004);
  const FockTruncation t = FockTruncation::uniform(1, 40);
  double worst = 0;
  for (int n = 0; n < 50; ++n) {
    const PolySymbol f = random_symbol(rng, 1, 3);
    const FockOp op = normal_quantize(f, t);
    for (int p = 0; p < 20; ++p) {
      const CoherentAmplitudes z{{rng.disc(2.0)}};
      worst = std::max(worst, std::abs(husimi_symbol(op, z) - f.evaluate(z.alpha)));
    }
  }
  return {worst <= 1e-8, "max deviation " + num(worst)};
}

Outcome wigner_series_check() {
  Rng rng(1005);
  double worst = 0;
  for (int n = 0; n < 20; ++n) {
    const CoherentAmplitudes alpha{{rng.disc(1.0)}};
    const CoherentAmplitudes xi{{alpha.alpha[0] + rng.disc(2.0)}};
    const double reach = std::max(std::abs(alpha.alpha[0]), std::abs(xi.alpha[0]));
    const FockTruncation t = FockTruncation::uniform(1, default_cutoff(reach));
    const FockOp rho = density_matrix(StateSpec{state::Coherent{alpha}}, t);
    worst = std::max(worst, std::abs(wigner_series(rho, xi) - wigner_coherent_closed_form(alpha, xi)));
  }
  // Two modes, smaller amplitudes to stay under the dimension cap.
  for (int n = 0; n < 3; ++n) {
    const CoherentAmplitudes alpha{{rng.disc(0.5), rng.disc(0.5)}};
    const CoherentAmplitudes xi{{alpha.alpha[0] + rng.disc(0.7), alpha.alpha[1] + rng.disc(0.7)}};
    const FockTruncation t = FockTruncation::uniform(2, default_cutoff(1.2));
    const FockOp rho = density_matrix(StateSpec{state::Coherent{alpha}}, t);
    worst = std::max(worst, std::abs(wigner_series(rho, xi) - wigner_coherent_closed_form(alpha, xi)));
  }
  const FockTruncation t = FockTruncation::uniform(1, default_cutoff(0.0));
  const FockOp one = density_matrix(StateSpec{state::Fock{{1}}}, t);
  const double w1 = wigner_series(one, CoherentAmplitudes{{Complex(0, 0)}});
  return {worst <= 1e-8 && std::abs(w1 + 1.0) <= 1e-10,
          "coherent max deviation " + num(worst) + ", W_|1>(0) = " + num(w1)};
}

Outcome displacement_composition() {
  Rng rng(1006);
  const FockTruncation t = FockTruncation::uniform(1, 40);
  const Eigen::VectorXcd vac = fock_vector(t, {0});
  double worst = 0;
  for (int n = 0; n < 20; ++n) {
    const CoherentAmplitudes a{{rng.disc(1.5)}}, b{{rng.disc(1.5)}};
    const Eigen::VectorXcd lhs = displacement(t, a).matrix * (displacement(t, b).matrix * vac);
    const Complex phase = std::exp(Complex(0, std::imag(a.alpha[0] * std::conj(b.alpha[0]))));
    const Eigen::VectorXcd rhs = phase * (displacement(t, a + b).matrix * vac);
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return {worst <= 1e-8, "max norm difference " + num(worst)};
}

Outcome completeness() {
  const Eigen::MatrixXcd acc = completeness_quadrature();
  const double dev = (acc - Eigen::MatrixXcd::Identity(acc.rows(), acc.cols())).cwiseAbs().maxCoeff();
  return {dev <= 1e-3, "max deviation " + num(dev)};
}

Outcome symplecticity() {
  Rng rng(1008);
  double worst_symp = 0, worst_trip = 0;
  for (std::size_t sites : {8u, 16u, 32u, 64u})
    for (double m : {0.1, 1.0, 10.0}) {
      const ModeLattice lat = ModeLattice::periodic(sites, 1.0, m);
      worst_symp = std::max(worst_symp, symplectic_check(lat));
      FieldConfig f{std::vector<double>(sites), std::vector<double>(sites)};
      for (std::size_t s = 0; s < sites; ++s) {
        f.phi[s] = rng.uniform(-1, 1);
        f.varpi[s] = rng.uniform(-1, 1);
      }
      const CoherentAmplitudes a = amplitudes_from_field(f, lat);
      const FieldConfig back = field_from_amplitudes(a, lat);
      for (std::size_t s = 0; s < sites; ++s)
        worst_trip = std::max({worst_trip, std::abs(back.phi[s] - f.phi[s]),
                               std::abs(back.varpi[s] - f.varpi[s])});
      const CoherentAmplitudes again = amplitudes_from_field(back, lat);
      for (std::size_t j = 0; j < a.alpha.size(); ++j)
        worst_trip = std::max(worst_trip, std::abs(again.alpha[j] - a.alpha[j]));
    }
  return {worst_symp <= 1e-10 && worst_trip <= 1e-10,
          "symplectic " + num(worst_symp) + ", round trip " + num(worst_trip)};
}

Outcome parser() {
  Rng rng(1009);
  int bad_trip = 0;
  for (int n = 0; n < 1000; ++n) {
    const std::size_t modes = static_cast<std::size_t>(rng.uniform_int(1, 3));
    const PolySymbol f = random_symbol(rng, modes, 5, 6);
    if (!(parse(format(f), modes) == f)) ++bad_trip;
  }
  static const std::string alphabet = "a0d1^*+-/()i 2.3xz9";
  int unpositioned = 0, crashed = 0, accepted = 0;
  for (int n = 0; n < 10000; ++n) {
    std::string s;
    const auto len = rng.uniform_int(0, 24);
    for (long long k = 0; k < len; ++k)
      s += alphabet[static_cast<std::size_t>(rng.uniform_int(0, static_cast<long long>(alphabet.size()) - 1))];
    try {
      parse(s, 2);
      ++accepted;
    } catch (const ParseError& e) {
      if (e.offset() > s.size()) ++unpositioned;
    } catch (...) {
      ++crashed;
    }
  }
  return {bad_trip == 0 && unpositioned == 0 && crashed == 0,
          "round-trip mismatches " + std::to_string(bad_trip) + ", fuzz accepted " +
              std::to_string(accepted) + ", unpositioned " + std::to_string(unpositioned) +
              ", other exceptions " + std::to_string(crashed)};
}

std::pair<int, std::string> capture(const std::string& cmd) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, out};
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Outcome cli_determinism() {
  const std::string cmd = std::string(DQTOOL_PATH) + " --seed 7 check all";
  const auto first = capture(cmd);
  const auto second = capture(cmd);
  const bool same = first.second == second.second && !first.second.empty();
  return {same && first.first == 0 && second.first == 0,
          "exit " + std::to_string(first.first) + "/" + std::to_string(second.first) +
              (same ? ", identical reports" : ", reports differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exact star associativity", associativity},
      {"c-equivalence", c_equivalence},
      {"quantization oracle", quantization_oracle},
      {"Husimi identity", husimi_identity},
      {"Wigner series vs closed form", wigner_series_check},
      {"displacement composition", displacement_composition},
      {"completeness quadrature", completeness},
      {"symplecticity and round trips", symplecticity},
      {"parser round trip and fuzz", parser},
      {"CLI determinism", cli_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s %zu %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
