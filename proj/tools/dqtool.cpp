// dqtool: star products, ordering transforms, phase-space grids, field
// modes and verification suites from the command line.
//
// Exit codes: 0 success, 1 a check failed, 2 malformed input,
// 3 dimension or contract violation.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dq/dq.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;
constexpr int kExitContract = 3;

std::string num(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

std::string point(dq::Complex z) { return "(" + num(z.real()) + "," + num(z.imag()) + ")"; }

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dq::ParseError("cannot write '" + path + "'", 0);
  out << text;
}

struct Settings {
  std::string config_file;
  std::vector<std::string> overrides;
  std::map<std::string, std::string> flags;

  dq::RunConfig resolve() const {
    dq::RunConfig cfg;
    if (!config_file.empty()) dq::load_config_file(config_file, cfg);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw dq::ParseError("--set expects key=value, got '" + kv + "'", 0, {"key=value"});
      cfg.set(dq::detail::trim(kv.substr(0, eq)), kv.substr(eq + 1));
    }
    for (const auto& [k, v] : flags) cfg.set(k, v);
    return cfg;
  }
};

/// Registers `--name` on `app` as an override for config key `key`.
void config_flag(CLI::App& app, Settings& s, const std::string& name, const std::string& key,
                 const std::string& help) {
  app.add_option_function<std::string>(
      name, [&s, key](const std::string& v) { s.flags[key] = v; }, help);
}

int cmd_star(const Settings& s, const std::string& lhs, const std::string& rhs,
             const std::string& kind) {
  const dq::RunConfig cfg = s.resolve();
  const dq::PolySymbol f = dq::parse(lhs, cfg.modes);
  const dq::PolySymbol g = dq::parse(rhs, cfg.modes);
  const dq::PolySymbol out = kind == "normal" ? dq::normal_star(f, g) : dq::moyal_star(f, g);
  std::cout << dq::format(out) << '\n';
  return 0;
}

int cmd_transform(const Settings& s, const std::string& expr, const std::string& from,
                  const std::string& to) {
  const dq::RunConfig cfg = s.resolve();
  const dq::PolySymbol f = dq::parse(expr, cfg.modes);
  const dq::SOrder s_from{dq::parse_rational(from)}, s_to{dq::parse_rational(to)};
  std::cout << dq::format(dq::s_transform(f, s_from, s_to)) << '\n';
  return 0;
}

int cmd_wigner(const Settings& s, const std::string& state_text, const std::string& order,
               const std::string& out_path) {
  const dq::RunConfig cfg = s.resolve();
  if (cfg.modes != 1)
    throw dq::UnsupportedOrderError("phase-space grids are single-mode only (modes = " +
                                    std::to_string(cfg.modes) + ")");
  const dq::StateSpec state = dq::parse_state(state_text, 1);
  const double s_value = dq::to_double(dq::parse_rational(order));
  const dq::GridSpec grid_spec = cfg.grid();
  const double reach = dq::max_amplitude(state) + std::abs(grid_spec.center) +
                       std::sqrt(2.0) * grid_spec.half_width;
  const dq::FockTruncation t = cfg.truncation(reach);
  const dq::FockOp rho = dq::density_matrix(state, t);
  const dq::PhaseGrid grid = dq::s_grid(rho, grid_spec, s_value, cfg.quasi_options());

  std::string text;
  if (cfg.format == "json") {
    text = dq::to_json(grid, {{"state", state_text},
                              {"s", order},
                              {"cutoff", t.cutoff(0)},
                              {"config_digest", cfg.digest()}})
               .dump(2) +
           "\n";
  } else {
    text = dq::to_csv(grid);
  }
  write_output(out_path, text);

  std::ostream& report = (out_path.empty() || out_path == "-") ? std::cerr : std::cout;
  const dq::GridExtrema e = dq::extrema(grid);
  report << "cutoff " << t.cutoff(0) << '\n'
         << "min " << num(e.min_value) << " at " << point(e.min_at) << '\n'
         << "max " << num(e.max_value) << " at " << point(e.max_at) << '\n';
  // Values above -1e-12 are rounding noise around zero.
  if (e.min_value < -1e-12) report << "negative region present\n";
  for (const auto& d : grid.diagnostics) report << "warning: " << d << '\n';
  return 0;
}

int cmd_check(const Settings& s, const std::string& suite, const std::string& out_path) {
  const dq::RunConfig cfg = s.resolve();
  const dq::CheckReport report = dq::run_checks(suite, cfg);
  write_output(out_path, dq::to_json(report, cfg).dump(2) + "\n");
  for (const auto& c : report.cases) {
    if (c.passed) continue;
    std::cerr << "FAIL " << c.name << ": measured " << num(c.measured) << " > tolerance "
              << num(c.tolerance) << '\n';
    for (const auto& d : c.diagnostics) std::cerr << "  " << d << '\n';
  }
  return report.passed() ? 0 : kExitFailure;
}

int cmd_modes(const Settings& s, const std::string& path, bool round_trip) {
  dq::RunConfig cfg = s.resolve();
  const dq::FieldConfig field = dq::field_from_csv_file(path);
  cfg.lattice_sites = field.phi.size();
  const dq::ModeLattice lat = cfg.lattice();
  const dq::CoherentAmplitudes a = dq::amplitudes_from_field(field, lat);
  const dq::CanonicalModes qp = dq::qp_from_field(field, lat);
  const double deviation = dq::symplectic_check(lat);
  std::optional<double> residue;
  if (round_trip) {
    if (lat.mode_count() != lat.x_count)
      throw dq::ContractError("round trip needs the full mode set (k_selection = all)");
    const dq::FieldConfig back = dq::field_from_amplitudes(a, lat);
    double r = 0;
    for (std::size_t x = 0; x < lat.x_count; ++x)
      r = std::max({r, std::abs(back.phi[x] - field.phi[x]),
                    std::abs(back.varpi[x] - field.varpi[x])});
    residue = r;
  }

  if (cfg.format == "json") {
    nlohmann::json modes = nlohmann::json::array();
    for (std::size_t j = 0; j < lat.mode_count(); ++j)
      modes.push_back({{"k", lat.k_values[j]},
                       {"omega", lat.omega(j)},
                       {"a_re", a.alpha[j].real()},
                       {"a_im", a.alpha[j].imag()},
                       {"Q", qp.Q[j]},
                       {"P", qp.P[j]}});
    nlohmann::json out{{"modes", modes}, {"symplectic_deviation", deviation}};
    if (residue) out["round_trip_residue"] = *residue;
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "k,omega,a_re,a_im,Q,P\n";
    for (std::size_t j = 0; j < lat.mode_count(); ++j)
      std::cout << num(lat.k_values[j]) << ',' << num(lat.omega(j)) << ','
                << num(a.alpha[j].real()) << ',' << num(a.alpha[j].imag()) << ','
                << num(qp.Q[j]) << ',' << num(qp.P[j]) << '\n';
    std::cout << "# symplectic_deviation " << num(deviation) << '\n';
    if (residue) std::cout << "# round_trip_residue " << num(*residue) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-space symbols, quantization and quasiprobability tools"};
  app.require_subcommand(1);
  app.fallthrough();

  Settings settings;
  app.add_option("--config", settings.config_file, "key = value config file");
  app.add_option("--set", settings.overrides, "override a config key (key=value), repeatable");
  config_flag(app, settings, "--modes", "modes", "number of modes");
  config_flag(app, settings, "--cutoff", "cutoff", "Fock cutoff per mode, or 'auto'");
  config_flag(app, settings, "--seed", "seed", "random seed for check suites");
  config_flag(app, settings, "--format", "format", "csv or json");
  config_flag(app, settings, "--amplitude", "amplitude", "coherent probe amplitude for checks");
  config_flag(app, settings, "--threads", "threads", "worker threads for grids (0 = all cores)");

  std::string lhs, rhs, kind = "moyal";
  auto* star = app.add_subcommand("star", "star product of two symbols");
  star->add_option("lhs", lhs, "left symbol")->required();
  star->add_option("rhs", rhs, "right symbol")->required();
  star->add_option("--kind", kind, "moyal or normal")->check(CLI::IsMember({"moyal", "normal"}));

  std::string expr, s_from, s_to;
  auto* transform = app.add_subcommand("transform", "re-express an s-ordered symbol");
  transform->add_option("expr", expr, "symbol")->required();
  transform->add_option("s_from", s_from, "source ordering (rational)")->required();
  transform->add_option("s_to", s_to, "target ordering (rational)")->required();

  std::string state, order = "0", wigner_out;
  auto* wigner = app.add_subcommand("wigner", "quasiprobability grid of a single-mode state");
  wigner->add_option("--state", state, "vacuum | fock:n | coherent:re+imi | sup:(w)s+(w)s")
      ->required();
  wigner->add_option("--s", order, "ordering parameter s <= 0 (default 0, Wigner)");
  wigner->add_option("--out", wigner_out, "output file (default stdout)");
  config_flag(*wigner, settings, "--center", "grid_center", "grid center re,im");
  config_flag(*wigner, settings, "--half-width", "grid_half_width", "grid half-width");
  config_flag(*wigner, settings, "--resolution", "grid_resolution", "points per axis");

  std::string suite, check_out;
  auto* check = app.add_subcommand("check", "run verification suites");
  check->add_option("suite", suite, "algebra | fock | quasiprob | modes | all")->required();
  check->add_option("--out", check_out, "report file (default stdout)");
  config_flag(*check, settings, "--cases", "cases", "random cases per property");

  std::string field_path;
  bool round_trip = false;
  auto* modes = app.add_subcommand("modes", "mode amplitudes and canonical variables of a field");
  modes->add_option("field_csv", field_path, "x,phi,varpi CSV")->required();
  modes->add_flag("--round-trip", round_trip, "report the field -> amplitudes -> field residue");
  config_flag(*modes, settings, "--spacing", "lattice_spacing", "lattice spacing");
  config_flag(*modes, settings, "--mass", "mass", "field mass");
  config_flag(*modes, settings, "--k", "k_selection", "all | half | j1,j2,...");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*star) return cmd_star(settings, lhs, rhs, kind);
    if (*transform) return cmd_transform(settings, expr, s_from, s_to);
    if (*wigner) return cmd_wigner(settings, state, order, wigner_out);
    if (*check) return cmd_check(settings, suite, check_out);
    if (*modes) return cmd_modes(settings, field_path, round_trip);
  } catch (const dq::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const dq::DimensionError& e) {
    std::cerr << "dimension error: " << e.what() << '\n';
    return kExitContract;
  } catch (const dq::ContractError& e) {
    std::cerr << "contract error: " << e.what() << '\n';
    return kExitContract;
  } catch (const dq::UnsupportedOrderError& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return kExitContract;
  }
  return kExitInput;
}
