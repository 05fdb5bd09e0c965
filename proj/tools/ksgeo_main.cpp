// ksgeo - batch command-line front end: geodesic integrations, KS identity
// checks, oscillator spectra, and the acceptance verification suite.
//
// Exit codes: 0 success, 2 bad input, 3 numerical failure, 4 identity
// failure, 5 acceptance failure.
#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ksgeo/errors.hpp"
#include "ksgeo/geometry.hpp"
#include "ksgeo/integrator.hpp"
#include "ksgeo/oscillator.hpp"
#include "ksgeo/trajectory_io.hpp"
#include "ksgeo/verification.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIdentity = 4;
constexpr int kExitAcceptance = 5;

struct GeodesicArgs {
  double mass = 1.0;
  double spin = 0.0;
  double energy = 0.0;
  double angmom = 0.0;
  double r0 = -1.0;  // default 2m
  std::string direction = "infall";
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  double max_tau = 100.0;
  double terminal_radius = -1.0;
  int stop_after_turns = 0;
  std::string out;
  std::string format = "csv";
};

int cmd_geodesic(const GeodesicArgs& args) {
  ksgeo::SpacetimeParams params(args.mass, args.spin);
  ksgeo::IntegrationConfig config;
  config.rel_tol = args.rel_tol;
  config.abs_tol = args.abs_tol;
  config.max_tau = args.max_tau;
  config.terminal_radius = args.terminal_radius;
  config.stop_after_turns = args.stop_after_turns;
  if (args.direction == "infall")
    config.direction = ksgeo::Direction::infall;
  else if (args.direction == "outfall")
    config.direction = ksgeo::Direction::outfall;
  else
    throw ksgeo::PreconditionError("direction must be infall or outfall");
  if (args.format != "csv" && args.format != "json")
    throw ksgeo::PreconditionError("format must be csv or json");

  const double r0 = args.r0 < 0.0 ? 2.0 * args.mass : args.r0;
  const ksgeo::ConstantsOfMotion consts{args.energy, args.angmom, 1.0};

  ksgeo::Trajectory traj =
      (args.energy == 0.0 && args.angmom == 0.0)
          ? ksgeo::integrate_zero_constants(params, r0, config)
          : ksgeo::integrate_general(
                params, consts, r0,
                config.direction == ksgeo::Direction::infall ? -1 : 1, config);

  const auto roots = ksgeo::turning_points(consts, params);
  std::cout << "turning points:";
  if (roots.empty()) std::cout << " none";
  for (double r : roots) std::cout << ' ' << ksgeo::format_double(r);
  std::cout << '\n';
  const char* term = traj.termination == ksgeo::Termination::terminal_radius
                         ? "terminal_radius"
                         : traj.termination == ksgeo::Termination::turning_point
                               ? "turning_point"
                               : "max_tau";
  std::cout << "tau span: " << ksgeo::format_double(traj.tau_span())
            << " (termination: " << term << ", " << traj.samples.size()
            << " samples)\n";
  std::cout << "max |2L - 1|: "
            << ksgeo::format_double(traj.max_normalization_drift) << '\n';

  std::string path = args.out;
  if (path.empty()) path = "trajectory." + args.format;
  if (args.format == "csv") {
    std::ostringstream os;
    ksgeo::write_trajectory_csv(os, traj);
    ksgeo::write_file_atomic(path, os.str());
  } else {
    ksgeo::write_file_atomic(path,
                             ksgeo::trajectory_to_json(traj).dump(2) + "\n");
  }
  std::cout << "wrote " << path << '\n';
  return kExitOk;
}

int cmd_ks_check(int samples, std::uint64_t seed, const std::string& out) {
  const ksgeo::KsCheckReport report = ksgeo::run_ks_check(samples, seed);
  const std::string text = ksgeo::ks_check_json(report).dump(2) + "\n";
  if (out.empty())
    std::cout << text;
  else {
    ksgeo::write_file_atomic(out, text);
    std::cout << "wrote " << out << '\n';
  }
  if (!report.all_passed) {
    for (const auto& id : report.identities)
      if (!id.passed)
        std::cerr << "identity failed: " << id.name << " (max residual "
                  << ksgeo::format_double(id.max_residual) << " > threshold "
                  << ksgeo::format_double(id.threshold) << ")\n";
    return kExitIdentity;
  }
  return kExitOk;
}

int cmd_spectrum(int n_max, int grid_points, double grid_halfwidth,
                 const std::string& out) {
  const ksgeo::GridSpec grid{grid_halfwidth, grid_points};
  const ksgeo::SpectrumResult result =
      ksgeo::spectrum_4d(grid, ksgeo::OscillatorParams{}, n_max);
  const std::string text = ksgeo::spectrum_to_json(result).dump(2) + "\n";
  if (out.empty())
    std::cout << text;
  else {
    ksgeo::write_file_atomic(out, text);
    std::cout << "wrote " << out << '\n';
  }
  return kExitOk;
}

int cmd_verify(bool quick, std::uint64_t seed, const std::string& out) {
  const ksgeo::VerificationReport report = ksgeo::run_verification(quick, seed);
  for (const auto& c : report.criteria)
    std::cout << (c.passed ? "PASS" : "FAIL") << "  " << c.id << "  " << c.name
              << "  " << c.details << '\n';
  if (!out.empty()) {
    ksgeo::write_file_atomic(
        out, ksgeo::verification_report_json(report).dump(2) + "\n");
    std::cout << "wrote " << out << '\n';
  }
  if (!report.all_passed) {
    std::cerr << "acceptance criteria failed:";
    for (const auto& c : report.criteria)
      if (!c.passed) std::cerr << ' ' << c.name;
    std::cerr << '\n';
    return kExitAcceptance;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ksgeo: time-like geodesics in Schwarzschild/Kerr spacetimes, the "
      "Kustaanheimo-Stiefel map, and the dual 4D oscillator spectrum"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value configuration file")
      ->envname("KSGEO_CONFIG");

  GeodesicArgs gargs;
  CLI::App* geo = app.add_subcommand(
      "geodesic", "integrate a radial geodesic and write a trajectory file");
  geo->add_option("--mass", gargs.mass, "black-hole mass m (geometric units)");
  geo->add_option("--spin", gargs.spin, "spin per unit mass a; 0 = Schwarzschild");
  geo->add_option("--energy", gargs.energy, "conserved energy E");
  geo->add_option("--angmom", gargs.angmom, "conserved angular momentum L");
  geo->add_option("--r0", gargs.r0, "initial radius (default 2m)");
  geo->add_option("--direction", gargs.direction, "infall | outfall");
  geo->add_option("--rel-tol", gargs.rel_tol, "relative step tolerance");
  geo->add_option("--abs-tol", gargs.abs_tol, "absolute step tolerance");
  geo->add_option("--max-tau", gargs.max_tau, "proper-time budget");
  geo->add_option("--terminal-radius", gargs.terminal_radius,
                  "stop radius (default 1e-6 m)");
  geo->add_option("--stop-after-turns", gargs.stop_after_turns,
                  "stop after this many turning points (0 = never)");
  geo->add_option("--out", gargs.out, "output path (default trajectory.<format>)");
  geo->add_option("--format", gargs.format, "csv | json");

  int ks_samples = 10000;
  std::uint64_t ks_seed = 42;
  std::string ks_out;
  CLI::App* ksc = app.add_subcommand(
      "ks-check", "run the KS identity suite on pseudorandom inputs");
  ksc->add_option("--samples", ks_samples, "number of random samples")
      ->check(CLI::PositiveNumber);
  ksc->add_option("--seed", ks_seed, "PRNG seed");
  ksc->add_option("--out", ks_out, "report path (default stdout)");

  int sp_nmax = 3, sp_points = 2001;
  double sp_halfwidth = 8.0;
  std::string sp_out;
  CLI::App* spc = app.add_subcommand(
      "spectrum", "compute the 4D oscillator spectrum on a finite-difference grid");
  spc->add_option("--n-max", sp_nmax, "highest level index")
      ->check(CLI::NonNegativeNumber);
  spc->add_option("--grid-points", sp_points, "nodes per dimension (odd)");
  spc->add_option("--grid-halfwidth", sp_halfwidth, "half width of the grid");
  spc->add_option("--out", sp_out, "report path (default stdout)");

  bool vf_quick = false;
  std::uint64_t vf_seed = 42;
  std::string vf_out;
  CLI::App* vfc = app.add_subcommand(
      "verify", "run the acceptance criteria end to end");
  vfc->add_flag("--quick", vf_quick, "reduced sample counts");
  vfc->add_option("--seed", vf_seed, "PRNG seed");
  vfc->add_option("--out", vf_out, "report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return kExitBadInput;
  }

  try {
    if (geo->parsed()) return cmd_geodesic(gargs);
    if (ksc->parsed()) return cmd_ks_check(ks_samples, ks_seed, ks_out);
    if (spc->parsed())
      return cmd_spectrum(sp_nmax, sp_points, sp_halfwidth, sp_out);
    if (vfc->parsed()) return cmd_verify(vf_quick, vf_seed, vf_out);
  } catch (const ksgeo::GridTooSmallError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ksgeo::StepFailureError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitBadInput;
}
