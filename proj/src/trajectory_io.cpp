#include "ksgeo/trajectory_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ksgeo/errors.hpp"

namespace ksgeo {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double json_number(const nlohmann::json& j) {
  return j.is_null() ? kNan : j.get<double>();
}

nlohmann::json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

const char* direction_name(Direction d) {
  return d == Direction::infall ? "infall" : "outfall";
}

Direction direction_from_name(const std::string& name) {
  if (name == "infall") return Direction::infall;
  if (name == "outfall") return Direction::outfall;
  throw PreconditionError("unknown direction: " + name);
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::turning_point: return "turning_point";
    case Termination::terminal_radius: return "terminal_radius";
    case Termination::max_tau: return "max_tau";
  }
  return "max_tau";
}

Termination termination_from_name(const std::string& name) {
  if (name == "turning_point") return Termination::turning_point;
  if (name == "terminal_radius") return Termination::terminal_radius;
  if (name == "max_tau") return Termination::max_tau;
  throw PreconditionError("unknown termination: " + name);
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << kTrajectoryCsvHeader << '\n';
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const GeodesicState& s = traj.samples[i];
    os << format_double(s.tau) << ',' << format_double(s.t) << ','
       << format_double(s.r) << ',' << format_double(s.theta) << ','
       << format_double(s.phi) << ',' << format_double(s.tdot) << ','
       << format_double(s.rdot) << ',' << format_double(s.thetadot) << ','
       << format_double(s.phidot) << ',' << format_double(traj.residuals[i])
       << '\n';
  }
}

CsvTrajectory read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kTrajectoryCsvHeader)
    throw PreconditionError("bad trajectory CSV header");
  CsvTrajectory out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    double v[10];
    const char* p = line.c_str();
    for (int i = 0; i < 10; ++i) {
      char* end = nullptr;
      v[i] = std::strtod(p, &end);
      if (end == p) throw PreconditionError("bad trajectory CSV row: " + line);
      p = end;
      if (i < 9) {
        if (*p != ',')
          throw PreconditionError("bad trajectory CSV row: " + line);
        ++p;
      }
    }
    GeodesicState s;
    s.tau = v[0];
    s.t = v[1];
    s.r = v[2];
    s.theta = v[3];
    s.phi = v[4];
    s.tdot = v[5];
    s.rdot = v[6];
    s.thetadot = v[7];
    s.phidot = v[8];
    out.samples.push_back(s);
    out.residuals.push_back(v[9]);
  }
  return out;
}

nlohmann::json trajectory_to_json(const Trajectory& traj) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["metadata"] = {
      {"params", {{"mass", traj.params.mass}, {"spin", traj.params.spin}}},
      {"constants",
       {{"energy", traj.constants.energy},
        {"angular_momentum", traj.constants.angular_momentum},
        {"normalization", traj.constants.normalization}}},
      {"config",
       {{"rel_tol", traj.config.rel_tol},
        {"abs_tol", traj.config.abs_tol},
        {"max_step", number_or_null(std::isfinite(traj.config.max_step)
                                        ? traj.config.max_step
                                        : kNan)},
        {"terminal_radius", traj.config.terminal_radius},
        {"direction", direction_name(traj.config.direction)},
        {"max_tau", number_or_null(std::isfinite(traj.config.max_tau)
                                       ? traj.config.max_tau
                                       : kNan)},
        {"stop_after_turns", traj.config.stop_after_turns}}},
      {"termination", termination_name(traj.termination)},
      {"turning_radii", traj.turning_radii},
      {"max_normalization_drift", traj.max_normalization_drift},
      {"max_residual", traj.max_residual}};
  nlohmann::json samples = nlohmann::json::array();
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const GeodesicState& s = traj.samples[i];
    samples.push_back({{"tau", s.tau},
                       {"t", number_or_null(s.t)},
                       {"r", s.r},
                       {"theta", s.theta},
                       {"phi", number_or_null(s.phi)},
                       {"tdot", number_or_null(s.tdot)},
                       {"rdot", s.rdot},
                       {"thetadot", s.thetadot},
                       {"phidot", number_or_null(s.phidot)},
                       {"residual", traj.residuals[i]}});
  }
  j["samples"] = std::move(samples);
  return j;
}

Trajectory trajectory_from_json(const nlohmann::json& j) {
  const auto& meta = j.at("metadata");
  const auto& p = meta.at("params");
  SpacetimeParams params(p.at("mass").get<double>(),
                         p.at("spin").get<double>());
  const auto& c = meta.at("constants");
  ConstantsOfMotion consts{c.at("energy").get<double>(),
                           c.at("angular_momentum").get<double>(),
                           c.at("normalization").get<double>()};
  const auto& cfg = meta.at("config");
  IntegrationConfig config;
  config.rel_tol = cfg.at("rel_tol").get<double>();
  config.abs_tol = cfg.at("abs_tol").get<double>();
  const double ms = json_number(cfg.at("max_step"));
  config.max_step =
      std::isnan(ms) ? std::numeric_limits<double>::infinity() : ms;
  config.terminal_radius = cfg.at("terminal_radius").get<double>();
  config.direction = direction_from_name(cfg.at("direction").get<std::string>());
  const double mt = json_number(cfg.at("max_tau"));
  config.max_tau =
      std::isnan(mt) ? std::numeric_limits<double>::infinity() : mt;
  config.stop_after_turns = cfg.at("stop_after_turns").get<int>();

  Trajectory traj{params,
                  consts,
                  config,
                  {},
                  {},
                  meta.at("turning_radii").get<std::vector<double>>(),
                  meta.at("max_normalization_drift").get<double>(),
                  meta.at("max_residual").get<double>(),
                  termination_from_name(meta.at("termination").get<std::string>())};
  for (const auto& row : j.at("samples")) {
    GeodesicState s;
    s.tau = row.at("tau").get<double>();
    s.t = json_number(row.at("t"));
    s.r = row.at("r").get<double>();
    s.theta = row.at("theta").get<double>();
    s.phi = json_number(row.at("phi"));
    s.tdot = json_number(row.at("tdot"));
    s.rdot = row.at("rdot").get<double>();
    s.thetadot = row.at("thetadot").get<double>();
    s.phidot = json_number(row.at("phidot"));
    traj.samples.push_back(s);
    traj.residuals.push_back(row.at("residual").get<double>());
  }
  return traj;
}

nlohmann::json spectrum_to_json(const SpectrumResult& result) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["grid"] = {{"half_width", result.grid.half_width},
               {"points", result.grid.points}};
  j["params"] = {{"m_ho", 0.25}, {"omega", 2.0}, {"dims", 4}};
  j["claim_comparison"] = result.claim_comparison;
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& level : result.levels) {
    levels.push_back({{"n", level.n},
                      {"analytic_energy", level.analytic_energy},
                      {"numeric_energy", level.numeric_energy},
                      {"degeneracy", level.degeneracy},
                      {"residual", level.residual}});
  }
  j["levels"] = std::move(levels);
  return j;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp + " for writing");
    os << content;
    if (!os) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

}  // namespace ksgeo
