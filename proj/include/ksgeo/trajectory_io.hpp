// ksgeo - trajectory and spectrum serialization (CSV and JSON)
//
// All floating-point values are written with 17 significant digits so that
// re-parsing reproduces every sample bit for bit. Undefined coordinate values
// (t beyond a horizon crossing) serialize as "nan" in CSV and null in JSON.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ksgeo/integrator.hpp"
#include "ksgeo/oscillator.hpp"

namespace ksgeo {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kTrajectoryCsvHeader =
    "tau,t,r,theta,phi,tdot,rdot,thetadot,phidot,residual";

std::string format_double(double v);  // %.17g, "nan"/"inf" spelled out

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

struct CsvTrajectory {
  std::vector<GeodesicState> samples;
  std::vector<double> residuals;
};
CsvTrajectory read_trajectory_csv(std::istream& is);

nlohmann::json trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const nlohmann::json& j);

nlohmann::json spectrum_to_json(const SpectrumResult& result);

// Writes content to path through a temporary file and rename, so the output
// appears at most once and never half-written.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace ksgeo
