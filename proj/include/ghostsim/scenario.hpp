#pragma once

#include <optional>
#include <string>

#include "ghostsim/grid.hpp"
#include "ghostsim/physics.hpp"

namespace ghostsim {

/// Configuration-file problem (syntax, unknown key, missing key, invalid
/// value).  The message carries "file:line:" context where available.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Optional [scan] defaults from a scenario file.
struct ScanDefaults {
    Particle particle = Particle::P2;
    bool marginal = false;
    double fixed = 0.0;
    double range_min = 0.0;
    double range_max = 0.0;
    int count = 0;
};

/// One fully validated scenario: the physics configuration plus optional
/// grid and scan-default sections.
struct Scenario {
    SourceParams source;
    SlitPair slits;
    KinematicsConfig kinematics;
    std::optional<GridSpec> grid;
    std::optional<ScanDefaults> scan;
};

/// Strict key = value grammar with [section] headers and '#' comments:
///
///   [source]      sigma, omega, hbar, mass          (all required)
///   [slits]       y0, epsilon                       (all required)
///   [kinematics]  mode = time | distance;
///                 time mode: t0, t, optional lambda_d
///                 distance mode: lambda_d, L1, L2
///   [grid]        n1, n2, extent1, extent2, optional boundary_floor
///   [scan]        particle = P1 | P2, fixed = <m> | marginal,
///                 min, max, count
///
/// Unknown sections or keys are rejected; missing required keys are
/// rejected; all physical invariants are re-validated on load.  Errors
/// throw ConfigError with file/line diagnostics.
Scenario parse_scenario(const std::string& path);

/// Same grammar from an in-memory string; `name` labels diagnostics.
Scenario parse_scenario_text(const std::string& text, const std::string& name);

/// Serialize a scan as CSV: header "# ghostsim v1", column line
/// "position_m,density", then one full-precision sample per line, LF
/// endings.  Bit-identical for identical inputs.
void write_scan_csv(const ScanResult& s, const std::string& path);
std::string scan_csv_string(const ScanResult& s);

/// Parse a CSV produced by write_scan_csv.  Malformed input throws
/// ConfigError naming the offending line.
ScanResult read_scan_csv(const std::string& path);

}  // namespace ghostsim
