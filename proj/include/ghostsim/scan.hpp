#pragma once

#include <optional>
#include <vector>

#include "ghostsim/analytic.hpp"
#include "ghostsim/physics.hpp"

namespace ghostsim {

/// A coincidence-scan request: scan one detector, hold the other fixed
/// (or integrate it out for a marginal scan).
struct ScanRequest {
    Particle scanned_particle = Particle::P2;
    bool marginal = false;
    double fixed_value = 0.0;  // partner position, m
    double range_min = 0.0;
    double range_max = 0.0;
    int count = 0;  // >= 64

    SourceParams source;
    SlitPair slits;
    KinematicsConfig kinematics;

    ScanRequest(const SourceParams& s, const SlitPair& sl, const KinematicsConfig& k)
        : source(s), slits(sl), kinematics(k) {}
};

/// Conditional scans evaluate the joint density along the scan line;
/// marginal scans integrate the partner coordinate by adaptive Simpson
/// quadrature (relative tolerance 1e-8).  Deterministic.
ScanResult run_scan(const ScanRequest& r);

/// Fringe measurement extracted from a scan.
struct FringeFit {
    double fringe_width;   // m, mean adjacent spacing of central <= 5 peaks
    double width_stderr;   // m
    double visibility;     // (max-min)/(max+min) over the central fringe pair
    double center_offset;  // m, position of the tallest peak
    int peaks_used;
};

/// Locate local maxima with parabolic sub-sample refinement, flatten the
/// envelope (estimated from the maxima and minima), and measure the mean
/// adjacent spacing of the central <= 5 peaks.  Throws
/// FitUnavailableError when fewer than 3 interior maxima exist.
FringeFit fit_fringes(const ScanResult& s);

/// Convenience wrapper returning just the fitted fringe width.
double fit_fringes_width(const ScanResult& s);

/// Residual oscillation at wavenumber theta, extracted by Hann-windowed
/// lock-in over n_periods fringe periods around `center`:
///   2 |<d(y) e^{i theta y}>_w| / <d(y)>_w.
/// Matches fringe visibility for a clean pattern and stays meaningful for
/// washed-out scans where no peaks exist.
double lockin_visibility(const ScanResult& s, double theta, double center = 0.0,
                         double n_periods = 3.0);

/// Relative shift between two scans of the same range, measured by
/// cross-correlating the envelope-flattened patterns over +-w/2 where w
/// is the fitted fringe width of `reference`.
double pattern_shift(const ScanResult& reference, const ScanResult& shifted);

/// Quantum-erasure demonstration: conditional P2 patterns for each D1
/// position, their visibilities, the visibility of the summed pattern,
/// and the fringe-shift slope d(center)/d(y1).
struct ErasureReport {
    std::vector<double> y1_values;
    std::vector<double> conditional_visibility;  // lock-in, per y1
    double summed_visibility;                    // lock-in of the y1 sum
    double shift_slope;                          // compare -theta1/theta2
    double fringe_width;                         // fitted w2 at y1 = 0
    std::vector<double> summed_pattern;          // over the y2 scan grid
    std::vector<double> y2_positions;
};

enum class ErasureWeighting { Uniform, Envelope };

/// y1_grid must span >= 3 particle-1 fringe widths with >= 32 points.
/// Uniform weighting models "all D1 positions added"; Envelope weights
/// each conditional pattern by the particle-1 marginal.
ErasureReport erasure_report(const SourceParams& s, const SlitPair& sl,
                             const KinematicsConfig& k,
                             const std::vector<double>& y1_grid,
                             ErasureWeighting weighting = ErasureWeighting::Uniform);

/// Conditional scan of particle 1 with D2 fixed, plus its fringe fit.
struct Particle1Scan {
    ScanResult scan;
    FringeFit fit;
};

Particle1Scan particle1_scan(const SourceParams& s, const SlitPair& sl,
                             const KinematicsConfig& k, double fixed_y2,
                             double range, int count);

}  // namespace ghostsim
