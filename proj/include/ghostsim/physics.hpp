#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ghostsim {

using cxd = std::complex<double>;

/// Thrown when a configuration hits a known singular point of the
/// closed-form expressions (e.g. 4*Omega^2*sigma^2 == hbar^2).
struct SingularConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a numerical guard trips (window too small, aliasing,
/// under-resolved slit, quadrature failure).
struct NumericalGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a fringe fit cannot be performed (fewer than 3 interior
/// maxima -- an envelope-only scan).
struct FitUnavailableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {
void require_finite_positive(double v, const char* name);
void require_finite_nonneg(double v, const char* name);
}  // namespace detail

/// Momentum-entangled two-particle Gaussian source.
/// sigma sets the momentum spread of the entanglement, omega the overall
/// spatial extent of the pair.
struct SourceParams {
    double sigma;  // momentum-spread scale, kg m/s
    double omega;  // overall spatial extent, m
    double hbar;   // J s
    double mass;   // kg

    SourceParams(double sigma_, double omega_, double hbar_, double mass_);

    /// True iff omega exceeds both the slit width and the correlation
    /// length hbar/sigma by the given factor (default 100).
    bool is_broad(double slit_epsilon, double factor = 100.0) const;
};

/// Symmetric double slit: Gaussian modes of width epsilon at +/- y0.
struct SlitPair {
    double y0;       // half separation, m
    double epsilon;  // slit width, m

    SlitPair(double y0_, double epsilon_);
};

enum class KinematicsMode { TimeDomain, DistanceDomain };

/// Time-domain (t0, t) or distance-domain (lambda_d, L1, L2)
/// parametrization of the flight geometry.  The two are related by
///   hbar*t/m  = lambda_d*L1/(2 pi)
///   hbar*t0/m = lambda_d*L2/(2 pi)
/// and D = L1 + 2*L2 is always derived, never stored.
struct KinematicsConfig {
    KinematicsMode mode;
    double t0 = 0.0;        // source -> slit flight time, s
    double t = 0.0;         // slit -> detector flight time, s
    double lambda_d = 0.0;  // de Broglie wavelength, m (0 = unset in time mode)
    double L1 = 0.0;        // slit -> D1 distance, m
    double L2 = 0.0;        // source -> slit distance, m

    static KinematicsConfig time_domain(double t0, double t, double lambda_d = 0.0);
    static KinematicsConfig distance_domain(double lambda_d, double L1, double L2);

    double D() const { return L1 + 2.0 * L2; }

    /// Spreading length hbar*t/m for the slit->detector leg, in m^2.
    /// Needs hbar and mass only in time mode.
    double kappa1(double hbar, double mass) const;
    /// Spreading length hbar*t0/m for the source->slit leg, in m^2.
    double kappa0(double hbar, double mass) const;
};

/// Exact algebraic mapping between the two parametrizations.  Time ->
/// distance requires lambda_d set on the config plus hbar and mass.
KinematicsConfig distance_map(const KinematicsConfig& k, double hbar, double mass);

/// Report on the broad-source limit (Omega >> epsilon,
/// Omega >> hbar/sigma), which licenses the gamma^2 approximation.
struct RegimeReport {
    double omega_over_epsilon;
    double omega_sigma_over_hbar;
    double threshold;
    bool admissible;  // both ratios above threshold
};

RegimeReport validate_regime(const SourceParams& s, const SlitPair& sl,
                             double threshold = 100.0);

enum class Particle { P1, P2 };

/// One simulated detector scan: ordered (position, density) samples.
/// Conditional scans carry density in 1/m^2 (joint density along the scan
/// line); marginal scans carry 1/m.
struct ScanResult {
    Particle scanned_particle;
    bool marginal = false;
    double fixed_coordinate = 0.0;  // partner detector position, m (ignored if marginal)
    std::vector<double> positions;  // m, strictly increasing, uniform
    std::vector<double> densities;  // >= 0
    double normalization = 1.0;     // integral of the underlying joint density
};

}  // namespace ghostsim
