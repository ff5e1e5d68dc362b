#pragma once

#include <complex>

#include "ghostsim/gaussian.hpp"
#include "ghostsim/physics.hpp"

namespace ghostsim {

/// The entangled two-particle state in normal coordinates u = y1-y2,
/// v = y1+y2:
///   Psi = amplitude * exp(-u^2/rel_sq_width) * exp(-v^2/cm_sq_width)
/// At t=0 rel_sq_width = hbar^2/sigma^2 and cm_sq_width = 4*Omega^2.
struct SourceState {
    SourceParams params;
    double t_elapsed = 0.0;
    cxd rel_sq_width;
    cxd cm_sq_width;
    cxd amplitude;

    cxd operator()(double y1, double y2) const;
    double density(double y1, double y2) const { return std::norm((*this)(y1, y2)); }
};

SourceState make_source_state(const SourceParams& p);

/// Position and momentum uncertainties of either particle.
struct Uncertainties {
    double dy;  // m
    double dp;  // kg m/s
};

Uncertainties uncertainties(const SourceParams& p);

/// Free evolution by tau >= 0.  Both normal-coordinate squared widths
/// advance by 4i*hbar*tau/m (effective mass m/2 per normal coordinate);
/// the amplitude keeps the state normalized.
SourceState evolve_source(const SourceState& s, double tau);

/// Post-slit entangled state: (phi_A psi_A + phi_B psi_B) / norm_c.
/// phi_* live on the particle-1 axis, psi_* on the particle-2 axis.
/// The psi amplitudes carry the raw overlap <phi|Psi>, so the joint
/// density is |branch_a + branch_b|^2 / norm_c^2.
struct Branch {
    ComplexGaussian phi;
    ComplexGaussian psi;
};

struct BranchedState {
    Branch branch_a;
    Branch branch_b;
    double norm_c;           // sqrt of the exact two-branch norm
    double exact_y0_prime;   // |psi_A| intensity peak at projection time, m
    cxd exact_gamma_sq;      // psi squared width at projection time, m^2
    double hbar;
    double mass;

    cxd value(double y1, double y2) const;
    double density(double y1, double y2) const;
};

/// Project the (already evolved) source state onto the two Gaussian slit
/// modes.  psi_A/psi_B are the closed-form overlap integrals
/// <phi_A|Psi>, <phi_B|Psi>.
BranchedState project_slits(const SourceState& s, const SlitPair& sl);

/// <psi_A|psi_B> of the normalized partner states: the which-way
/// distinguishability.  Magnitude in [0,1]; 0 means full which-way
/// information and no first-order interference.
cxd which_way_overlap(const BranchedState& b);

/// Free evolution of all four packets by tau >= 0 (each squared width
/// advances by 2i*hbar*tau/m).  norm_c is unchanged (unitarity).
BranchedState evolve_branches(const BranchedState& b, double tau);

/// The broad-source approximation Gamma^2 ~ gamma^2 + 4i*hbar*t0/m with
/// gamma^2 = epsilon^2 + hbar^2/sigma^2.
struct GammaApprox {
    cxd gamma_sq;     // full approximate Gamma^2 (includes 4i*hbar*t0/m)
    double gamma_sq_real;  // epsilon^2 + hbar^2/sigma^2
    bool degraded;    // regime not admissible; value may be inaccurate
};

GammaApprox gamma_approx(const SlitPair& sl, const SourceParams& p, double kappa0);

/// Joint coincidence density of an evolved BranchedState, 1/m^2.
/// This is exactly the |branch_a + branch_b|^2 expansion -- the two
/// envelope terms plus the 2 cos(theta1 y1 + theta2 y2) cross term arise
/// from it, they are never hard-coded.
double joint_density_time(const BranchedState& b, double y1, double y2);

/// Fringe parameters of the coincidence pattern.
/// theta1/theta2 are the cosine rates in y1/y2; w = 2 pi / theta.
struct FringeParams {
    double theta1;     // rad/m
    double theta2;     // rad/m
    double w1;         // m
    double w2;         // m
    cxd gamma_sq_used; // m^2
    double w1_young;   // lambda_d L1 / (2 y0)
    double w2_young;   // lambda_d D  / (2 y0)
};

/// Evaluate theta/width formulas from geometry.  Works in either
/// kinematics mode through the spreading lengths kappa = hbar t/m.
FringeParams fringe_params(const KinematicsConfig& k, const SourceParams& s,
                           const SlitPair& sl);

/// Full pipeline in one call: make source, evolve to the slit, project,
/// evolve to the detectors.  Works in either kinematics mode.
BranchedState detector_state(const KinematicsConfig& k, const SourceParams& s,
                             const SlitPair& sl);

/// Joint density in the distance-domain parametrization: identical to
/// joint_density_time after distance_map.
double joint_density_distance(const KinematicsConfig& k, const SourceParams& s,
                              const SlitPair& sl, double y1, double y2);

}  // namespace ghostsim
