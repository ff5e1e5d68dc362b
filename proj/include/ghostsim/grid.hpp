#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ghostsim/analytic.hpp"
#include "ghostsim/physics.hpp"

namespace ghostsim {

/// Discretization window for the two-particle wavefunction.
/// Axis i covers [-extent_i, extent_i) with n_i uniform cells.
struct GridSpec {
    int n1;
    int n2;
    double extent1;  // half-window along y1, m
    double extent2;  // half-window along y2, m
    /// Max probability allowed in any boundary cell (aliasing guard).
    double boundary_floor = 1e-8;

    GridSpec(int n1_, int n2_, double extent1_, double extent2_,
             double boundary_floor_ = 1e-8);

    double dy1() const { return 2.0 * extent1 / n1; }
    double dy2() const { return 2.0 * extent2 / n2; }
    double y1(int i) const { return (i - n1 / 2) * dy1(); }
    double y2(int j) const { return (j - n2 / 2) * dy2(); }
};

/// Discretized two-particle wavefunction, row-major [i1 * n2 + i2].
struct WavefunctionGrid {
    GridSpec spec;
    std::vector<cxd> values;  // amplitude per cell, 1/m
    double t_elapsed = 0.0;

    cxd& at(int i, int j) { return values[static_cast<size_t>(i) * spec.n2 + j]; }
    const cxd& at(int i, int j) const {
        return values[static_cast<size_t>(i) * spec.n2 + j];
    }

    /// Discrete norm  sum |psi|^2 dy1 dy2.
    double norm() const;
    /// Largest per-cell probability |psi|^2 dy1 dy2 on the window boundary.
    double edge_occupancy() const;
};

struct DiscretizeReport {
    WavefunctionGrid grid;
    /// Factor the sampled state was multiplied by to restore unit
    /// discrete norm; should be within ~1e-6 of 1 for a well-windowed run.
    double renorm_factor;
};

/// Sample the closed-form state at cell centers and renormalize
/// discretely.  Rejects windows whose boundary cells already hold more
/// probability than spec.boundary_floor.
DiscretizeReport discretize(const SourceState& s, const GridSpec& g);

/// Exact free evolution in the discrete Fourier basis: each plane wave
/// picks up exp(-i hbar (k1^2 + k2^2) tau / 2m).  One step, no
/// splitting; unitary to rounding.  Re-checks the edge guard afterwards.
WavefunctionGrid evolve_free(const WavefunctionGrid& w, double tau,
                             double hbar, double mass);

struct SlitProjectionReport {
    WavefunctionGrid grid;
    /// Probability removed with the non-passing component |chi>.
    double discarded_fraction;
};

/// Per-column slit projection: the y1 dependence of each y2 column is
/// replaced by phi_A <phi_A|col> + phi_B <phi_B|col> (trapezoidal
/// quadrature), then the grid is renormalized.  Rejects grids whose
/// spacing cannot carry the slit mode's momentum content.
SlitProjectionReport apply_slit_projection(const WavefunctionGrid& w,
                                           const SlitPair& sl);

struct ErrorReport {
    double l2_relative;        // ||rho_a - rho_g||_2 / ||rho_a||_2
    double max_pointwise;      // max |rho_a - rho_g| / max rho_a
    /// Relative fringe-width discrepancy of the conditional slice through
    /// the grid center, per particle; unset when no fringes are fittable.
    std::optional<double> fringe_discrepancy_p1;
    std::optional<double> fringe_discrepancy_p2;
};

/// Compare an analytic joint density against the grid density |psi|^2.
/// The callback is evaluated at every cell center.
ErrorReport compare(const std::function<double(double, double)>& analytic_density,
                    const WavefunctionGrid& w);

/// Text dump of |psi|^2, row-major, with a one-line header
/// "# n1 n2 extent1 extent2 t_elapsed".
void dump_density(const WavefunctionGrid& w, const std::string& path);

}  // namespace ghostsim
