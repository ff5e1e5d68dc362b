#pragma once

#include <complex>

#include "ghostsim/physics.hpp"

namespace ghostsim {

/// One 1-D Gaussian mode amp * exp(-(y-center)^2 / sq_width).
///
/// sq_width is the complex squared width (the Gamma^2-style parameter);
/// Re(sq_width) > 0 keeps the mode normalizable.  The center may acquire
/// an imaginary part after slit projection of an evolved state -- that is
/// a real displacement plus a momentum boost, and all closed forms below
/// handle it.
struct ComplexGaussian {
    cxd center{0.0, 0.0};
    cxd sq_width{1.0, 0.0};
    cxd amplitude{1.0, 0.0};

    cxd operator()(double y) const;

    /// Unit-norm real Gaussian at `center` with squared width `sq_width`.
    static ComplexGaussian normalized(cxd center, cxd sq_width);

    /// integral |g|^2 dy (closed form).
    double norm_sq() const;

    /// Rescale amplitude so norm_sq() == 1.
    ComplexGaussian renormalized() const;

    /// Position of the maximum of |g| (real).
    double intensity_peak() const;
    /// Standard deviation of |g|^2 (real).
    double intensity_std() const;

    /// Free evolution: sq_width += 2i*kappa with kappa = hbar*tau/m,
    /// amplitude *= sqrt(old/new).  Exact for any complex center.
    ComplexGaussian evolved(double kappa) const;
};

/// integral conj(g) h dy, closed form.
cxd overlap(const ComplexGaussian& g, const ComplexGaussian& h);

/// conj(g(y)) * h(y) pointwise.
cxd cross_term(const ComplexGaussian& g, const ComplexGaussian& h, double y);

/// Result of completing the square in exp(-(a2 y^2 + a1 y + a0)):
/// a Gaussian with sq_width 1/a2 and center -a1/(2 a2), amplitude
/// prefactor exp(a1^2/(4 a2) - a0).
ComplexGaussian from_quadratic(cxd a2, cxd a1, cxd a0, cxd prefactor);

}  // namespace ghostsim
