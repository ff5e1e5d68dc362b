#include "ghostsim/gaussian.hpp"

#include <cmath>
#include <numbers>

namespace ghostsim {

namespace {
constexpr double pi = std::numbers::pi;
}

cxd ComplexGaussian::operator()(double y) const {
    const cxd d = y - center;
    return amplitude * std::exp(-d * d / sq_width);
}

ComplexGaussian ComplexGaussian::normalized(cxd center, cxd sq_width) {
    ComplexGaussian g;
    g.center = center;
    g.sq_width = sq_width;
    g.amplitude = 1.0;
    return g.renormalized();
}

double ComplexGaussian::norm_sq() const { return overlap(*this, *this).real(); }

ComplexGaussian ComplexGaussian::renormalized() const {
    ComplexGaussian g = *this;
    g.amplitude /= std::sqrt(norm_sq());
    return g;
}

double ComplexGaussian::intensity_peak() const {
    // |g(y)|^2 = |amp|^2 exp(-2 Re[(y-center)^2 / sq_width]); writing
    // 1/sq_width = p + i s and center = cr + i ci, the exponent is a real
    // Gaussian in (y - cr) peaking at cr - s*ci/p.
    const cxd inv = 1.0 / sq_width;
    return center.real() - inv.imag() * center.imag() / inv.real();
}

double ComplexGaussian::intensity_std() const {
    const double p = (1.0 / sq_width).real();
    return 1.0 / (2.0 * std::sqrt(p));
}

ComplexGaussian ComplexGaussian::evolved(double kappa) const {
    ComplexGaussian g = *this;
    g.sq_width = sq_width + cxd(0.0, 2.0 * kappa);
    g.amplitude = amplitude * std::sqrt(sq_width / g.sq_width);
    return g;
}

cxd overlap(const ComplexGaussian& g, const ComplexGaussian& h) {
    const cxd A = std::conj(g.sq_width);
    const cxd a = std::conj(g.center);
    const cxd B = h.sq_width;
    const cxd b = h.center;
    const cxd a2 = 1.0 / A + 1.0 / B;
    const cxd a1 = -2.0 * (a / A + b / B);
    const cxd a0 = a * a / A + b * b / B;
    return std::conj(g.amplitude) * h.amplitude * std::sqrt(pi / a2) *
           std::exp(a1 * a1 / (4.0 * a2) - a0);
}

cxd cross_term(const ComplexGaussian& g, const ComplexGaussian& h, double y) {
    return std::conj(g(y)) * h(y);
}

ComplexGaussian from_quadratic(cxd a2, cxd a1, cxd a0, cxd prefactor) {
    ComplexGaussian g;
    g.sq_width = 1.0 / a2;
    g.center = -a1 / (2.0 * a2);
    g.amplitude = prefactor * std::exp(a1 * a1 / (4.0 * a2) - a0);
    return g;
}

}  // namespace ghostsim
