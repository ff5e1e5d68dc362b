#include "ghostsim/analytic.hpp"

#include <cmath>
#include <numbers>

namespace ghostsim {

namespace {

constexpr double pi = std::numbers::pi;

void check_not_singular(const SourceParams& p) {
    const double ratio = 4.0 * p.omega * p.omega * p.sigma * p.sigma /
                         (p.hbar * p.hbar);
    if (std::abs(ratio - 1.0) < 1e-9)
        throw SingularConfigError(
            "singular configuration: 4*omega^2*sigma^2 == hbar^2 (virtual-slit "
            "center is undefined)");
}

SourceState evolve_source_kappa(const SourceState& s, double kappa, double dtau) {
    SourceState out = s;
    out.t_elapsed = s.t_elapsed + dtau;
    out.rel_sq_width = s.rel_sq_width + cxd(0.0, 4.0 * kappa);
    out.cm_sq_width = s.cm_sq_width + cxd(0.0, 4.0 * kappa);
    out.amplitude = s.amplitude * std::sqrt(s.rel_sq_width / out.rel_sq_width) *
                    std::sqrt(s.cm_sq_width / out.cm_sq_width);
    return out;
}

BranchedState evolve_branches_kappa(const BranchedState& b, double kappa) {
    BranchedState out = b;
    out.branch_a.phi = b.branch_a.phi.evolved(kappa);
    out.branch_a.psi = b.branch_a.psi.evolved(kappa);
    out.branch_b.phi = b.branch_b.phi.evolved(kappa);
    out.branch_b.psi = b.branch_b.psi.evolved(kappa);
    return out;
}

}  // namespace

cxd SourceState::operator()(double y1, double y2) const {
    const double u = y1 - y2;
    const double v = y1 + y2;
    return amplitude * std::exp(-u * u / rel_sq_width - v * v / cm_sq_width);
}

SourceState make_source_state(const SourceParams& p) {
    SourceState s{p};
    s.t_elapsed = 0.0;
    s.rel_sq_width = p.hbar * p.hbar / (p.sigma * p.sigma);
    s.cm_sq_width = 4.0 * p.omega * p.omega;
    // Unit joint norm: integral in normal coordinates carries a Jacobian
    // of 1/2, so |N|^2 = 2 sqrt(2 a_u / pi) sqrt(2 a_v / pi).
    const double au = 1.0 / s.rel_sq_width.real();
    const double av = 1.0 / s.cm_sq_width.real();
    s.amplitude = std::sqrt(2.0 * std::sqrt(2.0 * au / pi) * std::sqrt(2.0 * av / pi));
    return s;
}

Uncertainties uncertainties(const SourceParams& p) {
    Uncertainties u;
    u.dp = std::sqrt(p.sigma * p.sigma +
                     p.hbar * p.hbar / (4.0 * p.omega * p.omega));
    u.dy = std::sqrt(p.omega * p.omega +
                     p.hbar * p.hbar / (4.0 * p.sigma * p.sigma));
    return u;
}

SourceState evolve_source(const SourceState& s, double tau) {
    if (!std::isfinite(tau) || tau < 0.0)
        throw std::invalid_argument("evolution time must be >= 0");
    return evolve_source_kappa(s, s.params.hbar * tau / s.params.mass, tau);
}

BranchedState project_slits(const SourceState& s, const SlitPair& sl) {
    check_not_singular(s.params);

    const double e = 1.0 / (sl.epsilon * sl.epsilon);
    const cxd r = 1.0 / s.rel_sq_width;
    const cxd c = 1.0 / s.cm_sq_width;
    const cxd a = e + r + c;
    const cxd alpha = (r + c) - (r - c) * (r - c) / a;
    const cxd mu = sl.y0 * e * (r - c) / (a * alpha);
    const double c0 = sl.y0 * sl.y0 * e;
    const cxd delta = c0 - c0 * e / a;  // c0 - b0^2/(4a) with b0 = 2 y0 e

    const double c_phi = std::pow(2.0 / (pi * sl.epsilon * sl.epsilon), 0.25);
    const cxd psi_amp = s.amplitude * c_phi * std::sqrt(pi / a) *
                        std::exp(alpha * mu * mu - delta);

    BranchedState b{};
    b.hbar = s.params.hbar;
    b.mass = s.params.mass;
    b.branch_a.phi = ComplexGaussian{sl.y0, sl.epsilon * sl.epsilon, c_phi};
    b.branch_b.phi = ComplexGaussian{-sl.y0, sl.epsilon * sl.epsilon, c_phi};
    b.branch_a.psi = ComplexGaussian{mu, 1.0 / alpha, psi_amp};
    b.branch_b.psi = ComplexGaussian{-mu, 1.0 / alpha, psi_amp};
    b.exact_gamma_sq = 1.0 / alpha;
    b.exact_y0_prime = b.branch_a.psi.intensity_peak();

    const double na = b.branch_a.phi.norm_sq() * b.branch_a.psi.norm_sq();
    const double nb = b.branch_b.phi.norm_sq() * b.branch_b.psi.norm_sq();
    const cxd cross = overlap(b.branch_a.phi, b.branch_b.phi) *
                      overlap(b.branch_a.psi, b.branch_b.psi);
    double c_sq = na + nb;
    if (std::abs(cross) > 1e-12 * c_sq) c_sq += 2.0 * cross.real();
    b.norm_c = std::sqrt(c_sq);
    return b;
}

cxd BranchedState::value(double y1, double y2) const {
    return (branch_a.phi(y1) * branch_a.psi(y2) +
            branch_b.phi(y1) * branch_b.psi(y2)) /
           norm_c;
}

double BranchedState::density(double y1, double y2) const {
    return std::norm(value(y1, y2));
}

cxd which_way_overlap(const BranchedState& b) {
    return overlap(b.branch_a.psi, b.branch_b.psi) /
           std::sqrt(b.branch_a.psi.norm_sq() * b.branch_b.psi.norm_sq());
}

BranchedState evolve_branches(const BranchedState& b, double tau) {
    if (!std::isfinite(tau) || tau < 0.0)
        throw std::invalid_argument("evolution time must be >= 0");
    return evolve_branches_kappa(b, b.hbar * tau / b.mass);
}

GammaApprox gamma_approx(const SlitPair& sl, const SourceParams& p, double kappa0) {
    GammaApprox g;
    g.gamma_sq_real =
        sl.epsilon * sl.epsilon + p.hbar * p.hbar / (p.sigma * p.sigma);
    g.gamma_sq = cxd(g.gamma_sq_real, 4.0 * kappa0);
    g.degraded = !validate_regime(p, sl).admissible;
    return g;
}

double joint_density_time(const BranchedState& b, double y1, double y2) {
    return b.density(y1, y2);
}

FringeParams fringe_params(const KinematicsConfig& k, const SourceParams& s,
                           const SlitPair& sl) {
    const double k1 = k.kappa1(s.hbar, s.mass);
    const double kT = k1 + 2.0 * k.kappa0(s.hbar, s.mass);
    const double eps2 = sl.epsilon * sl.epsilon;
    const double gamma2 = eps2 + s.hbar * s.hbar / (s.sigma * s.sigma);

    FringeParams f;
    f.gamma_sq_used = gamma2;
    f.theta1 = 8.0 * sl.y0 * k1 / (eps2 * eps2 + 4.0 * k1 * k1);
    f.theta2 = 8.0 * sl.y0 * kT / (gamma2 * gamma2 + 4.0 * kT * kT);
    f.w1 = 2.0 * pi / f.theta1;
    f.w2 = 2.0 * pi / f.theta2;
    f.w1_young = pi * k1 / sl.y0;
    f.w2_young = pi * kT / sl.y0;
    return f;
}

BranchedState detector_state(const KinematicsConfig& k, const SourceParams& s,
                             const SlitPair& sl) {
    const double k0 = k.kappa0(s.hbar, s.mass);
    const double k1 = k.kappa1(s.hbar, s.mass);
    SourceState src = make_source_state(s);
    src = evolve_source_kappa(src, k0, k0 * s.mass / s.hbar);
    BranchedState b = project_slits(src, sl);
    return evolve_branches_kappa(b, k1);
}

double joint_density_distance(const KinematicsConfig& k, const SourceParams& s,
                              const SlitPair& sl, double y1, double y2) {
    if (k.mode != KinematicsMode::DistanceDomain)
        throw std::invalid_argument("joint_density_distance needs a distance-domain config");
    return detector_state(k, s, sl).density(y1, y2);
}

}  // namespace ghostsim
