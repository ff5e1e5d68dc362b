#include "ghostsim/physics.hpp"

#include <cmath>
#include <numbers>

namespace ghostsim {

namespace detail {

void require_finite_positive(double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0)
        throw std::invalid_argument(std::string(name) +
                                    " must be finite and strictly positive, got " +
                                    std::to_string(v));
}

void require_finite_nonneg(double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0)
        throw std::invalid_argument(std::string(name) +
                                    " must be finite and non-negative, got " +
                                    std::to_string(v));
}

}  // namespace detail

SourceParams::SourceParams(double sigma_, double omega_, double hbar_, double mass_)
    : sigma(sigma_), omega(omega_), hbar(hbar_), mass(mass_) {
    detail::require_finite_positive(sigma, "sigma");
    detail::require_finite_positive(omega, "omega");
    detail::require_finite_positive(hbar, "hbar");
    detail::require_finite_positive(mass, "mass");
}

bool SourceParams::is_broad(double slit_epsilon, double factor) const {
    return omega > factor * std::max(slit_epsilon, hbar / sigma);
}

SlitPair::SlitPair(double y0_, double epsilon_) : y0(y0_), epsilon(epsilon_) {
    detail::require_finite_positive(y0, "y0");
    detail::require_finite_positive(epsilon, "epsilon");
    if (y0 <= epsilon)
        throw std::invalid_argument("slits overlap: y0 must exceed epsilon (y0=" +
                                    std::to_string(y0) + ", epsilon=" +
                                    std::to_string(epsilon) + ")");
}

KinematicsConfig KinematicsConfig::time_domain(double t0, double t, double lambda_d) {
    detail::require_finite_nonneg(t0, "t0");
    detail::require_finite_positive(t, "t");
    if (lambda_d != 0.0) detail::require_finite_positive(lambda_d, "lambda_d");
    KinematicsConfig k;
    k.mode = KinematicsMode::TimeDomain;
    k.t0 = t0;
    k.t = t;
    k.lambda_d = lambda_d;
    return k;
}

KinematicsConfig KinematicsConfig::distance_domain(double lambda_d, double L1, double L2) {
    detail::require_finite_positive(lambda_d, "lambda_d");
    detail::require_finite_positive(L1, "L1");
    detail::require_finite_nonneg(L2, "L2");
    KinematicsConfig k;
    k.mode = KinematicsMode::DistanceDomain;
    k.lambda_d = lambda_d;
    k.L1 = L1;
    k.L2 = L2;
    return k;
}

double KinematicsConfig::kappa1(double hbar, double mass) const {
    if (mode == KinematicsMode::TimeDomain) return hbar * t / mass;
    return lambda_d * L1 / (2.0 * std::numbers::pi);
}

double KinematicsConfig::kappa0(double hbar, double mass) const {
    if (mode == KinematicsMode::TimeDomain) return hbar * t0 / mass;
    return lambda_d * L2 / (2.0 * std::numbers::pi);
}

KinematicsConfig distance_map(const KinematicsConfig& k, double hbar, double mass) {
    detail::require_finite_positive(hbar, "hbar");
    detail::require_finite_positive(mass, "mass");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (k.mode == KinematicsMode::TimeDomain) {
        if (k.lambda_d <= 0.0)
            throw std::invalid_argument(
                "time->distance mapping needs lambda_d set on the config");
        KinematicsConfig out = KinematicsConfig::distance_domain(
            k.lambda_d, two_pi * hbar * k.t / (mass * k.lambda_d),
            two_pi * hbar * k.t0 / (mass * k.lambda_d));
        return out;
    }
    KinematicsConfig out = KinematicsConfig::time_domain(
        k.lambda_d * k.L2 * mass / (two_pi * hbar),
        k.lambda_d * k.L1 * mass / (two_pi * hbar), k.lambda_d);
    return out;
}

RegimeReport validate_regime(const SourceParams& s, const SlitPair& sl,
                             double threshold) {
    RegimeReport r;
    r.omega_over_epsilon = s.omega / sl.epsilon;
    r.omega_sigma_over_hbar = s.omega * s.sigma / s.hbar;
    r.threshold = threshold;
    r.admissible =
        r.omega_over_epsilon > threshold && r.omega_sigma_over_hbar > threshold;
    return r;
}

}  // namespace ghostsim
