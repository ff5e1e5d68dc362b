#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ghostsim/scan.hpp"

using namespace ghostsim;

namespace {

const SourceParams kFig2Source(1.0545718e-28, 0.1, 1.0545718e-34,
                               1.67492749804e-27);
const SlitPair kFig2Slits(2.5e-4, 5e-5);
const KinematicsConfig kFig2 = KinematicsConfig::distance_domain(3.14e-7, 1.0, 1.0);

ScanRequest fig2_p2_request(double y1) {
    ScanRequest r(kFig2Source, kFig2Slits, kFig2);
    r.scanned_particle = Particle::P2;
    r.fixed_value = y1;
    r.range_min = -5e-3;
    r.range_max = 5e-3;
    r.count = 2001;
    return r;
}

ScanResult synthetic_cos2(double w, double span, int count) {
    ScanResult s;
    s.scanned_particle = Particle::P2;
    for (int i = 0; i < count; ++i) {
        const double y = -span + 2.0 * span * i / (count - 1);
        s.positions.push_back(y);
        const double c = std::cos(M_PI * y / w);
        s.densities.push_back(c * c);
    }
    return s;
}

}  // namespace

TEST_CASE("scan request validation") {
    ScanRequest r = fig2_p2_request(0.0);
    r.count = 32;
    CHECK_THROWS_AS(run_scan(r), std::invalid_argument);
    r = fig2_p2_request(0.0);
    r.range_min = r.range_max;
    CHECK_THROWS_AS(run_scan(r), std::invalid_argument);
}

TEST_CASE("conditional scan at the symmetry point is even with a central peak") {
    const ScanResult s = run_scan(fig2_p2_request(0.0));
    const int n = static_cast<int>(s.positions.size());
    const int mid = n / 2;
    CHECK(s.positions[mid] == doctest::Approx(0.0));
    double maxv = 0.0;
    int argmax = 0;
    for (int i = 0; i < n; ++i)
        if (s.densities[i] > maxv) {
            maxv = s.densities[i];
            argmax = i;
        }
    CHECK(argmax == mid);
    for (int i = 0; i < n; ++i)
        CHECK(s.densities[i] ==
              doctest::Approx(s.densities[n - 1 - i]).epsilon(1e-9));
}

TEST_CASE("identical requests give bit-identical densities") {
    const ScanResult a = run_scan(fig2_p2_request(2e-4));
    const ScanResult b = run_scan(fig2_p2_request(2e-4));
    REQUIRE(a.densities.size() == b.densities.size());
    for (size_t i = 0; i < a.densities.size(); ++i) {
        CHECK(a.positions[i] == b.positions[i]);
        CHECK(a.densities[i] == b.densities[i]);
    }
}

TEST_CASE("fringe fit recovers a synthetic cos^2 pattern") {
    const double w = 1e-3;
    const ScanResult s = synthetic_cos2(w, 4e-3, 801);
    const FringeFit fit = fit_fringes(s);
    const double half_step = 0.5 * (s.positions[1] - s.positions[0]);
    CHECK(std::abs(fit.fringe_width - w) < half_step);
    CHECK(fit.visibility > 0.99);
    CHECK(fit.peaks_used >= 3);
}

TEST_CASE("envelope-only scans raise fit-unavailable") {
    ScanResult s;
    s.scanned_particle = Particle::P1;
    for (int i = 0; i < 501; ++i) {
        const double y = -5.0 + i * 0.02;
        s.positions.push_back(y);
        s.densities.push_back(std::exp(-y * y));
    }
    CHECK_THROWS_AS(fit_fringes(s), FitUnavailableError);
}

TEST_CASE("ghost fringe width matches the geometry prediction") {
    const FringeFit fit = fit_fringes(run_scan(fig2_p2_request(0.0)));
    CHECK(std::abs(fit.fringe_width / 1.884e-3 - 1.0) < 0.01);
    CHECK(fit.visibility > 0.9);
}

TEST_CASE("particle-1 conditional scan shows the narrower fringes") {
    const Particle1Scan p1 = particle1_scan(kFig2Source, kFig2Slits, kFig2,
                                            0.0, 2.5e-3, 2001);
    CHECK(std::abs(p1.fit.fringe_width / 6.28e-4 - 1.0) < 0.01);

    // envelope width of the scan ~ per-slit spreading sqrt(eps^2 + (2k1/eps)^2)
    const double k1 = kFig2.kappa1(kFig2Source.hbar, kFig2Source.mass);
    const double eps = kFig2Slits.epsilon;
    const double spread =
        0.5 * std::sqrt(eps * eps + 4.0 * k1 * k1 / (eps * eps));
    double m0 = 0.0, m2 = 0.0;
    for (size_t i = 0; i < p1.scan.positions.size(); ++i) {
        m0 += p1.scan.densities[i];
        m2 += p1.scan.positions[i] * p1.scan.positions[i] * p1.scan.densities[i];
    }
    // scan variance = envelope variance + slit-separation variance (two
    // humps at +-y0') + fringe modulation; envelope dominates here
    CHECK(std::sqrt(m2 / m0) == doctest::Approx(spread).epsilon(0.35));
}

TEST_CASE("quarter-period and full-period conditioning shifts of particle 1") {
    const FringeParams fp = fringe_params(kFig2, kFig2Source, kFig2Slits);
    const Particle1Scan at0 = particle1_scan(kFig2Source, kFig2Slits, kFig2,
                                             0.0, 2.5e-3, 2001);
    const Particle1Scan quarter = particle1_scan(
        kFig2Source, kFig2Slits, kFig2, fp.w2 / 4.0, 2.5e-3, 2001);
    const double s_quarter = pattern_shift(at0.scan, quarter.scan);
    CHECK(std::abs(std::abs(s_quarter) / (fp.w1 / 4.0) - 1.0) < 0.05);

    // one full w2 on detector 2 is a 2 pi phase: same particle-1 pattern
    const Particle1Scan full = particle1_scan(kFig2Source, kFig2Slits, kFig2,
                                              fp.w2, 2.5e-3, 2001);
    const double s_full = pattern_shift(at0.scan, full.scan);
    CHECK(std::abs(s_full) < 0.05 * fp.w1);
}

TEST_CASE("conditioning point moves the ghost pattern the documented way") {
    const ScanResult ref = run_scan(fig2_p2_request(0.0));
    const ScanResult moved = run_scan(fig2_p2_request(2e-4));
    const double shift = pattern_shift(ref, moved);
    CHECK(shift < 0.0);  // opposite direction to the y1 move
    CHECK(std::abs(shift / -6.00e-4 - 1.0) < 0.02);
}

TEST_CASE("marginal scan washes out interference") {
    ScanRequest r(kFig2Source, kFig2Slits, kFig2);
    r.scanned_particle = Particle::P1;
    r.marginal = true;
    r.range_min = -6e-3;
    r.range_max = 6e-3;
    r.count = 601;
    const ScanResult s = run_scan(r);

    // integrates to the reported joint normalization
    double total = 0.0;
    const double d = s.positions[1] - s.positions[0];
    for (size_t i = 0; i < s.densities.size(); ++i) {
        const double w = (i == 0 || i + 1 == s.densities.size()) ? 0.5 : 1.0;
        total += w * s.densities[i];
    }
    CHECK(total * d == doctest::Approx(s.normalization).epsilon(1e-5));

    // no particle-1 fringes above 1e-3 visibility
    const FringeParams fp = fringe_params(kFig2, kFig2Source, kFig2Slits);
    const double vis = lockin_visibility(s, 2.0 * M_PI / fp.w1);
    CHECK(vis < 1e-3);
    CHECK_THROWS_AS(fit_fringes(s), FitUnavailableError);
}

TEST_CASE("lock-in visibility calibrates on clean and flat patterns") {
    const ScanResult clean = synthetic_cos2(1e-3, 4e-3, 1601);
    CHECK(lockin_visibility(clean, 2.0 * M_PI / 1e-3) ==
          doctest::Approx(1.0).epsilon(0.01));

    ScanResult flat = clean;
    for (auto& v : flat.densities) v = 1.0;
    CHECK(lockin_visibility(flat, 2.0 * M_PI / 1e-3) < 1e-6);
}

TEST_CASE("erasure report validation") {
    CHECK_THROWS_AS(
        erasure_report(kFig2Source, kFig2Slits, kFig2, std::vector<double>{}),
        std::invalid_argument);
    // under-sampled grid
    std::vector<double> few{-1e-3, 0.0, 1e-3};
    CHECK_THROWS_AS(erasure_report(kFig2Source, kFig2Slits, kFig2, few),
                    std::invalid_argument);
    // too-narrow span
    std::vector<double> narrow;
    for (int i = 0; i < 32; ++i) narrow.push_back(i * 1e-6);
    CHECK_THROWS_AS(erasure_report(kFig2Source, kFig2Slits, kFig2, narrow),
                    std::invalid_argument);
}

TEST_CASE("single-point erasure grid degenerates to the conditional pattern") {
    const ErasureReport rep = erasure_report(kFig2Source, kFig2Slits, kFig2,
                                             std::vector<double>{0.0});
    const BranchedState b = detector_state(kFig2, kFig2Source, kFig2Slits);
    REQUIRE(rep.summed_pattern.size() == rep.y2_positions.size());
    for (size_t i = 0; i < rep.y2_positions.size(); ++i)
        CHECK(rep.summed_pattern[i] ==
              doctest::Approx(b.density(0.0, rep.y2_positions[i])).epsilon(1e-12));
    CHECK(rep.conditional_visibility.size() == 1);
    CHECK(rep.summed_visibility ==
          doctest::Approx(rep.conditional_visibility[0]).epsilon(1e-9));
}

TEST_CASE("summing over detector-1 positions destroys the ghost fringes") {
    const FringeParams fp = fringe_params(kFig2, kFig2Source, kFig2Slits);
    std::vector<double> y1(48);
    for (int i = 0; i < 48; ++i)
        y1[i] = 3.0 * fp.w1 * (-0.5 + i / 47.0);
    const ErasureReport rep = erasure_report(kFig2Source, kFig2Slits, kFig2, y1);
    for (double v : rep.conditional_visibility) CHECK(v > 0.9);
    CHECK(rep.summed_visibility < 0.05);
    CHECK(std::abs(rep.shift_slope / -3.00 - 1.0) < 0.02);
    CHECK(std::abs(rep.fringe_width / fp.w2 - 1.0) < 0.01);
}

TEST_CASE("envelope-weighted washout deepens as the detector-1 span grows") {
    // spans inside the first washout lobe, where the decay is strict
    double prev = 1.0;
    for (double span : {0.25, 0.5, 0.75, 1.0}) {
        const FringeParams fp = fringe_params(kFig2, kFig2Source, kFig2Slits);
        std::vector<double> y1(48);
        for (int i = 0; i < 48; ++i)
            y1[i] = span * fp.w1 * (-0.5 + i / 47.0);
        const ErasureReport rep =
            erasure_report(kFig2Source, kFig2Slits, kFig2, y1,
                           ErasureWeighting::Envelope);
        CHECK(rep.summed_visibility < prev);
        prev = rep.summed_visibility;
    }
}

TEST_CASE("fitted ghost fringe width tracks the analytic value across a sweep") {
    std::mt19937 rng(20260824u);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        const double sigma = 3.0 + 3.0 * U(rng);
        const double omega = 15.0 + 15.0 * U(rng);
        const double eps = 0.2 + 0.1 * U(rng);
        const double y0 = 1.3 + 0.6 * U(rng);
        const double t0 = 0.15 + 0.15 * U(rng);
        const double t = 0.7 + 0.5 * U(rng);
        const SourceParams p(sigma, omega, 1.0, 1.0);
        const SlitPair sl(y0, eps);
        const KinematicsConfig k = KinematicsConfig::time_domain(t0, t);
        const FringeParams fp = fringe_params(k, p, sl);

        ScanRequest r(p, sl, k);
        r.scanned_particle = Particle::P2;
        r.fixed_value = 0.0;
        r.range_min = -6.0 * fp.w2;
        r.range_max = 6.0 * fp.w2;
        r.count = 4001;
        const FringeFit fit = fit_fringes(run_scan(r));
        CHECK(std::abs(fit.fringe_width / fp.w2 - 1.0) < 0.01);
    }
}

TEST_CASE("conditional visibility equals the normalized cross-term magnitude") {
    const SourceParams p(4.0, 20.0, 1.0, 1.0);
    const SlitPair sl(1.5, 0.25);
    const KinematicsConfig k = KinematicsConfig::time_domain(0.25, 1.0);
    const BranchedState b = detector_state(k, p, sl);

    ScanRequest r(p, sl, k);
    r.scanned_particle = Particle::P2;
    r.fixed_value = 0.0;
    r.range_min = -15.0;
    r.range_max = 15.0;
    r.count = 2001;
    const FringeFit fit = fit_fringes(run_scan(r));

    // at y1 = 0 both slit amplitudes weigh equally, so the predicted
    // visibility is the normalized psi_A psi_B cross term at the peak
    const double y_peak = fit.center_offset;
    const double ca = std::norm(b.branch_a.psi(y_peak));
    const double cb = std::norm(b.branch_b.psi(y_peak));
    const double cross =
        std::abs(std::conj(b.branch_a.psi(y_peak)) * b.branch_b.psi(y_peak));
    const double predicted = 2.0 * cross / (ca + cb);
    CHECK(std::abs(fit.visibility - predicted) < 0.02);
}
