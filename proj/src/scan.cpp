#include "ghostsim/scan.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace ghostsim {

namespace {

constexpr double pi = std::numbers::pi;

struct Extrema {
    std::vector<double> max_pos, max_height;
    std::vector<double> min_pos, min_height;
};

/// Interior extrema with parabolic sub-sample refinement.
Extrema find_extrema(const std::vector<double>& y, const std::vector<double>& d) {
    Extrema e;
    const double h = y[1] - y[0];
    const int n = static_cast<int>(d.size());
    for (int i = 1; i + 1 < n; ++i) {
        const bool mx = d[i] > d[i - 1] && d[i] >= d[i + 1];
        const bool mn = d[i] < d[i - 1] && d[i] <= d[i + 1];
        if (!mx && !mn) continue;
        const double dd = d[i - 1] - 2.0 * d[i] + d[i + 1];
        const double off = (dd != 0.0) ? 0.5 * (d[i - 1] - d[i + 1]) / dd : 0.0;
        const double pos = y[i] + off * h;
        const double height = d[i] - 0.125 * (d[i - 1] - d[i + 1]) * off;
        if (mx) {
            e.max_pos.push_back(pos);
            e.max_height.push_back(height);
        } else {
            e.min_pos.push_back(pos);
            e.min_height.push_back(height);
        }
    }
    return e;
}

/// Least-squares quadratic through (x, y), evaluated via a callable.
/// x is shifted/scaled internally for conditioning.
struct Quadratic {
    double x0, s, c0, c1, c2;
    double operator()(double x) const {
        const double z = (x - x0) / s;
        return c0 + c1 * z + c2 * z * z;
    }
};

Quadratic fit_quadratic(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    double x0 = 0.0;
    for (double v : x) x0 += v;
    x0 /= n;
    double s = 0.0;
    for (double v : x) s = std::max(s, std::abs(v - x0));
    if (s == 0.0) s = 1.0;
    // normal equations for z powers 0..2
    double m[5] = {0, 0, 0, 0, 0};
    double b[3] = {0, 0, 0};
    for (int i = 0; i < n; ++i) {
        const double z = (x[i] - x0) / s;
        double zp = 1.0;
        for (int k = 0; k < 5; ++k) {
            m[k] += zp;
            if (k < 3) b[k] += zp * y[i];
            zp *= z;
        }
    }
    double A[3][4] = {{m[0], m[1], m[2], b[0]},
                      {m[1], m[2], m[3], b[1]},
                      {m[2], m[3], m[4], b[2]}};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        for (int r = 0; r < 3; ++r) {
            if (r == col || A[col][col] == 0.0) continue;
            const double f = A[r][col] / A[col][col];
            for (int k = col; k < 4; ++k) A[r][k] -= f * A[col][k];
        }
    }
    return Quadratic{x0, s,
                     A[0][3] / A[0][0], A[1][3] / A[1][1], A[2][3] / A[2][2]};
}

double interp_linear(const std::vector<double>& xs, const std::vector<double>& ys,
                     double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const size_t j = static_cast<size_t>(it - xs.begin());
    const double f = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return ys[j - 1] + f * (ys[j] - ys[j - 1]);
}

/// Envelope-flattened fringe signal: (d - S)/X with S the mid-envelope and
/// X the half-difference of the top/bottom envelopes.  Returns an empty
/// vector when the scan has no usable fringe structure.
std::vector<double> flatten(const std::vector<double>& y,
                            const std::vector<double>& d, const Extrema& e) {
    if (e.max_pos.size() < 3 || e.min_pos.size() < 2) return {};
    std::vector<double> logh(e.max_height.size());
    for (size_t i = 0; i < logh.size(); ++i)
        logh[i] = std::log(std::max(e.max_height[i], 1e-300));
    const Quadratic top_fit = fit_quadratic(e.max_pos, logh);
    const double top_max = *std::max_element(e.max_height.begin(), e.max_height.end());
    std::vector<double> f(d.size(), 0.0);
    for (size_t i = 0; i < d.size(); ++i) {
        const double top = std::exp(top_fit(y[i]));
        const double bot = interp_linear(e.min_pos, e.min_height, y[i]);
        const double mid = 0.5 * (top + bot);
        const double half = std::max(0.5 * (top - bot), 1e-300);
        f[i] = (top > 1e-3 * top_max) ? (d[i] - mid) / half : 0.0;
    }
    return f;
}

struct Pipeline {
    BranchedState state;
    double total;  // closed-form integral of the joint density
};

Pipeline make_pipeline(const SourceParams& s, const SlitPair& sl,
                       const KinematicsConfig& k) {
    Pipeline p{detector_state(k, s, sl), 0.0};
    const BranchedState& b = p.state;
    const double na = b.branch_a.phi.norm_sq() * b.branch_a.psi.norm_sq();
    const double nb = b.branch_b.phi.norm_sq() * b.branch_b.psi.norm_sq();
    const cxd cross = overlap(b.branch_a.phi, b.branch_b.phi) *
                      overlap(b.branch_a.psi, b.branch_b.psi);
    p.total = (na + nb + 2.0 * cross.real()) / (b.norm_c * b.norm_c);
    return p;
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double err = left + right - whole;
    if (depth <= 0)
        throw NumericalGuardError("marginal quadrature did not converge on [" +
                                  std::to_string(a) + ", " + std::to_string(b) + "]");
    if (std::abs(err) <= 15.0 * tol) return left + right + err / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double scale = std::max(std::abs(whole), 1e-300);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, rel_tol * scale, 48);
}

/// Integration window covering both packets of the pair to ~exp(-50).
std::pair<double, double> packet_window(const ComplexGaussian& pa,
                                        const ComplexGaussian& pb) {
    const double lo = std::min(pa.intensity_peak() - 10.0 * pa.intensity_std(),
                               pb.intensity_peak() - 10.0 * pb.intensity_std());
    const double hi = std::max(pa.intensity_peak() + 10.0 * pa.intensity_std(),
                               pb.intensity_peak() + 10.0 * pb.intensity_std());
    return {lo, hi};
}

FringeFit fit_fringes_impl(const std::vector<double>& y,
                           const std::vector<double>& d) {
    const Extrema e = find_extrema(y, d);
    if (e.max_pos.size() < 3)
        throw FitUnavailableError("fewer than 3 interior maxima (" +
                                  std::to_string(e.max_pos.size()) +
                                  "): envelope-only scan");
    const std::vector<double> f = flatten(y, d, e);
    if (f.empty())
        throw FitUnavailableError("no usable fringe structure for envelope fit");
    const Extrema ef = find_extrema(y, f);
    if (ef.max_pos.size() < 3)
        throw FitUnavailableError("fewer than 3 flattened maxima");

    const size_t tallest = static_cast<size_t>(
        std::max_element(e.max_height.begin(), e.max_height.end()) -
        e.max_height.begin());
    const double center = e.max_pos[tallest];

    // central <= 5 flattened peaks around the tallest original peak
    std::vector<double> sel = ef.max_pos;
    std::sort(sel.begin(), sel.end(), [&](double a, double b) {
        return std::abs(a - center) < std::abs(b - center);
    });
    if (sel.size() > 5) sel.resize(5);
    std::sort(sel.begin(), sel.end());

    double mean = 0.0;
    std::vector<double> spacings;
    for (size_t i = 1; i < sel.size(); ++i) spacings.push_back(sel[i] - sel[i - 1]);
    for (double s : spacings) mean += s;
    mean /= spacings.size();
    double var = 0.0;
    for (double s : spacings) var += (s - mean) * (s - mean);
    const double stderr_ =
        spacings.size() > 1
            ? std::sqrt(var / (spacings.size() - 1)) / std::sqrt(spacings.size())
            : 0.0;

    // visibility over the central fringe pair: tallest peak vs adjacent minima
    double below = -1.0, above = -1.0;
    for (size_t i = 0; i < e.min_pos.size(); ++i) {
        if (e.min_pos[i] < center) below = e.min_height[i];
        else if (above < 0.0) above = e.min_height[i];
    }
    double vis = 0.0;
    const double mx = e.max_height[tallest];
    if (below >= 0.0 && above >= 0.0) {
        const double mn = 0.5 * (below + above);
        vis = (mx - mn) / (mx + mn);
    } else if (below >= 0.0 || above >= 0.0) {
        const double mn = std::max(below, above);
        vis = (mx - mn) / (mx + mn);
    }

    FringeFit fit;
    fit.fringe_width = mean;
    fit.width_stderr = stderr_;
    fit.visibility = vis;
    fit.center_offset = center;
    fit.peaks_used = static_cast<int>(sel.size());
    return fit;
}

}  // namespace

ScanResult run_scan(const ScanRequest& r) {
    if (r.count < 64) throw std::invalid_argument("scan count must be >= 64");
    if (!(r.range_min < r.range_max))
        throw std::invalid_argument("scan range must satisfy min < max");

    const Pipeline p = make_pipeline(r.source, r.slits, r.kinematics);
    const BranchedState& b = p.state;

    ScanResult out;
    out.scanned_particle = r.scanned_particle;
    out.marginal = r.marginal;
    out.fixed_coordinate = r.fixed_value;
    out.normalization = p.total;
    out.positions.resize(r.count);
    out.densities.resize(r.count);
    const double step = (r.range_max - r.range_min) / (r.count - 1);
    for (int i = 0; i < r.count; ++i)
        out.positions[i] = r.range_min + i * step;

    if (!r.marginal) {
        for (int i = 0; i < r.count; ++i) {
            const double y = out.positions[i];
            out.densities[i] = (r.scanned_particle == Particle::P1)
                                   ? b.density(y, r.fixed_value)
                                   : b.density(r.fixed_value, y);
        }
        return out;
    }

    const bool scan_p1 = r.scanned_particle == Particle::P1;
    const auto [lo, hi] = scan_p1
                              ? packet_window(b.branch_a.psi, b.branch_b.psi)
                              : packet_window(b.branch_a.phi, b.branch_b.phi);
    for (int i = 0; i < r.count; ++i) {
        const double y = out.positions[i];
        auto f = [&](double other) {
            return scan_p1 ? b.density(y, other) : b.density(other, y);
        };
        out.densities[i] = integrate(f, lo, hi, 1e-8);
    }
    return out;
}

FringeFit fit_fringes(const ScanResult& s) {
    return fit_fringes_impl(s.positions, s.densities);
}

double fit_fringes_width(const ScanResult& s) {
    return fit_fringes(s).fringe_width;
}

namespace {

/// Hann-windowed demodulation at wavenumber theta.  The ratio magnitude
/// is the local modulation depth; the argument is theta times the fringe
/// phase offset under the window.
cxd lockin_ratio(const ScanResult& s, double theta, double center,
                 double n_periods) {
    const double span = n_periods * 2.0 * pi / theta;
    cxd num = 0.0;
    double den = 0.0;
    for (size_t i = 0; i < s.positions.size(); ++i) {
        const double y = s.positions[i] - center;
        if (std::abs(y) > span) continue;
        const double w = 0.5 * (1.0 + std::cos(pi * y / span));
        num += s.densities[i] * w * std::exp(cxd(0.0, theta * y));
        den += s.densities[i] * w;
    }
    if (den <= 0.0) throw std::invalid_argument("lock-in window holds no samples");
    return 2.0 * num / den;
}

}  // namespace

double lockin_visibility(const ScanResult& s, double theta, double center,
                         double n_periods) {
    return std::abs(lockin_ratio(s, theta, center, n_periods));
}

double pattern_shift(const ScanResult& reference, const ScanResult& shifted) {
    if (reference.positions.size() != shifted.positions.size())
        throw std::invalid_argument("pattern_shift needs identical scan ranges");
    const double w = fit_fringes(reference).fringe_width;

    const Extrema er = find_extrema(reference.positions, reference.densities);
    const Extrema es = find_extrema(shifted.positions, shifted.densities);
    const std::vector<double> fr = flatten(reference.positions, reference.densities, er);
    const std::vector<double> fs = flatten(shifted.positions, shifted.densities, es);
    if (fr.empty() || fs.empty())
        throw FitUnavailableError("pattern_shift: no fringe structure to correlate");

    const auto& y = reference.positions;
    const double step = y[1] - y[0];
    auto corr = [&](double lag) {
        // shifted(y) ~ reference(y - lag): correlate fs(y) with fr(y - lag)
        // (uniform grid, so fr is sampled by direct indexing)
        const double off = -lag / step;
        double c = 0.0;
        const int n = static_cast<int>(y.size());
        for (int i = 0; i < n; ++i) {
            const double x = i + off;
            if (x <= 0.0 || x >= n - 1) continue;
            const int j = static_cast<int>(x);
            const double f = x - j;
            c += fs[i] * (fr[j] + f * (fr[j + 1] - fr[j]));
        }
        return c;
    };
    const int nl = 1601;
    double best = 0.0, best_c = -1e300;
    int best_i = 0;
    std::vector<double> cs(nl);
    for (int i = 0; i < nl; ++i) {
        const double lag = -0.5 * w + w * i / (nl - 1);
        cs[i] = corr(lag);
        if (cs[i] > best_c) {
            best_c = cs[i];
            best = lag;
            best_i = i;
        }
    }
    if (best_i > 0 && best_i < nl - 1) {
        const double dd = cs[best_i - 1] - 2.0 * cs[best_i] + cs[best_i + 1];
        if (dd != 0.0)
            best += 0.5 * (cs[best_i - 1] - cs[best_i + 1]) / dd * (w / (nl - 1));
    }
    return best;
}

ErasureReport erasure_report(const SourceParams& s, const SlitPair& sl,
                             const KinematicsConfig& k,
                             const std::vector<double>& y1_grid,
                             ErasureWeighting weighting) {
    if (y1_grid.empty()) throw std::invalid_argument("empty y1 grid");
    const FringeParams fp = fringe_params(k, s, sl);
    if (y1_grid.size() > 1) {
        if (y1_grid.size() < 32)
            throw std::invalid_argument("y1 grid needs >= 32 points");
        const double span = y1_grid.back() - y1_grid.front();
        // the uniform-sum washout demonstration needs >= 3 full
        // particle-1 fringes; envelope-weighted partial sums may use any
        // positive span so progressive erasure can be studied
        if (weighting == ErasureWeighting::Uniform && span < 3.0 * fp.w1)
            throw std::invalid_argument(
                "y1 grid span " + std::to_string(span) +
                " m is under 3 particle-1 fringe widths (" +
                std::to_string(3.0 * fp.w1) + " m)");
    }

    const Pipeline p = make_pipeline(s, sl, k);
    const BranchedState& b = p.state;

    // y2 scan grid sized from the predicted fringe width and the packet
    // envelopes of particle 2
    const auto [plo, phi] = packet_window(b.branch_a.psi, b.branch_b.psi);
    const double half = std::max(4.0 * fp.w2, std::max(std::abs(plo), std::abs(phi)));
    const int count = 2049;
    ErasureReport rep;
    rep.y1_values = y1_grid;
    rep.y2_positions.resize(count);
    for (int i = 0; i < count; ++i)
        rep.y2_positions[i] = -half + 2.0 * half * i / (count - 1);

    auto conditional = [&](double y1) {
        ScanResult sc;
        sc.scanned_particle = Particle::P2;
        sc.fixed_coordinate = y1;
        sc.positions = rep.y2_positions;
        sc.densities.resize(count);
        for (int i = 0; i < count; ++i)
            sc.densities[i] = b.density(y1, rep.y2_positions[i]);
        return sc;
    };

    // measured theta2 from the y1 = 0 pattern
    const ScanResult ref = conditional(0.0);
    rep.fringe_width = fit_fringes(ref).fringe_width;
    const double theta = 2.0 * pi / rep.fringe_width;

    rep.summed_pattern.assign(count, 0.0);
    // fringe-center position per y1, from the lock-in phase: the density
    // goes as E(y2) (1 + V cos(theta (y2 - c))), so arg of the
    // demodulated ratio is theta * c.  Unwrapped across the y1 grid.
    std::vector<double> centers;
    double prev_phase = 0.0, offset = 0.0;
    for (size_t j = 0; j < y1_grid.size(); ++j) {
        const ScanResult sc = conditional(y1_grid[j]);
        const cxd ratio = lockin_ratio(sc, theta, 0.0, 3.0);
        rep.conditional_visibility.push_back(std::abs(ratio));
        double phase = std::arg(ratio);
        if (j > 0) {
            while (phase + offset - prev_phase > pi) offset -= 2.0 * pi;
            while (phase + offset - prev_phase < -pi) offset += 2.0 * pi;
        }
        prev_phase = phase + offset;
        centers.push_back(prev_phase / theta);

        double wgt = 1.0;
        if (weighting == ErasureWeighting::Envelope) {
            const double pa = std::norm(b.branch_a.phi(y1_grid[j]));
            const double pb = std::norm(b.branch_b.phi(y1_grid[j]));
            wgt = (pa * b.branch_a.psi.norm_sq() + pb * b.branch_b.psi.norm_sq()) /
                  (b.norm_c * b.norm_c);
        }
        for (int i = 0; i < count; ++i)
            rep.summed_pattern[i] += wgt * sc.densities[i];
    }

    ScanResult summed;
    summed.scanned_particle = Particle::P2;
    summed.positions = rep.y2_positions;
    summed.densities = rep.summed_pattern;
    rep.summed_visibility = lockin_visibility(summed, theta);

    // least-squares slope of fringe-center position vs y1
    if (centers.size() >= 2) {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        const double n = static_cast<double>(centers.size());
        for (size_t j = 0; j < centers.size(); ++j) {
            const double x = y1_grid[j];
            sx += x;
            sy += centers[j];
            sxx += x * x;
            sxy += x * centers[j];
        }
        rep.shift_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    } else {
        rep.shift_slope = 0.0;
    }
    return rep;
}

Particle1Scan particle1_scan(const SourceParams& s, const SlitPair& sl,
                             const KinematicsConfig& k, double fixed_y2,
                             double range, int count) {
    ScanRequest r(s, sl, k);
    r.scanned_particle = Particle::P1;
    r.fixed_value = fixed_y2;
    r.range_min = -range;
    r.range_max = range;
    r.count = count;
    Particle1Scan out{run_scan(r), {}};
    out.fit = fit_fringes(out.scan);
    return out;
}

}  // namespace ghostsim
