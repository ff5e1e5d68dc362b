#include "ghostsim/grid.hpp"
#include "ghostsim/scan.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

namespace ghostsim {

namespace {

constexpr double pi = std::numbers::pi;

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_spec_axis(int n, const char* name) {
    if (!power_of_two(n) || n < 128 || n > 4096)
        throw std::invalid_argument(std::string(name) +
                                    " must be a power of two in [128, 4096]");
}

/// In-place 2-D FFT (sign FFTW_FORWARD or FFTW_BACKWARD); the inverse
/// direction divides by n1*n2.
void fft2(WavefunctionGrid& w, int sign) {
    auto* data = reinterpret_cast<fftw_complex*>(w.values.data());
    fftw_plan plan = fftw_plan_dft_2d(w.spec.n1, w.spec.n2, data, data, sign,
                                      FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    if (sign == FFTW_BACKWARD) {
        const double scale = 1.0 / (static_cast<double>(w.spec.n1) * w.spec.n2);
        for (auto& v : w.values) v *= scale;
    }
}

/// DFT wavenumber for index i on an n-point grid of spacing dy.
double wavenumber(int i, int n, double dy) {
    const int f = (i <= n / 2) ? i : i - n;
    return 2.0 * pi * f / (n * dy);
}

void check_edge(const WavefunctionGrid& w, const char* stage) {
    const double occ = w.edge_occupancy();
    if (occ > w.spec.boundary_floor)
        throw NumericalGuardError(
            std::string(stage) + ": boundary cell probability " +
            std::to_string(occ) + " exceeds floor " +
            std::to_string(w.spec.boundary_floor) +
            " (window too small for this state)");
}

}  // namespace

GridSpec::GridSpec(int n1_, int n2_, double extent1_, double extent2_,
                   double boundary_floor_)
    : n1(n1_), n2(n2_), extent1(extent1_), extent2(extent2_),
      boundary_floor(boundary_floor_) {
    check_spec_axis(n1, "n1");
    check_spec_axis(n2, "n2");
    detail::require_finite_positive(extent1, "extent1");
    detail::require_finite_positive(extent2, "extent2");
    detail::require_finite_positive(boundary_floor, "boundary_floor");
}

double WavefunctionGrid::norm() const {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return s * spec.dy1() * spec.dy2();
}

double WavefunctionGrid::edge_occupancy() const {
    const double cell = spec.dy1() * spec.dy2();
    double m = 0.0;
    for (int j = 0; j < spec.n2; ++j) {
        m = std::max(m, std::norm(at(0, j)));
        m = std::max(m, std::norm(at(spec.n1 - 1, j)));
    }
    for (int i = 0; i < spec.n1; ++i) {
        m = std::max(m, std::norm(at(i, 0)));
        m = std::max(m, std::norm(at(i, spec.n2 - 1)));
    }
    return m * cell;
}

DiscretizeReport discretize(const SourceState& s, const GridSpec& g) {
    WavefunctionGrid w{g, std::vector<cxd>(static_cast<size_t>(g.n1) * g.n2),
                       s.t_elapsed};
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) w.at(i, j) = s(g.y1(i), g.y2(j));
    check_edge(w, "discretize");
    const double n = w.norm();
    const double factor = 1.0 / std::sqrt(n);
    for (auto& v : w.values) v *= factor;
    return DiscretizeReport{std::move(w), factor};
}

WavefunctionGrid evolve_free(const WavefunctionGrid& w, double tau, double hbar,
                             double mass) {
    if (!std::isfinite(tau) || tau < 0.0)
        throw std::invalid_argument("evolution time must be >= 0");
    if (tau == 0.0) return w;

    WavefunctionGrid out = w;
    fft2(out, FFTW_FORWARD);
    const double dy1 = w.spec.dy1();
    const double dy2 = w.spec.dy2();
    for (int i = 0; i < w.spec.n1; ++i) {
        const double k1 = wavenumber(i, w.spec.n1, dy1);
        for (int j = 0; j < w.spec.n2; ++j) {
            const double k2 = wavenumber(j, w.spec.n2, dy2);
            const double phase = -hbar * (k1 * k1 + k2 * k2) * tau / (2.0 * mass);
            out.at(i, j) *= cxd(std::cos(phase), std::sin(phase));
        }
    }
    fft2(out, FFTW_BACKWARD);
    out.t_elapsed = w.t_elapsed + tau;
    check_edge(out, "evolve_free");
    return out;
}

SlitProjectionReport apply_slit_projection(const WavefunctionGrid& w,
                                           const SlitPair& sl) {
    const double dy1 = w.spec.dy1();
    // Resolution guard: either the slit width is finely sampled, or the
    // grid Nyquist wavenumber covers the slit mode's momentum content
    // (Gaussian tail exp(-k_N^2 eps^2 / 4) small).
    const double cells_per_eps = sl.epsilon / dy1;
    const double kn = pi / dy1;
    const double tail = std::exp(-kn * kn * sl.epsilon * sl.epsilon / 4.0);
    if (cells_per_eps < 8.0 && tail > 1e-2)
        throw NumericalGuardError(
            "slit under-resolved: " + std::to_string(cells_per_eps) +
            " cells per epsilon and Nyquist tail " + std::to_string(tail));

    const int n1 = w.spec.n1;
    const int n2 = w.spec.n2;
    const double c_phi = std::pow(2.0 / (pi * sl.epsilon * sl.epsilon), 0.25);
    std::vector<double> phi_a(n1), phi_b(n1);
    for (int i = 0; i < n1; ++i) {
        const double y = w.spec.y1(i);
        phi_a[i] = c_phi * std::exp(-(y - sl.y0) * (y - sl.y0) /
                                    (sl.epsilon * sl.epsilon));
        phi_b[i] = c_phi * std::exp(-(y + sl.y0) * (y + sl.y0) /
                                    (sl.epsilon * sl.epsilon));
    }

    WavefunctionGrid out = w;
    for (int j = 0; j < n2; ++j) {
        cxd oa = 0.0, ob = 0.0;
        for (int i = 0; i < n1; ++i) {
            oa += phi_a[i] * w.at(i, j);
            ob += phi_b[i] * w.at(i, j);
        }
        oa *= dy1;
        ob *= dy1;
        for (int i = 0; i < n1; ++i) out.at(i, j) = phi_a[i] * oa + phi_b[i] * ob;
    }

    const double kept = out.norm() / w.norm();
    const double factor = 1.0 / std::sqrt(out.norm());
    for (auto& v : out.values) v *= factor;
    return SlitProjectionReport{std::move(out),
                                std::clamp(1.0 - kept, 0.0, 1.0)};
}

ErrorReport compare(const std::function<double(double, double)>& analytic_density,
                    const WavefunctionGrid& w) {
    const int n1 = w.spec.n1;
    const int n2 = w.spec.n2;
    double diff2 = 0.0, ref2 = 0.0, maxd = 0.0, maxref = 0.0;
    std::vector<double> slice_p1(n1), slice_p2(n2), aslice_p1(n1), aslice_p2(n2);
    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n2; ++j) {
            const double a = analytic_density(w.spec.y1(i), w.spec.y2(j));
            const double g = std::norm(w.at(i, j));
            const double d = a - g;
            diff2 += d * d;
            ref2 += a * a;
            maxd = std::max(maxd, std::abs(d));
            maxref = std::max(maxref, a);
            if (i == n1 / 2) {
                slice_p2[j] = g;
                aslice_p2[j] = a;
            }
            if (j == n2 / 2) {
                slice_p1[i] = g;
                aslice_p1[i] = a;
            }
        }
    }
    ErrorReport r;
    r.l2_relative = std::sqrt(diff2 / ref2);
    r.max_pointwise = maxd / maxref;

    auto slice_discrepancy =
        [](Particle p, const GridSpec& spec, const std::vector<double>& grid_slice,
           const std::vector<double>& analytic_slice) -> std::optional<double> {
        ScanResult gs, as;
        gs.scanned_particle = as.scanned_particle = p;
        const int n = static_cast<int>(grid_slice.size());
        for (int i = 0; i < n; ++i) {
            const double y = (p == Particle::P1) ? spec.y1(i) : spec.y2(i);
            gs.positions.push_back(y);
            as.positions.push_back(y);
        }
        gs.densities = grid_slice;
        as.densities = analytic_slice;
        try {
            const double wg = fit_fringes_width(gs);
            const double wa = fit_fringes_width(as);
            return std::abs(wg / wa - 1.0);
        } catch (const FitUnavailableError&) {
            return std::nullopt;
        }
    };
    r.fringe_discrepancy_p1 =
        slice_discrepancy(Particle::P1, w.spec, slice_p1, aslice_p1);
    r.fringe_discrepancy_p2 =
        slice_discrepancy(Particle::P2, w.spec, slice_p2, aslice_p2);
    return r;
}

void dump_density(const WavefunctionGrid& w, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << "# " << w.spec.n1 << " " << w.spec.n2 << " " << w.spec.extent1 << " "
      << w.spec.extent2 << " " << w.t_elapsed << "\n";
    f.precision(17);
    for (int i = 0; i < w.spec.n1; ++i) {
        for (int j = 0; j < w.spec.n2; ++j) {
            if (j) f << " ";
            f << std::norm(w.at(i, j));
        }
        f << "\n";
    }
}

}  // namespace ghostsim
