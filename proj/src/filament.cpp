#include "zpf/filament.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "zpf/errors.hpp"

namespace zpf::filament {

namespace {

constexpr double kTailSwitch = 1e-4;  // scaled amplitude where the K0 tail takes over
constexpr double kStretch = 1.01;     // geometric growth of the outer grid spacing
constexpr double kUniformRadius = 5.0;
constexpr double kSeriesRadius = 0.02;

enum class Outcome { TooSmall, TooLarge };

struct Trajectory {
    std::vector<double> rho, u, du;
};

// u'' + u'/rho + (G(u)/lambda - 1) u = 0 in rho = q r, u = E / peak.
class Shooter {
public:
    Shooter(const MediumModel& m, double k0, double peak, const SolveOptions& opt)
        : m_(m), k0sq_(k0 * k0), peak_(peak), opt_(opt) {}

    double gain(double u) const { return k0sq_ * m_.index_contrast(peak_ * u); }

    Outcome shoot(double lambda, Trajectory* rec) const {
        const double h = opt_.step;
        // Regular series u = sum c_j rho^(2j) near the axis, where RK4 meets the 1/rho coefficient.
        auto force = [&](double y) { return (gain(y) / lambda - 1.0) * y; };
        const double f0 = force(1.0), e = 1e-3;
        const double f1 = (force(1.0 + e) - force(1.0 - e)) / (2 * e);
        const double f2 = (force(1.0 + e) - 2 * f0 + force(1.0 - e)) / (e * e);
        const double c1 = -f0 / 4.0, c2 = -f1 * c1 / 16.0, c3 = -(f1 * c2 + 0.5 * f2 * c1 * c1) / 36.0;
        auto series = [&](double x) {
            const double x2 = x * x;
            return std::pair{1.0 + x2 * (c1 + x2 * (c2 + x2 * c3)), x * (2 * c1 + x2 * (4 * c2 + 6 * c3 * x2))};
        };
        const int start = std::max(1, static_cast<int>(std::lround(kSeriesRadius / h)));
        if (rec) rec->rho.clear(), rec->u.clear(), rec->du.clear();
        for (int i = 0; i <= start && rec; ++i) {
            const auto [v, dv] = series(i * h);
            rec->rho.push_back(i * h);
            rec->u.push_back(v);
            rec->du.push_back(dv);
        }
        double rho = start * h;
        auto [u, du] = series(rho);
        auto rhs = [&](double x, double y, double dy) { return -dy / x - (gain(y) / lambda - 1.0) * y; };
        int crossings = 0;
        bool approaching = true;
        while (rho < opt_.max_scaled_radius) {
            const double k1u = du, k1v = rhs(rho, u, du);
            const double k2u = du + 0.5 * h * k1v, k2v = rhs(rho + 0.5 * h, u + 0.5 * h * k1u, du + 0.5 * h * k1v);
            const double k3u = du + 0.5 * h * k2v, k3v = rhs(rho + 0.5 * h, u + 0.5 * h * k2u, du + 0.5 * h * k2v);
            const double k4u = du + h * k3v, k4v = rhs(rho + h, u + h * k3u, du + h * k3v);
            const double un = u + h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
            const double dun = du + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
            rho += h;
            if (rec) {
                rec->rho.push_back(rho);
                rec->u.push_back(un);
                rec->du.push_back(dun);
            }
            if ((un < 0.0) != (u < 0.0)) {
                if (++crossings > opt_.nodes) return Outcome::TooSmall;
                approaching = false;
            }
            u = un;
            du = dun;
            const bool toward_zero = u * du < 0.0;
            if (approaching && !toward_zero) return Outcome::TooLarge;
            if (toward_zero) approaching = true;
        }
        std::ostringstream os;
        os << "filament shooting undecided at lambda = " << lambda << " (reached scaled radius "
           << opt_.max_scaled_radius << ")";
        throw SolverError(os.str());
    }

private:
    const MediumModel& m_;
    double k0sq_, peak_;
    const SolveOptions& opt_;
};

// Cubic Hermite value and slope on samples (x, y, dy) between i and i + 1.
std::pair<double, double> hermite(const double* x, const double* y, const double* dy, std::size_t i, double at) {
    const double d = x[i + 1] - x[i], s = (at - x[i]) / d;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    const double value = h00 * y[i] + h10 * d * dy[i] + h01 * y[i + 1] + h11 * d * dy[i + 1];
    const double g00 = 6 * s * (s - 1), g10 = (1 - s) * (1 - 3 * s), g01 = -g00, g11 = s * (3 * s - 2);
    const double slope = (g00 * y[i] + g01 * y[i + 1]) / d + g10 * dy[i] + g11 * dy[i + 1];
    return {value, slope};
}

std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

// Owns an in-place 2D transform pair on one buffer.
class Fft2D {
public:
    explicit Fft2D(int n) : n_(n) {
        const auto len = static_cast<std::size_t>(n) * n;
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * len));
        if (!buf_) throw SolverError("fftw_malloc failed");
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fwd_ = fftw_plan_dft_2d(n, n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_2d(n, n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Fft2D() {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }
    Fft2D(const Fft2D&) = delete;
    Fft2D& operator=(const Fft2D&) = delete;

    std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(buf_); }
    void forward() { fftw_execute(fwd_); }
    void backward() { fftw_execute(bwd_); }

private:
    int n_;
    fftw_complex* buf_ = nullptr;
    fftw_plan fwd_ = nullptr, bwd_ = nullptr;
};

double wavenumber(int i, int n, double extent) { return kTwoPi / extent * (i < n / 2 ? i : i - n); }

double edge_fraction(const std::complex<double>* spec, int n, double extent, double edge) {
    const double cut = edge * kPi / (extent / n);
    double total = 0.0, outer = 0.0;
    for (int iy = 0; iy < n; ++iy) {
        const double ky = std::abs(wavenumber(iy, n, extent));
        for (int ix = 0; ix < n; ++ix) {
            const double e = std::norm(spec[static_cast<std::size_t>(iy) * n + ix]);
            total += e;
            if (ky > cut || std::abs(wavenumber(ix, n, extent)) > cut) outer += e;
        }
    }
    return total > 0.0 ? outer / total : 0.0;
}

void validate_grid(const Field2D& f) {
    detail::require(f.n >= 8 && f.n % 2 == 0, "transverse grid size must be even and >= 8");
    detail::require(f.extent > 0.0, "transverse grid extent must be positive");
    detail::require(f.data.size() == static_cast<std::size_t>(f.n) * f.n, "field data does not match grid size");
}

}  // namespace

void SaturatingResponse::validate() const {
    detail::require(f_max >= 0.0, "f_max must be >= 0");
    detail::require(s_sat > 0.0, "s_sat must be positive");
}

double SaturatingResponse::operator()(double s) const { return f_max * s / (std::abs(s) + s_sat); }

void MediumModel::validate() const {
    detail::require(n0 > 0.0, "n0 must be positive");
    detail::require(n2 > 0.0, "n2 must be positive");
    detail::require(saturation_field > 0.0, "saturation field must be positive or infinite");
    magnetic.validate();
}

double MediumModel::index_contrast(double field) const {
    const double e2 = field * field;
    const double sat = pure_kerr() ? 1.0 : 1.0 + e2 / (saturation_field * saturation_field);
    return 2.0 * n0 * n2 * e2 / sat;
}

double MediumModel::permittivity(double field) const { return n0 * n0 + index_contrast(field); }

namespace {
std::size_t segment(const std::vector<double>& r, double radius) {
    const auto it = std::upper_bound(r.begin(), r.end(), radius);
    return std::min(static_cast<std::size_t>(it - r.begin()) - 1, r.size() - 2);
}
}  // namespace

double RadialProfile::at(double radius) const {
    if (r.size() < 2 || radius > r.back()) return 0.0;
    if (radius <= r.front()) return field.front();
    const auto i = segment(r, radius);
    if (slope.size() == r.size()) return hermite(r.data(), field.data(), slope.data(), i, radius).first;
    const double s = (radius - r[i]) / (r[i + 1] - r[i]);
    return field[i] + s * (field[i + 1] - field[i]);
}

double RadialProfile::slope_at(double radius) const {
    if (r.size() < 2 || radius > r.back()) return 0.0;
    const auto i = segment(r, std::max(radius, r.front()));
    if (slope.size() == r.size()) return hermite(r.data(), field.data(), slope.data(), i, std::max(radius, r.front())).second;
    return (field[i + 1] - field[i]) / (r[i + 1] - r[i]);
}

double RadialProfile::half_width() const {
    for (std::size_t i = 1; i < r.size(); ++i)
        if (std::abs(field[i]) <= 0.5 * std::abs(peak)) {
            const double a = std::abs(field[i - 1]), b = std::abs(field[i]), target = 0.5 * std::abs(peak);
            return r[i - 1] + (a - target) / (a - b) * (r[i] - r[i - 1]);
        }
    return r.empty() ? 0.0 : r.back();
}

RadialProfile solve_profile(const MediumModel& m, double omega, double peak, const SolveOptions& opt,
                            const PhysicalConstants& pc) {
    m.validate();
    detail::require(omega > 0.0, "carrier frequency must be positive");
    detail::require(peak > 0.0, "peak field must be positive");
    detail::require(opt.step > 0.0 && opt.step <= 0.05, "solver step must lie in (0, 0.05]");
    detail::require(opt.nodes >= 0, "node count must be >= 0");
    detail::require(opt.tail_floor > 0.0 && opt.tail_floor < kTailSwitch, "tail floor must lie in (0, 1e-4)");
    const double k0 = omega / pc.c;
    if (m.index_contrast(peak) / (m.n0 * m.n0) < 1e-12) {
        std::ostringstream os;
        os << "no bound filament state: index contrast at peak " << peak << " is below 1e-12";
        throw NoSolutionError(os.str());
    }

    const Shooter shooter(m, k0, peak, opt);
    const double gmax = shooter.gain(1.0);
    double lo = 0.0, hi = gmax;  // lo: too small (extra crossings), hi: too large (upturn)
    int iter = 0;
    for (; iter < opt.max_bisections && hi - lo > 4e-16 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (shooter.shoot(mid, nullptr) == Outcome::TooSmall ? lo : hi) = mid;
    }
    if (lo == 0.0 || hi - lo > 1e-12 * hi) {
        std::ostringstream os;
        os << "filament eigenvalue bisection did not converge: bracket [" << lo << ", " << hi << "] after " << iter
           << " iterations";
        throw SolverError(os.str());
    }

    const double lambda = hi;
    Trajectory t;
    shooter.shoot(lambda, &t);

    // Switch to the linear tail once past the last node and below kTailSwitch.
    int crossings = 0;
    std::size_t cut = 0;
    for (std::size_t i = 1; i < t.u.size(); ++i) {
        if ((t.u[i] < 0.0) != (t.u[i - 1] < 0.0)) ++crossings;
        if (crossings == opt.nodes && std::abs(t.u[i]) < kTailSwitch && t.u[i] * t.du[i] < 0.0) {
            cut = i;
            break;
        }
    }
    if (cut == 0) {
        std::ostringstream os;
        os << "filament profile never decayed below " << kTailSwitch << " (eigenvalue " << lambda << ")";
        throw SolverError(os.str());
    }
    const double h = opt.step;
    const double rho_cut = t.rho[cut];

    double resid = 0.0;
    for (std::size_t i = 3; i + 2 <= cut; ++i) {
        const double d2 = (-t.u[i - 2] + 16 * t.u[i - 1] - 30 * t.u[i] + 16 * t.u[i + 1] - t.u[i + 2]) / (12 * h * h);
        const double d1 = (t.u[i - 2] - 8 * t.u[i - 1] + 8 * t.u[i + 1] - t.u[i + 2]) / (12 * h);
        const double res = d2 + d1 / t.rho[i] + (shooter.gain(t.u[i]) / lambda - 1.0) * t.u[i];
        resid = std::max(resid, std::abs(res));
    }

    RadialProfile p;
    p.medium = m;
    p.peak = peak;
    p.k0 = k0;
    p.q = std::sqrt(lambda);
    p.k = std::sqrt(k0 * k0 * m.n0 * m.n0 + lambda);
    p.nodes = opt.nodes;
    p.residual = resid;

    std::vector<double> rho, u, du;
    for (std::size_t i = 0; i <= cut && t.rho[i] <= kUniformRadius + 0.5 * h; ++i) {
        rho.push_back(t.rho[i]);
        u.push_back(t.u[i]);
        du.push_back(t.du[i]);
    }
    const double u_cut = t.u[cut];
    const double k0_cut = std::cyl_bessel_k(0.0, rho_cut);
    double x = rho.back(), dx = h;
    while (true) {
        dx *= kStretch;
        x += dx;
        std::pair<double, double> v;
        if (x <= rho_cut) {
            const auto i = std::min(static_cast<std::size_t>(x / h), t.rho.size() - 2);
            v = hermite(t.rho.data(), t.u.data(), t.du.data(), i, x);
        } else {
            v = {u_cut * std::cyl_bessel_k(0.0, x) / k0_cut, -u_cut * std::cyl_bessel_k(1.0, x) / k0_cut};
        }
        rho.push_back(x);
        u.push_back(v.first);
        du.push_back(v.second);
        if (x > rho_cut && std::abs(v.first) < opt.tail_floor) break;
    }
    p.r.resize(rho.size());
    p.field.resize(rho.size());
    p.slope.resize(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        p.r[i] = rho[i] / p.q;
        p.field[i] = peak * u[i];
        p.slope[i] = peak * p.q * du[i];
    }
    return p;
}

PowerResult beam_power(const RadialProfile& p) {
    detail::require(p.r.size() >= 2 && p.r.size() == p.field.size(), "profile needs matching r and field samples");
    std::vector<double> terms(p.r.size() - 1);
    for (std::size_t i = 0; i + 1 < p.r.size(); ++i) {
        const double a = p.field[i] * p.field[i] * p.r[i], b = p.field[i + 1] * p.field[i + 1] * p.r[i + 1];
        terms[i] = 0.5 * (a + b) * (p.r[i + 1] - p.r[i]);
    }
    double s = 0.0;
    for (double v : terms) s += v;
    const double peak = p.peak != 0.0 ? std::abs(p.peak) : std::abs(p.field.front());
    return {kTwoPi * s, std::abs(p.field.back()) > 1e-6 * peak};
}

double dimensionless_power(const RadialProfile& p) {
    return beam_power(p).power * 2.0 * p.k0 * p.k0 * p.medium.n0 * p.medium.n2;
}

double diffraction_length(const RadialProfile& p) {
    detail::require(p.q > 0.0, "profile has no decay constant");
    return p.k0 * p.medium.n0 / (p.q * p.q);
}

Field2D embed_profile(const RadialProfile& p, int n, double extent, double x_shift, double y_shift,
                      std::complex<double> scale) {
    Field2D f(n, extent);
    validate_grid(f);
    const double core = 2.0 * p.half_width();
    if (core / f.dx() < 16.0) {
        std::ostringstream os;
        os << "transverse grid resolves the core with " << core / f.dx() << " points (need >= 16)";
        throw ResolutionError(os.str());
    }
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            f(ix, iy) = scale * p.at(std::hypot(f.coord(ix) - x_shift, f.coord(iy) - y_shift));
    return f;
}

double grid_power(const Field2D& f) {
    double s = 0.0;
    for (const auto& a : f.data) s += std::norm(a);
    return s * f.dx() * f.dx();
}

double rms_width(const Field2D& f) {
    double w = 0.0, sx = 0.0, sy = 0.0;
    for (int iy = 0; iy < f.n; ++iy)
        for (int ix = 0; ix < f.n; ++ix) {
            const double i = std::norm(f(ix, iy));
            w += i;
            sx += i * f.coord(ix);
            sy += i * f.coord(iy);
        }
    const double cx = sx / w, cy = sy / w;
    double m2 = 0.0;
    for (int iy = 0; iy < f.n; ++iy)
        for (int ix = 0; ix < f.n; ++ix) {
            const double dx = f.coord(ix) - cx, dy = f.coord(iy) - cy;
            m2 += std::norm(f(ix, iy)) * (dx * dx + dy * dy);
        }
    return std::sqrt(m2 / w);
}

double centroid_separation(const Field2D& f) {
    double wl = 0, wr = 0, xl = 0, xr = 0;
    for (int iy = 0; iy < f.n; ++iy)
        for (int ix = 0; ix < f.n; ++ix) {
            const double x = f.coord(ix), i = std::norm(f(ix, iy));
            if (x > 0) wr += i, xr += i * x;
            if (x < 0) wl += i, xl += i * x;
        }
    detail::require(wl > 0 && wr > 0, "centroid separation needs intensity in both half planes");
    return xr / wr - xl / wl;
}

double shape_drift(const Field2D& a, const Field2D& b) {
    detail::require(a.n == b.n && a.extent == b.extent, "shape drift needs matching grids");
    double diff = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        diff = std::max(diff, std::abs(std::abs(a.data[i]) - std::abs(b.data[i])));
        ref = std::max(ref, std::abs(b.data[i]));
    }
    return diff / ref;
}

double band_edge_fraction(const Field2D& f, double edge) {
    validate_grid(f);
    Fft2D fft(f.n);
    std::copy(f.data.begin(), f.data.end(), fft.data());
    fft.forward();
    return edge_fraction(fft.data(), f.n, f.extent, edge);
}

FieldHistory propagate(const Field2D& initial, const MediumModel& m, double omega, const PropagateOptions& opt,
                       const PhysicalConstants& pc) {
    validate_grid(initial);
    m.validate();
    detail::require(omega > 0.0, "carrier frequency must be positive");
    detail::require(opt.dz > 0.0 && opt.steps >= 1, "propagation needs dz > 0 and steps >= 1");
    detail::require(opt.snapshot_every >= 0 && opt.alias_check_every >= 1, "invalid snapshot/alias cadence");

    const int n = initial.n;
    const auto len = static_cast<std::size_t>(n) * n;
    const double k0 = omega / pc.c, kref = k0 * m.n0;
    const double norm = 1.0 / static_cast<double>(len);

    std::vector<std::complex<double>> half(len), full(len);
    for (int iy = 0; iy < n; ++iy) {
        const double ky = wavenumber(iy, n, initial.extent);
        for (int ix = 0; ix < n; ++ix) {
            const double kx = wavenumber(ix, n, initial.extent);
            const double phase = -(kx * kx + ky * ky) * opt.dz / (2.0 * kref);
            half[static_cast<std::size_t>(iy) * n + ix] = std::polar(norm, 0.5 * phase);
            full[static_cast<std::size_t>(iy) * n + ix] = std::polar(norm, phase);
        }
    }

    Fft2D fft(n);
    auto* a = fft.data();
    std::copy(initial.data.begin(), initial.data.end(), a);

    auto alias_guard = [&](const std::complex<double>* spec, double z) {
        const double frac = edge_fraction(spec, n, initial.extent, 0.9);
        if (frac > opt.alias_threshold) {
            std::ostringstream os;
            os << "transverse grid aliasing at z = " << z << ": band-edge energy fraction " << frac << " exceeds "
               << opt.alias_threshold;
            throw ResolutionError(os.str());
        }
    };
    auto linear = [&](const std::vector<std::complex<double>>& mult, bool check, double z) {
        fft.forward();
        if (check) alias_guard(a, z);
        for (std::size_t i = 0; i < len; ++i) a[i] *= mult[i];
        fft.backward();
    };
    auto snapshot = [&](FieldHistory& h, double z) {
        Field2D s(n, initial.extent);
        std::copy(a, a + len, s.data.begin());
        h.snapshot_z.push_back(z);
        h.snapshots.push_back(std::move(s));
    };
    auto power_now = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < len; ++i) s += std::norm(a[i]);
        return s * initial.dx() * initial.dx();
    };

    FieldHistory hist;
    const double p0 = power_now();
    hist.z.push_back(0.0);
    hist.power.push_back(p0);
    snapshot(hist, 0.0);

    const double nl = k0 * k0 * opt.dz / (2.0 * kref);
    bool synced = true;
    double prev = p0;
    for (int s = 1; s <= opt.steps; ++s) {
        const bool check = (s - 1) % opt.alias_check_every == 0;
        linear(synced ? half : full, check, (s - 1) * opt.dz);
        for (std::size_t i = 0; i < len; ++i) a[i] *= std::polar(1.0, nl * m.index_contrast(std::abs(a[i])));
        synced = false;
        const double z = s * opt.dz;
        const bool snap = s == opt.steps || (opt.snapshot_every > 0 && s % opt.snapshot_every == 0);
        if (snap) {
            linear(half, s == opt.steps, z);
            synced = true;
            snapshot(hist, z);
        }
        const double p = power_now();
        hist.z.push_back(z);
        hist.power.push_back(p);
        hist.max_step_power_change = std::max(hist.max_step_power_change, std::abs(p - prev) / p0);
        prev = p;
    }
    return hist;
}

}  // namespace zpf::filament
